// Copyright 2026 The ppegmm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Self-contained cyclic Jacobi eigendecomposition, used as an independent
// oracle against the production linear algebra (which is built on Eigen's
// solvers). Deliberately written from the textbook rotation formulas.

#ifndef PPEGMM_TESTS_SUPPORT_JACOBI_HPP_
#define PPEGMM_TESTS_SUPPORT_JACOBI_HPP_

#include <cmath>
#include <cstdlib>
#include <vector>

namespace ppegmm_test {

struct JacobiResult {
  std::vector<double> eigenvalues;           // ascending
  std::vector<std::vector<double>> vectors;  // vectors[i] pairs eigenvalues[i]
};

// Cyclic Jacobi sweeps until all off-diagonal mass is annihilated to
// ~1e-14 of the Frobenius norm. Input must be symmetric.
inline JacobiResult jacobi_eigen(std::vector<std::vector<double>> a) {
  const int n = static_cast<int>(a.size());
  std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) v[i][i] = 1.0;

  double norm = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) norm += a[i][j] * a[i][j];
  norm = std::sqrt(norm);
  const double tol = 1e-15 * (norm > 0 ? norm : 1.0);

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += 2.0 * a[i][j] * a[i][j];
    if (std::sqrt(off) <= tol) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) <= tol / (n * n)) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int i = 0; i < n; ++i) {
          const double aip = a[i][p];
          const double aiq = a[i][q];
          a[i][p] = c * aip - s * aiq;
          a[i][q] = s * aip + c * aiq;
        }
        for (int i = 0; i < n; ++i) {
          const double api = a[p][i];
          const double aqi = a[q][i];
          a[p][i] = c * api - s * aqi;
          a[q][i] = s * api + c * aqi;
        }
        for (int i = 0; i < n; ++i) {
          const double vip = v[i][p];
          const double viq = v[i][q];
          v[i][p] = c * vip - s * viq;
          v[i][q] = s * vip + c * viq;
        }
      }
    }
  }

  JacobiResult result;
  result.eigenvalues.resize(n);
  result.vectors.assign(n, std::vector<double>(n));
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (a[order[j]][order[j]] < a[order[i]][order[i]]) {
        std::swap(order[i], order[j]);
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    result.eigenvalues[i] = a[order[i]][order[i]];
    for (int r = 0; r < n; ++r) result.vectors[i][r] = v[r][order[i]];
  }
  return result;
}

}  // namespace ppegmm_test

#endif  // PPEGMM_TESTS_SUPPORT_JACOBI_HPP_
