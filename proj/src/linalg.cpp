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

#include "ppegmm/linalg.hpp"

#include <cmath>
#include <sstream>

namespace ppegmm {
namespace {

// Eigendecomposition of a validated symmetric matrix. Dimensions here are
// small (at most a few hundred), so the dense self-adjoint solver is fine.
Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> decompose(
    const Eigen::MatrixXd& s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s);
  if (solver.info() != Eigen::Success) {
    throw Singular("symmetric eigendecomposition failed to converge");
  }
  return solver;
}

}  // namespace

void require_symmetric(const Eigen::MatrixXd& s, const Numerics& num) {
  if (s.rows() != s.cols()) {
    std::ostringstream msg;
    msg << "expected square matrix, got " << s.rows() << "x" << s.cols();
    throw DimensionMismatch(msg.str());
  }
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    for (Eigen::Index j = 0; j < s.cols(); ++j) {
      if (!std::isfinite(s(i, j))) {
        throw InvalidArgument("matrix entry is not finite");
      }
      if (j < i) {
        const double slack =
            num.symmetry_rtol * std::max(1.0, std::abs(s(i, j)));
        if (std::abs(s(i, j) - s(j, i)) > slack) {
          std::ostringstream msg;
          msg << "matrix is not symmetric at (" << i << "," << j << "): "
              << s(i, j) << " vs " << s(j, i);
          throw InvalidArgument(msg.str());
        }
      }
    }
  }
}

Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& s, const Numerics& num) {
  require_symmetric(s, num);
  const auto solver = decompose(s);
  const double clamp = num.psd_clamp_rtol * frob_norm(s);
  Eigen::VectorXd lambda = solver.eigenvalues();
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda(i) < -clamp) {
      std::ostringstream msg;
      msg << "matrix is not PSD: eigenvalue " << lambda(i)
          << " below clamp tolerance " << -clamp;
      throw NotPsd(msg.str());
    }
    lambda(i) = lambda(i) < 0.0 ? 0.0 : std::sqrt(lambda(i));
  }
  Eigen::MatrixXd r = solver.eigenvectors() * lambda.asDiagonal() *
                      solver.eigenvectors().transpose();
  return ((r + r.transpose()) * 0.5).eval();
}

Eigen::MatrixXd inv_sqrt(const Eigen::MatrixXd& s, const Numerics& num) {
  require_symmetric(s, num);
  const auto solver = decompose(s);
  const double floor = num.spd_floor_rtol * frob_norm(s);
  Eigen::VectorXd lambda = solver.eigenvalues();
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda(i) < floor || lambda(i) <= 0.0) {
      std::ostringstream msg;
      msg << "matrix is singular: eigenvalue " << lambda(i)
          << " below floor " << floor;
      throw Singular(msg.str());
    }
    lambda(i) = 1.0 / std::sqrt(lambda(i));
  }
  Eigen::MatrixXd r = solver.eigenvectors() * lambda.asDiagonal() *
                      solver.eigenvectors().transpose();
  return ((r + r.transpose()) * 0.5).eval();
}

Eigen::MatrixXd cholesky_lower(const Eigen::MatrixXd& s, const Numerics& num) {
  require_symmetric(s, num);
  const Eigen::Index d = s.rows();
  const double pivot_floor =
      d > 0 ? num.chol_pivot_rtol * s.trace() / static_cast<double>(d) : 0.0;
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(d, d);
  // Classical Cholesky-Banachiewicz loop; kept explicit so the pivot
  // tolerance contract is exact.
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      double sum = s(i, j);
      for (Eigen::Index p = 0; p < j; ++p) sum -= l(i, p) * l(j, p);
      if (i == j) {
        if (sum < pivot_floor || sum <= 0.0) {
          std::ostringstream msg;
          msg << "Cholesky pivot " << sum << " at index " << i
              << " below floor " << pivot_floor;
          throw Singular(msg.str());
        }
        l(i, i) = std::sqrt(sum);
      } else {
        l(i, j) = sum / l(j, j);
      }
    }
  }
  return l;
}

double min_eigenvalue(const Eigen::MatrixXd& s, const Numerics& num) {
  require_symmetric(s, num);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      s, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Singular("symmetric eigendecomposition failed to converge");
  }
  return solver.eigenvalues().minCoeff();
}

double frob_norm(const Eigen::MatrixXd& m) { return m.norm(); }

}  // namespace ppegmm
