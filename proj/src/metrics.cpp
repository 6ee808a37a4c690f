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

#include "ppegmm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace ppegmm {
namespace {

void require_same_shape(const Component& a, const Component& b) {
  if (a.mu.size() != b.mu.size()) {
    std::ostringstream msg;
    msg << "components have dimensions " << a.mu.size() << " and "
        << b.mu.size();
    throw DimensionMismatch(msg.str());
  }
}

double cov_deviation(const Eigen::MatrixXd& root_inv,
                     const Eigen::MatrixXd& other) {
  const Eigen::Index d = other.rows();
  const Eigen::MatrixXd rel = root_inv * other * root_inv;
  return frob_norm(rel - Eigen::MatrixXd::Identity(d, d));
}

// Augmenting-path search from row r over columns admissible at thr.
bool augment(const Eigen::MatrixXd& cost, double thr, int r,
             std::vector<char>& visited, std::vector<int>& col_owner,
             const std::vector<char>& col_blocked) {
  const int k = static_cast<int>(cost.cols());
  for (int c = 0; c < k; ++c) {
    if (col_blocked[c] || visited[c] || cost(r, c) > thr) continue;
    visited[c] = 1;
    if (col_owner[c] < 0 ||
        augment(cost, thr, col_owner[c], visited, col_owner, col_blocked)) {
      col_owner[c] = r;
      return true;
    }
  }
  return false;
}

// True when rows first_row..k-1 can be perfectly matched to the unblocked
// columns using only edges with cost <= thr.
bool feasible(const Eigen::MatrixXd& cost, double thr, int first_row,
              const std::vector<char>& col_blocked) {
  const int k = static_cast<int>(cost.rows());
  std::vector<int> col_owner(k, -1);
  for (int r = first_row; r < k; ++r) {
    std::vector<char> visited(k, 0);
    if (!augment(cost, thr, r, visited, col_owner, col_blocked)) return false;
  }
  return true;
}

}  // namespace

Eigen::MatrixXd component_cost_matrix(const Gmm& a, const Gmm& b,
                                      const Numerics& num) {
  if (a.k() != b.k() || a.d() != b.d()) {
    std::ostringstream msg;
    msg << "mixtures have shapes (k=" << a.k() << ", d=" << a.d()
        << ") and (k=" << b.k() << ", d=" << b.d() << ")";
    throw DimensionMismatch(msg.str());
  }
  const int k = a.k();
  Eigen::MatrixXd cost(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      cost(i, j) = dist_comp(a.component(i), b.component(j), num);
    }
  }
  return cost;
}

void validate(const SemimetricParams& p) {
  if (!(p.r > 0.0) || !std::isfinite(p.r)) {
    throw InvalidArgument("SemimetricParams: r must be positive");
  }
  if (!(p.z >= 1.0) || !std::isfinite(p.z)) {
    throw InvalidArgument("SemimetricParams: z must be >= 1");
  }
}

double dist_comp(const Component& a, const Component& b, const Numerics& num) {
  require_same_shape(a, b);
  const Eigen::MatrixXd ra = inv_sqrt(a.sigma, num);
  const double weight_term = std::abs(a.w - b.w);
  const Eigen::VectorXd diff = a.mu - b.mu;
  // Equal covariances short-circuit to an exactly zero deviation, so a
  // component is at distance zero from any value-identical copy.
  if (a.sigma == b.sigma) {
    return std::max(weight_term, (ra * diff).norm());
  }
  const Eigen::MatrixXd rb = inv_sqrt(b.sigma, num);
  const double mean_term =
      std::max((ra * diff).norm(), (rb * diff).norm());
  const double cov_term =
      std::max(cov_deviation(ra, b.sigma), cov_deviation(rb, a.sigma));
  return std::max({weight_term, mean_term, cov_term});
}

BottleneckResult bottleneck_matching(const Eigen::MatrixXd& cost) {
  if (cost.rows() != cost.cols() || cost.rows() < 1) {
    throw DimensionMismatch("bottleneck_matching: cost matrix must be square");
  }
  const int k = static_cast<int>(cost.rows());
  std::vector<double> values;
  values.reserve(k * k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      if (!std::isfinite(cost(i, j)) || cost(i, j) < 0.0) {
        throw InvalidArgument(
            "bottleneck_matching: entries must be finite and nonnegative");
      }
      values.push_back(cost(i, j));
    }
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());

  // Feasibility is monotone in the threshold, so binary search finds the
  // smallest admissible value.
  const std::vector<char> none_blocked(k, 0);
  std::size_t lo = 0, hi = values.size() - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (feasible(cost, values[mid], 0, none_blocked)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  const double value = values[lo];

  // Fix rows in order to the smallest column that still admits a perfect
  // completion at the optimal threshold.
  BottleneckResult result;
  result.value = value;
  result.perm.assign(k, -1);
  std::vector<char> blocked(k, 0);
  for (int r = 0; r < k; ++r) {
    for (int c = 0; c < k; ++c) {
      if (blocked[c] || cost(r, c) > value) continue;
      blocked[c] = 1;
      if (feasible(cost, value, r + 1, blocked)) {
        result.perm[r] = c;
        break;
      }
      blocked[c] = 0;
    }
    if (result.perm[r] < 0) {
      throw SelectionFailed(
          "bottleneck_matching: no completion at optimal threshold");
    }
  }
  return result;
}

double dist_mixture(const Gmm& a, const Gmm& b, const Numerics& num) {
  return bottleneck_matching(component_cost_matrix(a, b, num)).value;
}

double dist_mixture_bruteforce(const Gmm& a, const Gmm& b,
                               const Numerics& num) {
  if (a.k() > 8) {
    throw TooLarge("dist_mixture_bruteforce: k > 8");
  }
  const Eigen::MatrixXd cost = component_cost_matrix(a, b, num);
  const int k = a.k();
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double worst = 0.0;
    for (int i = 0; i < k; ++i) worst = std::max(worst, cost(i, perm[i]));
    best = std::min(best, worst);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

bool check_restricted_triangle(double d12, double d23, double d13,
                               const SemimetricParams& p) {
  validate(p);
  if (d12 < 0.0 || d23 < 0.0 || d13 < 0.0) {
    throw InvalidArgument("distances must be nonnegative");
  }
  if (d12 > p.r || d23 > p.r) return true;
  return d13 <= p.z * (d12 + d23) + 1e-12;
}

}  // namespace ppegmm
