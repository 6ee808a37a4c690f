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
// Distances between mixture components and between mixtures. The mixture
// distance is permutation-invariant: a bottleneck bipartite matching over
// the k x k component-distance matrix.

#ifndef PPEGMM_METRICS_HPP_
#define PPEGMM_METRICS_HPP_

#include <vector>

#include <Eigen/Dense>

#include "ppegmm/gmm.hpp"

namespace ppegmm {

// Parameters of a restricted approximate triangle inequality:
// dist(F1,F2), dist(F2,F3) <= r implies dist(F1,F3) <= z*(sum).
struct SemimetricParams {
  double r = 1.0;  // restriction radius, > 0
  double z = 1.5;  // approximation factor, >= 1
};

void validate(const SemimetricParams& p);

// Distance between two components: the max of
//   |w_a - w_b|,
//   max(||sigma_a^{-1/2}(mu_a - mu_b)||_2, ||sigma_b^{-1/2}(mu_a - mu_b)||_2),
//   max(||sigma_a^{-1/2} sigma_b sigma_a^{-1/2} - I||_F,
//       ||sigma_b^{-1/2} sigma_a sigma_b^{-1/2} - I||_F).
// Symmetric by construction and zero iff a == b. Requires both covariances
// SPD (throws Singular otherwise).
double dist_comp(const Component& a, const Component& b,
                 const Numerics& num = Numerics());

struct BottleneckResult {
  double value = 0.0;
  // perm[i] is the column matched to row i; among all optimal perfect
  // matchings this is the lexicographically smallest one.
  std::vector<int> perm;
};

// Minimizes max_i cost(i, perm[i]) over all permutations: binary search on
// the sorted distinct cost values with an augmenting-path perfect-matching
// feasibility check. Entries must be finite and nonnegative.
BottleneckResult bottleneck_matching(const Eigen::MatrixXd& cost);

// cost(i, j) = dist_comp(a.component(i), b.component(j)); the mixtures
// must share k and d (DimensionMismatch otherwise).
Eigen::MatrixXd component_cost_matrix(const Gmm& a, const Gmm& b,
                                      const Numerics& num = Numerics());

// Permutation-invariant mixture distance:
// min over permutations pi of max_i dist_comp(a_i, b_pi(i)).
double dist_mixture(const Gmm& a, const Gmm& b,
                    const Numerics& num = Numerics());

// Exact enumeration over all k! permutations; test oracle. Throws TooLarge
// for k > 8.
double dist_mixture_bruteforce(const Gmm& a, const Gmm& b,
                               const Numerics& num = Numerics());

// True iff the restricted approximate triangle implication holds for the
// three distances: (d12 > r) or (d23 > r) or (d13 <= z*(d12 + d23) + 1e-12).
bool check_restricted_triangle(double d12, double d23, double d13,
                               const SemimetricParams& p);

}  // namespace ppegmm

#endif  // PPEGMM_METRICS_HPP_
