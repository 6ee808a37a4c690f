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
// Non-private mixture machinery: exact sampling, an EM learner with
// k-means++ style initialization and random restarts, and a well-separated
// fixture generator. Datasets are dense row-major matrices, one point per
// row; row order is significant because chunking is positional.

#ifndef PPEGMM_GMM_LEARN_HPP_
#define PPEGMM_GMM_LEARN_HPP_

#include <Eigen/Dense>

#include "ppegmm/gmm.hpp"
#include "ppegmm/random.hpp"

namespace ppegmm {

struct LearnerOptions {
  int k = 1;
  int max_iters = 100;
  int restarts = 2;
  double tol = 1e-7;  // relative log-likelihood improvement floor
  // Ridge added to every covariance each M-step. Values <= 0 select the
  // automatic scale 1e-6 * (average per-coordinate data variance).
  double reg = 0.0;
};

void validate(const LearnerOptions& opts);

// n i.i.d. draws from the mixture, one per row: component index by inverse
// CDF over the weights, then mu_i plus covariance-shaped Gaussian noise.
Eigen::MatrixXd sample_gmm(const Gmm& g, std::size_t n, RandomStream& stream);

// Standard EM, best of opts.restarts runs by final log-likelihood (ties
// break toward the lowest restart index). Non-convergence within
// max_iters is not an error; a non-finite likelihood is (LearnFailed).
// Requires at least 10*k*d points (InsufficientData below that).
Gmm em_fit(const Eigen::MatrixXd& data, const LearnerOptions& opts,
           RandomStream& stream);

// Equal-weight mixture of unit-covariance Gaussians whose means are a
// randomly rotated scaled simplex (a rotated line when d < k-1), pairwise
// at Euclidean distance >= separation.
Gmm make_separated_gmm(int k, int d, double separation, RandomStream& stream);

}  // namespace ppegmm

#endif  // PPEGMM_GMM_LEARN_HPP_
