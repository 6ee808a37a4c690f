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
// Deterministic, splittable random streams and the noise distributions used
// by the maskers and the private estimator: scalar/vector Gaussians,
// Gaussian matrices, covariance-shaped Gaussians and truncated Laplace.

#ifndef PPEGMM_RANDOM_HPP_
#define PPEGMM_RANDOM_HPP_

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "ppegmm/errors.hpp"

namespace ppegmm {

// A deterministic random stream identified by (seed, stream_id). Identical
// identifiers give bit-identical sample sequences; distinct stream_ids are
// decorrelated by a keyed 64-bit mixing function, so substream derivation
// is O(1) and independent of draw order elsewhere.
//
// A stream is single-owner: concurrent draws from one stream are not safe.
// Derive substreams and hand one to each worker instead.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  // Child stream keyed by (this stream's identity, index).
  RandomStream substream(std::uint64_t index) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01();

  // Unbiased uniform integer in [0, n); n must be positive.
  std::uint64_t uniform_below(std::uint64_t n);

  // Standard normal draw (Box-Muller, one spare cached per stream).
  double normal();

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// n i.i.d. standard normal samples.
std::vector<double> std_normal(RandomStream& stream, std::size_t n);

// d x d matrix of i.i.d. standard normal entries, filled row by row.
Eigen::MatrixXd gaussian_matrix(RandomStream& stream, int d);

// One draw from N(0, sigma), computed as L*z with L the Cholesky factor.
Eigen::VectorXd gaussian_with_cov(RandomStream& stream,
                                  const Eigen::MatrixXd& sigma);

// Parameters of the truncated Laplace distribution TLap(delta_sens,
// epsilon, delta): Laplace noise of scale delta_sens/epsilon conditioned on
// [-A, A] with A = tlap_bound(...). The truncation constant is defined in
// exactly one place (tlap_bound); change it there if a different convention
// is ever needed.
struct TLapParams {
  double delta_sens = 1.0;  // sensitivity, > 0
  double epsilon = 1.0;     // > 0
  double delta = 1e-6;      // in (0, 1)
};

void validate(const TLapParams& p);

// Truncation half-width A = (delta_sens/epsilon) * ln(1 + (e^eps - 1)/(2 delta)).
double tlap_bound(const TLapParams& p);

// CDF of the truncated, renormalized Laplace density on [-A, A].
double tlap_cdf(const TLapParams& p, double x);

// Inverse-CDF sample; always lies in [-A, A].
double tlap_sample(RandomStream& stream, const TLapParams& p);

}  // namespace ppegmm

#endif  // PPEGMM_RANDOM_HPP_
