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
// Noise maskers for mixture release: weight, mean and covariance maskers,
// the per-component masker, a generic shuffled lift over k elements, and
// the full mixture masker with weight renormalization.

#ifndef PPEGMM_MASKING_HPP_
#define PPEGMM_MASKING_HPP_

#include <numeric>
#include <sstream>
#include <utility>
#include <vector>

#include "ppegmm/gmm.hpp"
#include "ppegmm/random.hpp"

namespace ppegmm {

// Noise scales of the three sub-maskers.
struct MaskConfig {
  double eta_w = 0.0;
  double eta_mean = 0.0;
  double eta_cov = 0.0;
};

void validate(const MaskConfig& cfg);

// max(0, w + eta_w * g) with one standard normal draw.
double mask_weight(double w, double eta_w, RandomStream& stream);

// mu + eta_mean * g with g ~ N(0, sigma).
Eigen::VectorXd mask_mean(const Eigen::VectorXd& mu,
                          const Eigen::MatrixXd& sigma, double eta_mean,
                          RandomStream& stream);

// sigma^{1/2} (I + eta_cov G)(I + eta_cov G)^T sigma^{1/2} with G a d x d
// standard Gaussian matrix; symmetric PSD by construction.
Eigen::MatrixXd mask_cov(const Eigen::MatrixXd& sigma, double eta_cov,
                         RandomStream& stream);

// The three sub-maskers applied with independent substreams, in the fixed
// order weight -> mean -> covariance. The returned weight may need
// renormalization across components.
Component mask_component(const Component& c, const MaskConfig& cfg,
                         RandomStream& stream);

// Shuffled lift of a single-element masker to k elements: draws a uniform
// permutation (Fisher-Yates on substream 0), then applies the masker to
// each shuffled element with substream i+1. Results are independent of
// evaluation order across elements.
template <typename T, typename Masker>
std::vector<T> lift_masker(Masker&& masker, int k, const std::vector<T>& mixture,
                           RandomStream& stream) {
  if (k < 1) throw InvalidArgument("lift_masker: k must be >= 1");
  if (static_cast<int>(mixture.size()) != k) {
    std::ostringstream msg;
    msg << "lift_masker: got " << mixture.size() << " elements, expected " << k;
    throw DimensionMismatch(msg.str());
  }
  std::vector<int> order(mixture.size());
  std::iota(order.begin(), order.end(), 0);
  RandomStream perm_stream = stream.substream(0);
  for (int i = k - 1; i > 0; --i) {
    const int j = static_cast<int>(
        perm_stream.uniform_below(static_cast<std::uint64_t>(i) + 1));
    std::swap(order[i], order[j]);
  }
  std::vector<T> out;
  out.reserve(mixture.size());
  for (int i = 0; i < k; ++i) {
    RandomStream sub = stream.substream(static_cast<std::uint64_t>(i) + 1);
    out.push_back(masker(mixture[order[i]], sub));
  }
  return out;
}

// Full mixture masker: shuffled lift of mask_component followed by weight
// renormalization. Throws DegenerateWeights when the masked weights sum to
// <= 1e-12, which callers treat as mechanism failure.
Gmm mask_gmm(const Gmm& g, const MaskConfig& cfg, RandomStream& stream);

}  // namespace ppegmm

#endif  // PPEGMM_MASKING_HPP_
