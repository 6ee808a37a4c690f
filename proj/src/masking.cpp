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

#include "ppegmm/masking.hpp"

#include <cassert>
#include <cmath>

#include "ppegmm/linalg.hpp"

namespace ppegmm {

void validate(const MaskConfig& cfg) {
  const double etas[] = {cfg.eta_w, cfg.eta_mean, cfg.eta_cov};
  for (double eta : etas) {
    if (!std::isfinite(eta) || eta < 0.0) {
      throw InvalidArgument("MaskConfig: noise scales must be finite and >= 0");
    }
  }
}

double mask_weight(double w, double eta_w, RandomStream& stream) {
  if (!std::isfinite(w) || !std::isfinite(eta_w) || eta_w < 0.0) {
    throw InvalidArgument("mask_weight: inputs must be finite, eta_w >= 0");
  }
  const double g = stream.normal();
  return std::max(0.0, w + eta_w * g);
}

Eigen::VectorXd mask_mean(const Eigen::VectorXd& mu,
                          const Eigen::MatrixXd& sigma, double eta_mean,
                          RandomStream& stream) {
  if (!std::isfinite(eta_mean) || eta_mean < 0.0) {
    throw InvalidArgument("mask_mean: eta_mean must be finite and >= 0");
  }
  if (sigma.rows() != mu.size()) {
    throw DimensionMismatch("mask_mean: sigma and mu dimensions differ");
  }
  const Eigen::VectorXd g = gaussian_with_cov(stream, sigma);
  return mu + eta_mean * g;
}

Eigen::MatrixXd mask_cov(const Eigen::MatrixXd& sigma, double eta_cov,
                         RandomStream& stream) {
  if (!std::isfinite(eta_cov) || eta_cov < 0.0) {
    throw InvalidArgument("mask_cov: eta_cov must be finite and >= 0");
  }
  const Eigen::MatrixXd root = psd_sqrt(sigma);
  const int d = static_cast<int>(sigma.rows());
  const Eigen::MatrixXd g = gaussian_matrix(stream, d);
  const Eigen::MatrixXd m =
      root * (Eigen::MatrixXd::Identity(d, d) + eta_cov * g);
  const Eigen::MatrixXd gram = m * m.transpose();
  Eigen::MatrixXd out = ((gram + gram.transpose()) * 0.5).eval();
#ifndef NDEBUG
  assert(min_eigenvalue(out) >= -1e-10 * std::max(1.0, frob_norm(out)));
#endif
  return out;
}

Component mask_component(const Component& c, const MaskConfig& cfg,
                         RandomStream& stream) {
  validate(cfg);
  RandomStream weight_stream = stream.substream(0);
  RandomStream mean_stream = stream.substream(1);
  RandomStream cov_stream = stream.substream(2);
  Component out;
  out.w = mask_weight(c.w, cfg.eta_w, weight_stream);
  out.mu = mask_mean(c.mu, c.sigma, cfg.eta_mean, mean_stream);
  out.sigma = mask_cov(c.sigma, cfg.eta_cov, cov_stream);
  return out;
}

Gmm mask_gmm(const Gmm& g, const MaskConfig& cfg, RandomStream& stream) {
  validate(cfg);
  auto masker = [&cfg](const Component& c, RandomStream& sub) {
    return mask_component(c, cfg, sub);
  };
  std::vector<Component> masked =
      lift_masker(masker, g.k(), g.components(), stream);
  double sum = 0.0;
  for (const auto& c : masked) sum += c.w;
  if (sum <= 1e-12) {
    throw DegenerateWeights("mask_gmm: masked weights sum to <= 1e-12");
  }
  return Gmm::normalized(std::move(masked));
}

}  // namespace ppegmm
