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

#include <cmath>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "ppegmm/errors.hpp"
#include "ppegmm/linalg.hpp"
#include "ppegmm/metrics.hpp"
#include "ppegmm/random.hpp"

namespace ppegmm {
namespace {

Gmm two_component_gmm() {
  std::vector<Component> comps(2);
  comps[0].w = 0.4;
  comps[0].mu = Eigen::Vector2d(-3.0, 0.0);
  comps[0].sigma = Eigen::MatrixXd::Identity(2, 2);
  comps[1].w = 0.6;
  comps[1].mu = Eigen::Vector2d(3.0, 1.0);
  comps[1].sigma = (Eigen::MatrixXd(2, 2) << 2.0, 0.5, 0.5, 1.0).finished();
  return Gmm::from_components(std::move(comps));
}

TEST(MaskWeight, ClampsAtZeroAndCentersOnInput) {
  RandomStream stream(21);
  double sum = 0.0;
  int clamped = 0;
  const int n = 50000;
  for (int i = 0; i < n; ++i) {
    const double masked = mask_weight(0.5, 0.1, stream);
    ASSERT_GE(masked, 0.0);
    sum += masked;
    if (masked == 0.0) ++clamped;
  }
  EXPECT_NEAR(sum / n, 0.5, 0.005);
  EXPECT_EQ(clamped, 0);  // 5 sigma from the boundary

  int clamped_small = 0;
  for (int i = 0; i < n; ++i) {
    if (mask_weight(0.0, 0.1, stream) == 0.0) ++clamped_small;
  }
  EXPECT_NEAR(clamped_small / static_cast<double>(n), 0.5, 0.02);
}

TEST(MaskWeight, ZeroNoiseIsIdentity) {
  RandomStream stream(22);
  EXPECT_EQ(mask_weight(0.37, 0.0, stream), 0.37);
}

TEST(MaskMean, NoiseIsShapedByCovariance) {
  Eigen::MatrixXd sigma(2, 2);
  sigma << 4.0, 0.0, 0.0, 0.01;
  const Eigen::VectorXd mu = Eigen::Vector2d(1.0, 2.0);
  RandomStream stream(23);
  const double eta = 0.5;
  Eigen::Vector2d acc = Eigen::Vector2d::Zero();
  Eigen::Vector2d acc2 = Eigen::Vector2d::Zero();
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd x = mask_mean(mu, sigma, eta, stream);
    acc += x - mu;
    acc2 += (x - mu).cwiseProduct(x - mu);
  }
  EXPECT_NEAR(acc(0) / n, 0.0, 0.02);
  EXPECT_NEAR(acc2(0) / n, eta * eta * 4.0, 0.03);
  EXPECT_NEAR(acc2(1) / n, eta * eta * 0.01, 0.001);
}

TEST(MaskCov, OutputIsSymmetricPsdAndCentered) {
  Eigen::MatrixXd sigma(2, 2);
  sigma << 2.0, 0.3, 0.3, 1.0;
  RandomStream stream(24);
  const double eta = 0.05;
  Eigen::MatrixXd mean_out = Eigen::MatrixXd::Zero(2, 2);
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const Eigen::MatrixXd out = mask_cov(sigma, eta, stream);
    ASSERT_LT(frob_norm(out - out.transpose()), 1e-12);
    ASSERT_GE(min_eigenvalue(out), -1e-12);
    mean_out += out;
  }
  mean_out /= n;
  // E[(I + eta G)(I + eta G)^T] = (1 + d eta^2) I, so the masked output
  // is centered on (1 + d eta^2) * sigma.
  const double inflation = 1.0 + 2.0 * eta * eta;
  EXPECT_LT(frob_norm(mean_out - inflation * sigma), 0.05);
}

TEST(MaskCov, ZeroNoiseIsNumericallyIdentity) {
  Eigen::MatrixXd sigma(2, 2);
  sigma << 2.0, 0.3, 0.3, 1.0;
  RandomStream stream(25);
  EXPECT_LT(frob_norm(mask_cov(sigma, 0.0, stream) - sigma), 1e-12);
}

TEST(MaskComponent, SubMaskersUseIndependentSubstreams) {
  Component c;
  c.w = 0.5;
  c.mu = Eigen::Vector2d(0.0, 0.0);
  c.sigma = Eigen::MatrixXd::Identity(2, 2);

  MaskConfig weight_only;
  weight_only.eta_w = 0.1;
  MaskConfig full;
  full.eta_w = 0.1;
  full.eta_mean = 0.1;
  full.eta_cov = 0.1;

  RandomStream s1(26);
  RandomStream s2(26);
  const Component a = mask_component(c, weight_only, s1);
  const Component b = mask_component(c, full, s2);
  // Turning on later sub-maskers must not change earlier draws.
  EXPECT_EQ(a.w, b.w);
  EXPECT_EQ((a.mu - c.mu).norm(), 0.0);
  EXPECT_GT((b.mu - c.mu).norm(), 0.0);
}

TEST(MaskGmm, ZeroNoiseReturnsPermutedInput) {
  const Gmm g = two_component_gmm();
  MaskConfig zero;
  RandomStream stream(27);
  const Gmm out = mask_gmm(g, zero, stream);
  EXPECT_NEAR(dist_mixture(out, g), 0.0, 1e-12);
}

TEST(MaskGmm, DeterministicPerStreamIdentity) {
  const Gmm g = two_component_gmm();
  MaskConfig cfg;
  cfg.eta_w = 0.05;
  cfg.eta_mean = 0.05;
  cfg.eta_cov = 0.01;
  RandomStream s1(28);
  RandomStream s2(28);
  const std::string a = [&] {
    const Gmm out = mask_gmm(g, cfg, s1);
    return std::to_string(out.component(0).mu(0)) +
           std::to_string(out.component(1).sigma(0, 1));
  }();
  const std::string b = [&] {
    const Gmm out = mask_gmm(g, cfg, s2);
    return std::to_string(out.component(0).mu(0)) +
           std::to_string(out.component(1).sigma(0, 1));
  }();
  EXPECT_EQ(a, b);
}

TEST(MaskGmm, WeightsRenormalizeToOne) {
  const Gmm g = two_component_gmm();
  MaskConfig cfg;
  cfg.eta_w = 0.3;  // large enough to clamp sometimes
  RandomStream stream(29);
  int renormalized = 0;
  for (int rep = 0; rep < 2000; ++rep) {
    RandomStream sub = stream.substream(rep);
    try {
      const Gmm out = mask_gmm(g, cfg, sub);
      double total = 0.0;
      for (int i = 0; i < out.k(); ++i) total += out.component(i).w;
      ASSERT_NEAR(total, 1.0, 1e-12);
      ++renormalized;
    } catch (const DegenerateWeights&) {
      // Both weights clamped to zero; the documented failure mode.
    }
  }
  EXPECT_GT(renormalized, 1900);
}

TEST(MaskGmm, ThrowsWhenAllMaskedWeightsClampToZero) {
  const Gmm g = two_component_gmm();
  MaskConfig cfg;
  cfg.eta_w = 1e6;  // each weight clamps with probability ~ 1/2
  RandomStream stream(32);
  bool threw = false;
  for (int i = 0; i < 200 && !threw; ++i) {
    RandomStream sub = stream.substream(i);
    try {
      mask_gmm(g, cfg, sub);
    } catch (const DegenerateWeights&) {
      threw = true;
    }
  }
  EXPECT_TRUE(threw);
}

TEST(MaskGmm, ShuffleIsUniformOverPositions) {
  const Gmm g = two_component_gmm();
  MaskConfig zero;
  RandomStream stream(30);
  int first_stayed = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    RandomStream sub = stream.substream(i);
    const Gmm out = mask_gmm(g, zero, sub);
    if (out.component(0).mu(0) == g.component(0).mu(0)) ++first_stayed;
  }
  EXPECT_NEAR(first_stayed / static_cast<double>(n), 0.5, 0.02);
}

TEST(LiftMasker, AppliesPerElementSubstreams) {
  const std::vector<double> values{1.0, 2.0, 3.0};
  RandomStream stream(31);
  const auto masker = [](double v, RandomStream& sub) {
    return v + sub.uniform01();
  };
  const std::vector<double> a = lift_masker<double>(masker, 3, values, stream);
  RandomStream replay(31);
  const std::vector<double> b = lift_masker<double>(masker, 3, values, replay);
  EXPECT_EQ(a, b);
  EXPECT_THROW(lift_masker<double>(masker, 2, values, stream),
               DimensionMismatch);
}

TEST(MaskConfigValidate, RejectsNegativeScales) {
  MaskConfig cfg;
  cfg.eta_w = -0.1;
  EXPECT_THROW(validate(cfg), InvalidArgument);
}

}  // namespace
}  // namespace ppegmm
