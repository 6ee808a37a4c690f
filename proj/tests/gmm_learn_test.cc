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

#include "ppegmm/gmm_learn.hpp"

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "ppegmm/errors.hpp"
#include "ppegmm/linalg.hpp"
#include "ppegmm/metrics.hpp"

namespace ppegmm {
namespace {

TEST(SampleGmm, MatchesSingleGaussianMoments) {
  std::vector<Component> comps(1);
  comps[0].w = 1.0;
  comps[0].mu = Eigen::Vector2d(1.0, -2.0);
  comps[0].sigma = (Eigen::MatrixXd(2, 2) << 2.0, 0.6, 0.6, 1.0).finished();
  const Gmm g = Gmm::from_components(std::move(comps));

  RandomStream stream(41);
  const std::size_t n = 200000;
  const Eigen::MatrixXd data = sample_gmm(g, n, stream);
  ASSERT_EQ(data.rows(), static_cast<Eigen::Index>(n));
  ASSERT_EQ(data.cols(), 2);

  const Eigen::VectorXd mean = data.colwise().mean();
  EXPECT_NEAR(mean(0), 1.0, 0.02);
  EXPECT_NEAR(mean(1), -2.0, 0.02);

  const Eigen::MatrixXd centered = data.rowwise() - mean.transpose();
  const Eigen::MatrixXd cov = centered.transpose() * centered / (n - 1.0);
  EXPECT_LT(frob_norm(cov - g.component(0).sigma), 0.05);
}

TEST(SampleGmm, RespectsMixtureWeights) {
  std::vector<Component> comps(2);
  comps[0].w = 0.25;
  comps[0].mu = Eigen::VectorXd::Constant(1, -20.0);
  comps[0].sigma = Eigen::MatrixXd::Identity(1, 1);
  comps[1].w = 0.75;
  comps[1].mu = Eigen::VectorXd::Constant(1, 20.0);
  comps[1].sigma = Eigen::MatrixXd::Identity(1, 1);
  const Gmm g = Gmm::from_components(std::move(comps));

  RandomStream stream(42);
  const Eigen::MatrixXd data = sample_gmm(g, 100000, stream);
  const double frac_left =
      (data.col(0).array() < 0.0).cast<double>().mean();
  EXPECT_NEAR(frac_left, 0.25, 0.01);
}

TEST(SampleGmm, IsDeterministicPerStream) {
  RandomStream g1(43);
  const Gmm g = make_separated_gmm(2, 2, 8.0, g1);
  RandomStream s1(44);
  RandomStream s2(44);
  const Eigen::MatrixXd a = sample_gmm(g, 100, s1);
  const Eigen::MatrixXd b = sample_gmm(g, 100, s2);
  EXPECT_EQ((a - b).norm(), 0.0);
}

TEST(MakeSeparatedGmm, MeetsItsPostconditions) {
  for (int k = 1; k <= 4; ++k) {
    for (int d = 1; d <= 3; ++d) {
      RandomStream stream(100 + 10 * k + d);
      const double sep = 6.0;
      const Gmm g = make_separated_gmm(k, d, sep, stream);
      ASSERT_EQ(g.k(), k);
      ASSERT_EQ(g.d(), d);
      for (int i = 0; i < k; ++i) {
        EXPECT_NEAR(g.component(i).w, 1.0 / k, 1e-12);
        EXPECT_LT(
            frob_norm(g.component(i).sigma - Eigen::MatrixXd::Identity(d, d)),
            1e-12);
        for (int j = i + 1; j < k; ++j) {
          EXPECT_GE((g.component(i).mu - g.component(j).mu).norm(),
                    sep - 1e-9);
        }
      }
    }
  }
}

TEST(MakeSeparatedGmm, RejectsBadArguments) {
  RandomStream stream(45);
  EXPECT_THROW(make_separated_gmm(0, 2, 1.0, stream), InvalidArgument);
  EXPECT_THROW(make_separated_gmm(2, 0, 1.0, stream), InvalidArgument);
  EXPECT_THROW(make_separated_gmm(2, 2, -1.0, stream), InvalidArgument);
}

TEST(EmFit, RecoversWellSeparatedMixture) {
  RandomStream g_stream(46);
  const Gmm truth = make_separated_gmm(3, 2, 12.0, g_stream);
  RandomStream data_stream(47);
  const Eigen::MatrixXd data = sample_gmm(truth, 6000, data_stream);

  LearnerOptions opts;
  opts.k = 3;
  RandomStream fit_stream(48);
  const Gmm fitted = em_fit(data, opts, fit_stream);
  EXPECT_LT(dist_mixture(fitted, truth), 0.15);
}

TEST(EmFit, IsDeterministicPerStream) {
  RandomStream g_stream(49);
  const Gmm truth = make_separated_gmm(2, 2, 10.0, g_stream);
  RandomStream data_stream(50);
  const Eigen::MatrixXd data = sample_gmm(truth, 2000, data_stream);

  LearnerOptions opts;
  opts.k = 2;
  RandomStream s1(51);
  RandomStream s2(51);
  const Gmm a = em_fit(data, opts, s1);
  const Gmm b = em_fit(data, opts, s2);
  for (int i = 0; i < 2; ++i) {
    EXPECT_EQ(a.component(i).w, b.component(i).w);
    EXPECT_EQ((a.component(i).mu - b.component(i).mu).norm(), 0.0);
    EXPECT_EQ(frob_norm(a.component(i).sigma - b.component(i).sigma), 0.0);
  }
}

TEST(EmFit, RidgeRegularizerInflatesCovariance) {
  RandomStream g_stream(52);
  const Gmm truth = make_separated_gmm(1, 2, 1.0, g_stream);
  RandomStream data_stream(53);
  const Eigen::MatrixXd data = sample_gmm(truth, 5000, data_stream);

  LearnerOptions plain;
  plain.k = 1;
  LearnerOptions ridge = plain;
  ridge.reg = 0.5;
  RandomStream s1(54);
  RandomStream s2(54);
  const Gmm a = em_fit(data, plain, s1);
  const Gmm b = em_fit(data, ridge, s2);
  const Eigen::MatrixXd diff =
      b.component(0).sigma - a.component(0).sigma;
  EXPECT_NEAR(diff(0, 0), 0.5, 1e-5);
  EXPECT_NEAR(diff(1, 1), 0.5, 1e-5);
}

TEST(EmFit, RequiresEnoughPoints) {
  LearnerOptions opts;
  opts.k = 2;
  RandomStream stream(55);
  const Eigen::MatrixXd tiny = Eigen::MatrixXd::Random(39, 2);  // < 10*k*d
  EXPECT_THROW(em_fit(tiny, opts, stream), InsufficientData);
  const Eigen::MatrixXd enough = Eigen::MatrixXd::Random(40, 2);
  EXPECT_NO_THROW(em_fit(enough, opts, stream));
}

TEST(EmFit, RejectsNonFiniteData) {
  LearnerOptions opts;
  opts.k = 1;
  RandomStream stream(56);
  Eigen::MatrixXd data = Eigen::MatrixXd::Random(50, 2);
  data(3, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(em_fit(data, opts, stream), InvalidArgument);
}

TEST(LearnerOptionsValidate, RejectsBadFields) {
  LearnerOptions opts;
  opts.k = 0;
  EXPECT_THROW(validate(opts), InvalidArgument);
  opts = LearnerOptions();
  opts.max_iters = 0;
  EXPECT_THROW(validate(opts), InvalidArgument);
  opts = LearnerOptions();
  opts.restarts = 0;
  EXPECT_THROW(validate(opts), InvalidArgument);
  opts = LearnerOptions();
  opts.tol = -1.0;
  EXPECT_THROW(validate(opts), InvalidArgument);
  opts = LearnerOptions();
  EXPECT_NO_THROW(validate(opts));
}

}  // namespace
}  // namespace ppegmm
