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

#include "ppegmm/random.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "ppegmm/errors.hpp"

namespace ppegmm {
namespace {

TEST(RandomStream, SameIdentitySameSequence) {
  RandomStream a(42, 7);
  RandomStream b(42, 7);
  for (int i = 0; i < 100; ++i) {
    ASSERT_DOUBLE_EQ(a.uniform01(), b.uniform01());
  }
}

TEST(RandomStream, DistinctIdentitiesDiffer) {
  RandomStream a(42, 0);
  RandomStream b(42, 1);
  RandomStream c(43, 0);
  int equal_ab = 0;
  int equal_ac = 0;
  for (int i = 0; i < 64; ++i) {
    const double va = a.uniform01();
    if (va == b.uniform01()) ++equal_ab;
    if (va == c.uniform01()) ++equal_ac;
  }
  EXPECT_LT(equal_ab, 2);
  EXPECT_LT(equal_ac, 2);
}

TEST(RandomStream, SubstreamsAreStableAndOrderFree) {
  RandomStream parent(9);
  RandomStream early = parent.substream(5);
  for (int i = 0; i < 10; ++i) parent.uniform01();
  RandomStream late = parent.substream(5);
  for (int i = 0; i < 20; ++i) {
    ASSERT_DOUBLE_EQ(early.uniform01(), late.uniform01());
  }
}

TEST(RandomStream, Uniform01StaysInHalfOpenUnitInterval) {
  RandomStream stream(1);
  double lo = 1.0;
  double hi = 0.0;
  for (int i = 0; i < 200000; ++i) {
    const double u = stream.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  EXPECT_LT(lo, 1e-4);
  EXPECT_GT(hi, 1.0 - 1e-4);
}

TEST(RandomStream, UniformBelowCoversRangeUniformly) {
  RandomStream stream(2);
  std::vector<int> counts(10, 0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const std::uint64_t v = stream.uniform_below(10);
    ASSERT_LT(v, 10u);
    ++counts[static_cast<int>(v)];
  }
  for (int c : counts) {
    EXPECT_NEAR(c, n / 10, 5 * std::sqrt(n / 10.0));
  }
  EXPECT_THROW(stream.uniform_below(0), InvalidArgument);
}

TEST(RandomStream, NormalMomentsMatchStandardGaussian) {
  RandomStream stream(3);
  const int n = 400000;
  double sum = 0.0;
  double sum2 = 0.0;
  double sum4 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = stream.normal();
    sum += x;
    sum2 += x * x;
    sum4 += x * x * x * x;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(sum2 / n, 1.0, 0.02);
  EXPECT_NEAR(sum4 / n, 3.0, 0.1);
}

TEST(GaussianHelpers, ShapesAndDeterminism) {
  RandomStream a(4);
  RandomStream b(4);
  const std::vector<double> va = std_normal(a, 16);
  const std::vector<double> vb = std_normal(b, 16);
  EXPECT_EQ(va, vb);

  RandomStream c(5);
  const Eigen::MatrixXd g = gaussian_matrix(c, 3);
  EXPECT_EQ(g.rows(), 3);
  EXPECT_EQ(g.cols(), 3);
}

TEST(GaussianWithCov, EmpiricalCovarianceMatchesSigma) {
  Eigen::MatrixXd sigma(2, 2);
  sigma << 2.0, 0.6, 0.6, 1.0;
  RandomStream stream(6);
  const int n = 200000;
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(2, 2);
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(2);
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd x = gaussian_with_cov(stream, sigma);
    acc += x * x.transpose();
    mean += x;
  }
  mean /= n;
  const Eigen::MatrixXd cov = acc / n - mean * mean.transpose();
  EXPECT_LT((cov - sigma).norm(), 0.03);
}

TEST(TLap, BoundMatchesClosedForm) {
  TLapParams p;
  p.delta_sens = 1.0;
  p.epsilon = 1.0;
  p.delta = 1e-6;
  // Independently evaluated at 40-digit precision:
  // (1/1) * ln(1 + (e - 1)/(2e-6)).
  EXPECT_NEAR(tlap_bound(p), 13.66368939596998324907288087192, 1e-12);

  // (1/0.5) * ln(1 + (e^0.5 - 1)/(2e-3)).
  p.epsilon = 0.5;
  p.delta = 1e-3;
  EXPECT_NEAR(tlap_bound(p), 11.56986842871455812306037801578, 1e-11);
}

TEST(TLap, CdfEndpointsAndSymmetry) {
  TLapParams p;
  p.delta_sens = 2.0 / 274.0;
  p.epsilon = 1.0;
  p.delta = 1e-6;
  const double a = tlap_bound(p);
  EXPECT_NEAR(tlap_cdf(p, -a), 0.0, 1e-15);
  EXPECT_NEAR(tlap_cdf(p, 0.0), 0.5, 1e-15);
  EXPECT_NEAR(tlap_cdf(p, a), 1.0, 1e-15);
  for (double x : {0.1 * a, 0.37 * a, 0.9 * a}) {
    EXPECT_NEAR(tlap_cdf(p, x) + tlap_cdf(p, -x), 1.0, 1e-13);
  }
}

TEST(TLap, SamplesRespectBoundAndMedian) {
  TLapParams p;
  p.delta_sens = 1.0;
  p.epsilon = 0.7;
  p.delta = 1e-5;
  const double a = tlap_bound(p);
  RandomStream stream(7);
  int below_zero = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double x = tlap_sample(stream, p);
    ASSERT_GE(x, -a);
    ASSERT_LE(x, a);
    if (x < 0.0) ++below_zero;
  }
  EXPECT_NEAR(below_zero / static_cast<double>(n), 0.5, 0.01);
}

TEST(TLap, ValidateRejectsBadParams) {
  TLapParams p;
  p.epsilon = 0.0;
  EXPECT_THROW(validate(p), InvalidArgument);
  p.epsilon = 1.0;
  p.delta = 0.0;
  EXPECT_THROW(validate(p), InvalidArgument);
  p.delta = 1e-6;
  p.delta_sens = -1.0;
  EXPECT_THROW(validate(p), InvalidArgument);
}

}  // namespace
}  // namespace ppegmm
