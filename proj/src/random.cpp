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

#include <cmath>

#include "ppegmm/linalg.hpp"

namespace ppegmm {
namespace {

// splitmix64 finalizer; the keyed mixing function behind stream splitting.
std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t stream_key(std::uint64_t seed, std::uint64_t stream_id) {
  return mix64(mix64(seed) ^ mix64(stream_id ^ 0xA5A5A5A55A5A5A5Aull));
}

constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(stream_key(seed, stream_id)) {}

RandomStream RandomStream::substream(std::uint64_t index) const {
  return RandomStream(seed_, mix64(stream_id_ ^ mix64(index + 1)));
}

double RandomStream::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t RandomStream::uniform_below(std::uint64_t n) {
  if (n == 0) throw InvalidArgument("uniform_below: n must be positive");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

double RandomStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // u1 in (0, 1] keeps the log finite.
  const double u1 = static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  const double u2 = uniform01();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  spare_ = radius * std::sin(kTwoPi * u2);
  has_spare_ = true;
  return radius * std::cos(kTwoPi * u2);
}

std::vector<double> std_normal(RandomStream& stream, std::size_t n) {
  std::vector<double> out(n);
  for (auto& x : out) x = stream.normal();
  return out;
}

Eigen::MatrixXd gaussian_matrix(RandomStream& stream, int d) {
  if (d < 1) throw InvalidArgument("gaussian_matrix: d must be >= 1");
  Eigen::MatrixXd g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = stream.normal();
  return g;
}

Eigen::VectorXd gaussian_with_cov(RandomStream& stream,
                                  const Eigen::MatrixXd& sigma) {
  const Eigen::MatrixXd l = cholesky_lower(sigma);
  Eigen::VectorXd z(sigma.rows());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = stream.normal();
  return l * z;
}

void validate(const TLapParams& p) {
  if (!(p.delta_sens > 0.0) || !std::isfinite(p.delta_sens)) {
    throw InvalidArgument("TLapParams: sensitivity must be positive");
  }
  if (!(p.epsilon > 0.0) || !std::isfinite(p.epsilon)) {
    throw InvalidArgument("TLapParams: epsilon must be positive");
  }
  if (!(p.delta > 0.0 && p.delta < 1.0)) {
    throw InvalidArgument("TLapParams: delta must be in (0, 1)");
  }
}

double tlap_bound(const TLapParams& p) {
  validate(p);
  const double scale = p.delta_sens / p.epsilon;
  return scale * std::log1p(std::expm1(p.epsilon) / (2.0 * p.delta));
}

double tlap_cdf(const TLapParams& p, double x) {
  validate(p);
  const double a = tlap_bound(p);
  if (x <= -a) return 0.0;
  if (x >= a) return 1.0;
  const double scale = p.delta_sens / p.epsilon;
  // exp(-A/scale) without round-trip through A.
  const double c = 2.0 * p.delta / (2.0 * p.delta + std::expm1(p.epsilon));
  if (x <= 0.0) {
    return (std::exp(x / scale) - c) / (2.0 * (1.0 - c));
  }
  return 1.0 - (std::exp(-x / scale) - c) / (2.0 * (1.0 - c));
}

double tlap_sample(RandomStream& stream, const TLapParams& p) {
  validate(p);
  const double scale = p.delta_sens / p.epsilon;
  const double c = 2.0 * p.delta / (2.0 * p.delta + std::expm1(p.epsilon));
  const double u = stream.uniform01();
  if (u < 0.5) {
    return scale * std::log(c + 2.0 * u * (1.0 - c));
  }
  return -scale * std::log(c + 2.0 * (1.0 - u) * (1.0 - c));
}

}  // namespace ppegmm
