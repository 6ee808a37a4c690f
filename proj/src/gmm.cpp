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

#include "ppegmm/gmm.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace ppegmm {
namespace {

void validate_all(const std::vector<Component>& components,
                  const Numerics& num) {
  if (components.empty()) {
    throw InvalidArgument("mixture needs at least one component");
  }
  const int d = static_cast<int>(components.front().mu.size());
  for (const auto& c : components) validate_component(c, d, num);
}

double weight_sum(const std::vector<Component>& components) {
  double sum = 0.0;
  for (const auto& c : components) sum += c.w;
  return sum;
}

}  // namespace

void validate_component(const Component& c, int d, const Numerics& num) {
  if (!std::isfinite(c.w) || c.w < 0.0) {
    throw InvalidArgument("component weight must be finite and nonnegative");
  }
  if (d < 1) throw InvalidArgument("component dimension must be >= 1");
  if (c.mu.size() != d) {
    std::ostringstream msg;
    msg << "component mean has " << c.mu.size() << " entries, expected " << d;
    throw DimensionMismatch(msg.str());
  }
  for (Eigen::Index i = 0; i < c.mu.size(); ++i) {
    if (!std::isfinite(c.mu(i))) {
      throw InvalidArgument("component mean entry is not finite");
    }
  }
  if (c.sigma.rows() != d || c.sigma.cols() != d) {
    std::ostringstream msg;
    msg << "component covariance is " << c.sigma.rows() << "x"
        << c.sigma.cols() << ", expected " << d << "x" << d;
    throw DimensionMismatch(msg.str());
  }
  require_symmetric(c.sigma, num);
  const double clamp = num.psd_clamp_rtol * frob_norm(c.sigma);
  const double lambda_min = min_eigenvalue(c.sigma, num);
  if (lambda_min < -clamp) {
    std::ostringstream msg;
    msg << "component covariance is not PSD: eigenvalue " << lambda_min;
    throw NotPsd(msg.str());
  }
}

Gmm Gmm::from_components(std::vector<Component> components,
                         const Numerics& num) {
  validate_all(components, num);
  const double sum = weight_sum(components);
  if (std::abs(sum - 1.0) > kWeightSumTol) {
    std::ostringstream msg;
    msg << "mixture weights sum to " << sum << ", expected 1";
    throw InvalidArgument(msg.str());
  }
  const int d = static_cast<int>(components.front().mu.size());
  return Gmm(std::move(components), d);
}

Gmm Gmm::normalized(std::vector<Component> components, const Numerics& num) {
  validate_all(components, num);
  const double sum = weight_sum(components);
  if (!(sum > 0.0)) {
    throw DegenerateWeights("mixture weights sum to zero; cannot normalize");
  }
  for (auto& c : components) c.w /= sum;
  const int d = static_cast<int>(components.front().mu.size());
  return Gmm(std::move(components), d);
}

}  // namespace ppegmm
