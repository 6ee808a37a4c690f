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
// Gaussian mixture model value types.

#ifndef PPEGMM_GMM_HPP_
#define PPEGMM_GMM_HPP_

#include <vector>

#include <Eigen/Dense>

#include "ppegmm/errors.hpp"
#include "ppegmm/linalg.hpp"

namespace ppegmm {

// One mixture component: weight, mean and covariance.
struct Component {
  double w = 0.0;
  Eigen::VectorXd mu;
  Eigen::MatrixXd sigma;
};

// Throws unless w is finite and nonnegative, mu is finite with d entries,
// and sigma is a finite symmetric d x d matrix whose smallest eigenvalue is
// above -psd_clamp_rtol * ||sigma||_F.
void validate_component(const Component& c, int d,
                        const Numerics& num = Numerics());

// A mixture of k >= 1 Gaussians over R^d with weights summing to one.
// Instances are immutable once built; both builders validate every
// component.
class Gmm {
 public:
  static constexpr double kWeightSumTol = 1e-9;

  // Requires the weights to already sum to 1 within kWeightSumTol.
  static Gmm from_components(std::vector<Component> components,
                             const Numerics& num = Numerics());

  // Rescales the weights to sum to 1. Throws DegenerateWeights when the
  // sum is not strictly positive.
  static Gmm normalized(std::vector<Component> components,
                        const Numerics& num = Numerics());

  int k() const { return static_cast<int>(components_.size()); }
  int d() const { return d_; }

  const Component& component(int i) const { return components_.at(i); }
  const std::vector<Component>& components() const { return components_; }

 private:
  Gmm(std::vector<Component> components, int d)
      : components_(std::move(components)), d_(d) {}

  std::vector<Component> components_;
  int d_;
};

}  // namespace ppegmm

#endif  // PPEGMM_GMM_HPP_
