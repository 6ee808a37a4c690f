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

#ifndef PPEGMM_ERRORS_HPP_
#define PPEGMM_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace ppegmm {

// Base class for every error raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid argument that violates a documented precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Operands have incompatible dimensions (matrix sizes, k, or d).
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// A matrix expected to be positive semidefinite has an eigenvalue below
// the clamp tolerance.
class NotPsd : public Error {
 public:
  using Error::Error;
};

// A matrix expected to be positive definite is singular at the working
// tolerance.
class Singular : public Error {
 public:
  using Error::Error;
};

// Brute-force enumeration refused: instance too large.
class TooLarge : public Error {
 public:
  using Error::Error;
};

// All masked mixture weights collapsed to zero, so normalization is
// undefined; callers treat this as mechanism failure.
class DegenerateWeights : public Error {
 public:
  using Error::Error;
};

// Calibration epsilon at or above ln(2)/3.
class EpsilonTooLarge : public Error {
 public:
  using Error::Error;
};

// No noise scale satisfies both the masking floor and the concentration
// ceiling at the requested budgets.
class Infeasible : public Error {
 public:
  using Error::Error;
};

// The failure threshold exceeds 1, so the private test can never pass.
class ConfigInfeasible : public Error {
 public:
  using Error::Error;
};

// The private test passed but no candidate had agreement above 0.6.
// Structurally unreachable; raised instead of asserting so release builds
// fail loudly too.
class SelectionFailed : public Error {
 public:
  using Error::Error;
};

// Too few points for the learner configuration.
class InsufficientData : public Error {
 public:
  using Error::Error;
};

// The learner produced a non-finite likelihood.
class LearnFailed : public Error {
 public:
  using Error::Error;
};

// Audit pair is farther apart than the stated masking radius.
class PreconditionDistance : public Error {
 public:
  using Error::Error;
};

// Rejection sampler exceeded its rejection budget.
class SamplerStarved : public Error {
 public:
  using Error::Error;
};

// File parsing / IO failure, with context where available.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ppegmm

#endif  // PPEGMM_ERRORS_HPP_
