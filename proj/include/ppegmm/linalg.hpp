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
// Dense symmetric-matrix kernel: PSD square roots, inverse square roots,
// Cholesky factorization and Frobenius norms. Matrices are plain
// Eigen::MatrixXd; every entry point validates the symmetry invariant
// (|a_ij - a_ji| <= symmetry_rtol * max(1, |a_ij|)) and finiteness.

#ifndef PPEGMM_LINALG_HPP_
#define PPEGMM_LINALG_HPP_

#include <Eigen/Dense>

#include "ppegmm/errors.hpp"

namespace ppegmm {

// Tolerances used by the symmetric kernels. All defaults are fixed
// constants; pass a modified record to override.
struct Numerics {
  double symmetry_rtol = 1e-10;   // symmetry check slack
  double psd_clamp_rtol = 1e-9;   // eigenvalues in [-rtol*||S||_F, 0) -> 0
  double spd_floor_rtol = 1e-12;  // min eigenvalue floor for inv_sqrt
  double chol_pivot_rtol = 1e-12; // pivot floor: rtol * trace(S)/d
};

// Throws DimensionMismatch for non-square input, InvalidArgument when the
// symmetry or finiteness invariant fails.
void require_symmetric(const Eigen::MatrixXd& s,
                       const Numerics& num = Numerics());

// Symmetric PSD square root via eigendecomposition. Eigenvalues in
// [-psd_clamp_rtol*||S||_F, 0) are clamped to zero; anything lower throws
// NotPsd.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& s,
                         const Numerics& num = Numerics());

// Symmetric inverse square root R with R*S*R ~= I. Throws Singular when the
// smallest eigenvalue is below spd_floor_rtol*||S||_F.
Eigen::MatrixXd inv_sqrt(const Eigen::MatrixXd& s,
                         const Numerics& num = Numerics());

// Lower-triangular L with L*L^T = S and positive diagonal. Throws Singular
// when a pivot falls below chol_pivot_rtol * trace(S)/d.
Eigen::MatrixXd cholesky_lower(const Eigen::MatrixXd& s,
                               const Numerics& num = Numerics());

// Smallest eigenvalue of a symmetric matrix.
double min_eigenvalue(const Eigen::MatrixXd& s,
                      const Numerics& num = Numerics());

// sqrt(sum of squared entries); defined for any rectangular matrix.
double frob_norm(const Eigen::MatrixXd& m);

}  // namespace ppegmm

#endif  // PPEGMM_LINALG_HPP_
