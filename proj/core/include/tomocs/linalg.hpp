// Copyright 2026 The tomocs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "tomocs/types.hpp"

namespace tomocs::linalg {

/// Kronecker product with the first factor as the most significant index.
CMatrix kron(const CMatrix& a, const CMatrix& b);
CMatrix kron_all(std::span<const CMatrix> factors);

CMatrix hermitian_part(const CMatrix& x);
double hermiticity_residual(const CMatrix& x);
bool is_unitary(const CMatrix& u, double tol);

/// Eigenvalues of the Hermitian part, ascending.
RVector hermitian_eigenvalues(const CMatrix& x);
double min_eigenvalue(const CMatrix& x);

/// Nearest positive semidefinite matrix in Frobenius norm (eigenvalue clipping).
CMatrix project_psd(const CMatrix& x);

/// Principal square root of a Hermitian PSD matrix; eigenvalues below
/// \p clip are treated as zero.
CMatrix psd_sqrt(const CMatrix& x, double clip = 1e-12);

/// Inverse square root of a Hermitian positive-definite matrix.
CMatrix pd_inverse_sqrt(const CMatrix& x);

// Isometry between D x D Hermitian matrices and R^{D*D}:
//   [ diag(X) ; sqrt(2) Re X_ab ; sqrt(2) Im X_ab  for a < b, row-major ]
// so that <x, y> = Re Tr(X^dagger Y) and ||x|| = ||X||_F.
RVector hermitian_to_real(const CMatrix& x);
CMatrix real_to_hermitian(const RVector& v, Eigen::Index dim);
inline Eigen::Index hermitian_dim_from_real(Eigen::Index n) {
  auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(n))));
  return d;
}

}  // namespace tomocs::linalg
