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

#include <span>
#include <vector>

#include "tomocs/bases.hpp"
#include "tomocs/design.hpp"
#include "tomocs/types.hpp"

namespace tomocs {

/// Matrix-free form of the sensing map for a product design.
///
/// chi is carried to the Choi-type operator J = B chi B^dagger (B holds the
/// vectorized basis elements as columns); every probability is then
/// Tr[(rho^T (x) Pi) J], a contraction of J against one 2x2 factor per qubit
/// slot. For the complete design the Gram operator A^T A factors as a
/// Kronecker product of 4x4 per-slot Gram matrices, which gives closed-form
/// shifted inverses.
class SensingOperator {
 public:
  SensingOperator(const TomographyDesign& design, BasisPtr basis);

  Eigen::Index rows() const { return num_rows_; }
  int num_qubits() const { return num_qubits_; }
  const OperatorBasis& basis() const { return *basis_; }
  const BasisPtr& basis_ptr() const { return basis_; }

  /// All probabilities in design row order.
  RVector apply(const CMatrix& chi) const;
  /// A^T y as a Hermitian matrix in chi space (real Frobenius pairing).
  CMatrix adjoint(const RVector& y) const;

  /// (gram_scale * A^T A + shift I)^{-1} r for the complete design.
  CMatrix solve_normal(const CMatrix& r, double gram_scale, double shift) const;

  /// b with P_row = b^dagger chi b.
  CVector row_vector(Eigen::Index row) const;
  /// Selected rows as functionals on real Hermitian coordinates (rows x d^4).
  RMatrix real_rows(std::span<const Eigen::Index> rows) const;

 private:
  CMatrix to_choi(const CMatrix& chi) const;
  CMatrix from_choi(const CMatrix& j) const;

  BasisPtr basis_;
  int num_qubits_;
  int dim_;
  Eigen::Index num_rows_;
  std::vector<CVector> inputs_;     // product input vectors psi_k
  std::vector<CVector> measured_;   // R_r^dagger |o>, index r * 2^N + o
  int num_settings_;
  CMatrix w_;                       // B / sqrt(Q), unitary
  CMatrix input_map_;               // 4 x 4, [c, 2b + a] = (rho_c^T)[a, b]
  CMatrix output_map_;              // 6 x 4, [2r + o, 2b + a] = Pi_{r,o}[a, b]
  CMatrix input_eigvecs_;           // of input_map^H input_map
  RVector input_eigvals_;
  CMatrix output_eigvecs_;
  RVector output_eigvals_;
  std::vector<Eigen::Index> row_of_tensor_;   // tensor position -> design row
};

}  // namespace tomocs
