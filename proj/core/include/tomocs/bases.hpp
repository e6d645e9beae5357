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

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "tomocs/types.hpp"

namespace tomocs {

enum class BasisLabel { kPauli, kPauliError, kNatural, kSvd };

std::string_view to_string(BasisLabel label);
/// Accepts "pauli", "pauli-error", "natural", "svd".
BasisLabel parse_basis_label(std::string_view text);

/// Ordered orthogonal operator basis {E_alpha} of d x d matrices with
/// Tr(E_a^dagger E_b) = Q delta_ab.
class OperatorBasis {
 public:
  OperatorBasis(BasisLabel label, std::vector<CMatrix> elements, double normalization,
                std::optional<CMatrix> anchor_unitary = std::nullopt);

  BasisLabel label() const { return label_; }
  int dim() const { return dim_; }
  int num_qubits() const;
  std::size_t size() const { return elements_.size(); }
  double normalization() const { return normalization_; }
  const std::vector<CMatrix>& elements() const { return elements_; }
  const CMatrix& operator[](std::size_t i) const { return elements_[i]; }
  const std::optional<CMatrix>& anchor_unitary() const { return anchor_; }

  /// d^2 x d^2 matrix whose column alpha is the column-stacked vec(E_alpha).
  const CMatrix& vectorized() const { return vectorized_; }

  /// Gram matrix G_ab = Tr(E_a^dagger E_b).
  CMatrix gram() const;

  /// Expansion coefficients c with X = sum_a c_a E_a.
  CVector coefficients(const CMatrix& x) const;

  /// True when both bases have identical elements (within 1e-12).
  bool same_as(const OperatorBasis& other) const;

 private:
  BasisLabel label_;
  int dim_;
  double normalization_;
  std::vector<CMatrix> elements_;
  std::optional<CMatrix> anchor_;
  CMatrix vectorized_;
};

using BasisPtr = std::shared_ptr<const OperatorBasis>;

/// {I, X, Y, Z}^{(x)N} in lexicographic order, identity first, Q = 2^N.
OperatorBasis pauli_basis(int num_qubits);
/// E_alpha = U P_alpha with the Pauli ordering above, Q = d.
OperatorBasis pauli_error_basis(const CMatrix& u);
/// Single-entry matrices in column-stacking order, Q = 1.
OperatorBasis natural_basis(int dim);
/// Eigenbasis of the rank-one natural-basis process matrix of U; the first
/// element is U / sqrt(d), Q = 1.
OperatorBasis svd_basis(const CMatrix& u);

/// Builds a basis by label; \p anchor is required for PauliError and SVD.
OperatorBasis make_basis(BasisLabel label, int dim, const std::optional<CMatrix>& anchor);

/// Unitary change of basis acting on process matrices:
///   chi_target = scale * V chi_source V^dagger,
///   V_ab = Tr(F_a^dagger E_b) / sqrt(Q_F Q_E),  scale = Q_E / Q_F,
/// with {E} the source and {F} the target basis.
struct BasisTransform {
  BasisLabel source_label;
  BasisLabel target_label;
  CMatrix v;
  double scale = 1.0;

  CMatrix apply(const CMatrix& chi_source) const;
};

BasisTransform basis_transform(const OperatorBasis& from, const OperatorBasis& to);

/// Composition second(first(.)).
BasisTransform compose(const BasisTransform& first, const BasisTransform& second);

nlohmann::json to_json(const OperatorBasis& basis);
OperatorBasis basis_from_json(const nlohmann::json& j);

// Shared helpers for complex-matrix JSON: row-major [re, im] pairs.
nlohmann::json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const nlohmann::json& j, Eigen::Index rows, Eigen::Index cols);

}  // namespace tomocs
