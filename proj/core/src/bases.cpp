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
#include "tomocs/bases.hpp"

#include <array>
#include <cmath>

#include "tomocs/errors.hpp"
#include "tomocs/linalg.hpp"

namespace tomocs {
namespace {

constexpr double kUnitaryTol = 1e-10;

int qubits_for_dim(int dim) {
  switch (dim) {
    case 2: return 1;
    case 4: return 2;
    case 8: return 3;
    default:
      throw Error(ErrorCode::kUnsupportedDimension,
                  "unsupported Hilbert-space dimension " + std::to_string(dim) +
                      " (expected 2, 4 or 8)");
  }
}

std::array<CMatrix, 4> single_qubit_paulis() {
  const Complex i(0.0, 1.0);
  std::array<CMatrix, 4> p;
  p[0] = CMatrix::Identity(2, 2);
  p[1] = CMatrix::Zero(2, 2);
  p[1](0, 1) = 1.0;
  p[1](1, 0) = 1.0;
  p[2] = CMatrix::Zero(2, 2);
  p[2](0, 1) = -i;
  p[2](1, 0) = i;
  p[3] = CMatrix::Zero(2, 2);
  p[3](0, 0) = 1.0;
  p[3](1, 1) = -1.0;
  return p;
}

void require_unitary(const CMatrix& u) {
  if (u.rows() != u.cols()) {
    throw Error(ErrorCode::kInvalidGate, "gate matrix is not square");
  }
  qubits_for_dim(static_cast<int>(u.rows()));
  if (!linalg::is_unitary(u, kUnitaryTol)) {
    throw Error(ErrorCode::kInvalidGate, "gate matrix is not unitary within 1e-10");
  }
}

CVector vec(const CMatrix& m) {
  return Eigen::Map<const CVector>(m.data(), m.size());
}

CMatrix unvec(const CVector& v, Eigen::Index d) {
  return Eigen::Map<const CMatrix>(v.data(), d, d);
}

}  // namespace

std::string_view to_string(BasisLabel label) {
  switch (label) {
    case BasisLabel::kPauli: return "pauli";
    case BasisLabel::kPauliError: return "pauli-error";
    case BasisLabel::kNatural: return "natural";
    case BasisLabel::kSvd: return "svd";
  }
  return "unknown";
}

BasisLabel parse_basis_label(std::string_view text) {
  if (text == "pauli") return BasisLabel::kPauli;
  if (text == "pauli-error" || text == "pauli_error") return BasisLabel::kPauliError;
  if (text == "natural") return BasisLabel::kNatural;
  if (text == "svd") return BasisLabel::kSvd;
  throw Error(ErrorCode::kInvalidArgument, "unknown basis label '" + std::string(text) + "'");
}

OperatorBasis::OperatorBasis(BasisLabel label, std::vector<CMatrix> elements,
                             double normalization, std::optional<CMatrix> anchor_unitary)
    : label_(label),
      dim_(elements.empty() ? 0 : static_cast<int>(elements.front().rows())),
      normalization_(normalization),
      elements_(std::move(elements)),
      anchor_(std::move(anchor_unitary)) {
  qubits_for_dim(dim_);
  const auto d2 = static_cast<std::size_t>(dim_) * dim_;
  if (elements_.size() != d2) {
    throw Error(ErrorCode::kDimensionMismatch, "operator basis needs d^2 elements");
  }
  if ((label_ == BasisLabel::kPauliError || label_ == BasisLabel::kSvd) && !anchor_) {
    throw Error(ErrorCode::kInvalidArgument, "basis label requires an anchor unitary");
  }
  vectorized_.resize(static_cast<Eigen::Index>(d2), static_cast<Eigen::Index>(d2));
  for (std::size_t a = 0; a < d2; ++a) {
    if (elements_[a].rows() != dim_ || elements_[a].cols() != dim_) {
      throw Error(ErrorCode::kDimensionMismatch, "basis element has wrong shape");
    }
    vectorized_.col(static_cast<Eigen::Index>(a)) = vec(elements_[a]);
  }
}

int OperatorBasis::num_qubits() const { return qubits_for_dim(dim_); }

CMatrix OperatorBasis::gram() const { return vectorized_.adjoint() * vectorized_; }

CVector OperatorBasis::coefficients(const CMatrix& x) const {
  if (x.rows() != dim_ || x.cols() != dim_) {
    throw Error(ErrorCode::kDimensionMismatch, "operator does not match basis dimension");
  }
  return vectorized_.adjoint() * vec(x) / normalization_;
}

bool OperatorBasis::same_as(const OperatorBasis& other) const {
  if (dim_ != other.dim_ || label_ != other.label_) return false;
  if (std::abs(normalization_ - other.normalization_) > 1e-12) return false;
  return (vectorized_ - other.vectorized_).cwiseAbs().maxCoeff() <= 1e-12;
}

OperatorBasis pauli_basis(int num_qubits) {
  if (num_qubits < 1 || num_qubits > 3) {
    throw Error(ErrorCode::kUnsupportedDimension,
                "Pauli basis supports 1 to 3 qubits, got " + std::to_string(num_qubits));
  }
  const auto p = single_qubit_paulis();
  const int count = 1 << (2 * num_qubits);
  std::vector<CMatrix> elements;
  elements.reserve(static_cast<std::size_t>(count));
  for (int alpha = 0; alpha < count; ++alpha) {
    std::vector<CMatrix> factors;
    for (int q = num_qubits - 1; q >= 0; --q) {
      factors.push_back(p[static_cast<std::size_t>((alpha >> (2 * q)) & 3)]);
    }
    elements.push_back(linalg::kron_all(factors));
  }
  return OperatorBasis(BasisLabel::kPauli, std::move(elements), static_cast<double>(1 << num_qubits));
}

OperatorBasis pauli_error_basis(const CMatrix& u) {
  require_unitary(u);
  const int d = static_cast<int>(u.rows());
  OperatorBasis paulis = pauli_basis(qubits_for_dim(d));
  std::vector<CMatrix> elements;
  elements.reserve(paulis.size());
  for (const auto& p : paulis.elements()) elements.push_back(u * p);
  return OperatorBasis(BasisLabel::kPauliError, std::move(elements), static_cast<double>(d), u);
}

OperatorBasis natural_basis(int dim) {
  qubits_for_dim(dim);
  std::vector<CMatrix> elements;
  elements.reserve(static_cast<std::size_t>(dim) * dim);
  // Column stacking: index alpha = i + d * j holds the unit at (i, j).
  for (int j = 0; j < dim; ++j) {
    for (int i = 0; i < dim; ++i) {
      CMatrix e = CMatrix::Zero(dim, dim);
      e(i, j) = 1.0;
      elements.push_back(std::move(e));
    }
  }
  return OperatorBasis(BasisLabel::kNatural, std::move(elements), 1.0);
}

OperatorBasis svd_basis(const CMatrix& u) {
  require_unitary(u);
  const Eigen::Index d = u.rows();
  const Eigen::Index d2 = d * d;

  // chi_nat = vec(U) vec(U)^dagger has the single nonzero eigenvalue d with
  // eigenvector vec(U)/sqrt(d). The degenerate zero eigenspace is spanned by
  // Gram-Schmidt over the natural basis in its fixed order.
  std::vector<CVector> q;
  q.reserve(static_cast<std::size_t>(d2));
  q.push_back(vec(u) / std::sqrt(static_cast<double>(d)));
  for (Eigen::Index k = 0; k < d2 && static_cast<Eigen::Index>(q.size()) < d2; ++k) {
    CVector w = CVector::Unit(d2, k);
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& prev : q) w -= prev.dot(w) * prev;
    }
    const double norm = w.norm();
    if (norm > 1e-8) q.push_back(w / norm);
  }

  std::vector<CMatrix> elements;
  elements.reserve(q.size());
  for (const auto& col : q) {
    CMatrix e = unvec(col, d);
    // Exact zeros keep the sensing matrix sparse where GS left natural elements untouched.
    for (Eigen::Index i = 0; i < e.size(); ++i) {
      if (std::abs(e.data()[i]) < 1e-15) e.data()[i] = 0.0;
    }
    elements.push_back(std::move(e));
  }
  return OperatorBasis(BasisLabel::kSvd, std::move(elements), 1.0, u);
}

OperatorBasis make_basis(BasisLabel label, int dim, const std::optional<CMatrix>& anchor) {
  switch (label) {
    case BasisLabel::kPauli: return pauli_basis(qubits_for_dim(dim));
    case BasisLabel::kNatural: return natural_basis(dim);
    case BasisLabel::kPauliError:
    case BasisLabel::kSvd:
      if (!anchor) {
        throw Error(ErrorCode::kInvalidArgument,
                    std::string(to_string(label)) + " basis needs an anchor unitary");
      }
      if (anchor->rows() != dim) {
        throw Error(ErrorCode::kDimensionMismatch, "anchor unitary dimension mismatch");
      }
      return label == BasisLabel::kSvd ? svd_basis(*anchor) : pauli_error_basis(*anchor);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown basis label");
}

CMatrix BasisTransform::apply(const CMatrix& chi_source) const {
  if (chi_source.rows() != v.cols() || chi_source.cols() != v.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "process matrix does not match transform");
  }
  return scale * (v * chi_source * v.adjoint());
}

BasisTransform basis_transform(const OperatorBasis& from, const OperatorBasis& to) {
  if (from.dim() != to.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "basis dimensions differ");
  }
  BasisTransform t;
  t.source_label = from.label();
  t.target_label = to.label();
  t.v = to.vectorized().adjoint() * from.vectorized() /
        std::sqrt(from.normalization() * to.normalization());
  t.scale = from.normalization() / to.normalization();
  return t;
}

BasisTransform compose(const BasisTransform& first, const BasisTransform& second) {
  if (first.target_label != second.source_label || first.v.rows() != second.v.cols()) {
    throw Error(ErrorCode::kBasisMismatch, "transforms do not chain");
  }
  BasisTransform t;
  t.source_label = first.source_label;
  t.target_label = second.target_label;
  t.v = second.v * first.v;
  t.scale = first.scale * second.scale;
  return t;
}

nlohmann::json matrix_to_json(const CMatrix& m) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      out.push_back({m(i, j).real(), m(i, j).imag()});
    }
  }
  return out;
}

CMatrix matrix_from_json(const nlohmann::json& j, Eigen::Index rows, Eigen::Index cols) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows * cols) {
    throw Error(ErrorCode::kDimensionMismatch, "matrix JSON has wrong number of entries");
  }
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index k = 0; k < cols; ++k) {
      const auto& pair = j[static_cast<std::size_t>(i * cols + k)];
      m(i, k) = Complex(pair.at(0).get<double>(), pair.at(1).get<double>());
    }
  }
  return m;
}

nlohmann::json to_json(const OperatorBasis& basis) {
  nlohmann::json j;
  j["label"] = std::string(to_string(basis.label()));
  j["dim"] = basis.dim();
  j["normalization"] = basis.normalization();
  nlohmann::json elements = nlohmann::json::array();
  for (const auto& e : basis.elements()) elements.push_back(matrix_to_json(e));
  j["elements"] = std::move(elements);
  if (basis.anchor_unitary()) j["anchor_unitary"] = matrix_to_json(*basis.anchor_unitary());
  return j;
}

OperatorBasis basis_from_json(const nlohmann::json& j) {
  const BasisLabel label = parse_basis_label(j.at("label").get<std::string>());
  const int dim = j.at("dim").get<int>();
  std::optional<CMatrix> anchor;
  if (j.contains("anchor_unitary")) anchor = matrix_from_json(j.at("anchor_unitary"), dim, dim);
  if (!j.contains("elements")) return make_basis(label, dim, anchor);
  std::vector<CMatrix> elements;
  for (const auto& e : j.at("elements")) elements.push_back(matrix_from_json(e, dim, dim));
  return OperatorBasis(label, std::move(elements), j.at("normalization").get<double>(),
                       std::move(anchor));
}

}  // namespace tomocs
