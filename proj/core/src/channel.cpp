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
#include "tomocs/channel.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <iomanip>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "tomocs/errors.hpp"
#include "tomocs/linalg.hpp"

namespace tomocs {
namespace {

// Trace of a trace-preserving chi in this basis: 1 when Q = d, d when Q = 1.
double expected_trace(const OperatorBasis& basis) {
  return static_cast<double>(basis.dim()) / basis.normalization();
}

// sum_a chi_ab E_a for every b.
std::vector<CMatrix> contract_left(const CMatrix& chi, const OperatorBasis& basis) {
  const auto count = basis.size();
  const int d = basis.dim();
  std::vector<CMatrix> out(count, CMatrix::Zero(d, d));
  for (std::size_t b = 0; b < count; ++b) {
    for (std::size_t a = 0; a < count; ++a) {
      const Complex c = chi(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      if (c != Complex(0.0, 0.0)) out[b].noalias() += c * basis[a];
    }
  }
  return out;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

DensityMatrix::DensityMatrix(CMatrix rho, double tol) : rho_(std::move(rho)) {
  if (rho_.rows() != rho_.cols() || rho_.rows() == 0) {
    throw Error(ErrorCode::kDimensionMismatch, "density matrix must be square");
  }
  if (linalg::hermiticity_residual(rho_) > tol) {
    throw Error(ErrorCode::kNonphysicalInput, "density matrix is not Hermitian");
  }
  if (std::abs(rho_.trace() - Complex(1.0, 0.0)) > tol) {
    throw Error(ErrorCode::kNonphysicalInput, "density matrix trace is not 1");
  }
  if (linalg::min_eigenvalue(rho_) < -tol) {
    throw Error(ErrorCode::kNonphysicalInput, "density matrix has a negative eigenvalue");
  }
}

DensityMatrix DensityMatrix::pure(const CVector& psi) {
  const CVector n = psi / psi.norm();
  return DensityMatrix(n * n.adjoint());
}

UnitaryGate::UnitaryGate(std::string name, CMatrix u) : name_(std::move(name)), u_(std::move(u)) {
  if (u_.rows() != u_.cols() || !linalg::is_unitary(u_, 1e-10)) {
    throw Error(ErrorCode::kInvalidGate, "gate '" + name_ + "' is not unitary within 1e-10");
  }
}

int UnitaryGate::num_qubits() const {
  int n = 0;
  while ((1 << n) < dim()) ++n;
  return n;
}

GateName parse_gate_name(std::string_view text) {
  const std::string s = lower(text);
  if (s == "cz") return GateName::kCZ;
  if (s == "toffoli" || s == "ccx" || s == "ccnot") return GateName::kToffoli;
  if (s.rfind("identity", 0) == 0 || s == "id") return GateName::kIdentity;
  throw Error(ErrorCode::kUnknownGate, "unknown gate '" + std::string(text) + "'");
}

UnitaryGate gate_library(GateName name, int num_qubits) {
  switch (name) {
    case GateName::kCZ: {
      CMatrix u = CMatrix::Identity(4, 4);
      u(3, 3) = -1.0;
      return UnitaryGate("cz", u);
    }
    case GateName::kToffoli: {
      CMatrix u = CMatrix::Identity(8, 8);
      u(6, 6) = 0.0;
      u(7, 7) = 0.0;
      u(6, 7) = 1.0;
      u(7, 6) = 1.0;
      return UnitaryGate("toffoli", u);
    }
    case GateName::kIdentity: {
      if (num_qubits < 1 || num_qubits > 3) {
        throw Error(ErrorCode::kUnsupportedDimension, "identity gate supports 1 to 3 qubits");
      }
      const int d = 1 << num_qubits;
      return UnitaryGate("identity" + std::to_string(num_qubits), CMatrix::Identity(d, d));
    }
  }
  throw Error(ErrorCode::kUnknownGate, "unknown gate");
}

UnitaryGate gate_library(std::string_view name) {
  const GateName g = parse_gate_name(name);
  if (g != GateName::kIdentity) return gate_library(g);
  const std::string s = lower(name);
  int n = 2;
  if (s.size() > 8 && std::isdigit(static_cast<unsigned char>(s.back()))) n = s.back() - '0';
  return gate_library(g, n);
}

ProcessMatrix::ProcessMatrix(BasisPtr basis, CMatrix chi)
    : basis_(std::move(basis)), chi_(std::move(chi)) {
  if (!basis_) throw Error(ErrorCode::kInvalidArgument, "process matrix needs a basis");
  const auto n = static_cast<Eigen::Index>(basis_->size());
  if (chi_.rows() != n || chi_.cols() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "chi shape does not match the basis");
  }
}

ProcessMatrix ProcessMatrix::in_basis(const BasisPtr& target) const {
  if (target->same_as(*basis_)) return ProcessMatrix(target, chi_);
  return ProcessMatrix(target, basis_transform(*basis_, *target).apply(chi_));
}

CMatrix tp_operator(const ProcessMatrix& chi) {
  const auto& basis = chi.basis();
  const auto left = contract_left(chi.chi(), basis);
  CMatrix s = CMatrix::Zero(basis.dim(), basis.dim());
  for (std::size_t b = 0; b < basis.size(); ++b) s.noalias() += basis[b].adjoint() * left[b];
  return s;
}

PhysicalityReport check_cptp(const ProcessMatrix& chi, double tol) {
  PhysicalityReport r;
  const double scale = expected_trace(chi.basis());
  r.hermiticity_residual = linalg::hermiticity_residual(chi.chi());
  r.min_eigenvalue = linalg::min_eigenvalue(chi.chi());
  r.trace = chi.chi().trace().real();
  const int d = chi.dim();
  r.tp_residual = (tp_operator(chi) - CMatrix::Identity(d, d)).norm();
  r.physical = r.min_eigenvalue >= -tol * scale && r.tp_residual <= tol &&
               r.hermiticity_residual <= tol * scale;
  return r;
}

CMatrix apply_map(const ProcessMatrix& chi, const CMatrix& rho) {
  const auto& basis = chi.basis();
  if (rho.rows() != basis.dim() || rho.cols() != basis.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "state dimension does not match the process");
  }
  const auto left = contract_left(chi.chi(), basis);
  CMatrix out = CMatrix::Zero(basis.dim(), basis.dim());
  for (std::size_t b = 0; b < basis.size(); ++b) out.noalias() += left[b] * rho * basis[b].adjoint();
  return out;
}

DensityMatrix apply_map(const ProcessMatrix& chi, const DensityMatrix& rho) {
  CMatrix out = apply_map(chi, rho.matrix());
  return DensityMatrix(linalg::hermitian_part(out), 1e-8);
}

ProcessMatrix ideal_chi(const UnitaryGate& u, const BasisPtr& basis) {
  if (u.dim() != basis->dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "gate dimension does not match the basis");
  }
  const CVector c = basis->coefficients(u.matrix());
  return ProcessMatrix(basis, c * c.adjoint());
}

double KrausSet::tp_residual() const {
  if (operators.empty()) return 0.0;
  const int d = dim();
  CMatrix s = CMatrix::Zero(d, d);
  for (const auto& a : operators) s.noalias() += a.adjoint() * a;
  return (s - CMatrix::Identity(d, d)).norm();
}

KrausSet kraus_from_chi(const ProcessMatrix& chi, const UnitaryGate& target) {
  const auto& basis = chi.basis();
  if (target.dim() != basis.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "target gate dimension does not match chi");
  }
  const double scale = expected_trace(basis);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(linalg::hermitian_part(chi.chi()));
  const RVector& lam = es.eigenvalues();
  const CMatrix& v = es.eigenvectors();
  if (lam.minCoeff() < -1e-6 * scale) {
    throw Error(ErrorCode::kNonphysicalInput,
                "chi has eigenvalue " + std::to_string(lam.minCoeff()) + " below -1e-6");
  }
  KrausSet out;
  const CMatrix udag = target.matrix().adjoint();
  // Descending order so the dominant operator comes first.
  for (Eigen::Index n = lam.size() - 1; n >= 0; --n) {
    if (lam[n] < 0.0) {
      out.clipped_mass += -lam[n];
      continue;
    }
    if (lam[n] < 1e-12 * scale) continue;
    CMatrix a = CMatrix::Zero(basis.dim(), basis.dim());
    for (std::size_t alpha = 0; alpha < basis.size(); ++alpha) {
      const Complex c = v(static_cast<Eigen::Index>(alpha), n);
      if (c != Complex(0.0, 0.0)) a.noalias() += c * basis[alpha];
    }
    out.operators.push_back(std::sqrt(lam[n]) * (udag * a));
    out.weights.push_back(lam[n]);
  }
  return out;
}

KrausSet make_kraus_set(std::vector<CMatrix> operators) {
  KrausSet out;
  for (auto& a : operators) {
    out.weights.push_back(a.squaredNorm() / static_cast<double>(a.rows()));
    out.operators.push_back(std::move(a));
  }
  return out;
}

ProcessMatrix make_physical(const ProcessMatrix& chi) {
  const auto& basis = chi.basis();
  ProcessMatrix psd(chi.basis_ptr(), linalg::project_psd(chi.chi()));
  const CMatrix s = linalg::hermitian_part(tp_operator(psd));
  const CMatrix s_inv_half = linalg::pd_inverse_sqrt(s);
  // E_a S^{-1/2} = sum_g T_ga E_g
  const auto n = static_cast<Eigen::Index>(basis.size());
  CMatrix t(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    t.col(a) = basis.coefficients(basis[static_cast<std::size_t>(a)] * s_inv_half);
  }
  CMatrix out = t * psd.chi() * t.adjoint();
  return ProcessMatrix(chi.basis_ptr(), linalg::hermitian_part(out));
}

nlohmann::json to_json(const ProcessMatrix& chi) {
  nlohmann::json j;
  const auto& basis = chi.basis();
  j["basis_label"] = std::string(to_string(basis.label()));
  j["dim"] = basis.dim();
  j["normalization"] = basis.normalization();
  j["chi"] = matrix_to_json(chi.chi());
  if (basis.anchor_unitary()) j["anchor_unitary"] = matrix_to_json(*basis.anchor_unitary());
  return j;
}

ProcessMatrix process_matrix_from_json(const nlohmann::json& j) {
  const BasisLabel label = parse_basis_label(j.at("basis_label").get<std::string>());
  const int dim = j.at("dim").get<int>();
  std::optional<CMatrix> anchor;
  if (j.contains("anchor_unitary")) anchor = matrix_from_json(j.at("anchor_unitary"), dim, dim);
  auto basis = std::make_shared<const OperatorBasis>(make_basis(label, dim, anchor));
  const auto n = static_cast<Eigen::Index>(basis->size());
  return ProcessMatrix(basis, matrix_from_json(j.at("chi"), n, n));
}

std::string chi_to_csv(const ProcessMatrix& chi) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "row,col,re,im,abs\n";
  const CMatrix& m = chi.chi();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      os << i << ',' << j << ',' << m(i, j).real() << ',' << m(i, j).imag() << ','
         << std::abs(m(i, j)) << '\n';
    }
  }
  return os.str();
}

}  // namespace tomocs
