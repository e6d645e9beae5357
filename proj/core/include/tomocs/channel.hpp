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

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "tomocs/bases.hpp"
#include "tomocs/types.hpp"

namespace tomocs {

class DensityMatrix {
 public:
  /// Validates Hermiticity, unit trace and positivity within \p tol.
  explicit DensityMatrix(CMatrix rho, double tol = 1e-10);

  static DensityMatrix pure(const CVector& psi);

  int dim() const { return static_cast<int>(rho_.rows()); }
  const CMatrix& matrix() const { return rho_; }

 private:
  CMatrix rho_;
};

class UnitaryGate {
 public:
  UnitaryGate(std::string name, CMatrix u);

  const std::string& name() const { return name_; }
  const CMatrix& matrix() const { return u_; }
  int dim() const { return static_cast<int>(u_.rows()); }
  int num_qubits() const;

 private:
  std::string name_;
  CMatrix u_;
};

enum class GateName { kCZ, kToffoli, kIdentity };

/// Accepts "cz", "toffoli", "identity" (case-insensitive); "identityN" selects N qubits.
GateName parse_gate_name(std::string_view text);

/// Standard gate matrices. \p num_qubits only applies to Identity.
UnitaryGate gate_library(GateName name, int num_qubits = 2);
/// Name-based lookup; "identity1".."identity3" select the qubit count.
UnitaryGate gate_library(std::string_view name);

/// Process matrix chi in a fixed operator basis:
///   E(rho) = sum_ab chi_ab E_a rho E_b^dagger.
class ProcessMatrix {
 public:
  ProcessMatrix(BasisPtr basis, CMatrix chi);

  const OperatorBasis& basis() const { return *basis_; }
  const BasisPtr& basis_ptr() const { return basis_; }
  const CMatrix& chi() const { return chi_; }
  int dim() const { return basis_->dim(); }

  /// The same process expressed in \p target.
  ProcessMatrix in_basis(const BasisPtr& target) const;

 private:
  BasisPtr basis_;
  CMatrix chi_;
};

struct PhysicalityReport {
  double min_eigenvalue = 0.0;    // of chi scaled to unit trace
  double tp_residual = 0.0;       // || sum chi_ab E_b^dag E_a - I ||_F
  double hermiticity_residual = 0.0;
  double trace = 0.0;
  bool physical = false;          // all residuals within the tolerance passed in
};

PhysicalityReport check_cptp(const ProcessMatrix& chi, double tol = 1e-6);

/// sum_ab chi_ab E_b^dagger E_a.
CMatrix tp_operator(const ProcessMatrix& chi);

DensityMatrix apply_map(const ProcessMatrix& chi, const DensityMatrix& rho);
/// Unvalidated variant used on arbitrary (possibly non-state) inputs.
CMatrix apply_map(const ProcessMatrix& chi, const CMatrix& rho);

ProcessMatrix ideal_chi(const UnitaryGate& u, const BasisPtr& basis);

/// Kraus operators of the error channel U^{-1} o E: A_n = sqrt(lambda_n) U^dag sum_a E_a V_an.
struct KrausSet {
  std::vector<CMatrix> operators;
  std::vector<double> weights;   // lambda_n, eigenvalues of chi
  double clipped_mass = 0.0;     // |sum of negative eigenvalues set to zero|

  int dim() const { return operators.empty() ? 0 : static_cast<int>(operators.front().rows()); }
  /// || sum A^dag A - I ||_F
  double tp_residual() const;
};

KrausSet kraus_from_chi(const ProcessMatrix& chi, const UnitaryGate& target);

/// Rebuilds a Kraus set from raw operators (weights set to ||A||_F^2 / d).
KrausSet make_kraus_set(std::vector<CMatrix> operators);

/// Exactly CPTP copy of a nearly physical chi: clip negative eigenvalues, then
/// renormalize via E'(rho) = E(S^{-1/2} rho S^{-1/2}) with S = sum chi_ab E_b^dag E_a.
ProcessMatrix make_physical(const ProcessMatrix& chi);

nlohmann::json to_json(const ProcessMatrix& chi);
ProcessMatrix process_matrix_from_json(const nlohmann::json& j);

/// CSV rows (row, col, re, im, abs) for bar-chart plotting.
std::string chi_to_csv(const ProcessMatrix& chi);

}  // namespace tomocs
