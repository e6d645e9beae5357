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

#include <string_view>

#include <nlohmann/json.hpp>

#include "tomocs/channel.hpp"
#include "tomocs/design.hpp"
#include "tomocs/sensing_model.hpp"
#include "tomocs/types.hpp"

namespace tomocs {

enum class EstimationMethod { kLeastSquares, kCompressedSensing };
enum class SolveStatus { kConverged, kMaxIterations, kInfeasible };

std::string_view to_string(EstimationMethod method);
std::string_view to_string(SolveStatus status);
/// "ls" or "cs" (case-insensitive).
EstimationMethod parse_method(std::string_view text);

struct EstimatorConfig {
  EstimationMethod method = EstimationMethod::kLeastSquares;
  /// Noise radius for compressed sensing: ||A chi - p||_2 / sqrt(m) <= epsilon.
  double epsilon = 0.0;
  int max_iterations = 50000;
  /// Primal/dual residual tolerance; 0 selects 1e-7 (N <= 2) or 1e-6 (N = 3).
  double tolerance = 0.0;
  /// Initial penalty as a multiple of the automatic scale.
  double rho = 1.0;
  bool adaptive_rho = true;
  int adapt_interval = 25;
  double over_relaxation = 1.6;
  /// Anderson acceleration depth for the splitting iteration; 0 disables it.
  int anderson_memory = 10;

  double effective_tolerance(int num_qubits) const;
  /// Throws Error(kInvalidArgument) on out-of-range fields.
  void validate() const;

  static EstimatorConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct SolverDiagnostics {
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  /// ||A chi - p||^2 for least squares, sum |chi_ab| for compressed sensing.
  double objective = 0.0;
  double epsilon_num = 0.0;
  /// Least-squares residual floor on the same rows (compressed sensing only).
  double epsilon_floor = 0.0;
  double final_rho = 0.0;
  double wall_time_s = 0.0;

  nlohmann::json to_json() const;
};

struct SolverResult {
  ProcessMatrix chi;
  SolverDiagnostics diagnostics;
  SolveStatus status = SolveStatus::kMaxIterations;
  /// Least squares only: multiplier Z >= 0 of the positivity constraint, in
  /// real coordinates, so that grad f - Z + C^T lambda = 0 at the optimum.
  RVector psd_multiplier;

  nlohmann::json to_json() const;
};

/// min ||A chi - p||^2 over completely positive, trace-preserving chi.
SolverResult ls_estimate(const SensingModel& model, const ProbabilityVector& p,
                         const EstimatorConfig& cfg);
SolverResult ls_estimate(const SensingMatrix& phi, const ProbabilityVector& p,
                         const EstimatorConfig& cfg);

/// min sum |chi_ab| subject to ||A chi - p|| / sqrt(m) <= epsilon and CPTP.
/// Solves least squares on the same rows first (or reuses \p ls_solution) to
/// decide feasibility; the least-squares point also warm-starts the iteration.
SolverResult cs_estimate(const SensingModel& model, const ProbabilityVector& p,
                         const EstimatorConfig& cfg, const SolverResult* ls_solution = nullptr);
SolverResult cs_estimate(const SensingMatrix& phi, const ProbabilityVector& p,
                         const EstimatorConfig& cfg);

/// Dispatches on cfg.method.
SolverResult estimate(const SensingModel& model, const ProbabilityVector& p,
                      const EstimatorConfig& cfg);

/// ||A chi - p||_2 / sqrt(m).
double residual_noise(const SensingModel& model, const ProbabilityVector& p, const ProcessMatrix& chi);
double residual_noise(const SensingMatrix& phi, const ProbabilityVector& p, const ProcessMatrix& chi);

/// Residual noise of the least-squares estimate on the complete data set.
double epsilon_opt(const SensingModel& full_model, const ProbabilityVector& p_full,
                   const EstimatorConfig& cfg = {});
double epsilon_opt(const SensingMatrix& phi_full, const ProbabilityVector& p_full,
                   const EstimatorConfig& cfg = {});

/// sum_ab |chi_ab|.
double l1_norm(const CMatrix& chi);

struct CostValues {
  double maximum_likelihood = 0.0;   // -sum p_j ln P_j
  bool maximum_likelihood_finite = true;
  double least_squares = 0.0;        // sum (P_j - p_j)^2
  double weighted = 0.0;             // sum (P_j - p_j)^2 / (p_j + a)
};

CostValues cost_evaluators(const ProbabilityVector& predicted, const ProbabilityVector& p_exp, double a);
CostValues cost_evaluators(const SensingModel& model, const ProcessMatrix& chi,
                           const ProbabilityVector& p_exp, double a);

/// First-order optimality certificate of a least-squares estimate, using the
/// positivity multiplier returned by ls_estimate. All entries vanish at an
/// exact optimum.
struct LsCertificate {
  double stationarity = 0.0;     // || grad f - Z + C^T lambda || (best lambda)
  double complementarity = 0.0;  // |<Z, chi>|
  double multiplier_min_eigenvalue = 0.0;  // of Z, should be >= 0
};

LsCertificate ls_certificate(const SensingModel& model, const ProbabilityVector& p,
                             const SolverResult& result);

/// Trace-preservation constraint in real coordinates: C x = t  <=>  sum chi_ab E_b^dag E_a = I.
struct TpConstraint {
  RMatrix c;   // d^2 x d^4
  RVector t;   // d^2
};
TpConstraint tp_constraint(const OperatorBasis& basis);

}  // namespace tomocs
