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

#include <cstdint>
#include <string_view>

#include <nlohmann/json.hpp>

#include "tomocs/channel.hpp"
#include "tomocs/types.hpp"

namespace tomocs {

/// Squared Uhlmann fidelity of the unit-trace copies of two process
/// matrices, (Tr|sqrt(chi1) sqrt(chi2)|)^2. \p chi2 is converted to the basis
/// of \p chi1 when they differ. When either matrix has rank one the value is
/// Tr(chi1 chi2) directly. Throws Error(kNonphysicalInput) if either input
/// fails check_cptp at \p tol.
double process_fidelity(const ProcessMatrix& chi1, const ProcessMatrix& chi2, double tol = 1e-6);

/// General Uhlmann route without the rank-one shortcut (used for cross-checks).
double uhlmann_fidelity(const CMatrix& chi1, const CMatrix& chi2);

/// Haar-average state fidelity of the error channel, (sum |Tr A_n|^2 + d) / (d (d + 1)).
double avg_state_fidelity(const KrausSet& kraus, double tp_tol = 1e-6);

/// Haar average of the squared state fidelity (closed form, all 24
/// permutations of S_4 summed in cycle classes). Requires trace preservation.
double avg_state_fidelity_sq(const KrausSet& kraus, double tp_tol = 1e-8);

/// sqrt(max(0, avg_state_fidelity_sq - avg_state_fidelity^2)) of U^{-1} o chi.
double state_fidelity_std(const ProcessMatrix& chi, const UnitaryGate& target);

/// (F_chi d + 1) / (d + 1).
double avg_state_fidelity_from_process(double process_fidelity, int dim);

struct MonteCarloMoments {
  double mean = 0.0;          // estimate of avg_state_fidelity
  double mean_sq = 0.0;       // estimate of avg_state_fidelity_sq
  double mean_se = 0.0;       // standard errors
  double mean_sq_se = 0.0;
  std::int64_t samples = 0;
};

/// Haar sampling of F_phi = sum_n |<phi|A_n|phi>|^2. Sample i draws from
/// substream i of \p seed; reductions run in sample order, so the result does
/// not depend on \p threads.
MonteCarloMoments mc_state_fidelity_moments(const KrausSet& kraus, std::int64_t samples,
                                            std::uint64_t seed, int threads = 1);

/// k-th moment by summing Tr[(A (x) A^dag (x) ...) P_sigma] over all (2k)!
/// permutation operators on H^{(x)2k}. Supports k in {1, 2} with d^{2k} <= 4096.
double permutation_moment_oracle(const KrausSet& kraus, int k);

enum class MomentMethod { kClosedForm, kMonteCarlo, kPermutationOracle };
std::string_view to_string(MomentMethod method);

struct FidelityReport {
  double process_fidelity = 0.0;
  double avg_state_fidelity = 0.0;
  double avg_state_fidelity_sq = 0.0;
  double state_fidelity_std = 0.0;
  MomentMethod method = MomentMethod::kClosedForm;
  std::int64_t samples = 0;            // Monte Carlo only
  double avg_state_fidelity_se = 0.0;  // Monte Carlo only
  double avg_state_fidelity_sq_se = 0.0;

  nlohmann::json to_json() const;
};

/// Fidelity of \p chi against the ideal \p target and the state-fidelity
/// moments of the error channel U^{-1} o chi.
FidelityReport fidelity_report(const ProcessMatrix& chi, const UnitaryGate& target,
                               MomentMethod method = MomentMethod::kClosedForm,
                               std::int64_t samples = 100000, std::uint64_t seed = 0);

}  // namespace tomocs
