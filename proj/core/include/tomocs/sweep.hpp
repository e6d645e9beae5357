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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tomocs/bases.hpp"
#include "tomocs/channel.hpp"
#include "tomocs/design.hpp"
#include "tomocs/simulate.hpp"
#include "tomocs/solve.hpp"

namespace tomocs {

/// A noise radius given either absolutely or as a multiple of epsilon_opt.
struct EpsilonSpec {
  bool relative = false;
  double value = 0.0;

  /// "0.012", "opt" or "opt*1.2".
  static EpsilonSpec parse(std::string_view text);
  double resolve(double epsilon_opt) const { return relative ? value * epsilon_opt : value; }
  std::string to_string() const;
};

/// Comma-separated list of EpsilonSpec values.
std::vector<EpsilonSpec> parse_epsilon_list(std::string_view text);

struct SweepOptions {
  std::vector<int> m_conf;
  int repeats = 1;
  std::vector<EpsilonSpec> epsilons{EpsilonSpec{true, 1.0}};
  std::uint64_t seed = 0;
  EstimatorConfig solver;   // method and tolerances; epsilon is taken from `epsilons`
  int threads = 1;
  bool record_timing = true;
};

struct SweepRow {
  int m_conf = 0;
  int repeat = 0;
  std::uint64_t seed = 0;   // selection seed of this repeat
  double epsilon = 0.0;
  double f_vs_full = 0.0;
  double f_vs_ideal = 0.0;
  double eps_num = 0.0;
  int iterations = 0;
  SolveStatus status = SolveStatus::kMaxIterations;
  double wall_time_s = 0.0;
  std::string error;        // non-empty when the repeat threw

  bool ok() const { return error.empty() && status == SolveStatus::kConverged; }
};

struct SweepAggregate {
  int m_conf = 0;
  double epsilon = 0.0;
  int converged = 0;
  int total = 0;
  double mean_f_vs_full = 0.0, std_f_vs_full = 0.0;
  double mean_f_vs_ideal = 0.0, std_f_vs_ideal = 0.0;
  double mean_eps_num = 0.0, std_eps_num = 0.0;
  double mean_iterations = 0.0, std_iterations = 0.0;
  double mean_wall_time_s = 0.0, std_wall_time_s = 0.0;
};

struct SweepReport {
  double epsilon_opt = 0.0;
  std::vector<SweepRow> rows;             // ordered by (m_conf, epsilon, repeat)
  std::vector<SweepAggregate> aggregates; // ordered by (m_conf, epsilon)

  /// Per-row lines followed by "mean" and "std" lines per (m_conf, epsilon).
  std::string to_csv() const;
};

/// Header of SweepReport::to_csv.
inline constexpr std::string_view kSweepCsvHeader =
    "m_conf,repeat,seed,epsilon,F_vs_full,F_vs_ideal,eps_num,iterations,status,wall_time_s";

/// Least-squares estimate on every configuration of \p data.
struct FullDataFit {
  SolverResult ls;
  double epsilon_opt = 0.0;
};
FullDataFit full_data_fit(const ProbabilityDataset& data, const BasisPtr& basis,
                          const EstimatorConfig& cfg = {});

/// Selection seed of repeat \p repeat at \p m_conf under top-level \p seed.
std::uint64_t repeat_seed(std::uint64_t seed, int m_conf, int repeat);

/// Mean and sample standard deviation (n - 1 denominator; 0 when n < 2).
std::pair<double, double> mean_std(const std::vector<double>& values);

/// Repeats random configuration selections for each m_conf and epsilon,
/// comparing each estimate with the full-data least-squares fit and with the
/// ideal gate. Repeats run on a worker pool; rows come back in a fixed order
/// whatever the completion order. \p phi, when given, supplies the sensing
/// rows (for example from the disk cache); otherwise they are generated.
SweepReport sweep_reduced_data(const ProbabilityDataset& data, const BasisPtr& basis,
                               const SweepOptions& options, const FullDataFit& full,
                               const SensingMatrix* phi = nullptr);
SweepReport sweep_reduced_data(const ProbabilityDataset& data, const BasisPtr& basis,
                               const SweepOptions& options);

}  // namespace tomocs
