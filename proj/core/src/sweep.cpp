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
#include "tomocs/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

#include "tomocs/errors.hpp"
#include "tomocs/metrics.hpp"
#include "tomocs/rng.hpp"

namespace tomocs {
namespace {

constexpr std::uint64_t kSelectionSalt = 0x73656c656374ULL;  // "select"

std::string fmt(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

double parse_number(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v) || v < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "invalid epsilon '" + s + "'");
  }
  return v;
}

}  // namespace

EpsilonSpec EpsilonSpec::parse(std::string_view text) {
  const std::string s = trim(text);
  if (s == "opt") return {true, 1.0};
  if (s.rfind("opt*", 0) == 0) return {true, parse_number(trim(std::string_view(s).substr(4)))};
  return {false, parse_number(s)};
}

std::string EpsilonSpec::to_string() const {
  if (!relative) return fmt(value);
  return value == 1.0 ? std::string("opt") : "opt*" + fmt(value);
}

std::vector<EpsilonSpec> parse_epsilon_list(std::string_view text) {
  std::vector<EpsilonSpec> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const auto piece = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    out.push_back(EpsilonSpec::parse(piece));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::uint64_t repeat_seed(std::uint64_t seed, int m_conf, int repeat) {
  return substream_seed(substream_seed(seed, static_cast<std::uint64_t>(m_conf), kSelectionSalt),
                        static_cast<std::uint64_t>(repeat));
}

std::pair<double, double> mean_std(const std::vector<double>& values) {
  if (values.empty()) return {std::nan(""), std::nan("")};
  double s = 0.0;
  for (const double v : values) s += v;
  const double mean = s / static_cast<double>(values.size());
  if (values.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (const double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(values.size() - 1))};
}

FullDataFit full_data_fit(const ProbabilityDataset& data, const BasisPtr& basis,
                          const EstimatorConfig& cfg) {
  const TomographyDesign design(data.num_qubits);
  const auto model = make_full_sensing_model(design, basis);
  EstimatorConfig ls_cfg = cfg;
  ls_cfg.method = EstimationMethod::kLeastSquares;
  FullDataFit out{ls_estimate(*model, data.probabilities, ls_cfg), 0.0};
  out.epsilon_opt = out.ls.diagnostics.epsilon_num;
  return out;
}

std::string SweepReport::to_csv() const {
  std::string s(kSweepCsvHeader);
  s += "\n";
  auto line = [&](const std::string& m, const std::string& rep, const std::string& seed, double eps,
                  double ff, double fi, double en, const std::string& it, const std::string& status,
                  double wt) {
    s += m + "," + rep + "," + seed + "," + fmt(eps) + "," + fmt(ff) + "," + fmt(fi) + "," + fmt(en) +
         "," + it + "," + status + "," + fmt(wt) + "\n";
  };
  for (const auto& r : rows) {
    const std::string status = r.error.empty() ? std::string(tomocs::to_string(r.status)) : "Error";
    line(std::to_string(r.m_conf), std::to_string(r.repeat), std::to_string(r.seed), r.epsilon,
         r.f_vs_full, r.f_vs_ideal, r.eps_num, std::to_string(r.iterations), status, r.wall_time_s);
  }
  for (const auto& a : aggregates) {
    const std::string m = std::to_string(a.m_conf);
    const std::string n = std::to_string(a.converged) + "/" + std::to_string(a.total);
    line(m, "mean", "", a.epsilon, a.mean_f_vs_full, a.mean_f_vs_ideal, a.mean_eps_num,
         fmt(a.mean_iterations), n, a.mean_wall_time_s);
    line(m, "std", "", a.epsilon, a.std_f_vs_full, a.std_f_vs_ideal, a.std_eps_num,
         fmt(a.std_iterations), n, a.std_wall_time_s);
  }
  return s;
}

SweepReport sweep_reduced_data(const ProbabilityDataset& data, const BasisPtr& basis,
                               const SweepOptions& options, const FullDataFit& full,
                               const SensingMatrix* phi) {
  const TomographyDesign design(data.num_qubits);
  if (basis->dim() != design.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "basis and dataset dimensions differ");
  }
  if (options.repeats < 1) throw Error(ErrorCode::kInvalidArgument, "repeats must be >= 1");
  if (options.epsilons.empty()) throw Error(ErrorCode::kInvalidArgument, "no epsilon values");
  for (const int m : options.m_conf) {
    if (m < 1 || m > design.num_configurations()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "m_conf " + std::to_string(m) + " outside [1, " +
                      std::to_string(design.num_configurations()) + "]");
    }
  }
  options.solver.validate();
  const UnitaryGate gate = gate_library(data.gate);
  const ProcessMatrix ideal = ideal_chi(gate, basis);

  SweepReport report;
  report.epsilon_opt = full.epsilon_opt;
  const std::size_t n_eps = options.epsilons.size();
  const std::size_t n_rep = static_cast<std::size_t>(options.repeats);
  report.rows.resize(options.m_conf.size() * n_eps * n_rep);

  // One task per (m_conf, repeat): the selection, its sensing model and the
  // least-squares floor are shared by every epsilon of that task.
  const std::size_t n_tasks = options.m_conf.size() * n_rep;
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t task = next++; task < n_tasks; task = next++) {
      const std::size_t mi = task / n_rep;
      const int repeat = static_cast<int>(task % n_rep);
      const int m_conf = options.m_conf[mi];
      const std::uint64_t seed = repeat_seed(options.seed, m_conf, repeat);
      auto row_at = [&](std::size_t ei) -> SweepRow& {
        return report.rows[(mi * n_eps + ei) * n_rep + static_cast<std::size_t>(repeat)];
      };
      for (std::size_t ei = 0; ei < n_eps; ++ei) {
        SweepRow& r = row_at(ei);
        r.m_conf = m_conf;
        r.repeat = repeat;
        r.seed = seed;
        r.epsilon = options.epsilons[ei].resolve(full.epsilon_opt);
        r.f_vs_full = r.f_vs_ideal = r.eps_num = std::nan("");
      }
      try {
        const auto start = std::chrono::steady_clock::now();
        const ConfigurationSubset subset = select_configurations(design, m_conf, seed);
        const SensingModelPtr model = phi != nullptr ? make_sensing_model(*phi, subset.rows)
                                                     : make_sensing_model(design, basis, subset.rows);
        const ProbabilityVector p = data.select(subset.rows);
        EstimatorConfig ls_cfg = options.solver;
        ls_cfg.method = EstimationMethod::kLeastSquares;
        const SolverResult ls = ls_estimate(*model, p, ls_cfg);
        const double setup_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        for (std::size_t ei = 0; ei < n_eps; ++ei) {
          SweepRow& r = row_at(ei);
          try {
            EstimatorConfig cfg = options.solver;
            cfg.epsilon = r.epsilon;
            const SolverResult res = cfg.method == EstimationMethod::kLeastSquares
                                         ? ls
                                         : cs_estimate(*model, p, cfg, &ls);
            r.status = res.status;
            r.iterations = res.diagnostics.iterations;
            r.eps_num = res.diagnostics.epsilon_num;
            if (res.status != SolveStatus::kInfeasible) {
              r.f_vs_full = process_fidelity(res.chi, full.ls.chi);
              r.f_vs_ideal = process_fidelity(res.chi, ideal);
            }
            if (options.record_timing) r.wall_time_s = res.diagnostics.wall_time_s + setup_s;
          } catch (const std::exception& e) {
            r.error = e.what();
          }
        }
      } catch (const std::exception& e) {
        for (std::size_t ei = 0; ei < n_eps; ++ei) row_at(ei).error = e.what();
      }
    }
  };
  const int threads = std::max(1, std::min<int>(options.threads, static_cast<int>(n_tasks)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (std::size_t mi = 0; mi < options.m_conf.size(); ++mi) {
    for (std::size_t ei = 0; ei < n_eps; ++ei) {
      SweepAggregate a;
      a.m_conf = options.m_conf[mi];
      a.epsilon = options.epsilons[ei].resolve(full.epsilon_opt);
      std::vector<double> ff, fi, en, it, wt;
      for (std::size_t rep = 0; rep < n_rep; ++rep) {
        const SweepRow& r = report.rows[(mi * n_eps + ei) * n_rep + rep];
        ++a.total;
        if (!r.ok()) continue;
        ++a.converged;
        ff.push_back(r.f_vs_full);
        fi.push_back(r.f_vs_ideal);
        en.push_back(r.eps_num);
        it.push_back(r.iterations);
        wt.push_back(r.wall_time_s);
      }
      std::tie(a.mean_f_vs_full, a.std_f_vs_full) = mean_std(ff);
      std::tie(a.mean_f_vs_ideal, a.std_f_vs_ideal) = mean_std(fi);
      std::tie(a.mean_eps_num, a.std_eps_num) = mean_std(en);
      std::tie(a.mean_iterations, a.std_iterations) = mean_std(it);
      std::tie(a.mean_wall_time_s, a.std_wall_time_s) = mean_std(wt);
      report.aggregates.push_back(a);
    }
  }
  return report;
}

SweepReport sweep_reduced_data(const ProbabilityDataset& data, const BasisPtr& basis,
                               const SweepOptions& options) {
  return sweep_reduced_data(data, basis, options, full_data_fit(data, basis, options.solver));
}

}  // namespace tomocs
