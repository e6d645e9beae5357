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
#include "cli.hpp"

#include <cstdio>
#include <exception>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "tomocs/bases.hpp"
#include "tomocs/channel.hpp"
#include "tomocs/design.hpp"
#include "tomocs/errors.hpp"
#include "tomocs/metrics.hpp"
#include "tomocs/sensing_io.hpp"
#include "tomocs/sensing_model.hpp"
#include "tomocs/simulate.hpp"
#include "tomocs/solve.hpp"
#include "tomocs/sweep.hpp"

#ifndef TOMOCS_VERSION
#define TOMOCS_VERSION "0.0.0"
#endif

namespace tomocs::cli {
namespace fs = std::filesystem;
using nlohmann::json;

const char* tool_version() { return TOMOCS_VERSION; }

json RunManifest::to_json() const {
  return {{"command", command},   {"argv", argv},       {"parameters", parameters},
          {"seeds", seeds},       {"inputs", inputs},   {"outputs", outputs},
          {"sensing_cache", sensing_cache},             {"tool_version", tool_version}};
}

RunManifest RunManifest::from_json(const json& j) {
  RunManifest m;
  m.command = j.at("command").get<std::string>();
  m.argv = j.at("argv").get<std::vector<std::string>>();
  m.parameters = j.value("parameters", json::object());
  m.seeds = j.value("seeds", json::object());
  m.inputs = j.value("inputs", json::object());
  m.outputs = j.value("outputs", json::object());
  m.sensing_cache = j.value("sensing_cache", json::object());
  m.tool_version = j.value("tool_version", std::string());
  return m;
}

fs::path manifest_path(const fs::path& output) {
  return fs::path(output.string() + ".manifest.json");
}

namespace {

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  os << text;
  if (!os) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

json read_json(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  try {
    return json::parse(is);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kIo, path.string() + ": " + e.what());
  }
}

void record_output(RunManifest& m, const fs::path& path) {
  m.outputs[path.string()] = sha256_file_hex(path);
}

void record_input(RunManifest& m, const fs::path& path) {
  m.inputs[path.string()] = sha256_file_hex(path);
}

/// Writes the manifest next to \p primary output.
void write_manifest(const RunManifest& m, const fs::path& primary) {
  write_text(manifest_path(primary), m.to_json().dump(2) + "\n");
}

BasisPtr basis_for(const std::string& label, const UnitaryGate& gate) {
  return std::make_shared<const OperatorBasis>(
      make_basis(parse_basis_label(label), gate.dim(), gate.matrix()));
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string piece;
  while (std::getline(ss, piece, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(piece, &used);
      if (used != piece.size()) throw std::invalid_argument(piece);
      out.push_back(v);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidArgument, "invalid integer '" + piece + "' in list");
    }
  }
  if (out.empty()) throw Error(ErrorCode::kInvalidArgument, "empty integer list");
  return out;
}

int exit_code_for(SolveStatus status) {
  switch (status) {
    case SolveStatus::kConverged: return kExitOk;
    case SolveStatus::kInfeasible: return kExitInfeasible;
    case SolveStatus::kMaxIterations: return kExitMaxIterations;
  }
  return kExitValidation;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

/// Sensing rows from the disk cache, when one is configured.
struct CachedSensing {
  std::optional<SensingMatrix> phi;
};

CachedSensing load_cache(const std::string& flag, const TomographyDesign& design,
                         const BasisPtr& basis, RunManifest& m) {
  CachedSensing out;
  const auto cache = SensingCache::from_environment(flag.empty() ? std::nullopt
                                                                 : std::optional<std::string>(flag));
  if (!cache) return out;
  std::string key;
  out.phi = cache->get_or_build(design, basis, &key);
  m.sensing_cache = {{"key", key},
                     {"file", cache->path_for(key).string()},
                     {"sha256", sha256_file_hex(cache->path_for(key))}};
  return out;
}

SensingModelPtr model_for(const CachedSensing& cached, const TomographyDesign& design,
                          const BasisPtr& basis, std::span<const Eigen::Index> rows) {
  return cached.phi ? make_sensing_model(*cached.phi, rows) : make_sensing_model(design, basis, rows);
}

std::vector<Eigen::Index> all_rows(const TomographyDesign& design) {
  std::vector<Eigen::Index> rows(static_cast<std::size_t>(design.num_rows()));
  std::iota(rows.begin(), rows.end(), Eigen::Index{0});
  return rows;
}

EstimatorConfig load_config(const std::string& path, const std::string& method, RunManifest& m) {
  EstimatorConfig cfg;
  if (!path.empty()) {
    cfg = EstimatorConfig::from_json(read_json(path));
    record_input(m, path);
  }
  cfg.method = parse_method(method);
  return cfg;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string gate;
  double sigma = 0.0;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_simulate(const SimulateArgs& a, RunManifest& m, std::ostream& out) {
  const ProbabilityDataset data = noisy_gate_dataset(a.gate, a.sigma, a.seed);
  write_dataset_csv(a.out, data);
  m.parameters = {{"gate", data.gate}, {"sigma", a.sigma}};
  m.seeds = {{"noise", a.seed}};
  record_output(m, a.out);
  write_manifest(m, a.out);
  out << "wrote " << data.probabilities.size() << " probabilities for " << data.gate << " to " << a.out
      << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- estimate

struct EstimateArgs {
  std::string data;
  std::string basis = "pauli-error";
  std::string method = "cs";
  std::string epsilon = "opt";
  int mconf = 0;
  std::uint64_t seed = 0;
  std::string out;
  std::string full_chi;
  std::string config;
  std::string phi_cache;
  int threads = 1;
  bool no_timing = false;
};

int cmd_estimate(const EstimateArgs& a, RunManifest& m, std::ostream& out) {
  const ProbabilityDataset data = read_dataset_csv(a.data);
  record_input(m, a.data);
  const UnitaryGate gate = gate_library(data.gate);
  const BasisPtr basis = basis_for(a.basis, gate);
  const TomographyDesign design(data.num_qubits);
  EstimatorConfig cfg = load_config(a.config, a.method, m);
  const EpsilonSpec eps_spec = EpsilonSpec::parse(a.epsilon);
  if (a.mconf < 0 || a.mconf > design.num_configurations()) {
    throw Error(ErrorCode::kInvalidArgument, "--mconf must lie in [1, " +
                                                 std::to_string(design.num_configurations()) + "]");
  }
  const CachedSensing cached = load_cache(a.phi_cache, design, basis, m);

  // Full-data reference: least squares on every configuration, or a given chi.
  const auto full_rows = all_rows(design);
  const SensingModelPtr full_model = model_for(cached, design, basis, full_rows);
  std::optional<SolverResult> full_ls;
  std::optional<ProcessMatrix> chi_full;
  double eps_opt = 0.0;
  if (!a.full_chi.empty()) {
    chi_full = process_matrix_from_json(read_json(a.full_chi)).in_basis(basis);
    record_input(m, a.full_chi);
    eps_opt = residual_noise(*full_model, data.probabilities, *chi_full);
  } else {
    EstimatorConfig ls_cfg = cfg;
    ls_cfg.method = EstimationMethod::kLeastSquares;
    full_ls = ls_estimate(*full_model, data.probabilities, ls_cfg);
    chi_full = full_ls->chi;
    eps_opt = full_ls->diagnostics.epsilon_num;
  }

  const int m_conf = a.mconf == 0 ? design.num_configurations() : a.mconf;
  const ConfigurationSubset subset = m_conf == design.num_configurations()
                                         ? all_configurations(design)
                                         : select_configurations(design, m_conf, a.seed);
  const bool full = subset.size() == static_cast<std::size_t>(design.num_configurations());
  const SensingModelPtr model = full ? full_model : model_for(cached, design, basis, subset.rows);
  const ProbabilityVector p = data.select(subset.rows);
  cfg.epsilon = eps_spec.resolve(eps_opt);

  SolverResult result = [&] {
    if (cfg.method == EstimationMethod::kLeastSquares) {
      return full && full_ls ? *full_ls : ls_estimate(*model, p, cfg);
    }
    return cs_estimate(*model, p, cfg, full && full_ls ? &*full_ls : nullptr);
  }();
  if (a.no_timing) result.diagnostics.wall_time_s = 0.0;

  json report = result.to_json();
  report["method"] = std::string(to_string(cfg.method));
  report["basis"] = a.basis;
  report["gate"] = data.gate;
  report["epsilon"] = cfg.epsilon;
  report["epsilon_spec"] = eps_spec.to_string();
  report["epsilon_opt"] = eps_opt;
  report["m_conf"] = m_conf;
  report["rows"] = static_cast<std::int64_t>(subset.rows.size());
  report["configurations"] = subset.configurations;
  report["config"] = cfg.to_json();
  report["physicality"] = {{"min_eigenvalue", check_cptp(result.chi).min_eigenvalue},
                           {"tp_residual", check_cptp(result.chi).tp_residual},
                           {"physical", check_cptp(result.chi).physical}};
  if (result.status != SolveStatus::kInfeasible) {
    report["fidelity"] = fidelity_report(result.chi, gate).to_json();
    report["F_vs_full"] = process_fidelity(result.chi, *chi_full);
  }

  const fs::path chi_path = a.out + ".chi.json";
  const fs::path result_path = a.out + ".result.json";
  json chi_json = to_json(result.chi);
  chi_json["gate"] = data.gate;
  report["chi_file"] = chi_path.string();
  write_text(chi_path, chi_json.dump(2) + "\n");
  write_text(result_path, report.dump(2) + "\n");

  m.parameters = {{"basis", a.basis},     {"method", a.method},     {"epsilon", a.epsilon},
                  {"epsilon_resolved", cfg.epsilon},                {"m_conf", m_conf},
                  {"config", cfg.to_json()}, {"no_timing", a.no_timing}};
  m.seeds = {{"selection", a.seed}};
  record_output(m, chi_path);
  record_output(m, result_path);
  write_manifest(m, result_path);

  out << "status " << to_string(result.status) << ", iterations " << result.diagnostics.iterations
      << ", epsilon " << fmt(cfg.epsilon) << " (opt " << fmt(eps_opt) << "), eps_num "
      << fmt(result.diagnostics.epsilon_num);
  if (report.contains("fidelity")) {
    out << ", F_vs_ideal " << fmt(report["fidelity"]["process_fidelity"].get<double>()) << ", F_vs_full "
        << fmt(report["F_vs_full"].get<double>());
  }
  out << "\n";
  return exit_code_for(result.status);
}

// ---------------------------------------------------------------- sweep

struct SweepArgs {
  std::string data;
  std::string basis = "pauli-error";
  std::string method = "cs";
  std::string epsilon = "opt";
  std::string mconf;
  int repeats = 1;
  std::uint64_t seed = 0;
  std::string out;
  std::string config;
  std::string phi_cache;
  int threads = 1;
  bool no_timing = false;
};

int cmd_sweep(const SweepArgs& a, RunManifest& m, std::ostream& out) {
  const ProbabilityDataset data = read_dataset_csv(a.data);
  record_input(m, a.data);
  const UnitaryGate gate = gate_library(data.gate);
  const BasisPtr basis = basis_for(a.basis, gate);
  const TomographyDesign design(data.num_qubits);

  SweepOptions opt;
  opt.m_conf = parse_int_list(a.mconf);
  opt.repeats = a.repeats;
  opt.epsilons = parse_epsilon_list(a.epsilon);
  opt.seed = a.seed;
  opt.solver = load_config(a.config, a.method, m);
  opt.threads = a.threads;
  opt.record_timing = !a.no_timing;

  const CachedSensing cached = load_cache(a.phi_cache, design, basis, m);
  const FullDataFit full = [&] {
    if (!cached.phi) return full_data_fit(data, basis, opt.solver);
    EstimatorConfig ls_cfg = opt.solver;
    ls_cfg.method = EstimationMethod::kLeastSquares;
    const auto rows = all_rows(design);
    SolverResult ls = ls_estimate(*make_sensing_model(*cached.phi, rows), data.probabilities, ls_cfg);
    const double eps = ls.diagnostics.epsilon_num;
    return FullDataFit{std::move(ls), eps};
  }();
  const SweepReport report =
      sweep_reduced_data(data, basis, opt, full, cached.phi ? &*cached.phi : nullptr);
  write_text(a.out, report.to_csv());

  json mconf = opt.m_conf;
  json eps = json::array();
  for (const auto& e : opt.epsilons) eps.push_back(e.to_string());
  m.parameters = {{"basis", a.basis},  {"method", a.method},          {"epsilon", eps},
                  {"m_conf", mconf},   {"repeats", a.repeats},        {"config", opt.solver.to_json()},
                  {"epsilon_opt", report.epsilon_opt},                {"no_timing", a.no_timing}};
  m.seeds = {{"selection", a.seed}};
  record_output(m, a.out);
  write_manifest(m, a.out);

  out << "epsilon_opt " << fmt(report.epsilon_opt) << "\n";
  for (const auto& g : report.aggregates) {
    out << "m_conf " << g.m_conf << " epsilon " << fmt(g.epsilon) << ": F_vs_full " << fmt(g.mean_f_vs_full)
        << " +- " << fmt(g.std_f_vs_full) << ", F_vs_ideal " << fmt(g.mean_f_vs_ideal) << " +- "
        << fmt(g.std_f_vs_ideal) << " (" << g.converged << "/" << g.total << " converged)\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------- report

struct ReportArgs {
  std::vector<std::string> chi;
  std::string gate;
  std::string reference;
  std::string out;
  std::string moments = "closed";
  std::int64_t samples = 100000;
  std::uint64_t seed = 0;
};

MomentMethod parse_moments(const std::string& s) {
  if (s == "closed") return MomentMethod::kClosedForm;
  if (s == "mc") return MomentMethod::kMonteCarlo;
  if (s == "oracle") return MomentMethod::kPermutationOracle;
  throw Error(ErrorCode::kInvalidArgument, "--moments must be closed, mc or oracle");
}

int cmd_report(const ReportArgs& a, RunManifest& m, std::ostream& out, std::ostream& err) {
  const MomentMethod method = parse_moments(a.moments);
  std::optional<ProcessMatrix> reference;
  if (!a.reference.empty()) {
    reference = process_matrix_from_json(read_json(a.reference));
    record_input(m, a.reference);
  }
  json reports = json::array();
  std::string bars = "chi,row,col,re,im,abs\n";
  bool any_nonphysical = false;
  for (std::size_t i = 0; i < a.chi.size(); ++i) {
    const json j = read_json(a.chi[i]);
    record_input(m, a.chi[i]);
    const ProcessMatrix raw = process_matrix_from_json(j);
    const std::string gate_name = !a.gate.empty() ? a.gate : j.value("gate", std::string());
    if (gate_name.empty()) {
      throw Error(ErrorCode::kInvalidArgument, a.chi[i] + " names no gate; pass --gate");
    }
    const UnitaryGate gate = gate_library(gate_name);
    const PhysicalityReport phys = check_cptp(raw);
    json entry = {{"file", a.chi[i]},
                  {"gate", gate.name()},
                  {"basis", std::string(to_string(raw.basis().label()))},
                  {"physical", phys.physical},
                  {"min_eigenvalue", phys.min_eigenvalue},
                  {"tp_residual", phys.tp_residual}};
    // Nonphysical input is flagged and scored through its nearest CPTP copy.
    const ProcessMatrix chi = phys.physical ? raw : make_physical(raw);
    if (!phys.physical) {
      any_nonphysical = true;
      err << "warning: " << a.chi[i] << " is not CPTP (min eigenvalue " << phys.min_eigenvalue
          << ", TP residual " << phys.tp_residual << "); scoring its projection\n";
    }
    const FidelityReport fr = fidelity_report(chi, gate, method, a.samples, a.seed);
    entry["fidelity"] = fr.to_json();
    if (reference) entry["F_vs_reference"] = process_fidelity(chi, *reference);
    reports.push_back(entry);

    std::istringstream rows(chi_to_csv(chi));
    std::string line;
    std::getline(rows, line);  // header
    while (std::getline(rows, line)) bars += std::to_string(i) + "," + line + "\n";

    out << a.chi[i] << ": F_chi " << fmt(fr.process_fidelity) << ", avg F_st " << fmt(fr.avg_state_fidelity)
        << ", dF_st " << fmt(fr.state_fidelity_std);
    if (reference) out << ", F_vs_reference " << fmt(entry["F_vs_reference"].get<double>());
    out << "\n";
  }
  const fs::path report_path = a.out + ".report.json";
  const fs::path bars_path = a.out + ".bars.csv";
  write_text(report_path, json{{"reports", reports}, {"any_nonphysical", any_nonphysical}}.dump(2) + "\n");
  write_text(bars_path, bars);
  m.parameters = {{"moments", a.moments}, {"samples", a.samples}, {"gate", a.gate}};
  m.seeds = {{"monte_carlo", a.seed}};
  record_output(m, report_path);
  record_output(m, bars_path);
  write_manifest(m, report_path);
  return kExitOk;
}

// ---------------------------------------------------------------- basis

struct BasisArgs {
  std::string basis = "pauli";
  std::string gate;
  int qubits = 0;
  std::string out;
};

int cmd_basis(const BasisArgs& a, RunManifest& m, std::ostream& out) {
  const BasisLabel label = parse_basis_label(a.basis);
  std::optional<CMatrix> anchor;
  int dim = 0;
  if (!a.gate.empty()) {
    const UnitaryGate g = gate_library(a.gate);
    anchor = g.matrix();
    dim = g.dim();
  }
  if (a.qubits != 0) {
    if (a.qubits < 1 || a.qubits > 3) throw Error(ErrorCode::kUnsupportedDimension, "--qubits must be 1..3");
    if (dim != 0 && dim != (1 << a.qubits)) {
      throw Error(ErrorCode::kDimensionMismatch, "--qubits disagrees with the gate dimension");
    }
    dim = 1 << a.qubits;
  }
  if (dim == 0) throw Error(ErrorCode::kInvalidArgument, "pass --gate or --qubits");
  const OperatorBasis basis = make_basis(label, dim, anchor);
  write_text(a.out, to_json(basis).dump(2) + "\n");
  m.parameters = {{"basis", a.basis}, {"gate", a.gate}, {"qubits", a.qubits}};
  record_output(m, a.out);
  write_manifest(m, a.out);
  out << "wrote " << basis.size() << " " << a.basis << " elements (d = " << dim << ") to " << a.out << "\n";
  return kExitOk;
}

int exit_code_for(const Error& e) {
  return e.code() == ErrorCode::kIo ? kExitIo : kExitValidation;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum process tomography with least-squares and compressed-sensing estimators", "tomocs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tool_version()));

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Generate an ideal or noisy tomography dataset");
  s->add_option("--gate", sim.gate, "Gate: cz, toffoli, identity1..identity3")->required();
  s->add_option("--sigma", sim.sigma, "Standard deviation of the added Gaussian noise")
      ->check(CLI::Range(0.0, kMaxNoiseSigma));
  s->add_option("--seed", sim.seed, "Noise seed");
  s->add_option("--out", sim.out, "Dataset CSV to write")->required();

  EstimateArgs est;
  auto* e = app.add_subcommand("estimate", "Estimate the process matrix from a dataset");
  e->add_option("--data", est.data, "Dataset CSV")->required();
  e->add_option("--basis", est.basis, "pauli, pauli-error, svd or natural");
  e->add_option("--method", est.method, "ls or cs");
  e->add_option("--epsilon", est.epsilon, "Noise radius: a number, 'opt' or 'opt*<factor>'");
  e->add_option("--mconf", est.mconf, "Number of randomly selected configurations (default: all)");
  e->add_option("--seed", est.seed, "Configuration-selection seed");
  e->add_option("--out", est.out, "Output prefix for <prefix>.chi.json and <prefix>.result.json")
      ->required();
  e->add_option("--full-chi", est.full_chi, "Full-data chi JSON used as reference and for epsilon_opt");
  e->add_option("--config", est.config, "Estimator configuration JSON");
  e->add_option("--phi-cache", est.phi_cache, "Sensing-matrix cache directory (else $TOMOCS_CACHE)");
  e->add_option("--threads", est.threads, "Worker threads")->check(CLI::PositiveNumber);
  e->add_flag("--no-timing", est.no_timing, "Write zero wall-clock times for bit-exact reruns");

  SweepArgs sw;
  auto* w = app.add_subcommand("sweep", "Repeat reduced-data estimates over m_conf and epsilon");
  w->add_option("--data", sw.data, "Dataset CSV")->required();
  w->add_option("--basis", sw.basis, "pauli, pauli-error, svd or natural");
  w->add_option("--method", sw.method, "ls or cs");
  w->add_option("--epsilon", sw.epsilon, "Comma list of numbers, 'opt' or 'opt*<factor>'");
  w->add_option("--mconf", sw.mconf, "Comma list of configuration counts")->required();
  w->add_option("--repeats", sw.repeats, "Random selections per m_conf")->check(CLI::PositiveNumber);
  w->add_option("--seed", sw.seed, "Top-level selection seed");
  w->add_option("--out", sw.out, "Sweep CSV to write")->required();
  w->add_option("--config", sw.config, "Estimator configuration JSON");
  w->add_option("--phi-cache", sw.phi_cache, "Sensing-matrix cache directory (else $TOMOCS_CACHE)");
  w->add_option("--threads", sw.threads, "Worker threads")->check(CLI::PositiveNumber);
  w->add_flag("--no-timing", sw.no_timing, "Write zero wall-clock times for bit-exact reruns");

  ReportArgs rep;
  auto* r = app.add_subcommand("report", "Fidelity and state-fidelity moments of chi files");
  r->add_option("--chi", rep.chi, "Chi JSON file(s)")->required();
  r->add_option("--gate", rep.gate, "Target gate (default: the gate recorded in each chi file)");
  r->add_option("--reference", rep.reference, "Chi JSON to compare against (for example chi_full)");
  r->add_option("--out", rep.out, "Output prefix for <prefix>.report.json and <prefix>.bars.csv")
      ->required();
  r->add_option("--moments", rep.moments, "closed, mc or oracle");
  r->add_option("--samples", rep.samples, "Monte Carlo samples")->check(CLI::PositiveNumber);
  r->add_option("--seed", rep.seed, "Monte Carlo seed");

  BasisArgs bas;
  auto* b = app.add_subcommand("basis", "Write the elements of an operator basis as JSON");
  b->add_option("--basis", bas.basis, "pauli, pauli-error, svd or natural");
  b->add_option("--gate", bas.gate, "Anchor gate (required for pauli-error and svd)");
  b->add_option("--qubits", bas.qubits, "Number of qubits when no gate is given");
  b->add_option("--out", bas.out, "Basis JSON to write")->required();

  std::string replay_manifest;
  auto* rp = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  rp->add_option("manifest", replay_manifest, "Manifest JSON")->required();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  RunManifest m;
  m.argv = args;
  m.tool_version = tool_version();
  try {
    if (*s) { m.command = "simulate"; return cmd_simulate(sim, m, out); }
    if (*e) { m.command = "estimate"; return cmd_estimate(est, m, out); }
    if (*w) { m.command = "sweep"; return cmd_sweep(sw, m, out); }
    if (*r) { m.command = "report"; return cmd_report(rep, m, out, err); }
    if (*b) { m.command = "basis"; return cmd_basis(bas, m, out); }
    if (*rp) {
      const RunManifest recorded = RunManifest::from_json(read_json(replay_manifest));
      if (recorded.argv.empty() || (recorded.argv.size() >= 2 && recorded.argv[1] == "replay")) {
        throw Error(ErrorCode::kInvalidArgument, "manifest records no replayable command");
      }
      const int code = run(recorded.argv, out, err);
      // Outputs recorded with --no-timing must reproduce bit for bit.
      std::size_t mismatches = 0;
      for (const auto& [path, hash] : recorded.outputs.items()) {
        if (!fs::exists(path) || sha256_file_hex(path) != hash.get<std::string>()) {
          err << "replay: " << path << " differs from the recorded output\n";
          ++mismatches;
        }
      }
      if (mismatches == 0) out << "replay: " << recorded.outputs.size() << " output(s) identical\n";
      return code;
    }
  } catch (const Error& ex) {
    err << "error: " << ex.what() << "\n";
    return exit_code_for(ex);
  } catch (const json::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitValidation;
  } catch (const fs::filesystem_error& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitIo;
  }
  return kExitValidation;
}

}  // namespace tomocs::cli
