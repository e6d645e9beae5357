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
// End-to-end acceptance run: simulates the benchmark gates, estimates their
// process matrices with both methods and bases, and checks each criterion.
// Prints one "[PASS]" or "[FAIL]" line per criterion followed by details;
// exits non-zero when any criterion fails.
#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include "tomocs/bases.hpp"
#include "tomocs/channel.hpp"
#include "tomocs/design.hpp"
#include "tomocs/linalg.hpp"
#include "tomocs/metrics.hpp"
#include "tomocs/rng.hpp"
#include "tomocs/sensing_model.hpp"
#include "tomocs/simulate.hpp"
#include "tomocs/solve.hpp"
#include "tomocs/sweep.hpp"

namespace {

using namespace tomocs;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

BasisPtr share(OperatorBasis b) { return std::make_shared<const OperatorBasis>(std::move(b)); }

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;
  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    details.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
  void note(const std::string& what) { details.push_back("     " + what); }
};

/// Every estimate produced during the run, for the invariants checked last.
struct Estimate {
  std::string label;
  ProcessMatrix chi;
  SolveStatus status;
  UnitaryGate gate;
};
std::vector<Estimate> g_estimates;

void record(const std::string& label, const SolverResult& r, const UnitaryGate& gate) {
  g_estimates.push_back({label, r.chi, r.status, gate});
}

/// One gate's data set with its full-data least-squares reference per basis.
struct Pipeline {
  ProbabilityDataset data;
  UnitaryGate gate;
  TomographyDesign design;
  BasisPtr pauli_error;
  BasisPtr svd;
  SolverResult full;   // least squares on all data, Pauli-error basis
  double epsilon_opt = 0.0;

  Pipeline(const std::string& name, double sigma, std::uint64_t seed)
      : data(noisy_gate_dataset(name, sigma, seed)),
        gate(gate_library(name)),
        design(gate.num_qubits()),
        pauli_error(share(pauli_error_basis(gate.matrix()))),
        svd(share(svd_basis(gate.matrix()))),
        full(ls_estimate(*make_full_sensing_model(design, pauli_error), data.probabilities, EstimatorConfig{})) {
    epsilon_opt = full.diagnostics.epsilon_num;
    record(name + " full LS", full, gate);
  }

  struct Pair {
    SolverResult ls;
    SolverResult cs;
  };

  /// Least squares and compressed sensing on one random selection.
  Pair estimate(int m_conf, std::uint64_t seed, const BasisPtr& basis, double epsilon,
                const std::string& tag) const {
    const ConfigurationSubset sub = m_conf == design.num_configurations()
                                        ? all_configurations(design)
                                        : select_configurations(design, m_conf, seed);
    const auto model = make_sensing_model(design, basis, sub.rows);
    const ProbabilityVector p = data.select(sub.rows);
    EstimatorConfig cfg;
    SolverResult ls = ls_estimate(*model, p, cfg);
    cfg.method = EstimationMethod::kCompressedSensing;
    cfg.epsilon = epsilon;
    SolverResult cs = cs_estimate(*model, p, cfg, &ls);
    const std::string label = gate.name() + " " + std::string(to_string(basis->label())) + " m_conf=" +
                              std::to_string(m_conf) + " " + tag;
    record(label + " LS", ls, gate);
    record(label + " CS", cs, gate);
    return {std::move(ls), std::move(cs)};
  }
};

// ------------------------------------------------------------------------

Outcome noiseless_recovery() {
  Outcome o;
  const UnitaryGate g = gate_library("cz");
  const TomographyDesign d(2);
  const ProbabilityDataset data = ideal_dataset(g, d);
  for (const BasisPtr& basis : {share(pauli_error_basis(g.matrix())), share(pauli_basis(2))}) {
    const auto start = Clock::now();
    const auto model = make_full_sensing_model(d, basis);
    EstimatorConfig cfg;
    cfg.method = EstimationMethod::kCompressedSensing;
    cfg.epsilon = 1e-6;
    const SolverResult r = cs_estimate(*model, data.probabilities, cfg);
    const double t = seconds_since(start);
    record("cz ideal CS", r, g);
    const double f = process_fidelity(r.chi, ideal_chi(g, basis));
    const std::string b(to_string(basis->label()));
    o.check(r.status == SolveStatus::kConverged, b + ": status " + std::string(to_string(r.status)));
    o.check(f >= 0.999, b + ": F(chi_CS, chi_ideal) = " + fmt("%.9f", f) + " >= 0.999");
    o.check(t < 30.0, b + ": runtime " + fmt("%.2f", t) + " s < 30 s");
  }
  return o;
}

Outcome toffoli_pipeline() {
  Outcome o;
  const UnitaryGate g = gate_library("toffoli");
  const BasisPtr basis = share(pauli_error_basis(g.matrix()));
  const ProcessMatrix ideal = ideal_chi(g, basis);
  const auto model = make_full_sensing_model(TomographyDesign(3), basis);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto start = Clock::now();
    const ProbabilityDataset data = noisy_gate_dataset("toffoli", 0.01, seed);
    const SolverResult r = ls_estimate(*model, data.probabilities, EstimatorConfig{});
    const double t = seconds_since(start);
    record("toffoli full LS seed " + std::to_string(seed), r, g);
    const double f = process_fidelity(r.chi, ideal);
    const double eps = r.diagnostics.epsilon_num;
    const std::string s = "seed " + std::to_string(seed) + ": ";
    o.check(f >= 0.94 && f <= 0.975, s + "F(chi_full, chi_ideal) = " + fmt("%.4f", f) + " in [0.94, 0.975]");
    o.check(eps >= 0.010 && eps <= 0.013, s + "epsilon_opt = " + fmt("%.5f", eps) + " in [0.010, 0.013]");
    o.check(t <= 1800.0, s + "full N=3 solve " + fmt("%.2f", t) + " s <= 1800 s");
    o.note(s + "residual of chi_ideal = " + fmt("%.5f", residual_noise(*model, data.probabilities, ideal)));
  }
  return o;
}

Outcome toffoli_undersampling(const Pipeline& tof) {
  Outcome o;
  double sum = 0.0;
  int cs_not_worse = 0;
  const int selections = 3;
  for (int s = 0; s < selections; ++s) {
    const auto pr = tof.estimate(40, repeat_seed(1, 40, s), tof.pauli_error, tof.epsilon_opt, "c3");
    const double f_cs = process_fidelity(pr.cs.chi, tof.full.chi);
    const double f_ls = process_fidelity(pr.ls.chi, tof.full.chi);
    sum += f_cs;
    if (f_cs >= f_ls) ++cs_not_worse;
    o.note("selection " + std::to_string(s) + ": F(CS, full) = " + fmt("%.4f", f_cs) + ", F(LS, full) = " +
           fmt("%.4f", f_ls) + ", CS iterations " + std::to_string(pr.cs.diagnostics.iterations) + " (" +
           fmt("%.1f", pr.cs.diagnostics.wall_time_s) + " s)");
  }
  const double mean = sum / selections;
  o.check(mean >= 0.90, "mean F(chi_CS, chi_full) at m_conf=40 = " + fmt("%.4f", mean) + " >= 0.90");
  o.check(cs_not_worse >= 2, "CS >= LS in " + std::to_string(cs_not_worse) + " of 3 selections (need 2)");
  return o;
}

Outcome cz_undersampling(const Pipeline& cz) {
  Outcome o;
  const int selections = 50;
  std::vector<double> stds;
  for (int m : {144, 72, 36}) {
    std::vector<double> f;
    for (int s = 0; s < selections; ++s) {
      const auto pr = cz.estimate(m, repeat_seed(2, m, s), cz.pauli_error, cz.epsilon_opt, "c4");
      f.push_back(process_fidelity(pr.cs.chi, cz.full.chi));
    }
    const auto [mean, sd] = mean_std(f);
    stds.push_back(sd);
    o.note("m_conf=" + std::to_string(m) + ": F(CS, full) = " + fmt("%.4f", mean) + " +- " + fmt("%.4f", sd));
    if (m == 72) o.check(mean >= 0.95, "m_conf=72 mean F(chi_CS, chi_full) = " + fmt("%.4f", mean) + " >= 0.95");
    if (m == 36) o.check(mean >= 0.90, "m_conf=36 mean F(chi_CS, chi_full) = " + fmt("%.4f", mean) + " >= 0.90");
  }
  o.check(stds[2] >= 2.0 * stds[0], "std at m_conf=36 (" + fmt("%.4f", stds[2]) + ") >= 2 x std at m_conf=144 (" +
                                        fmt("%.4f", stds[0]) + ")");
  return o;
}

Outcome basis_agreement(const Pipeline& cz, const Pipeline& tof) {
  Outcome o;
  const auto compare = [&](const Pipeline& pl, int m, std::uint64_t seed) {
    const auto err = pl.estimate(m, seed, pl.pauli_error, pl.epsilon_opt, "c5");
    const auto svd = pl.estimate(m, seed, pl.svd, pl.epsilon_opt, "c5");
    const double f = process_fidelity(svd.cs.chi.in_basis(pl.pauli_error), err.cs.chi);
    o.check(f >= 0.95, pl.gate.name() + " m_conf=" + std::to_string(m) +
                           ": F(chi_CS-SVD -> Pauli-error, chi_CS-Pauli-error) = " + fmt("%.4f", f) + " >= 0.95");
  };
  for (int m : {40, 72, 144}) compare(cz, m, repeat_seed(5, m, 0));
  for (int m : {40, 100}) compare(tof, m, repeat_seed(5, m, 0));
  return o;
}

/// CZ followed by coherent phase errors and amplitude damping on both qubits.
ProcessMatrix imperfect_cz(const BasisPtr& basis) {
  const UnitaryGate g = gate_library("cz");
  CMatrix phase = CMatrix::Zero(4, 4);
  const double zz = 0.12, z1 = 0.08, z2 = -0.05;
  for (int k = 0; k < 4; ++k) {
    const double s1 = (k & 2) ? -1.0 : 1.0, s2 = (k & 1) ? -1.0 : 1.0;
    phase(k, k) = std::polar(1.0, -0.5 * (zz * s1 * s2 + z1 * s1 + z2 * s2));
  }
  const double gamma = 0.04;
  CMatrix k0 = CMatrix::Identity(2, 2), k1 = CMatrix::Zero(2, 2);
  k0(1, 1) = std::sqrt(1.0 - gamma);
  k1(0, 1) = std::sqrt(gamma);
  const auto n = static_cast<Eigen::Index>(basis->size());
  CMatrix chi = CMatrix::Zero(n, n);
  for (const CMatrix& a : {k0, k1}) {
    for (const CMatrix& b : {k0, k1}) {
      const CVector c = basis->coefficients(linalg::kron(a, b) * phase * g.matrix());
      chi += c * c.adjoint();
    }
  }
  return ProcessMatrix(basis, chi);
}

/// Smallest residual over Pauli channels U P_a (.) P_a U^dagger, i.e. over the
/// chi with l1 norm 1, by projected gradient on the probability simplex.
double best_pauli_channel_residual(const SensingModel& model, const ProbabilityVector& p) {
  const auto n = static_cast<Eigen::Index>(model.basis().size());
  RMatrix cols(model.rows(), n);
  for (Eigen::Index a = 0; a < n; ++a) {
    CMatrix e = CMatrix::Zero(n, n);
    e(a, a) = 1.0;
    cols.col(a) = model.predict(e);
  }
  RVector w = RVector::Constant(n, 1.0 / static_cast<double>(n));
  const double step = 1.0 / Eigen::SelfAdjointEigenSolver<RMatrix>(cols.transpose() * cols).eigenvalues().maxCoeff();
  for (int it = 0; it < 20000; ++it) {
    RVector v = w - step * (cols.transpose() * (cols * w - p));
    // Euclidean projection onto the simplex.
    RVector u = v;
    std::sort(u.data(), u.data() + u.size(), std::greater<>());
    double css = 0.0, theta = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      css += u(k);
      const double t = (css - 1.0) / static_cast<double>(k + 1);
      if (u(k) - t > 0.0) theta = t;
    }
    w = (v.array() - theta).max(0.0);
  }
  return (cols * w - p).norm() / std::sqrt(static_cast<double>(p.size()));
}

Outcome epsilon_behaviour() {
  Outcome o;
  const UnitaryGate g = gate_library("cz");
  const TomographyDesign d(2);
  const BasisPtr basis = share(pauli_error_basis(g.matrix()));
  const auto model = make_full_sensing_model(d, basis);
  ProbabilityDataset clean;
  clean.gate = "cz";
  clean.num_qubits = 2;
  clean.probabilities = model->predict(imperfect_cz(basis).chi());
  const ProbabilityDataset data = add_noise(clean, 0.01, 31);

  const SolverResult ls = ls_estimate(*model, data.probabilities, EstimatorConfig{});
  record("imperfect cz full LS", ls, g);
  const double eps_opt = ls.diagnostics.epsilon_num;
  o.note("epsilon_opt = " + fmt("%.5f", eps_opt) + ", best Pauli-channel residual = " +
         fmt("%.5f", best_pauli_channel_residual(*model, data.probabilities)) +
         " (the l1 = 1 set lies outside every ball below when this exceeds 1.8 epsilon_opt)");
  for (double factor : {1.0, 1.2, 1.4, 1.6, 1.8}) {
    EstimatorConfig cfg;
    cfg.method = EstimationMethod::kCompressedSensing;
    cfg.epsilon = factor * eps_opt;
    const SolverResult r = cs_estimate(*model, data.probabilities, cfg, &ls);
    record("imperfect cz CS", r, g);
    const double gap = std::abs(r.diagnostics.epsilon_num - cfg.epsilon);
    o.check(r.status == SolveStatus::kConverged && gap <= 0.1 * eps_opt,
            "epsilon = " + fmt("%.1f", factor) + " epsilon_opt: " + std::string(to_string(r.status)) +
                ", |epsilon_num - epsilon| = " + fmt("%.2e", gap) + " <= " + fmt("%.2e", 0.1 * eps_opt) +
                ", l1 = " + fmt("%.4f", r.diagnostics.objective));
  }
  EstimatorConfig cfg;
  cfg.method = EstimationMethod::kCompressedSensing;
  cfg.epsilon = 0.5 * eps_opt;
  const SolverResult r = cs_estimate(*model, data.probabilities, cfg, &ls);
  o.check(r.status == SolveStatus::kInfeasible,
          "epsilon = 0.5 epsilon_opt: status " + std::string(to_string(r.status)));
  return o;
}

std::vector<CMatrix> random_kraus(int d, int r, std::uint64_t seed) {
  StreamRng rng(seed);
  CMatrix g(d * r, d);
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < d; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
  }
  Eigen::HouseholderQR<CMatrix> qr(g);
  const CMatrix v = qr.householderQ() * CMatrix::Identity(d * r, d);
  std::vector<CMatrix> out;
  for (int k = 0; k < r; ++k) out.push_back(v.middleRows(k * d, d));
  return out;
}

Outcome moment_formulas(const Pipeline& tof) {
  Outcome o;
  for (int d : {2, 4}) {
    double worst = 0.0;
    for (std::uint64_t s = 1; s <= 20; ++s) {
      const KrausSet k = make_kraus_set(random_kraus(d, 1 + static_cast<int>(s % 4), 1000 * d + s));
      worst = std::max(worst, std::abs(avg_state_fidelity_sq(k) - permutation_moment_oracle(k, 2)));
    }
    o.check(worst <= 1e-8, "d=" + std::to_string(d) + ": max |closed form - permutation oracle| over 20 channels = " +
                               fmt("%.2e", worst) + " <= 1e-8");
  }
  {
    const KrausSet k = kraus_from_chi(tof.full.chi, tof.gate);
    const MonteCarloMoments mc = mc_state_fidelity_moments(k, 100000, 7);
    const double z1 = std::abs(mc.mean - avg_state_fidelity(k)) / mc.mean_se;
    const double z2 = std::abs(mc.mean_sq - avg_state_fidelity_sq(k)) / mc.mean_sq_se;
    o.check(z1 <= 3.0 && z2 <= 3.0, "d=8 (Toffoli chi_full): Monte Carlo with 1e5 samples within " +
                                         fmt("%.2f", z1) + " and " + fmt("%.2f", z2) + " standard errors (<= 3)");
  }
  double worst = 0.0;
  for (const auto& e : g_estimates) {
    if (!check_cptp(e.chi).physical) continue;
    const BasisPtr err = share(pauli_error_basis(e.gate.matrix()));
    const double f = process_fidelity(e.chi, ideal_chi(e.gate, err));
    const double fst = avg_state_fidelity(kraus_from_chi(e.chi.in_basis(err), e.gate));
    worst = std::max(worst, std::abs(fst - avg_state_fidelity_from_process(f, e.gate.dim())));
  }
  o.check(worst <= 1e-9, "linear relation F_st = (d F_chi + 1)/(d + 1) on " + std::to_string(g_estimates.size()) +
                             " estimates: max deviation " + fmt("%.2e", worst) + " <= 1e-9");
  return o;
}

Outcome physicality() {
  Outcome o;
  int converged = 0, physical = 0;
  for (const auto& e : g_estimates) {
    if (e.status != SolveStatus::kConverged) {
      o.note(std::string(to_string(e.status)) + ": " + e.label);
      continue;
    }
    ++converged;
    if (check_cptp(e.chi, 1e-6).physical) {
      ++physical;
    } else {
      o.note("not CPTP: " + e.label);
    }
  }
  o.check(converged > 0 && physical == converged,
          std::to_string(physical) + " of " + std::to_string(converged) +
              " converged estimates (LS and CS, all m_conf, Pauli-error and SVD bases) pass check_cptp at 1e-6");
  return o;
}

Outcome basis_round_trip(const Pipeline& cz, const Pipeline& tof) {
  Outcome o;
  for (const Pipeline* pl : {&cz, &tof}) {
    const BasisPtr pauli = share(pauli_basis(pl->gate.num_qubits()));
    const ProcessMatrix& chi = pl->full.chi;
    const ProcessMatrix ideal = ideal_chi(pl->gate, pl->pauli_error);
    const double f0 = process_fidelity(chi, ideal);
    const ProcessMatrix p = chi.in_basis(pauli);
    const ProcessMatrix s = p.in_basis(pl->svd);
    const ProcessMatrix back = s.in_basis(pl->pauli_error);
    double worst = 0.0;
    for (const ProcessMatrix* c : {&p, &s, &back}) worst = std::max(worst, std::abs(process_fidelity(*c, ideal) - f0));
    const double infidelity = 1.0 - process_fidelity(back, chi);
    o.check(worst <= 1e-7 && infidelity <= 1e-7,
            pl->gate.name() + ": Pauli-error -> Pauli -> SVD -> Pauli-error changes F by " + fmt("%.2e", worst) +
                ", round-trip infidelity " + fmt("%.2e", infidelity) + " (<= 1e-7)");
  }
  return o;
}

Outcome fidelity_spread(const Pipeline& tof) {
  Outcome o;
  const FidelityReport full = fidelity_report(tof.full.chi, tof.gate);
  o.check(full.state_fidelity_std < 1.0 - full.avg_state_fidelity,
          "full data: dF_st = " + fmt("%.5f", full.state_fidelity_std) + " < 1 - F_st = " +
              fmt("%.5f", 1.0 - full.avg_state_fidelity));
  o.note("true process (ideal gate): dF_st = " +
         fmt("%.5f", fidelity_report(ideal_chi(tof.gate, tof.pauli_error), tof.gate).state_fidelity_std));
  const int selections = 3;
  double sum = 0.0;
  for (int s = 0; s < selections; ++s) {
    const auto pr = tof.estimate(100, repeat_seed(10, 100, s), tof.pauli_error, tof.epsilon_opt, "c10");
    const FidelityReport cs = fidelity_report(pr.cs.chi, tof.gate);
    const FidelityReport ls = fidelity_report(pr.ls.chi, tof.gate);
    sum += cs.state_fidelity_std;
    o.note("m_conf=100 selection " + std::to_string(s) + ": CS dF_st = " + fmt("%.5f", cs.state_fidelity_std) +
           " (1 - F_st = " + fmt("%.5f", 1.0 - cs.avg_state_fidelity) + "), LS dF_st = " +
           fmt("%.5f", ls.state_fidelity_std) + ", CS " + std::to_string(pr.cs.diagnostics.iterations) +
           " iterations");
    o.check(cs.state_fidelity_std < 1.0 - cs.avg_state_fidelity,
            "m_conf=100 selection " + std::to_string(s) + ": CS dF_st < 1 - F_st");
  }
  const double mean = sum / selections;
  const double rel = std::abs(mean - full.state_fidelity_std) / full.state_fidelity_std;
  o.check(rel <= 0.5, "mean CS dF_st at m_conf=100 = " + fmt("%.5f", mean) + " vs full-data " +
                          fmt("%.5f", full.state_fidelity_std) + ": relative difference " + fmt("%.3f", rel) +
                          " <= 0.5");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  // Optional arguments restrict the run to the listed criterion numbers.
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
  const auto start = Clock::now();
  int failed = 0;
  const auto report = [&](int id, const std::string& title, const std::function<Outcome()>& body) {
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) return;
    const auto t = Clock::now();
    Outcome o;
    try {
      o = body();
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "[PASS]" : "[FAIL]") << " criterion " << id << ": " << title << " ("
              << fmt("%.1f", seconds_since(t)) << " s)\n";
    for (const auto& d : o.details) std::cout << "         " << d << "\n";
    std::cout.flush();
  };

  const Pipeline cz("cz", 0.01, 2026);
  const Pipeline tof("toffoli", 0.01, 1);
  std::cout << "CZ: F(chi_full, chi_ideal) = " << fmt("%.4f", process_fidelity(cz.full.chi, ideal_chi(cz.gate, cz.pauli_error)))
            << ", epsilon_opt = " << fmt("%.5f", cz.epsilon_opt) << "\n";
  std::cout << "Toffoli: F(chi_full, chi_ideal) = "
            << fmt("%.4f", process_fidelity(tof.full.chi, ideal_chi(tof.gate, tof.pauli_error)))
            << ", epsilon_opt = " << fmt("%.5f", tof.epsilon_opt) << "\n";

  report(1, "noiseless exact recovery", noiseless_recovery);
  report(2, "Toffoli full-data pipeline", toffoli_pipeline);
  report(3, "CS undersampling at N=3", [&] { return toffoli_undersampling(tof); });
  report(4, "CS undersampling at N=2", [&] { return cz_undersampling(cz); });
  report(5, "SVD and Pauli-error bases agree", [&] { return basis_agreement(cz, tof); });
  report(6, "epsilon behaviour", epsilon_behaviour);
  report(9, "basis round trip", [&] { return basis_round_trip(cz, tof); });
  report(10, "state-fidelity spread", [&] { return fidelity_spread(tof); });
  // Invariants over every estimate produced above.
  report(7, "state-fidelity moment formulas", [&] { return moment_formulas(tof); });
  report(8, "physicality of converged estimates", physicality);

  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criterion(s) failed") << " in "
            << fmt("%.1f", seconds_since(start)) << " s\n";
  return failed == 0 ? 0 : 1;
}
