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
#include "tomocs/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <thread>
#include <vector>

#include <Eigen/SVD>

#include "tomocs/errors.hpp"
#include "tomocs/linalg.hpp"
#include "tomocs/rng.hpp"

namespace tomocs {
namespace {

constexpr std::uint64_t kHaarSalt = 0x68616172ULL;  // "haar"

void require_physical(const ProcessMatrix& chi, double tol, const char* which) {
  const PhysicalityReport r = check_cptp(chi, tol);
  if (!r.physical) {
    throw Error(ErrorCode::kNonphysicalInput,
                std::string(which) + " is not CPTP (min eigenvalue " + std::to_string(r.min_eigenvalue) +
                    ", TP residual " + std::to_string(r.tp_residual) + ")");
  }
}

void require_tp(const KrausSet& kraus, double tol) {
  if (kraus.operators.empty()) throw Error(ErrorCode::kInvalidArgument, "empty Kraus set");
  const double r = kraus.tp_residual();
  if (!(r <= tol)) {
    throw Error(ErrorCode::kNonphysicalInput,
                "Kraus set violates trace preservation by " + std::to_string(r));
  }
}

CMatrix unit_trace(const CMatrix& chi) {
  return linalg::hermitian_part(chi) / chi.trace().real();
}

/// Rank one within tolerance: the largest eigenvalue carries all the trace.
bool is_rank_one(const CMatrix& unit) {
  const RVector ev = linalg::hermitian_eigenvalues(unit);
  return ev.maxCoeff() >= 1.0 - 1e-10;
}

double sum_abs_trace_sq(const KrausSet& kraus) {
  double s = 0.0;
  for (const auto& a : kraus.operators) s += std::norm(a.trace());
  return s;
}

/// Permutations of {0..n-1} in lexicographic order.
std::vector<std::vector<int>> all_permutations(int n) {
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

double uhlmann_fidelity(const CMatrix& chi1, const CMatrix& chi2) {
  const CMatrix s1 = linalg::psd_sqrt(unit_trace(chi1));
  const CMatrix s2 = linalg::psd_sqrt(unit_trace(chi2));
  // Tr sqrt(sqrt(r1) r2 sqrt(r1)) = sum of singular values of sqrt(r1) sqrt(r2);
  // the singular values are the same for the swapped product, so the value is
  // symmetric in its arguments.
  const CMatrix prod = s1 * s2;
  Eigen::JacobiSVD<CMatrix> svd(prod);
  const double f = svd.singularValues().sum();
  return std::clamp(f * f, 0.0, 1.0);
}

double process_fidelity(const ProcessMatrix& chi1, const ProcessMatrix& chi2, double tol) {
  require_physical(chi1, tol, "first process matrix");
  require_physical(chi2, tol, "second process matrix");
  const CMatrix a = unit_trace(chi1.chi());
  const CMatrix b = unit_trace(chi2.basis().same_as(chi1.basis())
                                   ? chi2.chi()
                                   : chi2.in_basis(chi1.basis_ptr()).chi());
  if (is_rank_one(a) || is_rank_one(b)) {
    return std::clamp((a * b).trace().real(), 0.0, 1.0);
  }
  return uhlmann_fidelity(a, b);
}

double avg_state_fidelity(const KrausSet& kraus, double tp_tol) {
  require_tp(kraus, tp_tol);
  const double d = kraus.dim();
  return (sum_abs_trace_sq(kraus) + d) / (d * (d + 1.0));
}

double avg_state_fidelity_sq(const KrausSet& kraus, double tp_tol) {
  require_tp(kraus, tp_tol);
  const auto& ops = kraus.operators;
  const Eigen::Index d = kraus.dim();
  const double dd = static_cast<double>(d);

  std::vector<Complex> tr(ops.size());
  CMatrix b = CMatrix::Zero(d, d);   // sum_n conj(Tr A_n) A_n
  CMatrix m = CMatrix::Zero(d, d);   // sum_n A_n A_n^dag
  for (std::size_t n = 0; n < ops.size(); ++n) {
    tr[n] = ops[n].trace();
    b += std::conj(tr[n]) * ops[n];
    m += ops[n] * ops[n].adjoint();
  }
  const double s1 = sum_abs_trace_sq(kraus);

  double pair_traces = 0.0;   // sum |Tr(A_n A_m)|^2 + |Tr(A_n A_m^dag)|^2
  double four_cycle = 0.0;    // sum Re Tr(A_n A_m A_n^dag A_m^dag)
  for (std::size_t n = 0; n < ops.size(); ++n) {
    const CMatrix an_dag = ops[n].adjoint();
    for (std::size_t mi = 0; mi < ops.size(); ++mi) {
      const CMatrix& am = ops[mi];
      const CMatrix nm = ops[n] * am;
      pair_traces += std::norm(nm.trace()) + std::norm((ops[n] * am.adjoint()).trace());
      four_cycle += (nm * an_dag * am.adjoint()).trace().real();
    }
  }

  const double identity = s1 * s1;
  const double transpositions =
      2.0 * dd * s1 + 2.0 * b.squaredNorm() + 2.0 * (b * b).trace().real();
  const double three_cycles = 4.0 * s1 + 4.0 * (m * b).trace().real();
  const double double_transpositions = dd * dd + pair_traces;
  const double four_cycles = 3.0 * dd + (m * m).trace().real() + 2.0 * four_cycle;

  const double total = identity + transpositions + three_cycles + double_transpositions + four_cycles;
  return total / (dd * (dd + 1.0) * (dd + 2.0) * (dd + 3.0));
}

double state_fidelity_std(const ProcessMatrix& chi, const UnitaryGate& target) {
  const KrausSet kraus = kraus_from_chi(chi, target);
  const double f1 = avg_state_fidelity(kraus);
  const double f2 = avg_state_fidelity_sq(kraus);
  return std::sqrt(std::max(0.0, f2 - f1 * f1));
}

double avg_state_fidelity_from_process(double process_fidelity, int dim) {
  return (process_fidelity * dim + 1.0) / (dim + 1.0);
}

MonteCarloMoments mc_state_fidelity_moments(const KrausSet& kraus, std::int64_t samples,
                                            std::uint64_t seed, int threads) {
  if (samples < 1) throw Error(ErrorCode::kInvalidArgument, "Monte Carlo needs at least one sample");
  if (kraus.operators.empty()) throw Error(ErrorCode::kInvalidArgument, "empty Kraus set");
  const Eigen::Index d = kraus.dim();
  std::vector<double> values(static_cast<std::size_t>(samples));
  auto work = [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i < end; ++i) {
      StreamRng rng(substream_seed(seed, static_cast<std::uint64_t>(i), kHaarSalt));
      const CVector phi = rng.haar_state(d);
      double f = 0.0;
      for (const auto& a : kraus.operators) f += std::norm(phi.dot(a * phi));
      values[static_cast<std::size_t>(i)] = f;
    }
  };
  threads = std::max(1, threads);
  if (threads == 1 || samples < 1000) {
    work(0, samples);
  } else {
    std::vector<std::thread> pool;
    const std::int64_t chunk = (samples + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const std::int64_t b = t * chunk;
      const std::int64_t e = std::min(samples, b + chunk);
      if (b < e) pool.emplace_back(work, b, e);
    }
    for (auto& th : pool) th.join();
  }
  MonteCarloMoments out;
  out.samples = samples;
  double s = 0.0, s2 = 0.0;
  for (const double v : values) {
    s += v;
    s2 += v * v;
  }
  const double n = static_cast<double>(samples);
  out.mean = s / n;
  out.mean_sq = s2 / n;
  if (samples > 1) {
    double var1 = 0.0, var2 = 0.0;
    for (const double v : values) {
      var1 += (v - out.mean) * (v - out.mean);
      var2 += (v * v - out.mean_sq) * (v * v - out.mean_sq);
    }
    out.mean_se = std::sqrt(var1 / (n - 1.0) / n);
    out.mean_sq_se = std::sqrt(var2 / (n - 1.0) / n);
  }
  return out;
}

double permutation_moment_oracle(const KrausSet& kraus, int k) {
  if (k != 1 && k != 2) throw Error(ErrorCode::kInvalidArgument, "moment order must be 1 or 2");
  if (kraus.operators.empty()) throw Error(ErrorCode::kInvalidArgument, "empty Kraus set");
  const Eigen::Index d = kraus.dim();
  const int slots = 2 * k;
  Eigen::Index total = 1;
  for (int s = 0; s < slots; ++s) total *= d;
  if (total > 4096) throw Error(ErrorCode::kUnsupportedDimension, "d^{2k} exceeds 4096");

  // K = sum_n A_n (x) A_n^dag on H (x) H; the operator for moment k is K^{(x)k}.
  CMatrix pair = CMatrix::Zero(d * d, d * d);
  for (const auto& a : kraus.operators) pair += linalg::kron(a, a.adjoint());
  auto element = [&](const std::vector<Eigen::Index>& row, const std::vector<Eigen::Index>& col) {
    Complex v(1.0, 0.0);
    for (int j = 0; j < k; ++j) {
      const auto r = row[static_cast<std::size_t>(2 * j)] * d + row[static_cast<std::size_t>(2 * j + 1)];
      const auto c = col[static_cast<std::size_t>(2 * j)] * d + col[static_cast<std::size_t>(2 * j + 1)];
      v *= pair(r, c);
    }
    return v;
  };

  // P_sigma |j_1 ... j_n> = |j_sigma(1) ... j_sigma(n)>, so
  // Tr(X P_sigma) = sum_j <P_sigma j| X |j>.
  Complex sum(0.0, 0.0);
  std::vector<Eigen::Index> digits(static_cast<std::size_t>(slots));
  std::vector<Eigen::Index> permuted(static_cast<std::size_t>(slots));
  for (const auto& sigma : all_permutations(slots)) {
    for (Eigen::Index j = 0; j < total; ++j) {
      Eigen::Index rest = j;
      for (int s = slots - 1; s >= 0; --s) {
        digits[static_cast<std::size_t>(s)] = rest % d;
        rest /= d;
      }
      for (int s = 0; s < slots; ++s) {
        permuted[static_cast<std::size_t>(s)] = digits[static_cast<std::size_t>(sigma[static_cast<std::size_t>(s)])];
      }
      sum += element(permuted, digits);
    }
  }
  double factorial = 1.0;
  for (int i = 2; i <= slots; ++i) factorial *= i;
  const double norm = binomial(slots + static_cast<int>(d) - 1, static_cast<int>(d) - 1) * factorial;
  return sum.real() / norm;
}

std::string_view to_string(MomentMethod method) {
  switch (method) {
    case MomentMethod::kClosedForm: return "closed_form";
    case MomentMethod::kMonteCarlo: return "monte_carlo";
    case MomentMethod::kPermutationOracle: return "permutation_oracle";
  }
  return "unknown";
}

nlohmann::json FidelityReport::to_json() const {
  nlohmann::json j = {{"process_fidelity", process_fidelity},
                      {"avg_state_fidelity", avg_state_fidelity},
                      {"avg_state_fidelity_sq", avg_state_fidelity_sq},
                      {"state_fidelity_std", state_fidelity_std},
                      {"method", std::string(to_string(method))}};
  if (method == MomentMethod::kMonteCarlo) {
    j["samples"] = samples;
    j["avg_state_fidelity_se"] = avg_state_fidelity_se;
    j["avg_state_fidelity_sq_se"] = avg_state_fidelity_sq_se;
  }
  return j;
}

FidelityReport fidelity_report(const ProcessMatrix& chi, const UnitaryGate& target,
                               MomentMethod method, std::int64_t samples, std::uint64_t seed) {
  FidelityReport r;
  r.method = method;
  r.process_fidelity = process_fidelity(chi, ideal_chi(target, chi.basis_ptr()));
  const KrausSet kraus = kraus_from_chi(chi, target);
  switch (method) {
    case MomentMethod::kClosedForm:
      r.avg_state_fidelity = avg_state_fidelity(kraus);
      r.avg_state_fidelity_sq = avg_state_fidelity_sq(kraus);
      break;
    case MomentMethod::kPermutationOracle:
      r.avg_state_fidelity = permutation_moment_oracle(kraus, 1);
      r.avg_state_fidelity_sq = permutation_moment_oracle(kraus, 2);
      break;
    case MomentMethod::kMonteCarlo: {
      const MonteCarloMoments mc = mc_state_fidelity_moments(kraus, samples, seed);
      r.avg_state_fidelity = mc.mean;
      r.avg_state_fidelity_sq = mc.mean_sq;
      r.samples = mc.samples;
      r.avg_state_fidelity_se = mc.mean_se;
      r.avg_state_fidelity_sq_se = mc.mean_sq_se;
      break;
    }
  }
  r.state_fidelity_std =
      std::sqrt(std::max(0.0, r.avg_state_fidelity_sq - r.avg_state_fidelity * r.avg_state_fidelity));
  return r;
}

}  // namespace tomocs
