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
#include "tomocs/solve.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Cholesky>

#include "tomocs/errors.hpp"
#include "tomocs/linalg.hpp"

namespace tomocs {
namespace {

using Clock = std::chrono::steady_clock;

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

/// min 1/2 x^T (g A^T A + s I) x - r^T x  subject to  C x = t, via the
/// Schur complement S = C H^{-1} C^T, refreshed whenever (g, s) change.
class ConstrainedSolve {
 public:
  ConstrainedSolve(const SensingModel& model, const TpConstraint& tp) : model_(model), tp_(tp) {}

  void factor(double gram_scale, double shift, bool with_image = false) {
    gram_scale_ = gram_scale;
    shift_ = shift;
    k_ = model_.solve_shifted(tp_.c.transpose(), gram_scale, shift);
    schur_.compute(tp_.c * k_);
    if (schur_.info() != Eigen::Success) {
      throw Error(ErrorCode::kInvalidArgument, "trace-preservation constraints are degenerate");
    }
    if (with_image) {
      ak_.resize(model_.rows(), k_.cols());
      for (Eigen::Index j = 0; j < k_.cols(); ++j) ak_.col(j) = model_.apply(k_.col(j));
    }
  }

  RVector solve(const RVector& r) const {
    const RMatrix rm = r;
    const RVector x0 = model_.solve_shifted(rm, gram_scale_, shift_).col(0);
    const RVector lambda = schur_.solve(tp_.t - tp_.c * x0);
    return x0 + k_ * lambda;
  }

  /// Solution for the right-hand side q + h A^T v, together with its image
  /// under A; requires factor(..., true).
  SensingModel::ShiftedImage solve_image(const RVector& q, const RVector& v, double h) const {
    SensingModel::ShiftedImage out = model_.solve_shifted_image(q, v, h, gram_scale_, shift_);
    const RVector lambda = schur_.solve(tp_.t - tp_.c * out.x);
    out.x += k_ * lambda;
    out.ax += ak_ * lambda;
    return out;
  }

 private:
  const SensingModel& model_;
  const TpConstraint& tp_;
  double gram_scale_ = 0.0;
  double shift_ = 1.0;
  RMatrix k_;
  RMatrix ak_;
  Eigen::LLT<RMatrix> schur_;
};

RVector project_psd_real(const RVector& v, Eigen::Index n) {
  return linalg::hermitian_to_real(linalg::project_psd(linalg::real_to_hermitian(v, n)));
}

/// Proximal map of kappa * sum_ab |chi_ab| in real coordinates: diagonal
/// entries are scalars, each off-diagonal pair (a, b), (b, a) contributes
/// 2 |chi_ab| = sqrt(2) * ||(x_re, x_im)||.
void soft_threshold_real(RVector& v, Eigen::Index n, double kappa) {
  for (Eigen::Index i = 0; i < n; ++i) {
    const double a = std::abs(v[i]) - kappa;
    v[i] = a > 0.0 ? std::copysign(a, v[i]) : 0.0;
  }
  const double pair_kappa = std::sqrt(2.0) * kappa;
  for (Eigen::Index k = n; k < v.size(); k += 2) {
    const double norm = std::hypot(v[k], v[k + 1]);
    const double scale = norm > pair_kappa ? 1.0 - pair_kappa / norm : 0.0;
    v[k] *= scale;
    v[k + 1] *= scale;
  }
}

void project_ball(RVector& v, const RVector& center, double radius) {
  const RVector diff = v - center;
  const double norm = diff.norm();
  if (norm > radius) v = center + (radius / norm) * diff;
}

struct Scaling {
  double inv_m;       // A_s = A / sqrt(m)
  double mean_eig;    // average nonzero eigenvalue of A_s^T A_s
};

Scaling scaling_of(const SensingModel& model) {
  const double m = static_cast<double>(model.rows());
  const double rank = std::min(m, static_cast<double>(model.cols()));
  return {1.0 / m, model.frobenius_norm_sq() / (m * rank)};
}

void check_inputs(const SensingModel& model, const ProbabilityVector& p, const EstimatorConfig& cfg) {
  cfg.validate();
  if (p.size() != model.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "probability vector has " + std::to_string(p.size()) + " entries, sensing model has " +
                    std::to_string(model.rows()) + " rows");
  }
}

/// Type-II Anderson acceleration of a fixed-point iteration s <- T(s),
/// safeguarded by the fixed-point residual: an extrapolated point whose
/// residual grows is discarded in favour of the plain step it replaced.
class Anderson {
 public:
  explicit Anderson(int memory) : memory_(static_cast<std::size_t>(memory)) {}

  void reset() {
    df_.clear();
    dg_.clear();
    has_prev_ = false;
  }

  /// Given the current point \p s and its image \p f = T(s), returns the
  /// next point. Returns false in \p accepted when the safeguard rejected
  /// the previous extrapolation; \p s is then replaced by the plain step.
  void advance(RVector& s, const RVector& f, bool& accepted) {
    const double residual = (f - s).norm();
    accepted = !(extrapolated_ && residual > plain_residual_);
    if (!accepted) {
      s = plain_;
      reset();
      extrapolated_ = false;
      return;
    }
    plain_residual_ = residual;
    if (memory_ == 0) {
      s = f;
      return;
    }
    RVector g = f - s;
    if (has_prev_) {
      df_.push_back(f - f_prev_);
      dg_.push_back(g - g_prev_);
      if (df_.size() > memory_) {
        df_.pop_front();
        dg_.pop_front();
      }
    }
    f_prev_ = f;
    g_prev_ = std::move(g);
    has_prev_ = true;
    plain_ = f;
    extrapolated_ = false;
    const auto k = static_cast<Eigen::Index>(dg_.size());
    if (k == 0) {
      s = f;
      return;
    }
    RMatrix gram(k, k);
    RVector rhs(k);
    for (Eigen::Index i = 0; i < k; ++i) {
      rhs(i) = dg_[static_cast<std::size_t>(i)].dot(g_prev_);
      for (Eigen::Index j = 0; j <= i; ++j) {
        gram(i, j) = gram(j, i) = dg_[static_cast<std::size_t>(i)].dot(dg_[static_cast<std::size_t>(j)]);
      }
    }
    gram.diagonal().array() += 1e-10 * gram.trace() + std::numeric_limits<double>::min();
    const RVector gamma = gram.ldlt().solve(rhs);
    if (!gamma.allFinite()) {
      s = f;
      return;
    }
    s = f;
    for (Eigen::Index i = 0; i < k; ++i) s.noalias() -= gamma(i) * df_[static_cast<std::size_t>(i)];
    extrapolated_ = true;
  }

 private:
  std::size_t memory_;
  std::deque<RVector> df_;
  std::deque<RVector> dg_;
  RVector f_prev_;
  RVector g_prev_;
  RVector plain_;
  double plain_residual_ = std::numeric_limits<double>::infinity();
  bool has_prev_ = false;
  bool extrapolated_ = false;
};

/// Penalty update from the normalized residual balance; returns the factor
/// applied to rho (1 when unchanged).
double balance_rho(double primal_ratio, double dual_ratio) {
  if (!(primal_ratio > 0.0) || !(dual_ratio > 0.0)) return 1.0;
  const double factor = std::sqrt(primal_ratio / dual_ratio);
  if (factor > 5.0 || factor < 0.2) return std::clamp(factor, 1e-3, 1e3);
  return 1.0;
}

constexpr double kMinRhoScale = 1e-8;
constexpr double kMaxRhoScale = 1e8;

/// When rho is rebalanced: every \c interval iterations, with the interval
/// doubled each time the adjustment reverses direction so that rho cannot
/// oscillate between a primal- and a dual-limited value indefinitely.
class RhoSchedule {
 public:
  RhoSchedule(bool enabled, int interval) : enabled_(enabled), interval_(interval), next_(interval) {}

  bool due(int it) const { return enabled_ && it >= next_; }

  /// Records the outcome of a check at iteration \p it (factor 1: unchanged).
  void checked(int it, double factor) {
    if (factor != 1.0) {
      const int direction = factor > 1.0 ? 1 : -1;
      if (direction == -last_direction_) interval_ *= 2;
      last_direction_ = direction;
    }
    next_ = it + interval_;
  }

 private:
  bool enabled_;
  int interval_;
  int next_;
  int last_direction_ = 0;
};

SolverResult finish(const SensingModel& model, const ProbabilityVector& p, const RVector& z,
                    SolverDiagnostics diag, SolveStatus status, bool l1_objective) {
  const auto n = static_cast<Eigen::Index>(model.basis().size());
  ProcessMatrix chi = make_physical(ProcessMatrix(model.basis_ptr(), linalg::real_to_hermitian(z, n)));
  const RVector residual = model.predict(chi.chi()) - p;
  diag.epsilon_num = residual.norm() / std::sqrt(static_cast<double>(model.rows()));
  diag.objective = l1_objective ? l1_norm(chi.chi()) : residual.squaredNorm();
  return SolverResult{std::move(chi), diag, status, RVector()};
}

std::vector<Eigen::Index> all_rows(Eigen::Index m) {
  std::vector<Eigen::Index> rows(static_cast<std::size_t>(m));
  std::iota(rows.begin(), rows.end(), Eigen::Index{0});
  return rows;
}

}  // namespace

std::string_view to_string(EstimationMethod method) {
  return method == EstimationMethod::kLeastSquares ? "ls" : "cs";
}

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kConverged: return "Converged";
    case SolveStatus::kMaxIterations: return "MaxIterations";
    case SolveStatus::kInfeasible: return "Infeasible";
  }
  return "unknown";
}

EstimationMethod parse_method(std::string_view text) {
  const std::string s = lower(text);
  if (s == "ls") return EstimationMethod::kLeastSquares;
  if (s == "cs") return EstimationMethod::kCompressedSensing;
  throw Error(ErrorCode::kInvalidArgument, "unknown estimation method '" + std::string(text) + "'");
}

double EstimatorConfig::effective_tolerance(int num_qubits) const {
  if (tolerance > 0.0) return tolerance;
  return num_qubits >= 3 ? 1e-6 : 1e-7;
}

void EstimatorConfig::validate() const {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw Error(ErrorCode::kInvalidArgument, "epsilon must be a finite non-negative number");
  }
  if (!(tolerance >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "tolerance must be positive");
  if (max_iterations < 1) throw Error(ErrorCode::kInvalidArgument, "max_iterations must be >= 1");
  if (!(rho > 0.0)) throw Error(ErrorCode::kInvalidArgument, "rho must be positive");
  if (adapt_interval < 1) throw Error(ErrorCode::kInvalidArgument, "adapt_interval must be >= 1");
  if (!(over_relaxation > 0.0 && over_relaxation < 2.0)) {
    throw Error(ErrorCode::kInvalidArgument, "over_relaxation must lie in (0, 2)");
  }
  if (anderson_memory < 0 || anderson_memory > 50) {
    throw Error(ErrorCode::kInvalidArgument, "anderson_memory must lie in [0, 50]");
  }
}

EstimatorConfig EstimatorConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kInvalidArgument, "estimator config must be a JSON object");
  EstimatorConfig cfg;
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "method") cfg.method = parse_method(value.get<std::string>());
      else if (key == "epsilon") cfg.epsilon = value.get<double>();
      else if (key == "max_iterations") cfg.max_iterations = value.get<int>();
      else if (key == "tolerance") cfg.tolerance = value.get<double>();
      else if (key == "rho") cfg.rho = value.get<double>();
      else if (key == "adaptive_rho") cfg.adaptive_rho = value.get<bool>();
      else if (key == "adapt_interval") cfg.adapt_interval = value.get<int>();
      else if (key == "over_relaxation") cfg.over_relaxation = value.get<double>();
      else if (key == "anderson_memory") cfg.anderson_memory = value.get<int>();
      else throw Error(ErrorCode::kInvalidArgument, "unknown estimator config key '" + key + "'");
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kInvalidArgument, "estimator config key '" + key + "': " + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

nlohmann::json EstimatorConfig::to_json() const {
  return {{"method", std::string(to_string(method))},
          {"epsilon", epsilon},
          {"max_iterations", max_iterations},
          {"tolerance", tolerance},
          {"rho", rho},
          {"adaptive_rho", adaptive_rho},
          {"adapt_interval", adapt_interval},
          {"over_relaxation", over_relaxation},
          {"anderson_memory", anderson_memory}};
}

nlohmann::json SolverDiagnostics::to_json() const {
  return {{"iterations", iterations},         {"primal_residual", primal_residual},
          {"dual_residual", dual_residual},   {"objective", objective},
          {"epsilon_num", epsilon_num},       {"epsilon_floor", epsilon_floor},
          {"final_rho", final_rho},           {"wall_time_s", wall_time_s}};
}

nlohmann::json SolverResult::to_json() const {
  return {{"status", std::string(tomocs::to_string(status))}, {"diagnostics", diagnostics.to_json()}};
}

TpConstraint tp_constraint(const OperatorBasis& basis) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  const Eigen::Index d = basis.dim();
  TpConstraint tp;
  tp.c.resize(d * d, n * n);
  tp.t = linalg::hermitian_to_real(CMatrix::Identity(d, d));
  const double s = 1.0 / std::sqrt(2.0);
  const Complex i1(0.0, 1.0);
  for (Eigen::Index a = 0; a < n; ++a) {
    const CMatrix& ea = basis[static_cast<std::size_t>(a)];
    tp.c.col(a) = linalg::hermitian_to_real(ea.adjoint() * ea);
  }
  Eigen::Index k = n;
  for (Eigen::Index a = 0; a < n; ++a) {
    const CMatrix& ea = basis[static_cast<std::size_t>(a)];
    for (Eigen::Index b = a + 1; b < n; ++b) {
      const CMatrix& eb = basis[static_cast<std::size_t>(b)];
      const CMatrix ba = eb.adjoint() * ea;
      const CMatrix ab = ba.adjoint();
      tp.c.col(k++) = linalg::hermitian_to_real(s * (ba + ab));
      tp.c.col(k++) = linalg::hermitian_to_real((s * i1) * (ba - ab));
    }
  }
  return tp;
}

namespace {

/// Natural size of chi in this basis (its trace d / Q); the absolute parts of
/// the stopping thresholds scale with it so that every basis converges to the
/// same relative accuracy.
double chi_scale(const OperatorBasis& basis) {
  return static_cast<double>(basis.dim()) / basis.normalization();
}

}  // namespace

double l1_norm(const CMatrix& chi) { return chi.cwiseAbs().sum(); }

SolverResult ls_estimate(const SensingModel& model, const ProbabilityVector& p,
                         const EstimatorConfig& cfg) {
  check_inputs(model, p, cfg);
  const auto start = Clock::now();
  const auto n = static_cast<Eigen::Index>(model.basis().size());
  const double tol = cfg.effective_tolerance(model.basis().num_qubits());
  const Scaling sc = scaling_of(model);
  const TpConstraint tp = tp_constraint(model.basis());
  ConstrainedSolve kkt(model, tp);

  const double rho_unit = sc.mean_eig;
  double rho = cfg.rho * rho_unit;
  const double scale = chi_scale(model.basis());
  kkt.factor(sc.inv_m, rho);

  const RVector atp = model.adjoint(p) * sc.inv_m;
  const Eigen::Index len = n * n;
  RVector x = RVector::Zero(len);
  RVector state = RVector::Zero(2 * len);  // (z, u)
  RVector next(2 * len);
  const double alpha = cfg.over_relaxation;
  Anderson accel(cfg.anderson_memory);
  RhoSchedule schedule(cfg.adaptive_rho, cfg.adapt_interval);

  SolverDiagnostics diag;
  SolveStatus status = SolveStatus::kMaxIterations;
  for (int it = 1; it <= cfg.max_iterations; ++it) {
    const auto z = state.head(len);
    const auto u = state.tail(len);
    x = kkt.solve(atp + rho * (z - u));
    const RVector xh = alpha * x + (1.0 - alpha) * z;
    next.head(len) = project_psd_real(xh + u, n);
    next.tail(len) = u + xh - next.head(len);

    const double rp = (x - next.head(len)).norm();
    const double rd = rho * (next.head(len) - z).norm();
    const double eps_p = tol * (scale + std::max(x.norm(), next.head(len).norm()));
    const double eps_d = tol * (1.0 / scale + rho * next.tail(len).norm());
    diag.iterations = it;
    diag.primal_residual = rp;
    diag.dual_residual = rd;
    if (rp <= eps_p && rd <= eps_d) {
      state = next;
      status = SolveStatus::kConverged;
      break;
    }
    if (schedule.due(it)) {
      const double f = balance_rho(rp / eps_p, rd / eps_d);
      const double new_rho = std::clamp(rho * f, kMinRhoScale * rho_unit, kMaxRhoScale * rho_unit);
      schedule.checked(it, new_rho / rho);
      if (new_rho != rho) {
        next.tail(len) *= rho / new_rho;
        rho = new_rho;
        kkt.factor(sc.inv_m, rho);
        accel.reset();
        state = next;
        continue;
      }
    }
    bool accepted = true;
    accel.advance(state, next, accepted);
  }
  const RVector z = state.head(len);
  const RVector u = state.tail(len);
  diag.final_rho = rho / rho_unit;
  SolverResult result = finish(model, p, z, diag, status, false);
  result.psd_multiplier = -rho * u;
  result.diagnostics.wall_time_s = seconds_since(start);
  return result;
}

SolverResult ls_estimate(const SensingMatrix& phi, const ProbabilityVector& p,
                         const EstimatorConfig& cfg) {
  const auto rows = all_rows(phi.rows());
  return ls_estimate(*make_sensing_model(phi, rows), p, cfg);
}

SolverResult cs_estimate(const SensingModel& model, const ProbabilityVector& p,
                         const EstimatorConfig& cfg, const SolverResult* ls_solution) {
  check_inputs(model, p, cfg);
  const auto start = Clock::now();
  const auto n = static_cast<Eigen::Index>(model.basis().size());
  const double tol = cfg.effective_tolerance(model.basis().num_qubits());
  const double sqrt_m = std::sqrt(static_cast<double>(model.rows()));

  SolverResult ls_local{ProcessMatrix(model.basis_ptr(), CMatrix::Zero(n, n)), {}, {}, {}};
  if (ls_solution == nullptr) {
    EstimatorConfig ls_cfg = cfg;
    ls_cfg.method = EstimationMethod::kLeastSquares;
    ls_local = ls_estimate(model, p, ls_cfg);
    ls_solution = &ls_local;
  }
  if (&ls_solution->chi.basis() != &model.basis() && !ls_solution->chi.basis().same_as(model.basis())) {
    throw Error(ErrorCode::kBasisMismatch, "least-squares warm start is in a different basis");
  }
  const double floor = residual_noise(model, p, ls_solution->chi);
  // The least-squares floor is an upper bound on the true minimum residual,
  // accurate to about the solver tolerance; only a clear gap is infeasible.
  constexpr double kFloorSlack = 1e-6;

  SolverDiagnostics diag;
  diag.epsilon_floor = floor;
  auto from_ls = [&](SolveStatus status) {
    SolverResult out{ls_solution->chi, diag, status, RVector()};
    out.diagnostics.iterations = ls_solution->diagnostics.iterations;
    out.diagnostics.epsilon_num = floor;
    out.diagnostics.objective = l1_norm(out.chi.chi());
    out.diagnostics.wall_time_s = seconds_since(start);
    return out;
  };
  if (cfg.epsilon < floor - kFloorSlack) return from_ls(SolveStatus::kInfeasible);
  // With independent data exceeding the unknowns the ball around the
  // least-squares optimum shrinks to that single point as epsilon -> floor.
  const auto independent_rows = model.rows() - model.rows() / model.basis().dim();
  const auto free_parameters = model.cols() - model.basis().dim() * model.basis().dim();
  if (cfg.epsilon <= floor + kFloorSlack && independent_rows >= free_parameters) {
    return from_ls(ls_solution->status);
  }

  // Splitting: x (trace preserving) = z1 (positive) = z2 (l1) and
  // c A_s x = y (noise ball), with c chosen so c^2 A_s^T A_s has unit mean
  // nonzero eigenvalue; the x-update matrix c^2 A_s^T A_s + 2 I is then
  // independent of rho and factored once.
  const Scaling sc = scaling_of(model);
  const double c = 1.0 / std::sqrt(sc.mean_eig);
  const double op_scale = c / sqrt_m;                 // y = op_scale * A x
  const RVector center = op_scale * p;
  const double radius = c * cfg.epsilon;

  const TpConstraint tp = tp_constraint(model.basis());
  ConstrainedSolve kkt(model, tp);
  kkt.factor(op_scale * op_scale, 2.0, true);

  const Eigen::Index len = n * n;
  const RVector x_ls = linalg::hermitian_to_real(ls_solution->chi.chi());
  // State (z1, z2, y, u1, u2, w); x is recomputed from it each step.
  const Eigen::Index my = model.rows();
  const Eigen::Index o_z2 = len, o_y = 2 * len, o_u1 = 2 * len + my, o_u2 = 3 * len + my,
                     o_w = 4 * len + my, total = 4 * len + 2 * my;
  RVector state = RVector::Zero(total);
  state.segment(0, len) = x_ls;
  state.segment(o_z2, len) = x_ls;
  {
    RVector y0 = op_scale * model.apply(x_ls);
    project_ball(y0, center, radius);
    state.segment(o_y, my) = y0;
  }
  RVector next(total);
  RVector x(len);

  // The l1 threshold is 1 / rho; start it near the typical entry size.
  const double rho_unit = 1.0;
  const double scale = chi_scale(model.basis());
  double rho = cfg.rho * static_cast<double>(len) / std::max(1.0, l1_norm(ls_solution->chi.chi()));
  const double alpha = cfg.over_relaxation;
  Anderson accel(cfg.anderson_memory);
  RhoSchedule schedule(cfg.adaptive_rho, cfg.adapt_interval);

  SolveStatus status = SolveStatus::kMaxIterations;
  for (int it = 1; it <= cfg.max_iterations; ++it) {
    const auto z1 = state.segment(0, len);
    const auto z2 = state.segment(o_z2, len);
    const auto y = state.segment(o_y, my);
    const auto u1 = state.segment(o_u1, len);
    const auto u2 = state.segment(o_u2, len);
    const auto w = state.segment(o_w, my);
    SensingModel::ShiftedImage xs = kkt.solve_image((z1 - u1) + (z2 - u2), y - w, op_scale);
    x = std::move(xs.x);
    const RVector ax = op_scale * xs.ax;
    const RVector xh1 = alpha * x + (1.0 - alpha) * z1;
    const RVector xh2 = alpha * x + (1.0 - alpha) * z2;
    const RVector yh = alpha * ax + (1.0 - alpha) * y;

    auto nz1 = next.segment(0, len);
    auto nz2 = next.segment(o_z2, len);
    auto ny = next.segment(o_y, my);
    nz1 = project_psd_real(xh1 + u1, n);
    RVector t2 = xh2 + u2;
    soft_threshold_real(t2, n, 1.0 / rho);
    nz2 = t2;
    RVector ty = yh + w;
    project_ball(ty, center, radius);
    ny = ty;
    next.segment(o_u1, len) = u1 + xh1 - nz1;
    next.segment(o_u2, len) = u2 + xh2 - nz2;
    next.segment(o_w, my) = w + yh - ny;

    const double rp = std::sqrt((x - nz1).squaredNorm() + (x - nz2).squaredNorm() + (ax - ny).squaredNorm());
    const double fx = std::sqrt(2.0 * x.squaredNorm() + ax.squaredNorm());
    const double fz = std::sqrt(nz1.squaredNorm() + nz2.squaredNorm() + ny.squaredNorm());
    const double eps_p = tol * (scale + std::max(fx, fz));
    diag.iterations = it;
    diag.primal_residual = rp;
    // The dual residual costs two passes over the sensing rows; it only
    // matters once the primal residual is small, when rho is rebalanced and
    // on the last iteration.
    const bool adapt_now = schedule.due(it);
    if (rp > eps_p && !adapt_now && it != cfg.max_iterations) {
      bool accepted = true;
      accel.advance(state, next, accepted);
      continue;
    }
    const RVector dual_vec = (nz1 - z1) + (nz2 - z2) + op_scale * model.adjoint(ny - y);
    const double rd = rho * dual_vec.norm();
    const double eps_d =
        tol * (1.0 + rho * (next.segment(o_u1, len) + next.segment(o_u2, len) +
                            op_scale * model.adjoint(next.segment(o_w, my)))
                               .norm());
    diag.dual_residual = rd;
    if (rp <= eps_p && rd <= eps_d) {
      state = next;
      status = SolveStatus::kConverged;
      break;
    }
    if (adapt_now) {
      const double f = balance_rho(rp / eps_p, rd / eps_d);
      const double new_rho = std::clamp(rho * f, kMinRhoScale, kMaxRhoScale);
      schedule.checked(it, new_rho / rho);
      if (new_rho != rho) {
        next.tail(total - o_u1) *= rho / new_rho;
        rho = new_rho;
        accel.reset();
        state = next;
        continue;
      }
    }
    bool accepted = true;
    accel.advance(state, next, accepted);
  }
  const RVector z1 = state.segment(0, len);
  diag.final_rho = rho / rho_unit;
  SolverResult result = finish(model, p, z1, diag, status, true);
  result.diagnostics.wall_time_s = seconds_since(start);
  return result;
}

SolverResult cs_estimate(const SensingMatrix& phi, const ProbabilityVector& p,
                         const EstimatorConfig& cfg) {
  const auto rows = all_rows(phi.rows());
  return cs_estimate(*make_sensing_model(phi, rows), p, cfg);
}

SolverResult estimate(const SensingModel& model, const ProbabilityVector& p,
                      const EstimatorConfig& cfg) {
  return cfg.method == EstimationMethod::kLeastSquares ? ls_estimate(model, p, cfg)
                                                       : cs_estimate(model, p, cfg);
}

double residual_noise(const SensingModel& model, const ProbabilityVector& p, const ProcessMatrix& chi) {
  if (p.size() != model.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "probability vector does not match the sensing rows");
  }
  const ProcessMatrix local = chi.basis().same_as(model.basis()) ? chi : chi.in_basis(model.basis_ptr());
  return (model.predict(local.chi()) - p).norm() / std::sqrt(static_cast<double>(p.size()));
}

double residual_noise(const SensingMatrix& phi, const ProbabilityVector& p, const ProcessMatrix& chi) {
  if (p.size() != phi.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "probability vector does not match the sensing rows");
  }
  const ProcessMatrix local = chi.basis().same_as(phi.basis()) ? chi : chi.in_basis(phi.basis_ptr());
  CVector v(local.chi().size());
  const auto n = local.chi().rows();
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) v(a * n + b) = local.chi()(a, b);
  }
  const CVector pred = phi.matrix() * v;
  return (pred.real() - p).norm() / std::sqrt(static_cast<double>(p.size()));
}

double epsilon_opt(const SensingModel& full_model, const ProbabilityVector& p_full,
                   const EstimatorConfig& cfg) {
  EstimatorConfig ls_cfg = cfg;
  ls_cfg.method = EstimationMethod::kLeastSquares;
  return ls_estimate(full_model, p_full, ls_cfg).diagnostics.epsilon_num;
}

double epsilon_opt(const SensingMatrix& phi_full, const ProbabilityVector& p_full,
                   const EstimatorConfig& cfg) {
  const auto rows = all_rows(phi_full.rows());
  return epsilon_opt(*make_sensing_model(phi_full, rows), p_full, cfg);
}

CostValues cost_evaluators(const ProbabilityVector& predicted, const ProbabilityVector& p_exp, double a) {
  if (predicted.size() != p_exp.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "predicted and measured probabilities differ in length");
  }
  if (!(a > 0.0)) throw Error(ErrorCode::kInvalidArgument, "weighted-cost parameter a must be positive");
  CostValues out;
  for (Eigen::Index j = 0; j < p_exp.size(); ++j) {
    const double diff = predicted(j) - p_exp(j);
    out.least_squares += diff * diff;
    out.weighted += diff * diff / (p_exp(j) + a);
    if (p_exp(j) > 0.0) {
      if (predicted(j) > 0.0) {
        out.maximum_likelihood -= p_exp(j) * std::log(predicted(j));
      } else {
        out.maximum_likelihood_finite = false;
      }
    }
  }
  if (!out.maximum_likelihood_finite) out.maximum_likelihood = std::numeric_limits<double>::infinity();
  return out;
}

CostValues cost_evaluators(const SensingModel& model, const ProcessMatrix& chi,
                           const ProbabilityVector& p_exp, double a) {
  const ProcessMatrix local = chi.basis().same_as(model.basis()) ? chi : chi.in_basis(model.basis_ptr());
  return cost_evaluators(model.predict(local.chi()), p_exp, a);
}

LsCertificate ls_certificate(const SensingModel& model, const ProbabilityVector& p,
                             const SolverResult& result) {
  const auto n = static_cast<Eigen::Index>(model.basis().size());
  if (result.psd_multiplier.size() != n * n) {
    throw Error(ErrorCode::kInvalidArgument, "result carries no positivity multiplier");
  }
  const double inv_m = 1.0 / static_cast<double>(model.rows());
  const RVector x = linalg::hermitian_to_real(result.chi.chi());
  const RVector grad = model.adjoint(model.apply(x) - p) * inv_m;
  const RVector g = grad - result.psd_multiplier;
  const TpConstraint tp = tp_constraint(model.basis());
  // Remove the component in the range of C^T (absorbed by the best lambda).
  const RMatrix cct = tp.c * tp.c.transpose();
  const RVector lambda = cct.ldlt().solve(tp.c * g);
  LsCertificate cert;
  cert.stationarity = (g - tp.c.transpose() * lambda).norm();
  cert.complementarity = std::abs(result.psd_multiplier.dot(x));
  cert.multiplier_min_eigenvalue =
      linalg::min_eigenvalue(linalg::real_to_hermitian(result.psd_multiplier, n));
  return cert;
}

}  // namespace tomocs
