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
#include "tomocs/design.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "tomocs/errors.hpp"
#include "tomocs/linalg.hpp"
#include "tomocs/rng.hpp"

namespace tomocs {
namespace {

constexpr std::uint64_t kSelectionSalt = 0x53454c4543540001ULL;

// exp(-i theta sigma / 2)
CMatrix rotation_y(double theta) {
  CMatrix r(2, 2);
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  r << c, -s, s, c;
  return r;
}

CMatrix rotation_x(double theta) {
  CMatrix r(2, 2);
  const double c = std::cos(theta / 2.0);
  const Complex s(0.0, -std::sin(theta / 2.0));
  r << c, s, s, c;
  return r;
}

CVector kron_vec(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a[i] * b;
  return out;
}

}  // namespace

const std::array<CVector, TomographyDesign::kInputsPerQubit>& TomographyDesign::qubit_inputs() {
  static const std::array<CVector, kInputsPerQubit> inputs = [] {
    const double h = 1.0 / std::sqrt(2.0);
    std::array<CVector, kInputsPerQubit> s;
    for (auto& v : s) v = CVector::Zero(2);
    s[0] << 1.0, 0.0;
    s[1] << 0.0, 1.0;
    s[2] << h, h;
    s[3] << h, Complex(0.0, h);
    return s;
  }();
  return inputs;
}

const std::array<CMatrix, TomographyDesign::kSettingsPerQubit>& TomographyDesign::qubit_rotations() {
  static const std::array<CMatrix, kSettingsPerQubit> rotations = {
      CMatrix(CMatrix::Identity(2, 2)),
      rotation_y(-std::numbers::pi / 2.0),
      rotation_x(std::numbers::pi / 2.0),
  };
  return rotations;
}

TomographyDesign::TomographyDesign(int num_qubits) : num_qubits_(num_qubits) {
  if (num_qubits < 1 || num_qubits > 3) {
    throw Error(ErrorCode::kUnsupportedDimension,
                "tomography design supports 1 to 3 qubits, got " + std::to_string(num_qubits));
  }
  const auto& q_in = qubit_inputs();
  const auto& q_rot = qubit_rotations();
  int n_in = 1;
  int n_r = 1;
  for (int q = 0; q < num_qubits; ++q) {
    n_in *= kInputsPerQubit;
    n_r *= kSettingsPerQubit;
  }
  input_vectors_.reserve(static_cast<std::size_t>(n_in));
  for (int k = 0; k < n_in; ++k) {
    CVector v = CVector::Ones(1);
    int rem = k;
    std::vector<int> digits(static_cast<std::size_t>(num_qubits));
    for (int q = num_qubits - 1; q >= 0; --q) {
      digits[static_cast<std::size_t>(q)] = rem % kInputsPerQubit;
      rem /= kInputsPerQubit;
    }
    for (int digit : digits) v = kron_vec(v, q_in[static_cast<std::size_t>(digit)]);
    input_vectors_.push_back(std::move(v));
  }
  settings_.reserve(static_cast<std::size_t>(n_r));
  for (int r = 0; r < n_r; ++r) {
    std::vector<CMatrix> factors(static_cast<std::size_t>(num_qubits));
    int rem = r;
    for (int q = num_qubits - 1; q >= 0; --q) {
      factors[static_cast<std::size_t>(q)] = q_rot[static_cast<std::size_t>(rem % kSettingsPerQubit)];
      rem /= kSettingsPerQubit;
    }
    settings_.push_back(linalg::kron_all(factors));
  }
}

DensityMatrix TomographyDesign::input_state(int k) const {
  return DensityMatrix::pure(input_vector(k));
}

CVector TomographyDesign::measured_vector(int r, int outcome) const {
  return setting(r).adjoint().col(outcome);
}

CMatrix TomographyDesign::projector(int r, int outcome) const {
  const CVector v = measured_vector(r, outcome);
  return v * v.adjoint();
}

TomographyDesign standard_design(int num_qubits) { return TomographyDesign(num_qubits); }

bool is_underdetermined(const TomographyDesign& design, int m_conf) {
  const long d = design.dim();
  const long independent = static_cast<long>(design.num_outcomes() - 1) * m_conf;
  return independent < d * d * d * d - d * d;
}

SensingMatrix::SensingMatrix(BasisPtr basis, int num_qubits, Storage phi)
    : basis_(std::move(basis)), num_qubits_(num_qubits), phi_(std::move(phi)) {
  const auto n = static_cast<Eigen::Index>(basis_->size());
  if (phi_.cols() != n * n) {
    throw Error(ErrorCode::kDimensionMismatch, "sensing matrix width must be d^4");
  }
}

RVector SensingMatrix::real_row(Eigen::Index r) const {
  const auto n = static_cast<Eigen::Index>(basis_->size());
  // P = sum_ab Phi_ab chi_ab = Re Tr(G^dagger chi) with G_ab = conj(Phi_ab).
  CMatrix g(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) g(a, b) = std::conj(phi_(r, a * n + b));
  }
  return linalg::hermitian_to_real(g);
}

SensingMatrix sensing_matrix(const TomographyDesign& design, const BasisPtr& basis) {
  if (basis->dim() != design.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "basis and design dimensions differ");
  }
  const Eigen::Index d = design.dim();
  const auto n = static_cast<Eigen::Index>(basis->size());
  const CMatrix& bvec = basis->vectorized();
  const CMatrix bvec_h = bvec.adjoint();
  SensingMatrix::Storage phi(design.num_rows(), n * n);

  CMatrix stacked(d, d * n);   // [E_0 rho, E_1 rho, ...]
  CMatrix projected(d, d * n);
  CMatrix block(n, n);
  for (int k = 0; k < design.num_inputs(); ++k) {
    const CMatrix rho = design.input_state(k).matrix();
    for (Eigen::Index a = 0; a < n; ++a) {
      stacked.middleCols(a * d, d).noalias() = (*basis)[static_cast<std::size_t>(a)] * rho;
    }
    for (int r = 0; r < design.num_settings(); ++r) {
      for (int o = 0; o < design.num_outcomes(); ++o) {
        const CMatrix proj = design.projector(r, o);
        projected.noalias() = proj * stacked;
        // Column a of the reshaped block is vec(Pi E_a rho); entry (b, a) of
        // B^dagger [..] is Tr(E_b^dagger Pi E_a rho) = Phi_{a b}.
        const Eigen::Map<const CMatrix> reshaped(projected.data(), d * d, n);
        block.noalias() = bvec_h * reshaped;
        const Eigen::Index row =
            (static_cast<Eigen::Index>(k) * design.num_settings() + r) * design.num_outcomes() + o;
        // Column-major block(b, a) sits at b + n a, the row-major (a, b) slot.
        phi.row(row) = Eigen::Map<const Eigen::RowVectorXcd>(block.data(), n * n);
      }
    }
  }
  return SensingMatrix(basis, design.num_qubits(), std::move(phi));
}

ProbabilityVector predicted_probabilities(const SensingMatrix& phi, const ProcessMatrix& chi) {
  if (!chi.basis().same_as(phi.basis())) {
    throw Error(ErrorCode::kBasisMismatch, "chi and sensing matrix use different bases");
  }
  const auto n = static_cast<Eigen::Index>(chi.chi().rows());
  // Row-major vec(chi).
  CVector v(n * n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) v[a * n + b] = chi.chi()(a, b);
  }
  const CVector p = phi.matrix() * v;
  ProbabilityVector out = p.real();
  for (auto& x : out) {
    if (x < 0.0 && x > -1e-12) x = 0.0;
    if (x > 1.0 && x < 1.0 + 1e-12) x = 1.0;
  }
  return out;
}

ConfigurationSubset all_configurations(const TomographyDesign& design) {
  ConfigurationSubset s;
  s.configurations.resize(static_cast<std::size_t>(design.num_configurations()));
  std::iota(s.configurations.begin(), s.configurations.end(), 0);
  s.rows.resize(static_cast<std::size_t>(design.num_rows()));
  std::iota(s.rows.begin(), s.rows.end(), Eigen::Index{0});
  return s;
}

ConfigurationSubset select_configurations(const TomographyDesign& design, int m_conf,
                                          std::uint64_t seed) {
  const int total = design.num_configurations();
  if (m_conf < 1 || m_conf > total) {
    throw Error(ErrorCode::kInvalidArgument, "m_conf must lie in [1, " + std::to_string(total) +
                                                 "], got " + std::to_string(m_conf));
  }
  if (m_conf == total) return all_configurations(design);
  std::vector<int> pool(static_cast<std::size_t>(total));
  std::iota(pool.begin(), pool.end(), 0);
  StreamRng rng(substream_seed(seed, 0, kSelectionSalt));
  // Partial Fisher-Yates.
  for (int i = 0; i < m_conf; ++i) {
    const auto j = static_cast<std::size_t>(i) +
                   static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(total - i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
  }
  ConfigurationSubset s;
  s.configurations.assign(pool.begin(), pool.begin() + m_conf);
  std::sort(s.configurations.begin(), s.configurations.end());
  s.rows.reserve(static_cast<std::size_t>(m_conf) * static_cast<std::size_t>(design.num_outcomes()));
  for (int c : s.configurations) {
    for (int o = 0; o < design.num_outcomes(); ++o) {
      s.rows.push_back(static_cast<Eigen::Index>(c) * design.num_outcomes() + o);
    }
  }
  return s;
}

}  // namespace tomocs
