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

#include <array>
#include <cstdint>
#include <vector>

#include "tomocs/bases.hpp"
#include "tomocs/channel.hpp"
#include "tomocs/types.hpp"

namespace tomocs {

/// Product-state tomography design with n_in = 4 inputs and n_R = 3
/// measurement rotations per qubit and all 2^N outcomes read out.
///
/// Configuration id = k * N_R + r for input k and setting r (both
/// lexicographic over qubits, first qubit most significant). Row id =
/// config * 2^N + outcome.
class TomographyDesign {
 public:
  static constexpr int kInputsPerQubit = 4;
  static constexpr int kSettingsPerQubit = 3;

  explicit TomographyDesign(int num_qubits);

  int num_qubits() const { return num_qubits_; }
  int dim() const { return 1 << num_qubits_; }
  int num_inputs() const { return static_cast<int>(input_vectors_.size()); }
  int num_settings() const { return static_cast<int>(settings_.size()); }
  int num_outcomes() const { return dim(); }
  int num_configurations() const { return num_inputs() * num_settings(); }
  Eigen::Index num_rows() const {
    return static_cast<Eigen::Index>(num_configurations()) * num_outcomes();
  }

  int input_of(int config) const { return config / num_settings(); }
  int setting_of(int config) const { return config % num_settings(); }

  /// rho_k as a validated state.
  DensityMatrix input_state(int k) const;
  const CVector& input_vector(int k) const { return input_vectors_[static_cast<std::size_t>(k)]; }
  /// Product rotation R_r applied before computational-basis readout.
  const CMatrix& setting(int r) const { return settings_[static_cast<std::size_t>(r)]; }
  /// Pi_{r,o} = R_r^dagger |o><o| R_r.
  CMatrix projector(int r, int outcome) const;
  /// R_r^dagger |o>, the state Pi_{r,o} projects on.
  CVector measured_vector(int r, int outcome) const;

  // Single-qubit ingredients.
  static const std::array<CVector, kInputsPerQubit>& qubit_inputs();
  static const std::array<CMatrix, kSettingsPerQubit>& qubit_rotations();

 private:
  int num_qubits_;
  std::vector<CVector> input_vectors_;
  std::vector<CMatrix> settings_;
};

TomographyDesign standard_design(int num_qubits);

/// Independent-probability count (2^N - 1) * m_conf is below the d^4 - d^2
/// real parameters of a trace-preserving chi.
bool is_underdetermined(const TomographyDesign& design, int m_conf);

/// Dense m x d^4 map from row-major vec(chi) to outcome probabilities:
///   Phi_{row, a*d^2 + b} = Tr(Pi_row E_a rho_row E_b^dagger).
class SensingMatrix {
 public:
  using Storage = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  SensingMatrix(BasisPtr basis, int num_qubits, Storage phi);

  Eigen::Index rows() const { return phi_.rows(); }
  int num_qubits() const { return num_qubits_; }
  const OperatorBasis& basis() const { return *basis_; }
  const BasisPtr& basis_ptr() const { return basis_; }
  const Storage& matrix() const { return phi_; }

  /// Row r as the equivalent functional on real Hermitian coordinates.
  RVector real_row(Eigen::Index r) const;

 private:
  BasisPtr basis_;
  int num_qubits_;
  Storage phi_;
};

SensingMatrix sensing_matrix(const TomographyDesign& design, const BasisPtr& basis);

/// Phi vec(chi); imaginary residue is dropped and values within 1e-12 of
/// [0, 1] are clipped onto it.
ProbabilityVector predicted_probabilities(const SensingMatrix& phi, const ProcessMatrix& chi);

struct ConfigurationSubset {
  std::vector<int> configurations;   // ascending
  std::vector<Eigen::Index> rows;    // all outcomes of each configuration

  std::size_t size() const { return configurations.size(); }
};

/// Uniform random m_conf configurations without replacement, deterministic in seed.
ConfigurationSubset select_configurations(const TomographyDesign& design, int m_conf,
                                          std::uint64_t seed);
ConfigurationSubset all_configurations(const TomographyDesign& design);

}  // namespace tomocs
