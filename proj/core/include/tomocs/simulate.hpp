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
#include <filesystem>
#include <span>
#include <string>

#include "tomocs/channel.hpp"
#include "tomocs/design.hpp"
#include "tomocs/types.hpp"

namespace tomocs {

/// Largest accepted noise standard deviation; bounds the rejection loop.
inline constexpr double kMaxNoiseSigma = 0.25;

/// Outcome probabilities for every configuration of the standard design,
/// stored in design row order (configuration-major, outcome-minor).
struct ProbabilityDataset {
  std::string gate;
  int num_qubits = 0;
  double sigma = 0.0;          // 0 for ideal data
  std::uint64_t seed = 0;      // noise seed; 0 for ideal data
  ProbabilityVector probabilities;

  int outcomes_per_configuration() const { return 1 << num_qubits; }
  int num_configurations() const {
    return static_cast<int>(probabilities.size() / outcomes_per_configuration());
  }
  bool is_noisy() const { return sigma > 0.0; }

  /// Entries at the given design rows.
  ProbabilityVector select(std::span<const Eigen::Index> rows) const;
};

/// P_i = |<m_{r,o}| U |psi_k>|^2 evaluated directly from state vectors.
ProbabilityDataset ideal_dataset(const UnitaryGate& u, const TomographyDesign& design);

/// Adds N(0, sigma^2) noise to each entry, redrawing until it lands in [0, 1],
/// then divides every configuration block by its sum. Entry i draws from
/// substream i of \p seed, so results do not depend on evaluation order.
ProbabilityDataset add_noise(const ProbabilityDataset& data, double sigma, std::uint64_t seed);

/// gate_library + standard_design + ideal_dataset + add_noise.
ProbabilityDataset noisy_gate_dataset(std::string_view gate, double sigma, std::uint64_t seed);

/// CSV: "gate,N,sigma,seed", its values, then "config_id,outcome_id,probability"
/// rows. Numbers use 17 significant digits so reading back is bit-exact.
void write_dataset_csv(const std::filesystem::path& path, const ProbabilityDataset& data);
std::string dataset_to_csv(const ProbabilityDataset& data);
ProbabilityDataset read_dataset_csv(const std::filesystem::path& path);
ProbabilityDataset dataset_from_csv(const std::string& text);

}  // namespace tomocs
