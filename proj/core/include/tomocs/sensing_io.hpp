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

#include <filesystem>
#include <optional>
#include <string>

#include "tomocs/design.hpp"

namespace tomocs {

// Binary sensing-matrix file, little-endian:
//   char[8]  magic "TOMOCSPH"
//   uint32   version (1)
//   uint32   num_qubits
//   uint32   basis label (0 pauli, 1 pauli-error, 2 natural, 3 svd)
//   uint64   rows m
//   uint32   d
//   float32  (re, im) pairs, row-major, m * d^4 entries
inline constexpr char kSensingMagic[8] = {'T', 'O', 'M', 'O', 'C', 'S', 'P', 'H'};
inline constexpr std::uint32_t kSensingVersion = 1;

void write_sensing_matrix(const std::filesystem::path& path, const SensingMatrix& phi);
/// \p basis must be the basis the file was written for (label, N and d are checked).
SensingMatrix read_sensing_matrix(const std::filesystem::path& path, const BasisPtr& basis);

/// Hex SHA-256 of the design size and the basis elements; names cache entries.
std::string sensing_cache_key(const TomographyDesign& design, const OperatorBasis& basis);

std::string sha256_hex(const void* data, std::size_t size);
std::string sha256_file_hex(const std::filesystem::path& path);

/// On-disk cache of dense sensing matrices keyed by content hash.
class SensingCache {
 public:
  explicit SensingCache(std::filesystem::path dir);

  /// Cache directory from an explicit flag, else $TOMOCS_CACHE, else none.
  static std::optional<SensingCache> from_environment(const std::optional<std::string>& flag);

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path path_for(const std::string& key) const;

  /// Loads the cached matrix or builds, stores and reloads it, so the
  /// returned values always carry the on-disk (float32) rounding.
  SensingMatrix get_or_build(const TomographyDesign& design, const BasisPtr& basis,
                             std::string* key_out = nullptr) const;

 private:
  std::filesystem::path dir_;
};

}  // namespace tomocs
