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
#include <random>

#include "tomocs/types.hpp"

namespace tomocs {

/// SplitMix64 finalizer; used only to derive substream seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed of substream \p index under top-level \p seed.
///
/// Substream rule: seed_i = splitmix64(splitmix64(seed) ^ (0x9E3779B97F4A7C15 * (i + 1))).
/// Distinct purposes pass distinct \p salt values so that, e.g., the noise
/// stream for probability i and the selection stream for repeat i never
/// coincide.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index, std::uint64_t salt = 0);

/// Platform-stable random source: std::mt19937_64 (fully specified by the
/// standard) with hand-written uniform and normal transforms, since the
/// std distributions are implementation defined.
class StreamRng {
 public:
  explicit StreamRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform();

  /// Standard normal deviate (Box-Muller, one cached spare).
  double normal();

  /// Uniform integer on [0, n).
  std::uint64_t below(std::uint64_t n);

  /// Haar-random unit vector in C^dim (normalized complex Gaussian).
  CVector haar_state(Eigen::Index dim);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace tomocs
