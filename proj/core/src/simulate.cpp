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
#include "tomocs/simulate.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "tomocs/errors.hpp"
#include "tomocs/rng.hpp"

namespace tomocs {
namespace {

constexpr std::uint64_t kNoiseSalt = 0x6e6f697365ULL;  // "noise"

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) {
    while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
    while (!field.empty() && field.front() == ' ') field.erase(field.begin());
    out.push_back(field);
  }
  return out;
}

double parse_double(const std::string& s, const char* what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw Error(ErrorCode::kIo, std::string("malformed ") + what + " '" + s + "' in dataset");
  }
  return v;
}

long long parse_int(const std::string& s, const char* what) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::kIo, std::string("malformed ") + what + " '" + s + "' in dataset");
  }
  return v;
}

}  // namespace

ProbabilityVector ProbabilityDataset::select(std::span<const Eigen::Index> rows) const {
  ProbabilityVector out(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] < 0 || rows[i] >= probabilities.size()) {
      throw Error(ErrorCode::kDimensionMismatch, "row index outside the dataset");
    }
    out(static_cast<Eigen::Index>(i)) = probabilities(rows[i]);
  }
  return out;
}

ProbabilityDataset ideal_dataset(const UnitaryGate& u, const TomographyDesign& design) {
  if (u.dim() != design.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "gate dimension does not match the design");
  }
  ProbabilityDataset data;
  data.gate = u.name();
  data.num_qubits = design.num_qubits();
  data.probabilities.resize(design.num_rows());
  const int outcomes = design.num_outcomes();
  std::vector<CVector> measured;
  for (int r = 0; r < design.num_settings(); ++r) {
    for (int o = 0; o < outcomes; ++o) measured.push_back(design.measured_vector(r, o));
  }
  for (int k = 0; k < design.num_inputs(); ++k) {
    const CVector out = u.matrix() * design.input_vector(k);
    for (int r = 0; r < design.num_settings(); ++r) {
      const int config = k * design.num_settings() + r;
      for (int o = 0; o < outcomes; ++o) {
        const double p = std::norm(measured[static_cast<std::size_t>(r * outcomes + o)].dot(out));
        data.probabilities(static_cast<Eigen::Index>(config) * outcomes + o) = std::clamp(p, 0.0, 1.0);
      }
    }
  }
  return data;
}

ProbabilityDataset add_noise(const ProbabilityDataset& data, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "noise sigma must be non-negative");
  if (sigma > kMaxNoiseSigma) {
    throw Error(ErrorCode::kInvalidArgument, "noise sigma above the supported cap of 0.25");
  }
  ProbabilityDataset out = data;
  out.sigma = sigma;
  out.seed = seed;
  if (sigma == 0.0) return out;

  const Eigen::Index n = data.probabilities.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    StreamRng rng(substream_seed(seed, static_cast<std::uint64_t>(i), kNoiseSalt));
    const double p0 = data.probabilities(i);
    double p = -1.0;
    while (!(p >= 0.0 && p <= 1.0)) p = p0 + sigma * rng.normal();
    out.probabilities(i) = p;
  }
  const int block = data.outcomes_per_configuration();
  for (Eigen::Index c = 0; c < n / block; ++c) {
    auto seg = out.probabilities.segment(c * block, block);
    const double total = seg.sum();
    if (!(total > 0.0)) throw Error(ErrorCode::kNonphysicalInput, "configuration block sums to zero");
    seg /= total;
  }
  return out;
}

ProbabilityDataset noisy_gate_dataset(std::string_view gate, double sigma, std::uint64_t seed) {
  const UnitaryGate u = gate_library(gate);
  const TomographyDesign design = standard_design(u.num_qubits());
  return add_noise(ideal_dataset(u, design), sigma, seed);
}

std::string dataset_to_csv(const ProbabilityDataset& data) {
  std::string s = "gate,N,sigma,seed\n";
  s += data.gate + "," + std::to_string(data.num_qubits) + "," + format_double(data.sigma) + "," +
       std::to_string(data.seed) + "\n";
  s += "config_id,outcome_id,probability\n";
  const int block = data.outcomes_per_configuration();
  for (Eigen::Index i = 0; i < data.probabilities.size(); ++i) {
    s += std::to_string(i / block) + "," + std::to_string(i % block) + "," +
         format_double(data.probabilities(i)) + "\n";
  }
  return s;
}

void write_dataset_csv(const std::filesystem::path& path, const ProbabilityDataset& data) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  os << dataset_to_csv(data);
  if (!os) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

ProbabilityDataset dataset_from_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  auto next_line = [&](const char* what) {
    while (std::getline(is, line)) {
      if (!line.empty() && line != "\r") return;
    }
    throw Error(ErrorCode::kIo, std::string("dataset ends before the ") + what);
  };
  next_line("metadata header");
  if (split(line) != std::vector<std::string>{"gate", "N", "sigma", "seed"}) {
    throw Error(ErrorCode::kIo, "dataset must start with 'gate,N,sigma,seed'");
  }
  next_line("metadata values");
  const auto meta = split(line);
  if (meta.size() != 4) throw Error(ErrorCode::kIo, "malformed dataset metadata row");
  ProbabilityDataset data;
  data.gate = meta[0];
  data.num_qubits = static_cast<int>(parse_int(meta[1], "N"));
  data.sigma = parse_double(meta[2], "sigma");
  data.seed = static_cast<std::uint64_t>(std::stoull(meta[3]));
  if (data.num_qubits < 1 || data.num_qubits > 3) {
    throw Error(ErrorCode::kUnsupportedDimension, "dataset N must be 1, 2 or 3");
  }
  next_line("column header");
  if (split(line) != std::vector<std::string>{"config_id", "outcome_id", "probability"}) {
    throw Error(ErrorCode::kIo, "expected 'config_id,outcome_id,probability' column header");
  }
  const TomographyDesign design(data.num_qubits);
  const int block = design.num_outcomes();
  data.probabilities = ProbabilityVector::Constant(design.num_rows(), std::nan(""));
  Eigen::Index seen = 0;
  while (std::getline(is, line)) {
    if (line.empty() || line == "\r") continue;
    const auto f = split(line);
    if (f.size() != 3) throw Error(ErrorCode::kIo, "malformed dataset row '" + line + "'");
    const long long c = parse_int(f[0], "config_id");
    const long long o = parse_int(f[1], "outcome_id");
    if (c < 0 || c >= design.num_configurations() || o < 0 || o >= block) {
      throw Error(ErrorCode::kIo, "dataset row index out of range: '" + line + "'");
    }
    const Eigen::Index row = static_cast<Eigen::Index>(c) * block + o;
    if (!std::isnan(data.probabilities(row))) throw Error(ErrorCode::kIo, "duplicate dataset row");
    const double p = parse_double(f[2], "probability");
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::kIo, "probability outside [0, 1]");
    data.probabilities(row) = p;
    ++seen;
  }
  if (seen != design.num_rows()) {
    throw Error(ErrorCode::kIo, "dataset has " + std::to_string(seen) + " rows, expected " +
                                    std::to_string(design.num_rows()));
  }
  return data;
}

ProbabilityDataset read_dataset_csv(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::kIo, "cannot open dataset " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return dataset_from_csv(ss.str());
}

}  // namespace tomocs
