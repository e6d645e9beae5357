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
#include "tomocs/sensing_io.hpp"

#include <array>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

#include <openssl/evp.h>

#include "tomocs/errors.hpp"

namespace tomocs {
namespace {

std::uint32_t label_code(BasisLabel label) { return static_cast<std::uint32_t>(label); }

template <typename T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw Error(ErrorCode::kIo, "truncated sensing-matrix header");
  return v;
}

}  // namespace

void write_sensing_matrix(const std::filesystem::path& path, const SensingMatrix& phi) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  os.write(kSensingMagic, sizeof(kSensingMagic));
  put<std::uint32_t>(os, kSensingVersion);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(phi.num_qubits()));
  put<std::uint32_t>(os, label_code(phi.basis().label()));
  put<std::uint64_t>(os, static_cast<std::uint64_t>(phi.rows()));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(phi.basis().dim()));
  const auto& m = phi.matrix();
  std::vector<float> buf(static_cast<std::size_t>(m.cols()) * 2);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      buf[static_cast<std::size_t>(2 * c)] = static_cast<float>(m(r, c).real());
      buf[static_cast<std::size_t>(2 * c + 1)] = static_cast<float>(m(r, c).imag());
    }
    os.write(reinterpret_cast<const char*>(buf.data()),
             static_cast<std::streamsize>(buf.size() * sizeof(float)));
  }
  if (!os) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

SensingMatrix read_sensing_matrix(const std::filesystem::path& path, const BasisPtr& basis) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kSensingMagic, sizeof(magic)) != 0) {
    throw Error(ErrorCode::kIo, path.string() + " is not a sensing-matrix file");
  }
  const auto version = get<std::uint32_t>(is);
  if (version != kSensingVersion) throw Error(ErrorCode::kIo, "unsupported sensing-matrix version");
  const auto n = get<std::uint32_t>(is);
  const auto label = get<std::uint32_t>(is);
  const auto rows = get<std::uint64_t>(is);
  const auto d = get<std::uint32_t>(is);
  if (label != label_code(basis->label()) || d != static_cast<std::uint32_t>(basis->dim()) ||
      (1u << n) != d) {
    throw Error(ErrorCode::kBasisMismatch, path.string() + " was written for a different basis");
  }
  const auto cols = static_cast<Eigen::Index>(d) * d * d * d;
  SensingMatrix::Storage phi(static_cast<Eigen::Index>(rows), cols);
  std::vector<float> buf(static_cast<std::size_t>(cols) * 2);
  for (Eigen::Index r = 0; r < phi.rows(); ++r) {
    is.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(float)));
    if (!is) throw Error(ErrorCode::kIo, "truncated sensing-matrix body in " + path.string());
    for (Eigen::Index c = 0; c < cols; ++c) {
      phi(r, c) = Complex(buf[static_cast<std::size_t>(2 * c)], buf[static_cast<std::size_t>(2 * c + 1)]);
    }
  }
  return SensingMatrix(basis, static_cast<int>(n), std::move(phi));
}

std::string sha256_hex(const void* data, std::size_t size) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(data, size, md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::kIo, "SHA-256 failed");
  }
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) {
    os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  }
  return os.str();
}

std::string sha256_file_hex(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  const std::string bytes = ss.str();
  return sha256_hex(bytes.data(), bytes.size());
}

std::string sensing_cache_key(const TomographyDesign& design, const OperatorBasis& basis) {
  std::vector<double> payload;
  payload.push_back(design.num_qubits());
  payload.push_back(static_cast<double>(label_code(basis.label())));
  payload.push_back(basis.normalization());
  const CMatrix& v = basis.vectorized();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    payload.push_back(v.data()[i].real());
    payload.push_back(v.data()[i].imag());
  }
  return sha256_hex(payload.data(), payload.size() * sizeof(double));
}

SensingCache::SensingCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create cache directory " + dir_.string());
}

std::optional<SensingCache> SensingCache::from_environment(const std::optional<std::string>& flag) {
  if (flag && !flag->empty()) return SensingCache(*flag);
  if (const char* env = std::getenv("TOMOCS_CACHE"); env != nullptr && *env != '\0') {
    return SensingCache(env);
  }
  return std::nullopt;
}

std::filesystem::path SensingCache::path_for(const std::string& key) const {
  return dir_ / (key + ".phi");
}

SensingMatrix SensingCache::get_or_build(const TomographyDesign& design, const BasisPtr& basis,
                                         std::string* key_out) const {
  const std::string key = sensing_cache_key(design, *basis);
  if (key_out != nullptr) *key_out = key;
  const auto path = path_for(key);
  if (!std::filesystem::exists(path)) {
    const auto tmp = dir_ / (key + ".phi.tmp");
    write_sensing_matrix(tmp, sensing_matrix(design, basis));
    std::filesystem::rename(tmp, path);
  }
  return read_sensing_matrix(path, basis);
}

}  // namespace tomocs
