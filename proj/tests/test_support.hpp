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
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "tomocs/types.hpp"

namespace tomocs::testing {

inline std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(TOMOCS_TEST_DATA_DIR) / name;
}

inline nlohmann::json load_fixture(const std::string& name) {
  std::ifstream is(data_path(name));
  return nlohmann::json::parse(is);
}

/// Reads {"re": [[...]], "im": [[...]]} into a complex matrix.
inline CMatrix complex_matrix(const nlohmann::json& j) {
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  CMatrix m(static_cast<Eigen::Index>(re.size()), static_cast<Eigen::Index>(re.at(0).size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      m(r, c) = Complex(re.at(r).at(c).get<double>(), im.at(r).at(c).get<double>());
    }
  }
  return m;
}

/// Fresh scratch directory below the system temporary directory.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("tomocs_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace tomocs::testing
