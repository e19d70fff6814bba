#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace statz::testing {

inline std::filesystem::path data_dir() { return STATZ_DATA_DIR; }
inline std::filesystem::path fixture_dir() { return STATZ_TEST_FIXTURES; }

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline nlohmann::json load_json(const std::filesystem::path& p) { return nlohmann::json::parse(slurp(p)); }

inline std::string iris_csv() { return slurp(data_dir() / "iris.csv"); }

}  // namespace statz::testing
