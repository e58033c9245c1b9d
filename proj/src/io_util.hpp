#pragma once

// Internal helpers shared by the file-emitting translation units.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "fractsig/errors.hpp"

namespace fractsig::detail {

inline void atomic_write(const std::filesystem::path& path, const std::string& contents) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot write " + tmp.string());
    out << contents;
    if (!out) throw io_error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

// NaN <-> null so curves survive JSON round-trips.
inline nlohmann::json curve_to_json(const std::vector<double>& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (double x : v) {
    if (std::isfinite(x)) {
      arr.push_back(x);
    } else {
      arr.push_back(nullptr);
    }
  }
  return arr;
}

inline std::vector<double> curve_from_json(const nlohmann::json& arr) {
  std::vector<double> v;
  v.reserve(arr.size());
  for (const auto& x : arr) {
    v.push_back(x.is_number() ? x.get<double>()
                              : std::numeric_limits<double>::quiet_NaN());
  }
  return v;
}

}  // namespace fractsig::detail
