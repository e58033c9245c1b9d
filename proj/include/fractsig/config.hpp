#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fractsig/features.hpp"

namespace fractsig {

// Plain key=value run configuration ('#' starts a comment line).
struct Config {
  std::string real_dir;
  std::string fake_dir;
  std::string out_dir = "out";
  std::vector<int> n_list = {0, 24, 26, 28, 30, 32};
  int side = 256;
  int levels = 256;
  double q_min = -5.0;
  double q_max = 5.0;
  double q_step = 0.5;
  std::vector<int> scales;  // empty -> dyadic up to side/2
  std::string threshold = "mean";
  int workers = 1;
  uint64_t seed = 0;       // subsample selection when max_images > 0
  int max_images = 0;      // 0 = use every image found

  std::vector<double> q_grid() const;
  ScaleGrid scale_grid() const;
  FeatureParams feature_params() const;
};

Config parse_config(const std::filesystem::path& path);
Config parse_config_text(const std::string& text);

std::vector<int> parse_int_list(const std::string& text);

}  // namespace fractsig
