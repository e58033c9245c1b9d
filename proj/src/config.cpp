#include "fractsig/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "fractsig/errors.hpp"
#include "fractsig/image.hpp"

namespace fractsig {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  size_t e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

int to_int(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    int v = std::stoi(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw argument_error("config key '" + key + "': bad integer '" + value + "'");
  }
}

double to_double(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw argument_error("config key '" + key + "': bad number '" + value + "'");
  }
}

}  // namespace

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(to_int("list", item));
  }
  return out;
}

Config parse_config_text(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw argument_error("config line " + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "real_dir") cfg.real_dir = value;
    else if (key == "fake_dir") cfg.fake_dir = value;
    else if (key == "out_dir") cfg.out_dir = value;
    else if (key == "components" || key == "n_list") cfg.n_list = parse_int_list(value);
    else if (key == "side") cfg.side = to_int(key, value);
    else if (key == "levels") cfg.levels = to_int(key, value);
    else if (key == "q_min") cfg.q_min = to_double(key, value);
    else if (key == "q_max") cfg.q_max = to_double(key, value);
    else if (key == "q_step") cfg.q_step = to_double(key, value);
    else if (key == "scales") cfg.scales = parse_int_list(value);
    else if (key == "threshold") cfg.threshold = value;
    else if (key == "workers") cfg.workers = to_int(key, value);
    else if (key == "seed") {
      try {
        size_t pos = 0;
        cfg.seed = std::stoull(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
      } catch (const std::exception&) {
        throw argument_error("config key 'seed': bad integer '" + value + "'");
      }
    }
    else if (key == "max_images") cfg.max_images = to_int(key, value);
    else throw argument_error("unknown config key: " + key);
  }

  if (cfg.side < kMinImageSide) throw argument_error("config: side too small");
  if (cfg.levels < 2) throw argument_error("config: levels must be >= 2");
  if (cfg.workers < 1) throw argument_error("config: workers must be >= 1");
  if (cfg.n_list.empty()) throw argument_error("config: components list is empty");
  for (int n : cfg.n_list) {
    if (n < 0) throw argument_error("config: negative component count");
  }
  if (!(cfg.q_step > 0.0) || cfg.q_min >= cfg.q_max) {
    throw argument_error("config: bad q grid");
  }
  ThresholdPolicy::parse(cfg.threshold);  // validate early
  return cfg;
}

Config parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open config: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::vector<double> Config::q_grid() const {
  std::vector<double> q;
  // built from integer steps so the grid hits q = 1 exactly
  const int steps = static_cast<int>(std::llround((q_max - q_min) / q_step));
  for (int i = 0; i <= steps; ++i) {
    const double v = q_min + i * q_step;
    if (v > q_max + 1e-9) break;
    q.push_back(v);
  }
  if (q.size() < 3) throw argument_error("config: q grid has fewer than 3 points");
  return q;
}

ScaleGrid Config::scale_grid() const {
  if (scales.empty()) return ScaleGrid::dyadic(side);
  ScaleGrid grid;
  grid.scales = scales;
  grid.validate();
  return grid;
}

FeatureParams Config::feature_params() const {
  FeatureParams params;
  params.levels = levels;
  params.threshold = ThresholdPolicy::parse(threshold);
  params.q_grid = q_grid();
  params.scales = scale_grid();
  return params;
}

}  // namespace fractsig
