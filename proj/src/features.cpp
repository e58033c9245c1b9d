#include "fractsig/features.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "fractsig/errors.hpp"
#include "io_util.hpp"

namespace fractsig {

using detail::atomic_write;
using detail::curve_from_json;
using detail::curve_to_json;

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

FeatureVector compute_features(const Matrix& m, const FeatureParams& params) {
  FeatureVector fv;

  const BoxCountResult bc = box_count_dimension(m, params.scales, params.threshold);
  fv.fd = std::clamp(bc.fd, 0.0, 2.0);
  fv.fd_r2 = bc.r2;
  fv.fd_degenerate = bc.degenerate;

  fv.entropy_bits = shannon_entropy(m, params.levels);
  const BasicStats st = basic_stats(m);
  fv.mean = st.mean;
  fv.stdev = st.stdev;

  // Mass-based estimators run on the matrix shifted by its minimum.
  Matrix shifted = m;
  const double lo = m.min_value();
  if (lo != 0.0) {
    for (double& v : shifted.data) v -= lo;
  }
  fv.lacunarity = fractsig::lacunarity(shifted, params.scales);
  try {
    fv.mfs = multifractal_spectrum(shifted, params.q_grid, params.scales);
    fv.mfs_ok = true;
  } catch (const numeric_error&) {
    fv.mfs.q_grid = params.q_grid;
    fv.mfs.tau.assign(params.q_grid.size(), kNan);
    fv.mfs.alpha.assign(params.q_grid.size(), kNan);
    fv.mfs.f_alpha.assign(params.q_grid.size(), kNan);
    fv.mfs.d_q.assign(params.q_grid.size(), kNan);
    fv.mfs.regression_r2.assign(params.q_grid.size(), kNan);
    fv.mfs_ok = false;
  }
  return fv;
}

std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw format_error("bad numeric field: '" + s + "'");
  }
  return v;
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path) {
  return std::filesystem::path(csv_path.string() + ".jsonl");
}

void write_feature_files(const std::filesystem::path& csv_path,
                         std::vector<FeatureVector> rows) {
  std::sort(rows.begin(), rows.end(), [](const FeatureVector& a, const FeatureVector& b) {
    if (a.image_id != b.image_id) return a.image_id < b.image_id;
    return a.removed_components < b.removed_components;
  });

  std::ostringstream csv;
  csv << kFeatureCsvHeader << "\n";
  for (const FeatureVector& fv : rows) {
    if (fv.image_id.find_first_of(",\"\n") != std::string::npos) {
      throw argument_error("image id contains CSV-unsafe characters: " + fv.image_id);
    }
    csv << fv.image_id << ',' << fv.label << ',' << fv.removed_components << ','
        << format_double(fv.fd) << ',' << format_double(fv.fd_r2) << ','
        << format_double(fv.entropy_bits) << ',' << format_double(fv.mean) << ','
        << format_double(fv.stdev) << "\n";
  }

  std::ostringstream jsonl;
  for (const FeatureVector& fv : rows) {
    nlohmann::json j;
    j["image_id"] = fv.image_id;
    j["n"] = fv.removed_components;
    j["fd_degenerate"] = fv.fd_degenerate;
    j["mfs_ok"] = fv.mfs_ok;
    j["lacunarity"] = {{"scales", fv.lacunarity.scales},
                       {"values", curve_to_json(fv.lacunarity.values)}};
    j["mfs"] = {{"q", curve_to_json(fv.mfs.q_grid)},
                {"tau", curve_to_json(fv.mfs.tau)},
                {"alpha", curve_to_json(fv.mfs.alpha)},
                {"f_alpha", curve_to_json(fv.mfs.f_alpha)},
                {"d_q", curve_to_json(fv.mfs.d_q)},
                {"r2", curve_to_json(fv.mfs.regression_r2)}};
    jsonl << j.dump() << "\n";
  }

  atomic_write(csv_path, csv.str());
  atomic_write(sidecar_path(csv_path), jsonl.str());
}

std::vector<FeatureVector> read_feature_files(const std::filesystem::path& csv_path) {
  std::ifstream in(csv_path);
  if (!in) throw io_error("cannot open feature file: " + csv_path.string());

  std::string line;
  if (!std::getline(in, line) || line != kFeatureCsvHeader) {
    throw format_error("unexpected feature CSV header in " + csv_path.string());
  }

  std::vector<FeatureVector> rows;
  std::map<FeatureKey, size_t> index;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv_line(line);
    if (f.size() != 8) throw format_error("bad feature CSV row: " + line);
    FeatureVector fv;
    fv.image_id = f[0];
    fv.label = f[1];
    fv.removed_components = static_cast<int>(parse_double(f[2]));
    fv.fd = parse_double(f[3]);
    fv.fd_r2 = parse_double(f[4]);
    fv.entropy_bits = parse_double(f[5]);
    fv.mean = parse_double(f[6]);
    fv.stdev = parse_double(f[7]);
    index[{fv.image_id, fv.removed_components}] = rows.size();
    rows.push_back(std::move(fv));
  }

  std::ifstream side(sidecar_path(csv_path));
  if (side) {
    while (std::getline(side, line)) {
      if (line.empty()) continue;
      nlohmann::json j = nlohmann::json::parse(line);
      const FeatureKey key{j.at("image_id").get<std::string>(), j.at("n").get<int>()};
      auto it = index.find(key);
      if (it == index.end()) continue;
      FeatureVector& fv = rows[it->second];
      fv.fd_degenerate = j.value("fd_degenerate", false);
      fv.mfs_ok = j.value("mfs_ok", false);
      const auto& lac = j.at("lacunarity");
      fv.lacunarity.scales = lac.at("scales").get<std::vector<int>>();
      fv.lacunarity.values = curve_from_json(lac.at("values"));
      const auto& mfs = j.at("mfs");
      fv.mfs.q_grid = curve_from_json(mfs.at("q"));
      fv.mfs.tau = curve_from_json(mfs.at("tau"));
      fv.mfs.alpha = curve_from_json(mfs.at("alpha"));
      fv.mfs.f_alpha = curve_from_json(mfs.at("f_alpha"));
      fv.mfs.d_q = curve_from_json(mfs.at("d_q"));
      fv.mfs.regression_r2 = curve_from_json(mfs.at("r2"));
    }
  }
  return rows;
}

std::map<FeatureKey, FeatureVector> index_features(std::vector<FeatureVector> rows) {
  std::map<FeatureKey, FeatureVector> out;
  for (FeatureVector& fv : rows) {
    FeatureKey key{fv.image_id, fv.removed_components};
    out.emplace(std::move(key), std::move(fv));
  }
  return out;
}

}  // namespace fractsig
