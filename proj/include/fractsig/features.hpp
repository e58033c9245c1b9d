#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fractsig/fractal.hpp"
#include "fractsig/matrix.hpp"

namespace fractsig {

// Everything extracted from one matrix (raw image for n = 0, residual
// otherwise). Scalars go to the CSV, curves to the JSONL sidecar.
struct FeatureVector {
  std::string image_id;
  std::string label;  // "real" or "fake"
  int removed_components = 0;
  double fd = 0.0;
  double fd_r2 = 1.0;
  bool fd_degenerate = false;
  double entropy_bits = 0.0;
  double mean = 0.0;
  double stdev = 0.0;
  LacunarityCurve lacunarity;
  MfsCurve mfs;
  bool mfs_ok = false;
};

struct FeatureParams {
  int levels = 256;
  ThresholdPolicy threshold = ThresholdPolicy::mean();
  std::vector<double> q_grid = default_q_grid();
  ScaleGrid scales = ScaleGrid::dyadic(256);
};

// Runs every estimator on one matrix. FD is clamped into [0,2]; a failed
// multifractal estimation (degenerate measure) yields NaN curves with
// mfs_ok = false instead of an exception, so batch runs keep going.
FeatureVector compute_features(const Matrix& m, const FeatureParams& params);

// Deterministic shortest-round-trip formatting used by every emitted file.
std::string format_double(double v);
double parse_double(const std::string& s);

inline constexpr const char* kFeatureCsvHeader =
    "image_id,label,n,fd,fd_r2,entropy_bits,mean,std";

// Sidecar path for a feature CSV (curve-valued features live there).
std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);

// Writes rows (already sorted by caller or not) sorted by (image_id, n);
// emits the CSV and the JSONL sidecar atomically (temp file + rename).
void write_feature_files(const std::filesystem::path& csv_path,
                         std::vector<FeatureVector> rows);

// Loads CSV + sidecar back; missing sidecar rows leave curves empty.
std::vector<FeatureVector> read_feature_files(const std::filesystem::path& csv_path);

using FeatureKey = std::pair<std::string, int>;  // (image_id, n)

std::map<FeatureKey, FeatureVector> index_features(std::vector<FeatureVector> rows);

}  // namespace fractsig
