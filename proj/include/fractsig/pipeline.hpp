#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fractsig/analysis.hpp"
#include "fractsig/config.hpp"
#include "fractsig/features.hpp"

namespace fractsig {

struct SkippedImage {
  std::string relative_path;
  std::string reason;
};

struct ExtractSummary {
  std::filesystem::path csv_path;
  size_t images_found = 0;
  size_t images_used = 0;   // after optional subsampling
  size_t processed = 0;  // images that yielded rows this run (decoded or reused)
  size_t reused_rows = 0;   // resumed from an existing feature file
  size_t written_rows = 0;  // total rows in the output file
  std::vector<SkippedImage> skipped;
};

// Scans dataset_dir for PNG/JPEG files, computes a FeatureVector per
// (image, n) pair and writes the CSV + JSONL pair at out_csv. Rows already
// present (keyed by image_id + n) are kept as-is, so reruns are cheap and
// byte-identical. Work is spread over cfg.workers threads; the output is
// sorted by key and does not depend on scheduling.
ExtractSummary extract_features(const std::filesystem::path& dataset_dir,
                                const std::string& label, const std::vector<int>& n_list,
                                const Config& cfg, const std::filesystem::path& out_csv);

// Stable id for a dataset image: relative path + '#' + 8-hex content hash.
std::string image_id_for(const std::filesystem::path& dataset_dir,
                         const std::filesystem::path& file);

struct RunResult {
  int exit_code = 0;
  std::string failed_stage;  // empty on success
  std::string message;
  std::filesystem::path manifest_path;
};

// Full experiment: extract both labels, analyze every component count,
// render the report, and write a machine-readable run manifest.
RunResult run_experiment(const std::filesystem::path& config_path);

}  // namespace fractsig
