#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "fractsig/features.hpp"
#include "fractsig/ks.hpp"

namespace fractsig {

// Scalar features analyzed per component count, in emitted column order.
const std::vector<std::string>& scalar_feature_names();  // fd, entropy_bits, mean, std

struct ScalarFeatureKs {
  // Normality entries require >= 8 samples per label; when a sample is too
  // small the entry is left with n1 == 0 and rendered as unavailable.
  KsResult normality_real{};
  KsResult normality_fake{};
  KsResult real_vs_fake{};
};

struct HistogramPair {
  std::vector<double> edges;  // bins + 1 entries
  std::vector<long> real_counts;
  std::vector<long> fake_counts;
};

struct MeanMfsCurves {
  std::vector<double> q;
  std::vector<double> alpha_real, f_real;
  std::vector<double> alpha_fake, f_fake;
};

struct MeanLacCurves {
  std::vector<int> scales;
  std::vector<double> real_mean, fake_mean;
};

// Aggregated KS analysis in the shape of the reference tables: a scalar
// table per component count plus (q x N) and (scale x N) statistic matrices,
// and the summary curves/histograms the plots are rendered from.
struct AnalysisReport {
  std::vector<int> n_list;
  std::vector<double> q_grid;
  std::vector<int> scales;
  std::map<int, std::map<std::string, ScalarFeatureKs>> scalar;
  std::map<int, std::vector<double>> mfs_ks;  // D per q; NaN = unavailable
  std::map<int, std::vector<double>> lac_ks;  // D per scale; NaN = unavailable
  std::map<int, std::map<std::string, HistogramPair>> histograms;
  std::map<int, MeanMfsCurves> mean_mfs;
  std::map<int, MeanLacCurves> mean_lac;

  bool empty() const { return n_list.empty(); }
};

// KS comparison of the two labelled feature files at one component count.
// Requires >= 2 rows per file at that n (two-sample minimum); normality
// columns appear when a label has >= 8 rows. A missing n raises an
// argument_error listing the component counts present.
AnalysisReport analyze(const std::filesystem::path& features_real,
                       const std::filesystem::path& features_fake, int n);

// Same, over already-loaded rows (used by run_experiment to avoid re-reads).
AnalysisReport analyze_rows(const std::vector<FeatureVector>& real_rows,
                            const std::vector<FeatureVector>& fake_rows, int n);

void merge_into(AnalysisReport& dst, AnalysisReport&& src);

void save_analysis(const AnalysisReport& report, const std::filesystem::path& path);
AnalysisReport load_analysis(const std::filesystem::path& path);

}  // namespace fractsig
