#include "fractsig/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fractsig/errors.hpp"
#include "io_util.hpp"

namespace fractsig {

using detail::atomic_write;
using detail::curve_from_json;
using detail::curve_to_json;
using nlohmann::json;

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr int kHistogramBins = 40;

double scalar_value(const FeatureVector& fv, const std::string& name) {
  if (name == "fd") return fv.fd;
  if (name == "entropy_bits") return fv.entropy_bits;
  if (name == "mean") return fv.mean;
  if (name == "std") return fv.stdev;
  throw argument_error("unknown scalar feature: " + name);
}

std::vector<const FeatureVector*> rows_at(const std::vector<FeatureVector>& rows, int n) {
  std::vector<const FeatureVector*> out;
  for (const FeatureVector& fv : rows) {
    if (fv.removed_components == n) out.push_back(&fv);
  }
  return out;
}

std::string available_ns(const std::vector<FeatureVector>& rows) {
  std::set<int> ns;
  for (const FeatureVector& fv : rows) ns.insert(fv.removed_components);
  std::ostringstream ss;
  for (int n : ns) ss << n << " ";
  return ss.str();
}

HistogramPair make_histogram(const std::vector<double>& real_vals,
                             const std::vector<double>& fake_vals) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double v : real_vals) { lo = std::min(lo, v); hi = std::max(hi, v); }
  for (double v : fake_vals) { lo = std::min(lo, v); hi = std::max(hi, v); }
  if (!(hi > lo)) hi = lo + 1.0;

  HistogramPair h;
  h.edges.resize(kHistogramBins + 1);
  for (int i = 0; i <= kHistogramBins; ++i) {
    h.edges[i] = lo + (hi - lo) * i / kHistogramBins;
  }
  h.real_counts.assign(kHistogramBins, 0);
  h.fake_counts.assign(kHistogramBins, 0);
  auto fill = [&](const std::vector<double>& vals, std::vector<long>& counts) {
    for (double v : vals) {
      int bin = static_cast<int>(std::floor((v - lo) / (hi - lo) * kHistogramBins));
      bin = std::clamp(bin, 0, kHistogramBins - 1);
      ++counts[bin];
    }
  };
  fill(real_vals, h.real_counts);
  fill(fake_vals, h.fake_counts);
  return h;
}

double mean_of_finite(const std::vector<double>& vals) {
  double acc = 0.0;
  size_t n = 0;
  for (double v : vals) {
    if (std::isfinite(v)) { acc += v; ++n; }
  }
  return n ? acc / n : kNan;
}

// Two-sample D over finite values only; NaN when either side is too small.
double ks_d_or_nan(std::vector<double> a, std::vector<double> b) {
  std::erase_if(a, [](double v) { return !std::isfinite(v); });
  std::erase_if(b, [](double v) { return !std::isfinite(v); });
  if (a.size() < 2 || b.size() < 2) return kNan;
  return ks_two_sample(a, b).statistic_d;
}

json ks_to_json(const KsResult& r) {
  return json{{"d", r.statistic_d},
              {"p", r.p_value},
              {"n1", r.n1},
              {"n2", r.n2},
              {"kind", r.kind == KsResult::Kind::normality ? "normality" : "two_sample"}};
}

KsResult ks_from_json(const json& j) {
  KsResult r;
  r.statistic_d = j.at("d").get<double>();
  r.p_value = j.at("p").get<double>();
  r.n1 = j.at("n1").get<size_t>();
  r.n2 = j.at("n2").get<size_t>();
  r.kind = j.at("kind").get<std::string>() == "normality" ? KsResult::Kind::normality
                                                          : KsResult::Kind::two_sample;
  return r;
}

}  // namespace

const std::vector<std::string>& scalar_feature_names() {
  static const std::vector<std::string> names = {"fd", "entropy_bits", "mean", "std"};
  return names;
}

AnalysisReport analyze_rows(const std::vector<FeatureVector>& real_rows,
                            const std::vector<FeatureVector>& fake_rows, int n) {
  const std::vector<const FeatureVector*> real = rows_at(real_rows, n);
  const std::vector<const FeatureVector*> fake = rows_at(fake_rows, n);
  if (real.empty() || fake.empty()) {
    throw argument_error("component count " + std::to_string(n) +
                         " not present; real file has n in { " + available_ns(real_rows) +
                         "}, fake file has n in { " + available_ns(fake_rows) + "}");
  }
  if (real.size() < 2 || fake.size() < 2) {
    throw argument_error("need at least 2 rows per label at n=" + std::to_string(n));
  }

  AnalysisReport rep;
  rep.n_list = {n};

  // Grids come from the first row that carries curves.
  for (const FeatureVector* fv : real) {
    if (!fv->mfs.q_grid.empty()) { rep.q_grid = fv->mfs.q_grid; break; }
  }
  for (const FeatureVector* fv : real) {
    if (!fv->lacunarity.scales.empty()) { rep.scales = fv->lacunarity.scales; break; }
  }

  auto& scalar_map = rep.scalar[n];
  auto& hist_map = rep.histograms[n];
  for (const std::string& name : scalar_feature_names()) {
    std::vector<double> rv, fv;
    rv.reserve(real.size());
    fv.reserve(fake.size());
    for (const FeatureVector* r : real) rv.push_back(scalar_value(*r, name));
    for (const FeatureVector* f : fake) fv.push_back(scalar_value(*f, name));

    ScalarFeatureKs entry;
    entry.real_vs_fake = ks_two_sample(rv, fv);
    if (rv.size() >= 8) {
      try {
        entry.normality_real = ks_normality(rv);
      } catch (const numeric_error&) {
        entry.normality_real = {};  // zero variance: leave unavailable
      }
    }
    if (fv.size() >= 8) {
      try {
        entry.normality_fake = ks_normality(fv);
      } catch (const numeric_error&) {
        entry.normality_fake = {};
      }
    }
    scalar_map[name] = entry;
    hist_map[name] = make_histogram(rv, fv);
  }

  // Per-q two-sample KS over the multifractal spectrum values f(alpha(q)).
  if (!rep.q_grid.empty()) {
    std::vector<double>& row = rep.mfs_ks[n];
    row.assign(rep.q_grid.size(), kNan);
    MeanMfsCurves& mean = rep.mean_mfs[n];
    mean.q = rep.q_grid;
    mean.alpha_real.assign(rep.q_grid.size(), kNan);
    mean.f_real.assign(rep.q_grid.size(), kNan);
    mean.alpha_fake.assign(rep.q_grid.size(), kNan);
    mean.f_fake.assign(rep.q_grid.size(), kNan);
    for (size_t qi = 0; qi < rep.q_grid.size(); ++qi) {
      std::vector<double> rv, fv, ra, fa;
      for (const FeatureVector* r : real) {
        if (r->mfs_ok && qi < r->mfs.f_alpha.size()) {
          rv.push_back(r->mfs.f_alpha[qi]);
          ra.push_back(r->mfs.alpha[qi]);
        }
      }
      for (const FeatureVector* f : fake) {
        if (f->mfs_ok && qi < f->mfs.f_alpha.size()) {
          fv.push_back(f->mfs.f_alpha[qi]);
          fa.push_back(f->mfs.alpha[qi]);
        }
      }
      row[qi] = ks_d_or_nan(rv, fv);
      mean.alpha_real[qi] = mean_of_finite(ra);
      mean.f_real[qi] = mean_of_finite(rv);
      mean.alpha_fake[qi] = mean_of_finite(fa);
      mean.f_fake[qi] = mean_of_finite(fv);
    }
  }

  // Per-scale two-sample KS over lacunarity values.
  if (!rep.scales.empty()) {
    std::vector<double>& row = rep.lac_ks[n];
    row.assign(rep.scales.size(), kNan);
    MeanLacCurves& mean = rep.mean_lac[n];
    mean.scales = rep.scales;
    mean.real_mean.assign(rep.scales.size(), kNan);
    mean.fake_mean.assign(rep.scales.size(), kNan);
    for (size_t si = 0; si < rep.scales.size(); ++si) {
      std::vector<double> rv, fv;
      for (const FeatureVector* r : real) {
        if (si < r->lacunarity.values.size()) rv.push_back(r->lacunarity.values[si]);
      }
      for (const FeatureVector* f : fake) {
        if (si < f->lacunarity.values.size()) fv.push_back(f->lacunarity.values[si]);
      }
      row[si] = ks_d_or_nan(rv, fv);
      mean.real_mean[si] = mean_of_finite(rv);
      mean.fake_mean[si] = mean_of_finite(fv);
    }
  }

  return rep;
}

AnalysisReport analyze(const std::filesystem::path& features_real,
                       const std::filesystem::path& features_fake, int n) {
  return analyze_rows(read_feature_files(features_real), read_feature_files(features_fake), n);
}

void merge_into(AnalysisReport& dst, AnalysisReport&& src) {
  if (dst.empty()) {
    dst = std::move(src);
    return;
  }
  if (dst.q_grid.empty()) dst.q_grid = src.q_grid;
  if (dst.scales.empty()) dst.scales = src.scales;
  for (int n : src.n_list) {
    if (std::find(dst.n_list.begin(), dst.n_list.end(), n) == dst.n_list.end()) {
      dst.n_list.push_back(n);
    }
  }
  std::sort(dst.n_list.begin(), dst.n_list.end());
  dst.scalar.merge(src.scalar);
  dst.mfs_ks.merge(src.mfs_ks);
  dst.lac_ks.merge(src.lac_ks);
  dst.histograms.merge(src.histograms);
  dst.mean_mfs.merge(src.mean_mfs);
  dst.mean_lac.merge(src.mean_lac);
}

void save_analysis(const AnalysisReport& rep, const std::filesystem::path& path) {
  json j;
  j["n_list"] = rep.n_list;
  j["q_grid"] = rep.q_grid;
  j["scales"] = rep.scales;

  json scalar = json::object();
  for (const auto& [n, feats] : rep.scalar) {
    json per_n = json::object();
    for (const auto& [name, entry] : feats) {
      per_n[name] = {{"normality_real", ks_to_json(entry.normality_real)},
                     {"normality_fake", ks_to_json(entry.normality_fake)},
                     {"real_vs_fake", ks_to_json(entry.real_vs_fake)}};
    }
    scalar[std::to_string(n)] = per_n;
  }
  j["scalar"] = scalar;

  json mfs_ks = json::object(), lac_ks = json::object();
  for (const auto& [n, row] : rep.mfs_ks) mfs_ks[std::to_string(n)] = curve_to_json(row);
  for (const auto& [n, row] : rep.lac_ks) lac_ks[std::to_string(n)] = curve_to_json(row);
  j["mfs_ks"] = mfs_ks;
  j["lac_ks"] = lac_ks;

  json hists = json::object();
  for (const auto& [n, feats] : rep.histograms) {
    json per_n = json::object();
    for (const auto& [name, h] : feats) {
      per_n[name] = {{"edges", h.edges},
                     {"real_counts", h.real_counts},
                     {"fake_counts", h.fake_counts}};
    }
    hists[std::to_string(n)] = per_n;
  }
  j["histograms"] = hists;

  json mfs_mean = json::object();
  for (const auto& [n, m] : rep.mean_mfs) {
    mfs_mean[std::to_string(n)] = {{"q", m.q},
                                   {"alpha_real", curve_to_json(m.alpha_real)},
                                   {"f_real", curve_to_json(m.f_real)},
                                   {"alpha_fake", curve_to_json(m.alpha_fake)},
                                   {"f_fake", curve_to_json(m.f_fake)}};
  }
  j["mean_mfs"] = mfs_mean;

  json lac_mean = json::object();
  for (const auto& [n, m] : rep.mean_lac) {
    lac_mean[std::to_string(n)] = {{"scales", m.scales},
                                   {"real_mean", curve_to_json(m.real_mean)},
                                   {"fake_mean", curve_to_json(m.fake_mean)}};
  }
  j["mean_lac"] = lac_mean;

  atomic_write(path, j.dump(2) + "\n");
}

AnalysisReport load_analysis(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open analysis file: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw format_error("bad analysis JSON in " + path.string() + ": " + e.what());
  }

  AnalysisReport rep;
  rep.n_list = j.at("n_list").get<std::vector<int>>();
  rep.q_grid = j.at("q_grid").get<std::vector<double>>();
  rep.scales = j.at("scales").get<std::vector<int>>();

  for (const auto& [key, per_n] : j.at("scalar").items()) {
    const int n = std::stoi(key);
    for (const auto& [name, entry] : per_n.items()) {
      ScalarFeatureKs e;
      e.normality_real = ks_from_json(entry.at("normality_real"));
      e.normality_fake = ks_from_json(entry.at("normality_fake"));
      e.real_vs_fake = ks_from_json(entry.at("real_vs_fake"));
      rep.scalar[n][name] = e;
    }
  }
  for (const auto& [key, row] : j.at("mfs_ks").items())
    rep.mfs_ks[std::stoi(key)] = curve_from_json(row);
  for (const auto& [key, row] : j.at("lac_ks").items())
    rep.lac_ks[std::stoi(key)] = curve_from_json(row);
  for (const auto& [key, per_n] : j.at("histograms").items()) {
    const int n = std::stoi(key);
    for (const auto& [name, h] : per_n.items()) {
      HistogramPair hp;
      hp.edges = h.at("edges").get<std::vector<double>>();
      hp.real_counts = h.at("real_counts").get<std::vector<long>>();
      hp.fake_counts = h.at("fake_counts").get<std::vector<long>>();
      rep.histograms[n][name] = std::move(hp);
    }
  }
  for (const auto& [key, m] : j.at("mean_mfs").items()) {
    MeanMfsCurves c;
    c.q = m.at("q").get<std::vector<double>>();
    c.alpha_real = curve_from_json(m.at("alpha_real"));
    c.f_real = curve_from_json(m.at("f_real"));
    c.alpha_fake = curve_from_json(m.at("alpha_fake"));
    c.f_fake = curve_from_json(m.at("f_fake"));
    rep.mean_mfs[std::stoi(key)] = std::move(c);
  }
  for (const auto& [key, m] : j.at("mean_lac").items()) {
    MeanLacCurves c;
    c.scales = m.at("scales").get<std::vector<int>>();
    c.real_mean = curve_from_json(m.at("real_mean"));
    c.fake_mean = curve_from_json(m.at("fake_mean"));
    rep.mean_lac[std::stoi(key)] = std::move(c);
  }
  return rep;
}

}  // namespace fractsig
