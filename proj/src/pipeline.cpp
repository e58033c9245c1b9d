#include "fractsig/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "fractsig/errors.hpp"
#include "fractsig/image.hpp"
#include "fractsig/pca.hpp"
#include "fractsig/report.hpp"
#include "fractsig/rng.hpp"
#include "io_util.hpp"

namespace fractsig {

using detail::atomic_write;

namespace {

constexpr const char* kVersion = "0.1.0";

uint64_t fnv1a64(const void* data, size_t len, uint64_t seed = 14695981039346656037ull) {
  const auto* p = static_cast<const unsigned char*>(data);
  uint64_t h = seed;
  for (size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

uint64_t hash_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot read " + path.string());
  uint64_t h = 14695981039346656037ull;
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    h = fnv1a64(buf, static_cast<size_t>(in.gcount()), h);
    if (!in) break;
  }
  return h;
}

std::string hex16(uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string hex8(uint64_t h) { return hex16(h).substr(0, 8); }

bool has_image_extension(const std::filesystem::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

std::vector<std::filesystem::path> list_images(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec) || ec) {
    throw io_error("not a directory: " + dir.string());
  }
  std::vector<std::filesystem::path> rel;
  for (auto it = std::filesystem::recursive_directory_iterator(dir, ec);
       it != std::filesystem::recursive_directory_iterator(); it.increment(ec)) {
    if (ec) throw io_error("cannot scan " + dir.string() + ": " + ec.message());
    if (it->is_regular_file() && has_image_extension(it->path())) {
      rel.push_back(std::filesystem::relative(it->path(), dir));
    }
  }
  std::sort(rel.begin(), rel.end(),
            [](const auto& a, const auto& b) { return a.string() < b.string(); });
  return rel;
}

// Deterministic subsample: Fisher-Yates with the configured seed, then the
// selection re-sorted so output order stays path-ordered.
std::vector<std::filesystem::path> subsample(std::vector<std::filesystem::path> files,
                                             int max_images, uint64_t seed) {
  if (max_images <= 0 || files.size() <= static_cast<size_t>(max_images)) return files;
  Rng rng(seed);
  for (size_t i = files.size() - 1; i > 0; --i) {
    const size_t j = rng.next_u64() % (i + 1);
    std::swap(files[i], files[j]);
  }
  files.resize(static_cast<size_t>(max_images));
  std::sort(files.begin(), files.end(),
            [](const auto& a, const auto& b) { return a.string() < b.string(); });
  return files;
}

struct StageTimer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  long long ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start)
        .count();
  }
};

}  // namespace

std::string image_id_for(const std::filesystem::path& dataset_dir,
                         const std::filesystem::path& rel) {
  return rel.generic_string() + "#" + hex8(hash_file(dataset_dir / rel));
}

ExtractSummary extract_features(const std::filesystem::path& dataset_dir,
                                const std::string& label, const std::vector<int>& n_list,
                                const Config& cfg, const std::filesystem::path& out_csv) {
  if (label != "real" && label != "fake") {
    throw argument_error("label must be 'real' or 'fake'");
  }
  if (n_list.empty()) throw argument_error("component list is empty");
  const FeatureParams params = cfg.feature_params();

  ExtractSummary summary;
  summary.csv_path = out_csv;

  std::vector<std::filesystem::path> files = list_images(dataset_dir);
  summary.images_found = files.size();
  if (files.empty()) throw io_error("no decodable images in " + dataset_dir.string());
  files = subsample(std::move(files), cfg.max_images, cfg.seed);
  summary.images_used = files.size();

  // Resume: keep every existing row whose key is still wanted.
  std::map<FeatureKey, FeatureVector> existing;
  if (std::filesystem::exists(out_csv)) {
    existing = index_features(read_feature_files(out_csv));
  }

  struct Slot {
    std::vector<FeatureVector> rows;
    std::string error;
    std::filesystem::path rel;
  };
  std::vector<Slot> slots(files.size());
  for (size_t i = 0; i < files.size(); ++i) slots[i].rel = files[i];

  std::atomic<size_t> next{0};
  std::mutex existing_mutex;

  auto worker = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= files.size()) return;
      Slot& slot = slots[i];
      try {
        const std::string id = image_id_for(dataset_dir, slot.rel);

        // All n present already -> reuse without decoding.
        bool all_present = true;
        {
          std::lock_guard<std::mutex> lock(existing_mutex);
          for (int n : n_list) {
            if (!existing.count({id, n})) {
              all_present = false;
              break;
            }
          }
          if (all_present) {
            for (int n : n_list) slot.rows.push_back(existing.at({id, n}));
            continue;
          }
        }

        GrayImage img = load_grayscale(dataset_dir / slot.rel);
        img = center_crop_resize(img, cfg.side);
        validate_gray_image(img);
        const PcaDecomposition dec = pca_decompose(img);

        for (int n : n_list) {
          {
            std::lock_guard<std::mutex> lock(existing_mutex);
            auto it = existing.find({id, n});
            if (it != existing.end()) {
              slot.rows.push_back(it->second);
              continue;
            }
          }
          if (n > dec.component_count()) {
            throw numeric_error("n=" + std::to_string(n) + " exceeds component count " +
                                std::to_string(dec.component_count()));
          }
          Matrix target;
          if (n == 0) {
            target = img;  // raw-image features
          } else {
            target = residual(img, dec, n).data;
          }
          FeatureVector fv = compute_features(target, params);
          fv.image_id = id;
          fv.label = label;
          fv.removed_components = n;
          slot.rows.push_back(std::move(fv));
        }
      } catch (const std::exception& e) {
        slot.rows.clear();
        slot.error = e.what();
      }
    }
  };

  const int nworkers = std::max(1, cfg.workers);
  std::vector<std::thread> pool;
  for (int t = 1; t < nworkers; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  std::vector<FeatureVector> rows;
  size_t reused = 0;
  for (Slot& slot : slots) {
    if (!slot.error.empty()) {
      summary.skipped.push_back({slot.rel.generic_string(), slot.error});
      continue;
    }
    ++summary.processed;
    for (FeatureVector& fv : slot.rows) {
      if (existing.count({fv.image_id, fv.removed_components})) ++reused;
      rows.push_back(std::move(fv));
    }
  }
  // Rows from earlier runs whose files are no longer selected are dropped:
  // the file always mirrors (current selection) x n_list.
  summary.reused_rows = reused;
  summary.written_rows = rows.size();
  if (rows.empty()) {
    throw io_error("no image in " + dataset_dir.string() + " could be processed");
  }

  if (!out_csv.parent_path().empty()) {
    std::filesystem::create_directories(out_csv.parent_path());
  }
  write_feature_files(out_csv, std::move(rows));

  // Extraction parameters live next to the data so rows stay interpretable
  // (notably the binarization policy and the PCA sampling convention).
  nlohmann::json meta;
  meta["version"] = kVersion;
  meta["label"] = label;
  meta["side"] = cfg.side;
  meta["levels"] = cfg.levels;
  meta["threshold"] = params.threshold.name();
  meta["q_grid"] = params.q_grid;
  meta["scales"] = params.scales.scales;
  meta["n_list"] = n_list;
  meta["pca_convention"] = "rows-as-samples";
  atomic_write(out_csv.string() + ".meta.json", meta.dump(2) + "\n");
  return summary;
}

RunResult run_experiment(const std::filesystem::path& config_path) {
  RunResult result;
  nlohmann::json manifest;
  manifest["version"] = kVersion;

  auto fail = [&](const std::string& stage, int code, const std::string& msg) {
    result.exit_code = code;
    result.failed_stage = stage;
    result.message = msg;
    return result;
  };

  Config cfg;
  try {
    cfg = parse_config(config_path);
    manifest["config_hash"] = hex16(hash_file(config_path));
    manifest["config_path"] = config_path.string();
  } catch (const io_error& e) {
    return fail("config", 2, e.what());
  } catch (const std::exception& e) {
    return fail("config", 1, e.what());
  }

  if (cfg.real_dir.empty() || cfg.fake_dir.empty()) {
    return fail("config", 1, "config must set real_dir and fake_dir");
  }

  const std::filesystem::path out_dir = cfg.out_dir;
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) return fail("config", 2, "cannot create out_dir " + out_dir.string());

  auto summarize = [](const ExtractSummary& s) {
    nlohmann::json j;
    j["csv"] = s.csv_path.string();
    j["images_found"] = s.images_found;
    j["images_used"] = s.images_used;
    j["processed"] = s.processed;
    j["reused_rows"] = s.reused_rows;
    j["written_rows"] = s.written_rows;
    nlohmann::json skipped = nlohmann::json::array();
    for (const SkippedImage& sk : s.skipped) {
      skipped.push_back({{"path", sk.relative_path}, {"reason", sk.reason}});
    }
    j["skipped"] = skipped;
    return j;
  };

  const std::filesystem::path real_csv = out_dir / "features_real.csv";
  const std::filesystem::path fake_csv = out_dir / "features_fake.csv";

  try {
    StageTimer t;
    ExtractSummary s = extract_features(cfg.real_dir, "real", cfg.n_list, cfg, real_csv);
    manifest["extract_real"] = summarize(s);
    manifest["timings_ms"]["extract_real"] = t.ms();
  } catch (const argument_error& e) {
    return fail("extract_real", 1, e.what());
  } catch (const numeric_error& e) {
    return fail("extract_real", 3, e.what());
  } catch (const std::exception& e) {
    return fail("extract_real", 2, e.what());
  }

  try {
    StageTimer t;
    ExtractSummary s = extract_features(cfg.fake_dir, "fake", cfg.n_list, cfg, fake_csv);
    manifest["extract_fake"] = summarize(s);
    manifest["timings_ms"]["extract_fake"] = t.ms();
  } catch (const argument_error& e) {
    return fail("extract_fake", 1, e.what());
  } catch (const numeric_error& e) {
    return fail("extract_fake", 3, e.what());
  } catch (const std::exception& e) {
    return fail("extract_fake", 2, e.what());
  }

  AnalysisReport merged;
  try {
    StageTimer t;
    const std::vector<FeatureVector> real_rows = read_feature_files(real_csv);
    const std::vector<FeatureVector> fake_rows = read_feature_files(fake_csv);
    for (int n : cfg.n_list) {
      merge_into(merged, analyze_rows(real_rows, fake_rows, n));
    }
    save_analysis(merged, out_dir / "analysis.json");
    manifest["timings_ms"]["analyze"] = t.ms();
  } catch (const argument_error& e) {
    return fail("analyze", 1, e.what());
  } catch (const numeric_error& e) {
    return fail("analyze", 3, e.what());
  } catch (const std::exception& e) {
    return fail("analyze", 2, e.what());
  }

  try {
    StageTimer t;
    const auto emitted = render_report(merged, out_dir);
    manifest["timings_ms"]["report"] = t.ms();
    nlohmann::json files = nlohmann::json::array();
    for (const auto& p : emitted) files.push_back(p.filename().string());
    manifest["report_files"] = files;
  } catch (const std::exception& e) {
    return fail("report", 2, e.what());
  }

  nlohmann::json n_list = nlohmann::json::array();
  for (int n : cfg.n_list) n_list.push_back(n);
  manifest["n_list"] = n_list;
  manifest["workers"] = cfg.workers;

  result.manifest_path = out_dir / "run_manifest.json";
  try {
    atomic_write(result.manifest_path, manifest.dump(2) + "\n");
  } catch (const std::exception& e) {
    return fail("manifest", 2, e.what());
  }
  return result;
}

}  // namespace fractsig
