// fractsig: residual fractal-feature extraction and KS analysis for
// real-vs-generated image datasets.
#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fractsig/analysis.hpp"
#include "fractsig/config.hpp"
#include "fractsig/errors.hpp"
#include "fractsig/image.hpp"
#include "fractsig/pca.hpp"
#include "fractsig/pipeline.hpp"
#include "fractsig/report.hpp"

namespace {

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const fractsig::argument_error*>(&e)) return 1;
  if (dynamic_cast<const fractsig::numeric_error*>(&e)) return 3;
  return 2;  // io_error, format_error, anything else file-shaped
}

void print_extract_summary(const fractsig::ExtractSummary& s) {
  std::cout << "wrote " << s.csv_path.string() << " (" << s.written_rows << " rows, "
            << s.reused_rows << " reused)\n";
  std::cout << "images: " << s.images_found << " found, " << s.images_used << " used, "
            << s.processed << " processed, " << s.skipped.size() << " skipped\n";
  for (const auto& sk : s.skipped) {
    std::cout << "  skipped " << sk.relative_path << ": " << sk.reason << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Low-correlation signal analysis: PCA residuals, fractal features, KS tests"};
  app.require_subcommand(1);

  // --- extract ---
  auto* extract = app.add_subcommand("extract", "Extract features from an image directory");
  std::string ex_dir, ex_label, ex_components = "0,24,26,28,30,32", ex_out, ex_config;
  extract->add_option("--dir", ex_dir, "dataset directory")->required();
  extract->add_option("--label", ex_label, "real or fake")->required();
  extract->add_option("--components", ex_components, "comma-separated component counts");
  extract->add_option("--out", ex_out, "output feature CSV path")->required();
  extract->add_option("--config", ex_config, "optional config file for grids/threshold");

  // --- analyze ---
  auto* analyze_cmd = app.add_subcommand("analyze", "KS comparison of two feature files");
  std::string an_real, an_fake, an_out;
  std::string an_components;
  analyze_cmd->add_option("--real", an_real, "real feature CSV")->required();
  analyze_cmd->add_option("--fake", an_fake, "fake feature CSV")->required();
  analyze_cmd->add_option("--components", an_components, "component count(s) to analyze")
      ->required();
  analyze_cmd->add_option("--out", an_out, "output directory")->required();

  // --- report ---
  auto* report_cmd = app.add_subcommand("report", "Render tables and SVG plots");
  std::string rp_analysis, rp_out;
  report_cmd->add_option("--analysis", rp_analysis, "analysis JSON file")->required();
  report_cmd->add_option("--out", rp_out, "output directory")->required();

  // --- run ---
  auto* run_cmd = app.add_subcommand("run", "Full experiment from a config file");
  std::string run_config;
  run_cmd->add_option("--config", run_config, "key=value config file")->required();

  // --- residual (debug dumps) ---
  auto* residual_cmd =
      app.add_subcommand("residual", "Dump reconstruction and residual PNGs for one image");
  std::string rs_image, rs_out;
  int rs_components = 32, rs_side = 256;
  residual_cmd->add_option("--image", rs_image, "input PNG/JPEG")->required();
  residual_cmd->add_option("--components", rs_components, "components to remove");
  residual_cmd->add_option("--side", rs_side, "analysis side");
  residual_cmd->add_option("--out", rs_out, "output directory")->required();

  // --- synth ---
  auto* synth_cmd = app.add_subcommand("synth", "Write a deterministic synthetic image");
  std::string sy_kind, sy_out;
  int sy_side = 256, sy_depth = 1, sy_cell = 8;
  double sy_value = 0.5;
  uint64_t sy_seed = 0;
  synth_cmd->add_option("--kind", sy_kind, "constant|noise|carpet|checker")->required();
  synth_cmd->add_option("--side", sy_side, "image side in pixels");
  synth_cmd->add_option("--out", sy_out, "output PNG path")->required();
  synth_cmd->add_option("--value", sy_value, "constant intensity");
  synth_cmd->add_option("--seed", sy_seed, "noise seed");
  synth_cmd->add_option("--depth", sy_depth, "carpet recursion depth");
  synth_cmd->add_option("--cell", sy_cell, "checkerboard cell size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*extract) {
      fractsig::Config cfg;
      if (!ex_config.empty()) cfg = fractsig::parse_config(ex_config);
      const std::vector<int> n_list = fractsig::parse_int_list(ex_components);
      print_extract_summary(fractsig::extract_features(ex_dir, ex_label, n_list, cfg, ex_out));
      return 0;
    }
    if (*analyze_cmd) {
      fractsig::AnalysisReport merged;
      const std::vector<fractsig::FeatureVector> real_rows =
          fractsig::read_feature_files(an_real);
      const std::vector<fractsig::FeatureVector> fake_rows =
          fractsig::read_feature_files(an_fake);
      for (int n : fractsig::parse_int_list(an_components)) {
        fractsig::merge_into(merged, fractsig::analyze_rows(real_rows, fake_rows, n));
      }
      std::filesystem::create_directories(an_out);
      const auto path = std::filesystem::path(an_out) / "analysis.json";
      fractsig::save_analysis(merged, path);
      std::cout << "wrote " << path.string() << "\n";
      return 0;
    }
    if (*report_cmd) {
      const auto analysis = fractsig::load_analysis(rp_analysis);
      const auto emitted = fractsig::render_report(analysis, rp_out);
      std::cout << "wrote " << emitted.size() << " files to " << rp_out << "\n";
      return 0;
    }
    if (*run_cmd) {
      const fractsig::RunResult r = fractsig::run_experiment(run_config);
      if (r.exit_code != 0) {
        std::cerr << "stage '" << r.failed_stage << "' failed: " << r.message << "\n";
        return r.exit_code;
      }
      std::cout << "run complete; manifest at " << r.manifest_path.string() << "\n";
      return 0;
    }
    if (*residual_cmd) {
      fractsig::GrayImage img = fractsig::load_grayscale(rs_image);
      img = fractsig::center_crop_resize(img, rs_side);
      const fractsig::PcaDecomposition dec = fractsig::pca_decompose(img);
      const fractsig::Matrix rec = fractsig::reconstruct(dec, rs_components);
      const fractsig::ResidualImage res = fractsig::residual(img, dec, rs_components);
      std::filesystem::create_directories(rs_out);
      const std::string tag = "_n" + std::to_string(rs_components) + ".png";
      fractsig::save_png_normalized(rec, std::filesystem::path(rs_out) / ("reconstruction" + tag));
      fractsig::save_png_normalized(res.data, std::filesystem::path(rs_out) / ("residual" + tag));
      std::cout << "wrote reconstruction" << tag << " and residual" << tag << " to " << rs_out
                << "\n";
      return 0;
    }
    if (*synth_cmd) {
      fractsig::SynthSpec spec;
      if (sy_kind == "constant") {
        spec.kind = fractsig::SynthKind::constant;
        spec.value = sy_value;
      } else if (sy_kind == "noise") {
        spec.kind = fractsig::SynthKind::uniform_noise;
        spec.seed = sy_seed;
      } else if (sy_kind == "carpet") {
        spec.kind = fractsig::SynthKind::sierpinski_carpet;
        spec.depth = sy_depth;
      } else if (sy_kind == "checker") {
        spec.kind = fractsig::SynthKind::checkerboard;
        spec.cell = sy_cell;
      } else {
        throw fractsig::argument_error("unknown synth kind: " + sy_kind);
      }
      const std::filesystem::path out_path(sy_out);
      if (!out_path.parent_path().empty()) {
        std::filesystem::create_directories(out_path.parent_path());
      }
      fractsig::save_png(fractsig::synth_image(spec, sy_side), sy_out);
      std::cout << "wrote " << sy_out << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return 1;
}
