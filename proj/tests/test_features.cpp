#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>

#include "fractsig/errors.hpp"
#include "fractsig/features.hpp"
#include "fractsig/image.hpp"

using namespace fractsig;
namespace fs = std::filesystem;

namespace {

FeatureParams params64() {
  FeatureParams p;
  p.scales = ScaleGrid::dyadic(64);
  return p;
}

Matrix noise64(uint64_t seed) {
  SynthSpec spec;
  spec.kind = SynthKind::uniform_noise;
  spec.seed = seed;
  return synth_image(spec, 64);
}

}  // namespace

TEST_CASE("constant input propagates the degenerate contract") {
  Matrix flat(64, 64, 0.5);
  FeatureVector fv = compute_features(flat, params64());
  CHECK(fv.fd == 0.0);
  CHECK(fv.fd_degenerate);
  CHECK(fv.entropy_bits == 0.0);
  CHECK(fv.mean == 0.5);
  CHECK(fv.stdev == 0.0);
  CHECK_FALSE(fv.mfs_ok);  // shifted measure has zero mass
  for (double v : fv.lacunarity.values) CHECK(std::isnan(v));
  for (double v : fv.mfs.tau) CHECK(std::isnan(v));
  CHECK(fv.mfs.tau.size() == params64().q_grid.size());
}

TEST_CASE("noise input produces full, in-range features") {
  FeatureVector fv = compute_features(noise64(5), params64());
  CHECK(fv.fd > 1.0);
  CHECK(fv.fd <= 2.0);
  CHECK_FALSE(fv.fd_degenerate);
  CHECK(fv.entropy_bits > 5.0);
  CHECK(fv.entropy_bits <= 8.0);
  CHECK(fv.mfs_ok);
  CHECK(fv.lacunarity.values.size() == params64().scales.scales.size());
  for (double v : fv.lacunarity.values) CHECK(v >= 1.0);
}

TEST_CASE("signed matrices are shifted for mass estimators, not for stats") {
  Matrix signedm = noise64(6);
  for (double& v : signedm.data) v -= 0.5;  // roughly centered residual
  FeatureVector fv = compute_features(signedm, params64());
  CHECK(fv.mean == doctest::Approx(0.0).epsilon(0.05));
  CHECK(fv.mfs_ok);  // shifted measure is valid
}

TEST_CASE("format_double round-trips exactly") {
  for (double v : {0.0, 1.0, -1.5, 0.1, 3.141592653589793, 1e-300, 123456789.123456789,
                   -2.2250738585072014e-308}) {
    CHECK(parse_double(format_double(v)) == v);
  }
}

TEST_CASE("feature files round-trip and stay sorted") {
  const fs::path dir = fs::temp_directory_path() / "fractsig_feature_tests";
  fs::create_directories(dir);
  const fs::path csv = dir / "features.csv";

  const FeatureParams params = params64();
  std::vector<FeatureVector> rows;
  for (int i = 2; i >= 0; --i) {  // deliberately unsorted
    FeatureVector fv = compute_features(noise64(100 + i), params);
    fv.image_id = "img_" + std::to_string(i) + ".png#deadbeef";
    fv.label = "real";
    fv.removed_components = (i == 0) ? 8 : 0;
    rows.push_back(std::move(fv));
  }
  write_feature_files(csv, rows);

  std::vector<FeatureVector> back = read_feature_files(csv);
  REQUIRE(back.size() == 3);
  CHECK(back[0].image_id == "img_0.png#deadbeef");
  CHECK(back[2].image_id == "img_2.png#deadbeef");

  // scalar bits and curves survive the round trip
  for (const FeatureVector& orig : rows) {
    const FeatureVector* found = nullptr;
    for (const FeatureVector& b : back) {
      if (b.image_id == orig.image_id && b.removed_components == orig.removed_components) {
        found = &b;
      }
    }
    REQUIRE(found != nullptr);
    CHECK(found->fd == orig.fd);
    CHECK(found->entropy_bits == orig.entropy_bits);
    CHECK(found->mean == orig.mean);
    CHECK(found->stdev == orig.stdev);
    CHECK(found->mfs_ok == orig.mfs_ok);
    REQUIRE(found->mfs.tau.size() == orig.mfs.tau.size());
    for (size_t i = 0; i < orig.mfs.tau.size(); ++i) {
      CHECK(found->mfs.tau[i] == orig.mfs.tau[i]);
    }
    REQUIRE(found->lacunarity.values.size() == orig.lacunarity.values.size());
    for (size_t i = 0; i < orig.lacunarity.values.size(); ++i) {
      if (std::isnan(orig.lacunarity.values[i])) {
        CHECK(std::isnan(found->lacunarity.values[i]));
      } else {
        CHECK(found->lacunarity.values[i] == orig.lacunarity.values[i]);
      }
    }
  }

  // rewriting the parsed rows reproduces the file byte for byte
  std::ifstream first(csv, std::ios::binary);
  std::string bytes1((std::istreambuf_iterator<char>(first)), {});
  write_feature_files(csv, back);
  std::ifstream second(csv, std::ios::binary);
  std::string bytes2((std::istreambuf_iterator<char>(second)), {});
  CHECK(bytes1 == bytes2);
}

TEST_CASE("feature CSV header is bit-exact") {
  CHECK(std::string(kFeatureCsvHeader) == "image_id,label,n,fd,fd_r2,entropy_bits,mean,std");

  const fs::path dir = fs::temp_directory_path() / "fractsig_feature_tests";
  fs::create_directories(dir);
  const fs::path csv = dir / "header.csv";
  FeatureVector fv = compute_features(noise64(1), params64());
  fv.image_id = "a.png#00000000";
  fv.label = "real";
  write_feature_files(csv, {fv});
  std::ifstream in(csv);
  std::string first;
  std::getline(in, first);
  CHECK(first == "image_id,label,n,fd,fd_r2,entropy_bits,mean,std");
}

TEST_CASE("CSV-unsafe image ids are rejected") {
  FeatureVector fv;
  fv.image_id = "bad,id.png#12345678";
  fv.label = "real";
  const fs::path dir = fs::temp_directory_path() / "fractsig_feature_tests";
  fs::create_directories(dir);
  CHECK_THROWS_AS(write_feature_files(dir / "bad.csv", {fv}), argument_error);
}
