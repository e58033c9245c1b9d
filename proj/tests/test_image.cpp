#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "fractsig/errors.hpp"
#include "fractsig/image.hpp"
#include "fractsig/rng.hpp"

using namespace fractsig;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  const fs::path dir = fs::temp_directory_path() / "fractsig_image_tests";
  fs::create_directories(dir);
  return dir;
}

void write_color_png(const fs::path& path, int rows, int cols, uint8_t b, uint8_t g,
                     uint8_t r) {
  cv::Mat m(rows, cols, CV_8UC3, cv::Scalar(b, g, r));
  REQUIRE(cv::imwrite(path.string(), m));
}

}  // namespace

TEST_CASE("load_grayscale: white and red 2x2 PNGs map through luma weights") {
  const fs::path dir = temp_dir();

  write_color_png(dir / "white.png", 2, 2, 255, 255, 255);
  GrayImage white = load_grayscale(dir / "white.png");
  CHECK(white.rows == 2);
  CHECK(white.cols == 2);
  for (double v : white.data) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));

  write_color_png(dir / "red.png", 2, 2, 0, 0, 255);
  GrayImage red = load_grayscale(dir / "red.png");
  for (double v : red.data) CHECK(v == doctest::Approx(0.299).epsilon(1e-9));
}

TEST_CASE("load_grayscale: 8-bit gray pixel 128 becomes 128/255") {
  const fs::path dir = temp_dir();
  cv::Mat m(2, 2, CV_8UC1, cv::Scalar(128));
  REQUIRE(cv::imwrite((dir / "gray128.png").string(), m));
  GrayImage img = load_grayscale(dir / "gray128.png");
  for (double v : img.data) CHECK(v == doctest::Approx(128.0 / 255.0).epsilon(1e-12));
}

TEST_CASE("load_grayscale error paths") {
  const fs::path dir = temp_dir();
  CHECK_THROWS_AS(load_grayscale(dir / "missing.png"), io_error);

  // a file that exists but is not an image
  {
    std::ofstream out(dir / "junk.png");
    out << "this is not a png";
  }
  CHECK_THROWS_AS(load_grayscale(dir / "junk.png"), format_error);
}

TEST_CASE("PNG round-trip is lossless on the 8-bit grid") {
  const fs::path dir = temp_dir();
  Rng rng(7);
  GrayImage img(16, 16);
  for (double& v : img.data) {
    v = static_cast<double>(static_cast<int>(rng.uniform() * 256) % 256) / 255.0;
  }
  save_png(img, dir / "rt.png");
  GrayImage back = load_grayscale(dir / "rt.png");
  REQUIRE(back.data.size() == img.data.size());
  for (size_t i = 0; i < img.data.size(); ++i) CHECK(back.data[i] == img.data[i]);
}

TEST_CASE("center_crop_resize crops the central square") {
  GrayImage img(60, 100);  // 100 wide, 60 tall
  for (int r = 0; r < 60; ++r)
    for (int c = 0; c < 100; ++c) img.at(r, c) = (c >= 20 && c < 80) ? c / 100.0 : 0.0;

  GrayImage out = center_crop_resize(img, 60);
  REQUIRE(out.rows == 60);
  REQUIRE(out.cols == 60);
  // columns 20..79 of the source, all rows
  for (int r = 0; r < 60; ++r)
    for (int c = 0; c < 60; ++c) CHECK(out.at(r, c) == img.at(r, c + 20));
}

TEST_CASE("center_crop_resize identity and idempotence") {
  Rng rng(11);
  GrayImage img(32, 32);
  for (double& v : img.data) v = rng.uniform();

  GrayImage same = center_crop_resize(img, 32);
  CHECK(same.data == img.data);

  GrayImage once = center_crop_resize(img, 16);
  GrayImage twice = center_crop_resize(once, 16);
  CHECK(once.data == twice.data);
}

TEST_CASE("center_crop_resize: constant input stays constant through resampling") {
  GrayImage img(40, 24, 0.5);
  GrayImage out = center_crop_resize(img, 16);
  for (double v : out.data) CHECK(v == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(center_crop_resize(img, 4), argument_error);
}

TEST_CASE("synth constant") {
  SynthSpec spec;
  spec.kind = SynthKind::constant;
  spec.value = 0.5;
  GrayImage img = synth_image(spec, 16);
  CHECK(img.data.size() == 256);
  for (double v : img.data) CHECK(v == 0.5);
}

TEST_CASE("synth sierpinski carpet ones count is 8^depth") {
  SynthSpec spec;
  spec.kind = SynthKind::sierpinski_carpet;

  spec.depth = 1;
  GrayImage c1 = synth_image(spec, 3);
  int ones = 0;
  for (double v : c1.data) ones += v == 1.0;
  CHECK(ones == 8);
  CHECK(c1.at(1, 1) == 0.0);

  spec.depth = 3;
  GrayImage c3 = synth_image(spec, 27);
  long count = 0;
  for (double v : c3.data) count += v == 1.0;
  CHECK(count == 512);  // 8^3

  spec.depth = 2;
  CHECK_THROWS_AS(synth_image(spec, 27), argument_error);
}

TEST_CASE("synth noise is reproducible and checkerboard divides evenly") {
  SynthSpec noise;
  noise.kind = SynthKind::uniform_noise;
  noise.seed = 42;
  GrayImage a = synth_image(noise, 32);
  GrayImage b = synth_image(noise, 32);
  CHECK(a.data == b.data);  // bit-identical
  noise.seed = 43;
  GrayImage c = synth_image(noise, 32);
  CHECK(a.data != c.data);

  SynthSpec checker;
  checker.kind = SynthKind::checkerboard;
  checker.cell = 4;
  GrayImage board = synth_image(checker, 16);
  CHECK(board.at(0, 0) == 1.0);
  CHECK(board.at(0, 4) == 0.0);
  CHECK(board.at(4, 4) == 1.0);
  checker.cell = 5;
  CHECK_THROWS_AS(synth_image(checker, 16), argument_error);
}

TEST_CASE("save_png_normalized maps a signed matrix onto the 8-bit range") {
  const fs::path dir = temp_dir();
  Matrix m(16, 16);
  for (int r = 0; r < 16; ++r)
    for (int c = 0; c < 16; ++c) m.at(r, c) = (r + c) / 30.0 - 0.5;  // spans [-0.5, 0.5]
  save_png_normalized(m, dir / "res.png");
  GrayImage back = load_grayscale(dir / "res.png");
  CHECK(back.min_value() == 0.0);
  CHECK(back.max_value() == 1.0);
}

TEST_CASE("validate_gray_image rejects out-of-range and tiny images") {
  GrayImage ok(8, 8, 0.3);
  CHECK_NOTHROW(validate_gray_image(ok));

  GrayImage tiny(4, 4, 0.3);
  CHECK_THROWS_AS(validate_gray_image(tiny), argument_error);

  GrayImage bad(8, 8, 0.3);
  bad.at(3, 3) = 1.5;
  CHECK_THROWS_AS(validate_gray_image(bad), argument_error);
}
