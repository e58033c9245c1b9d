#include <doctest.h>

#include <cmath>

#include "fractsig/errors.hpp"
#include "fractsig/fractal.hpp"
#include "fractsig/image.hpp"
#include "fractsig/rng.hpp"
#include "support/synthetic.hpp"

using namespace fractsig;

namespace {

Matrix noise_matrix(int side, uint64_t seed) {
  SynthSpec spec;
  spec.kind = SynthKind::uniform_noise;
  spec.seed = seed;
  return synth_image(spec, side);
}

}  // namespace

TEST_CASE("scale grids") {
  ScaleGrid d = ScaleGrid::dyadic(256);
  CHECK(d.scales == std::vector<int>{2, 4, 8, 16, 32, 64, 128});
  ScaleGrid t = ScaleGrid::triadic(243);
  CHECK(t.scales == std::vector<int>{3, 9, 27, 81});

  ScaleGrid bad;
  bad.scales = {2, 4};
  CHECK_THROWS_AS(bad.validate(), argument_error);
  bad.scales = {4, 4, 8};
  CHECK_THROWS_AS(bad.validate(), argument_error);
}

TEST_CASE("binarize mean policy: ties are off, constants go all-off") {
  Matrix flat(8, 8, 0.5);
  BinaryMask mask = binarize(flat, ThresholdPolicy::mean());
  CHECK_FALSE(mask.any_on());

  Matrix two(8, 8, 0.0);
  two.at(0, 0) = 1.0;
  mask = binarize(two, ThresholdPolicy::mean());
  long on = 0;
  for (auto v : mask.on) on += v;
  CHECK(on == 1);  // only the bright pixel exceeds the mean
}

TEST_CASE("box-counting dimension of a filled square is 2") {
  Matrix ones(256, 256, 1.0);
  BoxCountResult res =
      box_count_dimension(ones, ScaleGrid::dyadic(256), ThresholdPolicy::positive());
  CHECK_FALSE(res.degenerate);
  CHECK(res.fd == doctest::Approx(2.0).epsilon(0.01));
  CHECK(res.r2 == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("box-counting dimension of the Sierpinski carpet") {
  SynthSpec spec;
  spec.kind = SynthKind::sierpinski_carpet;
  spec.depth = 5;
  GrayImage carpet = synth_image(spec, 243);

  ScaleGrid grid = ScaleGrid::triadic(243);

  // Exact oracle: at box side 3^k the occupied count is 8^(5-k).
  for (size_t i = 0; i < grid.scales.size(); ++i) {
    const long counted = testsupport::brute_force_box_count(carpet, grid.scales[i]);
    long expected = 1;
    for (int e = 0; e < 5 - static_cast<int>(i) - 1; ++e) expected *= 8;
    CHECK(counted == expected);
  }

  BoxCountResult res = box_count_dimension(carpet, grid, ThresholdPolicy::positive());
  const double analytic = std::log(8.0) / std::log(3.0);  // 1.8927892...
  CHECK_FALSE(res.degenerate);
  CHECK(std::fabs(res.fd - analytic) <= 0.02);
}

TEST_CASE("box-counting dimension of a single pixel is 0") {
  Matrix m(256, 256, 0.0);
  m.at(100, 100) = 1.0;
  BoxCountResult res =
      box_count_dimension(m, ScaleGrid::dyadic(256), ThresholdPolicy::positive());
  CHECK(std::fabs(res.fd) <= 0.02);
  CHECK_FALSE(res.degenerate);
}

TEST_CASE("box-counting: all-off binarization is degenerate fd=0, r2=1") {
  Matrix flat(64, 64, 0.25);
  BoxCountResult res =
      box_count_dimension(flat, ScaleGrid::dyadic(64), ThresholdPolicy::mean());
  CHECK(res.degenerate);
  CHECK(res.fd == 0.0);
  CHECK(res.r2 == 1.0);
}

TEST_CASE("fd is invariant under min-max rescaling") {
  Matrix m = noise_matrix(128, 3);
  Matrix scaled = m;
  for (double& v : scaled.data) v = 0.2 + 0.5 * v;
  const ScaleGrid grid = ScaleGrid::dyadic(128);
  BoxCountResult a = box_count_dimension(m, grid, ThresholdPolicy::mean());
  BoxCountResult b = box_count_dimension(scaled, grid, ThresholdPolicy::mean());
  CHECK(a.fd == doctest::Approx(b.fd).epsilon(1e-9));
}

TEST_CASE("lacunarity of a constant image is exactly 1") {
  Matrix flat(64, 64, 0.3);
  LacunarityCurve curve = lacunarity(flat, ScaleGrid::dyadic(64));
  for (double v : curve.values) CHECK(v == 1.0);
}

TEST_CASE("lacunarity hand-computed case: box sums {0,0,0,64} give 4") {
  // 16x16, one 8x8 quadrant filled with ones.
  Matrix m(16, 16, 0.0);
  for (int r = 8; r < 16; ++r)
    for (int c = 8; c < 16; ++c) m.at(r, c) = 1.0;
  ScaleGrid grid;
  grid.scales = {2, 4, 8};
  LacunarityCurve curve = lacunarity(m, grid);
  // At eps=8: mean 16, population variance 768 -> 768/256 + 1 = 4.
  CHECK(curve.values[2] == 4.0);
}

TEST_CASE("lacunarity of an aligned checkerboard sampled at 2*cell is 1") {
  SynthSpec spec;
  spec.kind = SynthKind::checkerboard;
  spec.cell = 4;
  GrayImage board = synth_image(spec, 64);
  ScaleGrid grid;
  grid.scales = {2, 4, 8};  // eps = 8 = 2*cell: every box holds two on-cells
  LacunarityCurve curve = lacunarity(board, grid);
  CHECK(curve.values[2] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("lacunarity is invariant under positive scaling and rejects negatives") {
  Matrix m = noise_matrix(64, 9);
  ScaleGrid grid = ScaleGrid::dyadic(64);
  LacunarityCurve a = lacunarity(m, grid);
  Matrix scaled = m;
  for (double& v : scaled.data) v *= 2.5;
  LacunarityCurve b = lacunarity(scaled, grid);
  for (size_t i = 0; i < a.values.size(); ++i) {
    CHECK(a.values[i] == doctest::Approx(b.values[i]).epsilon(1e-12));
    CHECK(a.values[i] >= 1.0);
  }

  Matrix neg(16, 16, -0.1);
  CHECK_THROWS_AS(lacunarity(neg, grid), argument_error);
}

TEST_CASE("lacunarity reports zero-mass scales as missing, not an exception") {
  Matrix zero(16, 16, 0.0);
  ScaleGrid grid;
  grid.scales = {2, 4, 8};
  LacunarityCurve curve = lacunarity(zero, grid);
  for (double v : curve.values) CHECK(std::isnan(v));
}

TEST_CASE("shannon entropy exact values") {
  Matrix flat(16, 16, 0.77);
  CHECK(shannon_entropy(flat, 256) == 0.0);

  // 256 levels, each appearing exactly 256 times
  Matrix uniform(256, 256);
  for (int r = 0; r < 256; ++r)
    for (int c = 0; c < 256; ++c) uniform.at(r, c) = r / 255.0;
  CHECK(shannon_entropy(uniform, 256) == 8.0);

  Matrix half(16, 16);
  for (int r = 0; r < 16; ++r)
    for (int c = 0; c < 16; ++c) half.at(r, c) = (c < 8) ? 0.2 : 0.9;
  CHECK(shannon_entropy(half, 256) == 1.0);

  CHECK_THROWS_AS(shannon_entropy(flat, 1), argument_error);
}

TEST_CASE("entropy is bounded by log2(levels)") {
  for (uint64_t seed : {1ull, 2ull, 3ull}) {
    Matrix m = noise_matrix(64, seed);
    for (int levels : {4, 16, 256}) {
      CHECK(shannon_entropy(m, levels) <= std::log2(static_cast<double>(levels)) + 1e-12);
    }
  }
}

TEST_CASE("multifractal spectrum of a uniform measure is the monofractal line") {
  Matrix flat(256, 256, 0.5);
  MfsCurve curve = multifractal_spectrum(flat, default_q_grid(), ScaleGrid::dyadic(256));
  for (size_t i = 0; i < curve.q_grid.size(); ++i) {
    const double q = curve.q_grid[i];
    CHECK(std::fabs(curve.tau[i] - 2.0 * (q - 1.0)) <= 0.05);
    CHECK(std::fabs(curve.alpha[i] - 2.0) <= 0.05);
    CHECK(std::fabs(curve.f_alpha[i] - 2.0) <= 0.05);
    CHECK(curve.regression_r2[i] == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("tau(1) is zero for any valid measure") {
  for (uint64_t seed : {4ull, 5ull}) {
    Matrix m = noise_matrix(128, seed);
    MfsCurve curve = multifractal_spectrum(m, default_q_grid(), ScaleGrid::dyadic(128));
    for (size_t i = 0; i < curve.q_grid.size(); ++i) {
      if (curve.q_grid[i] == 1.0) CHECK(std::fabs(curve.tau[i]) <= 0.01);
    }
  }
}

TEST_CASE("tau(0) equals minus the box-counting dimension of the support") {
  for (uint64_t seed : {6ull, 7ull, 8ull}) {
    Matrix m = noise_matrix(128, seed);
    BinaryMask mask = binarize(m, ThresholdPolicy::mean());
    Matrix support = testsupport::mask_to_matrix(mask);

    const ScaleGrid grid = ScaleGrid::dyadic(128);
    MfsCurve curve = multifractal_spectrum(support, default_q_grid(), grid);
    BoxCountResult fd = box_count_dimension(mask, grid);

    double tau0 = 0;
    for (size_t i = 0; i < curve.q_grid.size(); ++i) {
      if (curve.q_grid[i] == 0.0) tau0 = curve.tau[i];
    }
    CHECK(std::fabs(tau0 + fd.fd) <= 0.1);
  }
}

TEST_CASE("Legendre construction: f = q*alpha - tau holds identically") {
  Matrix m = noise_matrix(64, 10);
  MfsCurve curve = multifractal_spectrum(m, default_q_grid(), ScaleGrid::dyadic(64));
  for (size_t i = 0; i < curve.q_grid.size(); ++i) {
    CHECK(curve.f_alpha[i] ==
          doctest::Approx(curve.q_grid[i] * curve.alpha[i] - curve.tau[i]).epsilon(1e-12));
  }
}

TEST_CASE("monofractal supporting-line inequality is tight") {
  Matrix flat(128, 128, 1.0);
  MfsCurve c = multifractal_spectrum(flat, default_q_grid(), ScaleGrid::dyadic(128));
  for (size_t i = 0; i < c.q_grid.size(); ++i) {
    for (size_t j = 0; j < c.q_grid.size(); ++j) {
      CHECK(c.f_alpha[i] <= c.q_grid[j] * c.alpha[i] - c.tau[j] + 1e-9);
    }
  }
}

TEST_CASE("tau curvature and alpha monotonicity stay within tolerance") {
  for (uint64_t seed : {11ull, 12ull, 13ull}) {
    Matrix m = noise_matrix(128, seed);
    MfsCurve c = multifractal_spectrum(m, default_q_grid(), ScaleGrid::dyadic(128));
    for (size_t i = 1; i + 1 < c.q_grid.size(); ++i) {
      const double second = c.tau[i + 1] - 2.0 * c.tau[i] + c.tau[i - 1];
      CHECK(second >= -0.05);
    }
    for (size_t i = 1; i < c.alpha.size(); ++i) {
      CHECK(c.alpha[i] <= c.alpha[i - 1] + 0.05);
    }
  }
}

TEST_CASE("generalized dimension interpolates D at q=1") {
  Matrix flat(64, 64, 0.5);
  MfsCurve c = multifractal_spectrum(flat, default_q_grid(), ScaleGrid::dyadic(64));
  for (size_t i = 0; i < c.q_grid.size(); ++i) {
    CHECK(std::isfinite(c.d_q[i]));
    CHECK(std::fabs(c.d_q[i] - 2.0) <= 0.05);
  }
}

TEST_CASE("multifractal error paths") {
  Matrix zero(64, 64, 0.0);
  CHECK_THROWS_AS(multifractal_spectrum(zero, default_q_grid(), ScaleGrid::dyadic(64)),
                  numeric_error);

  Matrix neg(64, 64, -1.0);
  CHECK_THROWS_AS(multifractal_spectrum(neg, default_q_grid(), ScaleGrid::dyadic(64)),
                  argument_error);

  // single occupied box at every scale -> fewer than 2 occupied boxes
  Matrix point(64, 64, 0.0);
  point.at(5, 5) = 1.0;
  CHECK_THROWS_AS(multifractal_spectrum(point, default_q_grid(), ScaleGrid::dyadic(64)),
                  numeric_error);
}

TEST_CASE("estimators are deterministic on identical input") {
  Matrix m = noise_matrix(64, 20);
  const ScaleGrid grid = ScaleGrid::dyadic(64);
  MfsCurve a = multifractal_spectrum(m, default_q_grid(), grid);
  MfsCurve b = multifractal_spectrum(m, default_q_grid(), grid);
  CHECK(a.tau == b.tau);
  CHECK(a.f_alpha == b.f_alpha);
  BoxCountResult fa = box_count_dimension(m, grid, ThresholdPolicy::mean());
  BoxCountResult fb = box_count_dimension(m, grid, ThresholdPolicy::mean());
  CHECK(fa.fd == fb.fd);
}

TEST_CASE("basic_stats matches an independent one-pass oracle") {
  Matrix flat(8, 8, 0.5);
  BasicStats s = basic_stats(flat);
  CHECK(s.mean == 0.5);
  CHECK(s.stdev == 0.0);

  Matrix half(8, 8);
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 8; ++c) half.at(r, c) = (c < 4) ? 0.0 : 1.0;
  s = basic_stats(half);
  CHECK(s.mean == 0.5);
  CHECK(s.stdev == 0.5);

  Matrix m = noise_matrix(64, 30);
  s = basic_stats(m);
  // one-pass accumulation oracle
  double sum = 0, sumsq = 0;
  for (double v : m.data) {
    sum += v;
    sumsq += v * v;
  }
  const double n = static_cast<double>(m.data.size());
  const double mean = sum / n;
  const double stdev = std::sqrt(sumsq / n - mean * mean);
  CHECK(s.mean == doctest::Approx(mean).epsilon(1e-12));
  CHECK(s.stdev == doctest::Approx(stdev).epsilon(1e-12));

  Matrix one(1, 1, 0.5);
  CHECK_THROWS_AS(basic_stats(one), argument_error);
}
