#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fractsig/matrix.hpp"

namespace fractsig {

// Box side lengths used by the box-based estimators. The default grid is
// dyadic ({2,4,...,min_dim/2}); triadic grids serve the Sierpinski oracles.
// Tilings drop partial edge boxes at every scale.
struct ScaleGrid {
  std::vector<int> scales;

  static ScaleGrid dyadic(int min_dim);
  static ScaleGrid triadic(int min_dim);

  // strictly increasing, every scale >= 2, at least 3 entries
  void validate() const;
};

// Binarization rule applied before box counting.
//   mean_normalized: on iff value > global mean of the min-max normalized
//                    matrix (ties off; a constant matrix binarizes all-off)
//   fixed:           on iff normalized value > threshold
//   positive:        on iff raw value > 0 (for masks that are already binary)
struct ThresholdPolicy {
  enum class Kind { mean_normalized, fixed, positive };
  Kind kind = Kind::mean_normalized;
  double threshold = 0.5;  // used by fixed

  static ThresholdPolicy mean() { return {Kind::mean_normalized, 0.5}; }
  static ThresholdPolicy fixed_at(double t) { return {Kind::fixed, t}; }
  static ThresholdPolicy positive() { return {Kind::positive, 0.0}; }

  std::string name() const;
  static ThresholdPolicy parse(const std::string& text);
};

struct BinaryMask {
  int rows = 0;
  int cols = 0;
  std::vector<uint8_t> on;  // row-major, 0/1

  bool any_on() const;
};

BinaryMask binarize(const Matrix& m, const ThresholdPolicy& policy);

struct BoxCountResult {
  double fd = 0.0;
  double r2 = 1.0;
  bool degenerate = false;  // empty mask or too few usable scales
};

// Box-counting dimension: slope of log N(eps) vs log(1/eps) over the grid,
// where N(eps) counts occupied boxes of a non-overlapping eps-tiling.
BoxCountResult box_count_dimension(const Matrix& m, const ScaleGrid& grid,
                                   const ThresholdPolicy& policy);
BoxCountResult box_count_dimension(const BinaryMask& mask, const ScaleGrid& grid);

struct LacunarityCurve {
  std::vector<int> scales;
  std::vector<double> values;  // Lambda(eps); NaN marks an undefined scale
};

// Lambda(eps) = Var(s_i)/E(s_i)^2 + 1 over box sums s_i, population variance.
// Input must be non-negative (shift signed residuals by their minimum first).
LacunarityCurve lacunarity(const Matrix& m, const ScaleGrid& grid);

// Histogram entropy in bits after min-max quantization to `levels` bins.
double shannon_entropy(const Matrix& m, int levels = 256);

struct MfsCurve {
  std::vector<double> q_grid;
  std::vector<double> tau;            // slope of log chi(q,eps) vs log eps
  std::vector<double> alpha;          // d tau / d q (finite differences)
  std::vector<double> f_alpha;        // q*alpha - tau
  std::vector<double> d_q;            // tau/(q-1), interpolated at q = 1
  std::vector<double> regression_r2;  // per-q goodness of fit
};

// Multifractal spectrum of a non-negative measure: box masses are normalized
// per scale, chi(q,eps) sums mu^q over occupied boxes only (evaluated in log
// space so q = -5 cannot overflow). Scales with fewer than 2 occupied boxes
// are dropped; fewer than 3 usable scales is a numeric_error.
MfsCurve multifractal_spectrum(const Matrix& m, const std::vector<double>& q_grid,
                               const ScaleGrid& grid);

// Default moment grid: -5 to 5 in steps of 0.5 (q = 1 included).
std::vector<double> default_q_grid();

struct BasicStats {
  double mean = 0.0;
  double stdev = 0.0;  // population
};

BasicStats basic_stats(const Matrix& m);

}  // namespace fractsig
