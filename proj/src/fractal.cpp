#include "fractsig/fractal.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "fractsig/errors.hpp"

namespace fractsig {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 1.0;
};

// Ordinary least squares on (x, y); r2 = 1 when y is (near) constant, since
// the constant model fits exactly.
LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
  const size_t n = xs.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double denom = n * sxx - sx * sx;
  LineFit fit;
  if (std::fabs(denom) < 1e-14) return fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;

  const double mean_y = sy / n;
  double ss_tot = 0, ss_res = 0;
  for (size_t i = 0; i < n; ++i) {
    const double e = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss_res += e * e;
    const double d = ys[i] - mean_y;
    ss_tot += d * d;
  }
  fit.r2 = (ss_tot < 1e-14) ? 1.0 : 1.0 - ss_res / ss_tot;
  return fit;
}

// Box sums of a non-overlapping eps-tiling; partial edge boxes are dropped.
std::vector<double> box_sums(const Matrix& m, int eps) {
  const int nb_r = m.rows / eps;
  const int nb_c = m.cols / eps;
  std::vector<double> sums(static_cast<size_t>(nb_r) * nb_c, 0.0);
  for (int r = 0; r < nb_r * eps; ++r) {
    const int br = r / eps;
    for (int c = 0; c < nb_c * eps; ++c) {
      sums[static_cast<size_t>(br) * nb_c + c / eps] += m.at(r, c);
    }
  }
  return sums;
}

}  // namespace

ScaleGrid ScaleGrid::dyadic(int min_dim) {
  ScaleGrid grid;
  for (int eps = 2; eps <= min_dim / 2; eps *= 2) grid.scales.push_back(eps);
  grid.validate();
  return grid;
}

ScaleGrid ScaleGrid::triadic(int min_dim) {
  ScaleGrid grid;
  for (int eps = 3; eps <= min_dim / 2; eps *= 3) grid.scales.push_back(eps);
  grid.validate();
  return grid;
}

void ScaleGrid::validate() const {
  if (scales.size() < 3) {
    throw argument_error("scale grid needs at least 3 scales, got " +
                         std::to_string(scales.size()));
  }
  int prev = 1;
  for (int eps : scales) {
    if (eps < 2 || eps <= prev) {
      throw argument_error("scales must be strictly increasing and >= 2");
    }
    prev = eps;
  }
}

std::string ThresholdPolicy::name() const {
  switch (kind) {
    case Kind::mean_normalized: return "mean";
    case Kind::positive: return "positive";
    case Kind::fixed: return "fixed:" + std::to_string(threshold);
  }
  return "?";
}

ThresholdPolicy ThresholdPolicy::parse(const std::string& text) {
  if (text == "mean") return mean();
  if (text == "positive") return positive();
  if (text.rfind("fixed:", 0) == 0) {
    try {
      return fixed_at(std::stod(text.substr(6)));
    } catch (const std::exception&) {
      throw argument_error("bad fixed threshold: " + text);
    }
  }
  throw argument_error("unknown threshold policy: " + text +
                       " (expected mean, positive, or fixed:<t>)");
}

bool BinaryMask::any_on() const {
  for (uint8_t v : on)
    if (v) return true;
  return false;
}

BinaryMask binarize(const Matrix& m, const ThresholdPolicy& policy) {
  BinaryMask mask;
  mask.rows = m.rows;
  mask.cols = m.cols;
  mask.on.assign(m.data.size(), 0);
  if (m.empty()) return mask;

  switch (policy.kind) {
    case ThresholdPolicy::Kind::positive: {
      for (size_t i = 0; i < m.data.size(); ++i) mask.on[i] = m.data[i] > 0.0 ? 1 : 0;
      break;
    }
    case ThresholdPolicy::Kind::mean_normalized: {
      // value > mean of the normalized matrix is equivalent to raw > raw mean
      // whenever max > min; a constant matrix binarizes all-off (ties off).
      const double lo = m.min_value();
      const double hi = m.max_value();
      if (hi <= lo) break;
      const double mean = std::accumulate(m.data.begin(), m.data.end(), 0.0) /
                          static_cast<double>(m.data.size());
      for (size_t i = 0; i < m.data.size(); ++i) mask.on[i] = m.data[i] > mean ? 1 : 0;
      break;
    }
    case ThresholdPolicy::Kind::fixed: {
      const double lo = m.min_value();
      const double hi = m.max_value();
      if (hi <= lo) {
        if (0.0 > policy.threshold) mask.on.assign(m.data.size(), 1);
        break;
      }
      for (size_t i = 0; i < m.data.size(); ++i) {
        mask.on[i] = ((m.data[i] - lo) / (hi - lo)) > policy.threshold ? 1 : 0;
      }
      break;
    }
  }
  return mask;
}

BoxCountResult box_count_dimension(const BinaryMask& mask, const ScaleGrid& grid) {
  grid.validate();
  if (!mask.any_on()) return {0.0, 1.0, true};

  std::vector<double> xs, ys;
  for (int eps : grid.scales) {
    const int nb_r = mask.rows / eps;
    const int nb_c = mask.cols / eps;
    if (nb_r == 0 || nb_c == 0) continue;
    std::vector<uint8_t> occupied(static_cast<size_t>(nb_r) * nb_c, 0);
    for (int r = 0; r < nb_r * eps; ++r) {
      const int br = r / eps;
      for (int c = 0; c < nb_c * eps; ++c) {
        if (mask.on[static_cast<size_t>(r) * mask.cols + c]) {
          occupied[static_cast<size_t>(br) * nb_c + c / eps] = 1;
        }
      }
    }
    long count = 0;
    for (uint8_t v : occupied) count += v;
    if (count == 0) continue;  // all on-pixels fell in dropped edge strips
    xs.push_back(std::log(1.0 / eps));
    ys.push_back(std::log(static_cast<double>(count)));
  }

  if (xs.size() < 2) return {0.0, 1.0, true};
  const LineFit fit = fit_line(xs, ys);
  return {fit.slope, fit.r2, false};
}

BoxCountResult box_count_dimension(const Matrix& m, const ScaleGrid& grid,
                                   const ThresholdPolicy& policy) {
  return box_count_dimension(binarize(m, policy), grid);
}

LacunarityCurve lacunarity(const Matrix& m, const ScaleGrid& grid) {
  grid.validate();
  for (double v : m.data) {
    if (!(v >= 0.0)) {
      throw argument_error("lacunarity input must be non-negative; shift signed data first");
    }
  }

  LacunarityCurve curve;
  curve.scales = grid.scales;
  curve.values.assign(grid.scales.size(), kNan);
  for (size_t s = 0; s < grid.scales.size(); ++s) {
    const int eps = grid.scales[s];
    if (m.rows / eps == 0 || m.cols / eps == 0) continue;
    const std::vector<double> sums = box_sums(m, eps);
    const double n = static_cast<double>(sums.size());
    const double mean = std::accumulate(sums.begin(), sums.end(), 0.0) / n;
    if (mean == 0.0) continue;  // undefined at this scale, reported as NaN
    double var = 0.0;
    for (double v : sums) var += (v - mean) * (v - mean);
    var /= n;
    curve.values[s] = var / (mean * mean) + 1.0;
  }
  return curve;
}

double shannon_entropy(const Matrix& m, int levels) {
  if (levels < 2) throw argument_error("levels must be >= 2");
  if (m.empty()) throw argument_error("empty matrix");
  for (double v : m.data) {
    if (!std::isfinite(v)) throw argument_error("non-finite value in entropy input");
  }

  const double lo = m.min_value();
  const double hi = m.max_value();
  std::vector<long> hist(levels, 0);
  if (hi <= lo) {
    hist[0] = static_cast<long>(m.data.size());
  } else {
    for (double v : m.data) {
      int bin = static_cast<int>(std::floor((v - lo) / (hi - lo) * levels));
      if (bin >= levels) bin = levels - 1;  // max value maps to the top bin
      ++hist[bin];
    }
  }

  const double total = static_cast<double>(m.data.size());
  double h = 0.0;
  for (long count : hist) {
    if (count == 0) continue;
    const double p = count / total;
    h -= p * std::log2(p);
  }
  return h;
}

MfsCurve multifractal_spectrum(const Matrix& m, const std::vector<double>& q_grid,
                               const ScaleGrid& grid) {
  grid.validate();
  if (q_grid.size() < 3) throw argument_error("q grid needs at least 3 points");
  for (size_t i = 1; i < q_grid.size(); ++i) {
    if (!(q_grid[i] > q_grid[i - 1])) throw argument_error("q grid must be strictly increasing");
  }
  double total_mass = 0.0;
  for (double v : m.data) {
    if (!(v >= 0.0)) {
      throw argument_error("multifractal measure must be non-negative; shift signed data first");
    }
    total_mass += v;
  }
  if (total_mass <= 0.0) throw numeric_error("multifractal measure has zero total mass");

  // Per usable scale: log of the normalized masses of occupied boxes.
  std::vector<double> log_eps;
  std::vector<std::vector<double>> log_mu;
  for (int eps : grid.scales) {
    if (m.rows / eps == 0 || m.cols / eps == 0) continue;
    const std::vector<double> sums = box_sums(m, eps);
    double scale_total = std::accumulate(sums.begin(), sums.end(), 0.0);
    if (scale_total <= 0.0) continue;
    std::vector<double> lm;
    for (double s : sums) {
      if (s > 0.0) lm.push_back(std::log(s / scale_total));
    }
    if (lm.size() < 2) continue;  // partition function degenerate at this scale
    log_eps.push_back(std::log(static_cast<double>(eps)));
    log_mu.push_back(std::move(lm));
  }
  if (log_eps.size() < 3) {
    throw numeric_error("fewer than 3 usable scales for the multifractal spectrum");
  }

  MfsCurve curve;
  curve.q_grid = q_grid;
  const size_t nq = q_grid.size();
  curve.tau.resize(nq);
  curve.regression_r2.resize(nq);

  // log chi(q,eps) = logsumexp(q * log mu_i); stable for strongly negative q.
  std::vector<double> ys(log_eps.size());
  for (size_t qi = 0; qi < nq; ++qi) {
    const double q = q_grid[qi];
    for (size_t s = 0; s < log_eps.size(); ++s) {
      const std::vector<double>& lm = log_mu[s];
      double peak = -std::numeric_limits<double>::infinity();
      for (double v : lm) peak = std::max(peak, q * v);
      double acc = 0.0;
      for (double v : lm) acc += std::exp(q * v - peak);
      ys[s] = peak + std::log(acc);
    }
    const LineFit fit = fit_line(log_eps, ys);
    curve.tau[qi] = fit.slope;
    curve.regression_r2[qi] = fit.r2;
  }

  // alpha = d tau / d q, central differences inside, one-sided at the ends.
  curve.alpha.resize(nq);
  for (size_t i = 0; i < nq; ++i) {
    if (i == 0) {
      curve.alpha[i] = (curve.tau[1] - curve.tau[0]) / (q_grid[1] - q_grid[0]);
    } else if (i == nq - 1) {
      curve.alpha[i] = (curve.tau[i] - curve.tau[i - 1]) / (q_grid[i] - q_grid[i - 1]);
    } else {
      curve.alpha[i] = (curve.tau[i + 1] - curve.tau[i - 1]) / (q_grid[i + 1] - q_grid[i - 1]);
    }
  }

  curve.f_alpha.resize(nq);
  for (size_t i = 0; i < nq; ++i) {
    curve.f_alpha[i] = q_grid[i] * curve.alpha[i] - curve.tau[i];
  }

  // D(q) = tau/(q-1); the removable singularity at q = 1 is filled by linear
  // interpolation between the neighbouring entries.
  curve.d_q.assign(nq, kNan);
  for (size_t i = 0; i < nq; ++i) {
    if (std::fabs(q_grid[i] - 1.0) > 1e-9) {
      curve.d_q[i] = curve.tau[i] / (q_grid[i] - 1.0);
    }
  }
  for (size_t i = 0; i < nq; ++i) {
    if (!std::isnan(curve.d_q[i])) continue;
    if (i > 0 && i + 1 < nq && !std::isnan(curve.d_q[i - 1]) && !std::isnan(curve.d_q[i + 1])) {
      const double t = (q_grid[i] - q_grid[i - 1]) / (q_grid[i + 1] - q_grid[i - 1]);
      curve.d_q[i] = curve.d_q[i - 1] + t * (curve.d_q[i + 1] - curve.d_q[i - 1]);
    } else if (i > 0 && !std::isnan(curve.d_q[i - 1])) {
      curve.d_q[i] = curve.d_q[i - 1];
    } else if (i + 1 < nq && !std::isnan(curve.d_q[i + 1])) {
      curve.d_q[i] = curve.d_q[i + 1];
    }
  }

  return curve;
}

std::vector<double> default_q_grid() {
  std::vector<double> q;
  for (int i = -10; i <= 10; ++i) q.push_back(i * 0.5);
  return q;
}

BasicStats basic_stats(const Matrix& m) {
  if (m.data.size() < 2) throw argument_error("basic_stats needs at least 2 elements");
  for (double v : m.data) {
    if (!std::isfinite(v)) throw argument_error("non-finite value in stats input");
  }
  const double n = static_cast<double>(m.data.size());
  const double mean = std::accumulate(m.data.begin(), m.data.end(), 0.0) / n;
  double acc = 0.0;
  for (double v : m.data) acc += (v - mean) * (v - mean);
  return {mean, std::sqrt(acc / n)};
}

}  // namespace fractsig
