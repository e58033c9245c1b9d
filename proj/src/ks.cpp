#include "fractsig/ks.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "fractsig/errors.hpp"

namespace fractsig {

namespace {

std::vector<double> sorted_checked(std::span<const double> s, size_t min_size,
                                   const char* what) {
  if (s.size() < min_size) {
    throw argument_error(std::string(what) + " needs at least " +
                         std::to_string(min_size) + " values, got " +
                         std::to_string(s.size()));
  }
  std::vector<double> v(s.begin(), s.end());
  for (double x : v) {
    if (!std::isfinite(x)) throw argument_error(std::string(what) + ": non-finite sample value");
  }
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / 1.4142135623730951);
}

double kolmogorov_asymptotic_pvalue(double d, double effective_n) {
  if (d <= 0.0) return 1.0;
  const double sqrt_ne = std::sqrt(effective_n);
  const double lambda = d * (sqrt_ne + 0.12 + 0.11 / sqrt_ne);
  if (lambda < 1e-8) return 1.0;

  const double a = -2.0 * lambda * lambda;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 1000; ++k) {
    const double term = std::exp(a * k * k);
    sum += sign * term;
    if (term < 1e-10) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  const std::vector<double> sa = sorted_checked(a, 2, "ks_two_sample sample a");
  const std::vector<double> sb = sorted_checked(b, 2, "ks_two_sample sample b");
  const double n1 = static_cast<double>(sa.size());
  const double n2 = static_cast<double>(sb.size());

  double d = 0.0;
  size_t i = 0, j = 0;
  while (i < sa.size() && j < sb.size()) {
    const double v = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] == v) ++i;
    while (j < sb.size() && sb[j] == v) ++j;
    d = std::max(d, std::fabs(i / n1 - j / n2));
  }

  KsResult res;
  res.kind = KsResult::Kind::two_sample;
  res.statistic_d = d;
  res.n1 = sa.size();
  res.n2 = sb.size();
  res.p_value = kolmogorov_asymptotic_pvalue(d, n1 * n2 / (n1 + n2));
  return res;
}

KsResult ks_normality(std::span<const double> a) {
  const std::vector<double> s = sorted_checked(a, 8, "ks_normality");
  const double n = static_cast<double>(s.size());

  double mean = 0.0;
  for (double v : s) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : s) var += (v - mean) * (v - mean);
  var /= n;
  if (var <= 0.0) throw numeric_error("ks_normality: zero sample variance");
  const double sd = std::sqrt(var);

  // sup over both ECDF sides at every sorted point.
  double d = 0.0;
  for (size_t i = 0; i < s.size(); ++i) {
    const double phi = normal_cdf((s[i] - mean) / sd);
    d = std::max(d, std::fabs((i + 1) / n - phi));
    d = std::max(d, std::fabs(phi - i / n));
  }

  KsResult res;
  res.kind = KsResult::Kind::normality;
  res.statistic_d = d;
  res.n1 = s.size();
  res.n2 = 0;
  res.p_value = kolmogorov_asymptotic_pvalue(d, n);
  return res;
}

}  // namespace fractsig
