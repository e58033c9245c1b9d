#pragma once

#include <cstddef>
#include <span>

namespace fractsig {

struct KsResult {
  enum class Kind { normality, two_sample };
  double statistic_d = 0.0;
  double p_value = 1.0;
  size_t n1 = 0;
  size_t n2 = 0;  // 0 for one-sample tests
  Kind kind = Kind::two_sample;
};

// Standard normal CDF via erfc; absolute error well under 1e-9.
double normal_cdf(double x);

// Asymptotic Kolmogorov survival function Q applied at
// lambda = d * (sqrt(ne) + 0.12 + 0.11/sqrt(ne)); the alternating series is
// truncated once a term drops below 1e-10 and the result clamped to [0,1].
double kolmogorov_asymptotic_pvalue(double d, double effective_n);

// Exact two-sample statistic D = sup |ECDF_a - ECDF_b| by merge scan; tie
// groups are consumed fully on both sides before the ECDFs are compared.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

// One-sample test against a normal fitted from the sample (mean, population
// std). Because the parameters are estimated, this is a Lilliefors-type
// setting and the plain-KS p-values reported here are conservative (biased
// toward accepting normality); they match the convention the reference
// experiments use. Requires n >= 8 and positive variance.
KsResult ks_normality(std::span<const double> a);

}  // namespace fractsig
