#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace fractsig {

// Deterministic scalar draws on top of std::mt19937_64. The engine itself is
// fully specified by the standard; the std distributions are not, so the
// mappings below are hand-rolled to keep output bit-identical everywhere.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  // Uniform in [0,1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Box-Muller; one value per call, pair cached.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.141592653589793238462643383279502884 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  // Laplace(0, b) via inverse CDF.
  double laplace(double b) {
    const double u = uniform() - 0.5;
    return -b * std::copysign(std::log(1.0 - 2.0 * std::fabs(u)), u);
  }

  uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace fractsig
