#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

#include "spatgev/math_util.hpp"

namespace spatgev {

// Deterministic RNG with self-contained distributions. std::mt19937_64 is
// standardized, but the std distributions are not; generating uniforms,
// normals and gammas ourselves keeps every byte of output reproducible.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng stream(std::uint64_t master, std::initializer_list<std::uint64_t> ids) {
    return Rng(derive_seed(master, ids));
  }

  // Uniform on (0,1); never returns an exact 0 or 1.
  double uniform() {
    const std::uint64_t bits = engine_() >> 11;  // 53 random bits
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  std::uint64_t uniform_index(std::uint64_t n) {
    // modulo bias is negligible for n << 2^64
    return engine_() % n;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * kPi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  // Gamma(shape, rate) via Marsaglia-Tsang; shape < 1 boosted through
  // Gamma(shape+1) * U^{1/shape}.
  double gamma(double shape, double rate) {
    if (shape <= 0.0 || rate <= 0.0) throw std::domain_error("Rng::gamma: nonpositive parameter");
    if (shape < 1.0) {
      const double u = uniform();
      return gamma(shape + 1.0, rate) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x;
      double v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v / rate;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v / rate;
    }
  }

  // Gaussian truncated to (0, inf) via inverse-CDF (no rejection loop).
  double truncated_normal_positive(double mean, double sd) {
    const double a = normal_cdf(-mean / sd);  // P(X <= 0)
    double u = a + (1.0 - a) * uniform();
    if (u >= 1.0) u = std::nextafter(1.0, 0.0);
    if (u <= 0.0) u = std::nextafter(0.0, 1.0);
    return mean + sd * normal_icdf(u);
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace spatgev
