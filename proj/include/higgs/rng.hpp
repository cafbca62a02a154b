#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace higgs {

/// Counter-based splittable generator (SplitMix64 core). Children obtained
/// via split() are independent streams; splitting does not advance the
/// parent, so generation order is reproducible across refactors.
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed) : state_(mix(seed + kGolden)) {}

  std::uint64_t next_u64() {
    state_ += kGolden;
    return mix(state_);
  }

  /// Child stream keyed by (current state, stream index); parent unchanged.
  SplitRng split(std::uint64_t stream) const {
    return SplitRng(mix(state_ ^ mix(stream + 0x1F7B3D5C9E8A4B2DULL)));
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Unbiased integer in [lo, hi] inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % span);
    std::uint64_t u;
    do {
      u = next_u64();
    } while (u >= limit);
    return lo + static_cast<std::int64_t>(u % span);
  }

  /// Standard normal via Box-Muller.
  double gaussian() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  std::complex<double> complex_gaussian() {
    const double re = gaussian();
    const double im = gaussian();
    return {re, im};
  }

  /// Uniform point on the complex unit circle.
  std::complex<double> unit_circle() {
    const double phi = 2.0 * kPi * uniform();
    return {std::cos(phi), std::sin(phi)};
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
  static constexpr double kPi = 3.141592653589793238462643383279502884;

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace higgs
