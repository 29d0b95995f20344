#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

namespace lorentzlab {

// splitmix64. Small, fast, and bit-exact across platforms, which is what the
// reproducibility contract needs. Every corpus sample owns an independent
// stream seeded with (corpus_seed XOR sample_index).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // uniform on [0, 1), 53-bit resolution
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // uniform on (0, 1]; safe as a log() argument
  double uniform_open() {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  // 10^U with U uniform on [lo10, hi10]
  double log_uniform(double lo10, double hi10) {
    return std::pow(10.0, uniform(lo10, hi10));
  }

  // modulo draw; the bias is below 2^-53 for the small ranges used here
  std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }

  // Box-Muller pair of independent standard normals
  std::pair<double, double> gaussian_pair() {
    const double u1 = uniform_open();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    return {r * std::cos(a), r * std::sin(a)};
  }

 private:
  std::uint64_t state_;
};

}  // namespace lorentzlab
