#ifndef ORTHOREG_RNG_HPP
#define ORTHOREG_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>

namespace orthoreg {

/// SplitMix64 (Steele, Lea and Flood). Output i of a stream with seed s is
/// mix(s + (i + 1) * 0x9E3779B97F4A7C15), so the generator is a pure function
/// of (seed, counter) and any implementation can reproduce a stream exactly.
///
///   mix(z): z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///           z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///           return z ^ (z >> 31)
///
/// uniform() = (next() >> 11) * 2^-53, in [0, 1).
/// normal()  = sqrt(-2 ln(1 - u1)) cos(2 pi u2) from two consecutive uniforms.
class SplitMix64 {
 public:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Independent stream number `index` derived from `seed`: its seed is
  /// mix(seed + (index + 1) * kGamma), the index-th output of the parent.
  static SplitMix64 substream(std::uint64_t seed, std::uint64_t index) {
    return SplitMix64(mix(seed + (index + 1) * kGamma));
  }

  std::uint64_t next() { return mix(state_ += kGamma); }

  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double low, double high) { return low + (high - low) * uniform(); }

  double normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

}  // namespace orthoreg

#endif  // ORTHOREG_RNG_HPP
