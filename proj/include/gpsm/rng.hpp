#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace gpsm {

/// Deterministic random stream addressed by (seed, stream).
///
/// Every Monte-Carlo trial owns one stream keyed by its trial index, so the
/// draws a trial sees never depend on how trials are partitioned across
/// workers.  The 128-bit key is whitened into an mt19937_64 seed with
/// splitmix64 so that neighbouring trial indices give unrelated sequences.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream)
      : engine_(mix(seed, stream)) {}

  double normal() { return normal_(engine_); }

  /// One draw of a circularly-symmetric complex Gaussian with unit variance
  /// (1/2 per real component).
  std::complex<double> cnormal() {
    const double re = normal_(engine_);
    const double im = normal_(engine_);
    return {re * kInvSqrt2, im * kInvSqrt2};
  }

  std::uint64_t word() { return engine_(); }

  /// Uniform draw from {0, ..., n-1}.
  std::uint32_t index(std::uint32_t n) {
    return std::uniform_int_distribution<std::uint32_t>(0, n - 1)(engine_);
  }

 private:
  static constexpr double kInvSqrt2 = 0.7071067811865475244;

  static std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed;
    std::uint64_t h = splitmix64(s);
    s ^= stream * 0xbf58476d1ce4e5b9ull + 0x94d049bb133111ebull;
    h ^= splitmix64(s);
    s += h;
    return splitmix64(s);
  }

  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace gpsm
