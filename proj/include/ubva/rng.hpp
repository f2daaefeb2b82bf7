#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string_view>

namespace ubva {

// Identifier for the frozen random-number pipeline.  It is recorded in every
// manifest so that archived outputs state exactly which generator produced
// them.  Changing any part of the pipeline (seeding, generator, or normal
// transform) requires a new identifier.
inline constexpr const char* kRngId =
    "ubva-rng-v1/splitmix64-seed/xoshiro256++/polar-normal";

namespace detail {

// splitmix64 finalizer (public-domain constants by Sebastiano Vigna).
inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t splitmix64_next(std::uint64_t& state) noexcept {
  state += 0x9E3779B97F4A7C15ULL;
  return mix64(state);
}

inline constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
  return (x << k) | (x >> (64 - k));
}

}  // namespace detail

// FNV-1a hash of a textual job name; used to derive per-job RNG streams from
// (master seed, job name) so that parallel jobs draw from independent,
// schedule-invariant streams.
inline constexpr std::uint64_t stream_id(std::string_view name) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

// Deterministic generator: xoshiro256++ state seeded through splitmix64,
// uniform doubles with 53 random bits, normals via the Marsaglia polar
// method (one cached value).  Header-only and dependency-free so that every
// consumer (library, tests, tools) shares bit-identical streams.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept {
    std::uint64_t t = seed;
    for (auto& word : state_) word = detail::splitmix64_next(t);
  }

  // Sub-stream derivation: hash the (seed, stream) pair into a fresh seed.
  static Rng for_stream(std::uint64_t seed, std::uint64_t stream) noexcept {
    return Rng(detail::mix64(seed ^ detail::mix64(stream ^ 0x632BE59BD9B4E019ULL)));
  }

  std::uint64_t next_u64() noexcept {
    const std::uint64_t result =
        detail::rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = detail::rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0, 1) with 53 bits of randomness.
  double next_unit() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Marsaglia polar; generates pairs, caches the second.
  double next_gaussian() noexcept {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    double u = 0.0;
    double v = 0.0;
    double s = 0.0;
    do {
      u = 2.0 * next_unit() - 1.0;
      v = 2.0 * next_unit() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    cached_ = v * f;
    has_cached_ = true;
    return u * f;
  }

 private:
  std::array<std::uint64_t, 4> state_{};
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace ubva
