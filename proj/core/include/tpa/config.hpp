#pragma once

#include <cstdint>
#include <random>

namespace tpa {

/// Numerical tolerances shared by the verification code.
struct Tolerances {
  double stein_residual = 1e-10;
  double bound_slack = 1e-12;
  double identity = 1e-12;
  double normalization = 1e-12;
};

inline constexpr Tolerances kDefaultTolerances{};

/// Default two-sided tail mass left outside a translated Poisson window.
inline constexpr double kDefaultWindowEps = 1e-12;

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of stream `index` derived from a master seed. Streams are
/// order-independent: stream k depends only on (seed, k).
constexpr std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return mix_seed(mix_seed(seed) ^ mix_seed(index + 0x632BE59BD9B4E019ULL));
}

inline Rng make_rng(std::uint64_t seed) { return Rng{mix_seed(seed)}; }

}  // namespace tpa
