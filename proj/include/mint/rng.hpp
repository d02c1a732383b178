#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace mint {

/// Purpose tags keep the random streams of different consumers disjoint.
enum class StreamDomain : std::uint64_t {
  Resample = 1,
  KSelection = 2,
  Data = 3,
  Jitter = 4,
  Replicate = 5,
};

/// Seeded generator addressed by (seed, domain, index). Each address hashes
/// to an independent 64-bit Mersenne Twister state, so draws for resample b
/// never depend on how many other resamples ran before it.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t state_seed) : engine_(state_seed) {}

  static Rng stream(std::uint64_t seed, StreamDomain domain, std::uint64_t index,
                    std::uint64_t subindex = 0);

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  /// Uniform integer in [0, bound).
  std::size_t below(std::size_t bound);

 private:
  std::mt19937_64 engine_;
};

std::uint64_t mix64(std::uint64_t x) noexcept;

/// Fisher-Yates shuffle of the identity permutation of size n.
std::vector<std::size_t> random_permutation(std::size_t n, Rng& rng);

/// Fresh seed from the operating system's entropy source.
std::uint64_t system_seed();

}  // namespace mint
