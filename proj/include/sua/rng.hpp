#pragma once

#include <cstdint>
#include <cstddef>
#include <random>

namespace sua {

enum class RngMode : uint8_t { deterministic, crypto };

// Single randomness source threaded through every protocol operation.
// Deterministic mode replays byte-identically from its seed and is the test
// default; crypto mode pulls from the OS CSPRNG and must be used for real
// deployments. Each party owns its own source (never shared across parties).
class RandomSource {
 public:
  explicit RandomSource(uint64_t seed)
      : mode_(RngMode::deterministic), seed_(seed), gen_(seed) {}

  static RandomSource crypto_source();

  uint64_t next_u64();
  void fill(uint8_t* out, size_t len);

  // Uniform draw from [0, bound) without modulo bias, bound >= 1.
  uint64_t next_below(uint64_t bound);

  double next_unit();  // uniform in [0, 1)
  double next_gaussian();

  // Derives an independent stream; deterministic forks are reproducible
  // functions of (seed, salt).
  RandomSource fork(uint64_t salt) const;

  RngMode mode() const { return mode_; }
  uint64_t seed() const { return seed_; }

 private:
  RandomSource(RngMode mode, uint64_t seed) : mode_(mode), seed_(seed), gen_(seed) {}

  RngMode mode_;
  uint64_t seed_;
  std::mt19937_64 gen_;
  bool have_gauss_ = false;
  double gauss_spare_ = 0.0;
};

// splitmix64; used for seed derivation only.
uint64_t mix_seed(uint64_t x);

}  // namespace sua
