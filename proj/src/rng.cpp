#include "sua/rng.hpp"

#include <cmath>
#include <stdexcept>

#include <openssl/rand.h>

namespace sua {

uint64_t mix_seed(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RandomSource RandomSource::crypto_source() {
  return RandomSource(RngMode::crypto, 0);
}

uint64_t RandomSource::next_u64() {
  if (mode_ == RngMode::deterministic) return gen_();
  uint64_t v = 0;
  if (RAND_bytes(reinterpret_cast<unsigned char*>(&v), sizeof v) != 1) {
    throw std::runtime_error("system CSPRNG failure");
  }
  return v;
}

void RandomSource::fill(uint8_t* out, size_t len) {
  if (mode_ == RngMode::crypto) {
    if (len > 0 && RAND_bytes(out, static_cast<int>(len)) != 1) {
      throw std::runtime_error("system CSPRNG failure");
    }
    return;
  }
  size_t i = 0;
  while (i < len) {
    uint64_t v = gen_();
    for (int k = 0; k < 8 && i < len; ++k, ++i) {
      out[i] = static_cast<uint8_t>(v >> (8 * k));
    }
  }
}

uint64_t RandomSource::next_below(uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("next_below: bound must be positive");
  if ((bound & (bound - 1)) == 0) return next_u64() & (bound - 1);
  // rejection sampling over the largest multiple of bound
  const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  uint64_t v;
  do {
    v = next_u64();
  } while (v >= limit);
  return v % bound;
}

double RandomSource::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomSource::next_gaussian() {
  if (have_gauss_) {
    have_gauss_ = false;
    return gauss_spare_;
  }
  // Box-Muller
  double u1 = next_unit();
  double u2 = next_unit();
  while (u1 <= 0.0) u1 = next_unit();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  gauss_spare_ = r * std::sin(theta);
  have_gauss_ = true;
  return r * std::cos(theta);
}

RandomSource RandomSource::fork(uint64_t salt) const {
  if (mode_ == RngMode::crypto) return crypto_source();
  return RandomSource(mix_seed(seed_ ^ mix_seed(salt)));
}

}  // namespace sua
