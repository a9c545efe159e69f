#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "sua/ring.hpp"

namespace sua {

/// Maps reals onto Z_l as two's-complement fixed-point numbers with
/// `frac_bits` fractional bits. encode/decode are exact mutual inverses on
/// the grid {k * 2^-f}, and decode(encode(x)) is within half a grid step of
/// x everywhere inside the representable range.
struct FixedPointCodec {
  RingModulus modulus;
  uint32_t frac_bits;

  explicit FixedPointCodec(RingModulus m = RingModulus(32), uint32_t f = 16)
      : modulus(m), frac_bits(f) {
    if (m.bits < 2) throw ParamError("fixed-point codec needs at least 2 modulus bits");
    if (f >= m.bits) throw ParamError("frac_bits must be below the modulus width");
  }

  /// Largest encodable magnitude: 2^(b-1-f) - 2^-f.
  double magnitude_bound() const {
    return std::ldexp(1.0, static_cast<int>(modulus.bits) - 1 - static_cast<int>(frac_bits)) -
           std::ldexp(1.0, -static_cast<int>(frac_bits));
  }

  RingElement encode(double x) const {
    if (!(std::fabs(x) <= magnitude_bound())) {
      throw EncodeOverflowError("encode: |x| exceeds fixed-point bound");
    }
    const int64_t q = std::llround(std::ldexp(x, static_cast<int>(frac_bits)));
    return {static_cast<uint64_t>(q) & modulus.mask()};
  }

  double decode(RingElement e) const {
    require_valid(e, modulus, "decode");
    int64_t s;
    if (modulus.bits == 64) {
      s = static_cast<int64_t>(e.value);
    } else {
      const uint64_t half = uint64_t(1) << (modulus.bits - 1);
      s = e.value < half ? static_cast<int64_t>(e.value)
                         : static_cast<int64_t>(e.value) -
                               static_cast<int64_t>(uint64_t(1) << modulus.bits);
    }
    return std::ldexp(static_cast<double>(s), -static_cast<int>(frac_bits));
  }

  RingVector encode_vector(std::span<const double> xs) const;
  std::vector<double> decode_vector(const RingVector& v) const;
};

}  // namespace sua
