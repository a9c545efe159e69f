#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sua/errors.hpp"
#include "sua/rng.hpp"

namespace sua {

/// Modulus l = 2^bits of the aggregation ring Z_l. Power-of-two moduli make
/// the wraparound free machine arithmetic; bits is capped at 64.
struct RingModulus {
  uint32_t bits;

  explicit RingModulus(uint32_t b = 32) : bits(b) {
    if (b < 1 || b > 64) throw ParamError("ring modulus bits must be in [1,64]");
  }

  uint64_t mask() const { return bits == 64 ? ~uint64_t(0) : ((uint64_t(1) << bits) - 1); }
  uint64_t reduce(uint64_t v) const { return v & mask(); }
  bool contains(uint64_t v) const { return v <= mask(); }

  friend bool operator==(RingModulus a, RingModulus b) { return a.bits == b.bits; }
  friend bool operator!=(RingModulus a, RingModulus b) { return a.bits != b.bits; }
};

/// A value in [0, l). Validity against a particular modulus is checked at the
/// operation boundary.
struct RingElement {
  uint64_t value = 0;

  friend bool operator==(RingElement a, RingElement b) { return a.value == b.value; }
};

inline void require_valid(RingElement e, RingModulus m, const char* who) {
  if (!m.contains(e.value)) {
    throw ModulusMismatchError(std::string(who) + ": element out of range for modulus");
  }
}

inline RingElement ring_add(RingElement a, RingElement b, RingModulus m) {
  require_valid(a, m, "ring_add");
  require_valid(b, m, "ring_add");
  return {m.reduce(a.value + b.value)};
}

inline RingElement ring_sub(RingElement a, RingElement b, RingModulus m) {
  require_valid(a, m, "ring_sub");
  require_valid(b, m, "ring_sub");
  return {m.reduce(a.value - b.value)};
}

inline RingElement uniform_random(RingModulus m, RandomSource& rng) {
  return {rng.next_u64() & m.mask()};
}

/// Fixed-length vector of ring elements sharing one modulus; the payload type
/// of every protocol message.
class RingVector {
 public:
  RingVector() : mod_(32) {}
  explicit RingVector(RingModulus m, size_t len = 0) : mod_(m), v_(len, 0) {}

  /// Adopts raw values, validating each against m. A named factory rather
  /// than a constructor: RingVector(m, {3}) would otherwise silently pick the
  /// length constructor above.
  static RingVector from_raw(RingModulus m, std::vector<uint64_t> raw);

  RingModulus modulus() const { return mod_; }
  size_t size() const { return v_.size(); }
  bool empty() const { return v_.empty(); }

  uint64_t operator[](size_t i) const { return v_[i]; }
  void set(size_t i, uint64_t value) { v_[i] = mod_.reduce(value); }
  const std::vector<uint64_t>& raw() const { return v_; }
  uint64_t* data() { return v_.data(); }
  const uint64_t* data() const { return v_.data(); }

  void add_in_place(const RingVector& other);
  void sub_in_place(const RingVector& other);
  RingVector operator+(const RingVector& other) const;
  RingVector operator-(const RingVector& other) const;

  static RingVector uniform(RingModulus m, size_t len, RandomSource& rng);

  friend bool operator==(const RingVector& a, const RingVector& b) {
    return a.mod_ == b.mod_ && a.v_ == b.v_;
  }

  /// Information content in bits: size() * modulus bits. This is the quantity
  /// the cost ledger books as payload.
  uint64_t payload_bits() const { return uint64_t(v_.size()) * mod_.bits; }

 private:
  void check_compatible(const RingVector& other, const char* who) const;

  RingModulus mod_;
  std::vector<uint64_t> v_;
};

// Wire form: 8-byte little-endian element count, then the elements packed as
// consecutive b-bit little-endian integers (bitstream is LSB-first within each
// byte). For byte-aligned b this is a plain little-endian integer array.
std::vector<uint8_t> serialize(const RingVector& v);
RingVector deserialize_ring_vector(std::span<const uint8_t> bytes, RingModulus m);

// Count-free element stream (the packed integers only). Channels use this as
// the cleartext: both ends already know the session vector length, so the
// count prefix never travels, and metered bits equal payload bits exactly for
// byte-aligned widths.
std::vector<uint8_t> serialize_elements(const RingVector& v);
RingVector deserialize_elements(std::span<const uint8_t> bytes, RingModulus m, size_t count);

}  // namespace sua
