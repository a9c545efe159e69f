#include "sua/ring.hpp"

#include <cstring>

#include "sua/kernels.hpp"

namespace sua {

RingVector RingVector::from_raw(RingModulus m, std::vector<uint64_t> raw) {
  RingVector out(m);
  out.v_ = std::move(raw);
  for (size_t i = 0; i < out.v_.size(); ++i) {
    if (!m.contains(out.v_[i])) {
      throw ModulusMismatchError("RingVector: element " + std::to_string(i) +
                                 " out of range");
    }
  }
  return out;
}

void RingVector::check_compatible(const RingVector& other, const char* who) const {
  if (mod_ != other.mod_) {
    throw ModulusMismatchError(std::string(who) + ": modulus mismatch");
  }
  if (v_.size() != other.v_.size()) {
    throw ParamError(std::string(who) + ": length mismatch");
  }
}

void RingVector::add_in_place(const RingVector& other) {
  check_compatible(other, "RingVector::add");
  kernels::par::vadd_mod(v_.data(), other.v_.data(), v_.size(), mod_.mask());
}

void RingVector::sub_in_place(const RingVector& other) {
  check_compatible(other, "RingVector::sub");
  kernels::par::vsub_mod(v_.data(), other.v_.data(), v_.size(), mod_.mask());
}

RingVector RingVector::operator+(const RingVector& other) const {
  RingVector out = *this;
  out.add_in_place(other);
  return out;
}

RingVector RingVector::operator-(const RingVector& other) const {
  RingVector out = *this;
  out.sub_in_place(other);
  return out;
}

RingVector RingVector::uniform(RingModulus m, size_t len, RandomSource& rng) {
  RingVector out(m, len);
  const uint64_t mask = m.mask();
  for (size_t i = 0; i < len; ++i) out.v_[i] = rng.next_u64() & mask;
  return out;
}

namespace {

void store_le(std::vector<uint8_t>& out, uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

uint64_t load_le(const uint8_t* p, int bytes) {
  uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= uint64_t(p[i]) << (8 * i);
  return v;
}

}  // namespace

std::vector<uint8_t> serialize_elements(const RingVector& v) {
  const uint32_t b = v.modulus().bits;
  const size_t n = v.size();
  std::vector<uint8_t> out;
  out.reserve((n * b + 7) / 8);
  if (b % 8 == 0) {
    const int bytes = static_cast<int>(b / 8);
    for (size_t i = 0; i < n; ++i) store_le(out, v[i], bytes);
    return out;
  }
  // bit-packed path for non-byte-aligned widths
  uint64_t acc = 0;
  uint32_t nbits = 0;
  for (size_t i = 0; i < n; ++i) {
    uint64_t value = v[i];
    uint32_t remaining = b;
    while (remaining > 0) {
      const uint32_t take = std::min(remaining, 64 - nbits);
      acc |= (take == 64 ? value : (value & ((uint64_t(1) << take) - 1))) << nbits;
      value >>= (take == 64 ? 0 : take);
      nbits += take;
      remaining -= take;
      while (nbits >= 8) {
        out.push_back(static_cast<uint8_t>(acc));
        acc >>= 8;
        nbits -= 8;
      }
    }
  }
  if (nbits > 0) out.push_back(static_cast<uint8_t>(acc));
  return out;
}

RingVector deserialize_elements(std::span<const uint8_t> bytes, RingModulus m, size_t count) {
  const uint32_t b = m.bits;
  const size_t need = (count * b + 7) / 8;
  if (bytes.size() < need) throw ParamError("ring vector bytes: truncated payload");
  RingVector out(m, count);
  const uint8_t* p = bytes.data();
  if (b % 8 == 0) {
    const int width = static_cast<int>(b / 8);
    for (size_t i = 0; i < count; ++i) out.set(i, load_le(p + i * width, width));
    return out;
  }
  uint64_t acc = 0;
  uint32_t nbits = 0;
  size_t pos = 0;
  for (size_t i = 0; i < count; ++i) {
    uint64_t value = 0;
    uint32_t got = 0;
    while (got < b) {
      if (nbits == 0) {
        acc = p[pos++];
        nbits = 8;
      }
      const uint32_t take = std::min(b - got, nbits);
      value |= (acc & ((uint64_t(1) << take) - 1)) << got;
      acc >>= take;
      nbits -= take;
      got += take;
    }
    out.set(i, value);
  }
  return out;
}

std::vector<uint8_t> serialize(const RingVector& v) {
  std::vector<uint8_t> out;
  out.reserve(8 + (v.size() * v.modulus().bits + 7) / 8);
  store_le(out, v.size(), 8);
  const auto elems = serialize_elements(v);
  out.insert(out.end(), elems.begin(), elems.end());
  return out;
}

RingVector deserialize_ring_vector(std::span<const uint8_t> bytes, RingModulus m) {
  if (bytes.size() < 8) throw ParamError("ring vector bytes: missing length prefix");
  const uint64_t n = load_le(bytes.data(), 8);
  return deserialize_elements(bytes.subspan(8), m, static_cast<size_t>(n));
}

}  // namespace sua
