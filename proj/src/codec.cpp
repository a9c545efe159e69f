#include "sua/codec.hpp"

#include "sua/kernels.hpp"

namespace sua {

RingVector FixedPointCodec::encode_vector(std::span<const double> xs) const {
  RingVector out(modulus, xs.size());
  const size_t bad = kernels::par::encode_vec(xs.data(), out.data(), xs.size(),
                                              frac_bits, modulus.mask(),
                                              magnitude_bound());
  if (bad != SIZE_MAX) {
    throw EncodeOverflowError("encode_vector: component " + std::to_string(bad) +
                                  " exceeds fixed-point bound",
                              bad);
  }
  return out;
}

std::vector<double> FixedPointCodec::decode_vector(const RingVector& v) const {
  if (v.modulus() != modulus) {
    throw ModulusMismatchError("decode_vector: modulus mismatch");
  }
  std::vector<double> out(v.size());
  kernels::par::decode_vec(v.data(), out.data(), v.size(), frac_bits, modulus.bits);
  return out;
}

}  // namespace sua
