#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sua/codec.hpp"
#include "sua/ring.hpp"
#include "support/test_util.hpp"

using namespace sua;

TEST_CASE("ring add and sub over Z_32") {
  const RingModulus m(5);  // l = 32
  CHECK(ring_add({3}, {5}, m).value == 8);
  CHECK(ring_add({30}, {5}, m).value == 3);
  CHECK(ring_sub({3}, {5}, m).value == 30);

  RandomSource rng(7);
  for (int i = 0; i < 100; ++i) {
    const RingElement x = uniform_random(m, rng);
    CHECK(ring_add(x, {0}, m) == x);
    CHECK(ring_sub(x, x, m).value == 0);
  }
}

TEST_CASE("Z_l is a commutative group under ring add") {
  const RingModulus m(32);
  RandomSource rng(11);
  for (int i = 0; i < 1000; ++i) {
    const RingElement a = uniform_random(m, rng);
    const RingElement b = uniform_random(m, rng);
    const RingElement c = uniform_random(m, rng);
    CHECK(ring_add(ring_add(a, b, m), c, m) == ring_add(a, ring_add(b, c, m), m));
    CHECK(ring_add(a, b, m) == ring_add(b, a, m));
    CHECK(ring_sub(ring_add(a, b, m), b, m) == a);
  }
}

TEST_CASE("out-of-range elements are rejected") {
  const RingModulus m(5);
  CHECK_THROWS_AS(ring_add({32}, {1}, m), ModulusMismatchError);
  CHECK_THROWS_AS(ring_sub({1}, {77}, m), ModulusMismatchError);
  CHECK_THROWS_AS(RingModulus(0), ParamError);
  CHECK_THROWS_AS(RingModulus(65), ParamError);
}

TEST_CASE("uniform draws replay from the seed and cover the ring") {
  const RingModulus m(8);
  RandomSource a(42), b(42);
  for (int i = 0; i < 256; ++i) {
    const RingElement x = uniform_random(m, a);
    CHECK(x == uniform_random(m, b));
    CHECK(m.contains(x.value));
  }

  std::vector<uint64_t> counts(256, 0);
  RandomSource rng(1234);
  for (int i = 0; i < 10000; ++i) counts[uniform_random(m, rng).value]++;
  CHECK(testutil::chi_square_uniform_p(counts) > 0.001);
}

TEST_CASE("fixed-point encode hits the documented grid points") {
  const FixedPointCodec codec{RingModulus(32), 16};
  CHECK(codec.encode(0.0).value == 0);
  CHECK(codec.encode(1.5).value == 98304);
  CHECK(codec.encode(-1.0).value == 4294901760ULL);
  CHECK(codec.decode({0}) == 0.0);
  CHECK(codec.decode({4294901760ULL}) == -1.0);
  CHECK(codec.decode(codec.encode(1.5)) == 1.5);
}

TEST_CASE("fixed-point quantization error stays within half a grid step") {
  const FixedPointCodec codec{RingModulus(32), 16};
  RandomSource rng(5);
  for (int i = 0; i < 1000; ++i) {
    const double x = (rng.next_unit() - 0.5) * 200.0;
    const double back = codec.decode(codec.encode(x));
    CHECK(std::fabs(back - x) <= std::ldexp(1.0, -17));
  }
}

TEST_CASE("encode and decode invert each other on the representable grid") {
  const FixedPointCodec codec{RingModulus(16), 6};
  // every grid point is an exact dyadic double, so roundtrips must be exact
  const double step = std::ldexp(1.0, -6);
  for (double x = -codec.magnitude_bound(); x <= codec.magnitude_bound(); x += step) {
    CHECK(codec.decode(codec.encode(x)) == x);
  }
}

TEST_CASE("values past the magnitude bound are refused") {
  const FixedPointCodec codec{RingModulus(32), 16};
  const double M = codec.magnitude_bound();
  CHECK(M == 32768.0 - std::ldexp(1.0, -16));
  CHECK_NOTHROW(codec.encode(M));
  CHECK_NOTHROW(codec.encode(-M));
  CHECK_THROWS_AS(codec.encode(M + 1.0), EncodeOverflowError);
  CHECK_THROWS_AS(codec.encode(std::nan("")), EncodeOverflowError);

  const std::vector<double> xs = {0.0, 1.0, M + 5.0, 2.0};
  try {
    codec.encode_vector(xs);
    FAIL("expected overflow");
  } catch (const EncodeOverflowError& e) {
    CHECK(e.index == 2);
  }
}

TEST_CASE("vector encode matches element-wise encode") {
  const FixedPointCodec codec{RingModulus(32), 16};
  const std::vector<double> xs = {0.0, 1.5, -1.0};
  const RingVector v = codec.encode_vector(xs);
  REQUIRE(v.size() == 3);
  CHECK(v[0] == 0);
  CHECK(v[1] == 98304);
  CHECK(v[2] == 4294901760ULL);

  CHECK(codec.encode_vector(std::vector<double>{}).empty());

  RandomSource rng(99);
  std::vector<double> big(109386);
  for (double& x : big) x = (rng.next_unit() - 0.5) * 2.0;
  const auto back = codec.decode_vector(codec.encode_vector(big));
  for (size_t i = 0; i < big.size(); ++i) {
    CHECK(std::fabs(back[i] - big[i]) <= std::ldexp(1.0, -17));
  }
}

TEST_CASE("ring sums of encoded values decode to the real sum") {
  const FixedPointCodec codec{RingModulus(32), 16};
  const RingModulus m = codec.modulus;
  RandomSource rng(301);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_below(31));
    RingElement acc{0};
    double plain = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = (rng.next_unit() - 0.5) * 20.0;
      plain += x;
      acc = ring_add(acc, codec.encode(x), m);
    }
    CHECK(std::fabs(codec.decode(acc) - plain) <= n * std::ldexp(1.0, -17));
  }
}

TEST_CASE("ring vectors add and subtract component-wise") {
  const RingModulus m(32);
  RandomSource rng(17);
  const RingVector a = RingVector::uniform(m, 50, rng);
  const RingVector b = RingVector::uniform(m, 50, rng);
  const RingVector s = a + b;
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(s[i] == m.reduce(a[i] + b[i]));
  }
  CHECK((s - b) == a);

  const RingVector other(RingModulus(16), 50);
  CHECK_THROWS_AS(a + other, ModulusMismatchError);
  const RingVector shorter(m, 49);
  CHECK_THROWS_AS(a + shorter, ParamError);
}

TEST_CASE("wire form roundtrips for aligned and unaligned widths") {
  RandomSource rng(23);
  for (uint32_t bits : {5u, 8u, 12u, 32u, 33u, 64u}) {
    const RingModulus m(bits);
    for (size_t len : {size_t(0), size_t(1), size_t(7), size_t(129)}) {
      const RingVector v = RingVector::uniform(m, len, rng);
      const auto bytes = serialize(v);
      CHECK(deserialize_ring_vector(bytes, m) == v);
    }
  }

  const RingModulus m(32);
  const RingVector v = RingVector::uniform(m, 9, rng);
  auto bytes = serialize(v);
  CHECK(bytes.size() == 8 + 9 * 4);
  CHECK(v.payload_bits() == 9 * 32);
  bytes.pop_back();
  CHECK_THROWS_AS(deserialize_ring_vector(bytes, m), ParamError);
}
