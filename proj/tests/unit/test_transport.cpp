#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sua/transport.hpp"
#include "support/test_util.hpp"

using namespace sua;

namespace {

SumSession urabe_session(uint32_t n, uint32_t bits, size_t len) {
  SumSession s;
  s.id = SessionId::from_u64(0xabc0 + n);
  s.n = n;
  s.modulus = RingModulus(bits);
  s.vector_len = len;
  s.protocol = SumProtocol::urabe;
  s.order_seed = 5;
  return s;
}

std::vector<RingVector> random_inputs(const SumSession& s, RandomSource& rng) {
  std::vector<RingVector> xs;
  for (uint32_t i = 0; i < s.n; ++i) {
    xs.push_back(RingVector::uniform(s.modulus, s.vector_len, rng));
  }
  return xs;
}

KeyStore test_keys(uint32_t n) {
  const std::vector<uint8_t> master = {1, 2, 3, 4};
  return KeyStore::derive(master, n);
}

std::array<uint8_t, kGcmNonceLen> nonce_from(uint64_t v) {
  std::array<uint8_t, kGcmNonceLen> nonce{};
  for (int i = 0; i < 8; ++i) nonce[i] = static_cast<uint8_t>(v >> (8 * i));
  return nonce;
}

}  // namespace

TEST_CASE("cipher roundtrips recover every payload") {
  const AesKey key = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15};
  RandomSource rng(1);
  for (int i = 0; i < 1000; ++i) {
    // log-skewed sizes up to 1 MiB
    const size_t size = rng.next_below(uint64_t(1) << (4 + rng.next_below(17)));
    std::vector<uint8_t> payload(size);
    rng.fill(payload.data(), payload.size());

    const auto ecb = aes_ecb_encrypt(key, payload);
    CHECK(ecb.size() == (payload.size() / 16 + 1) * 16);
    CHECK(aes_ecb_decrypt(key, ecb) == payload);

    const auto nonce = nonce_from(i);
    const auto sealed = aes_gcm_seal(key, payload, nonce);
    CHECK(sealed.size() == payload.size() + 28);
    CHECK(aes_gcm_open(key, sealed) == payload);
  }
}

TEST_CASE("ECB leaks equal blocks; the AEAD mode rejects any bit flip") {
  const AesKey key = {9, 9, 9, 9, 9, 9, 9, 9, 9, 9, 9, 9, 9, 9, 9, 9};
  std::vector<uint8_t> two_equal_blocks(32, 0x42);
  const auto ct = aes_ecb_encrypt(key, two_equal_blocks);
  REQUIRE(ct.size() >= 32);
  CHECK(std::equal(ct.begin(), ct.begin() + 16, ct.begin() + 16));

  std::vector<uint8_t> payload = {0xde, 0xad, 0xbe, 0xef};
  std::array<uint8_t, kGcmNonceLen> nonce{};
  auto sealed = aes_gcm_seal(key, payload, nonce);
  for (size_t byte = 0; byte < sealed.size(); ++byte) {
    for (int bit = 0; bit < 8; ++bit) {
      auto tampered = sealed;
      tampered[byte] ^= uint8_t(1) << bit;
      CHECK_THROWS_AS(aes_gcm_open(key, tampered), AuthenticationError);
    }
  }

  AesKey wrong = key;
  wrong[0] ^= 1;
  CHECK_THROWS_AS(aes_gcm_open(wrong, sealed), AuthenticationError);
}

TEST_CASE("sealed sizes follow the cipher framing rules") {
  CHECK(sealed_bits(CipherKind::none, 32 * 10) == 32 * 10);
  CHECK(sealed_bits(CipherKind::aes128_ecb, 32 * 4) == 32 * 8);   // 16 bytes -> 32
  CHECK(sealed_bits(CipherKind::aes128_ecb, 32 * 3) == 16 * 8);   // 12 bytes -> 16
  CHECK(sealed_bits(CipherKind::aes128_aead, 32) == (4 + 28) * 8);
}

TEST_CASE("bandwidth model: the documented transfer takes 3.50 ms") {
  const BandwidthModel bw;
  CHECK(bw.transfer_seconds(3500352) == doctest::Approx(0.00350).epsilon(0.001));
  CHECK_THROWS_AS(BandwidthModel{0.0}.transfer_seconds(1), ParamError);
}

TEST_CASE("ledger bookkeeping: bounds, monotonicity, merge, and csv totals") {
  CostLedger ledger(3);
  ledger.add_measured(0, Phase::train, 0.25);
  ledger.add_measured(0, Phase::train, 0.25);
  CHECK(ledger.measured_seconds(0, Phase::train) == 0.5);
  CHECK_THROWS_AS(ledger.add_measured(3, Phase::train, 0.1), ParamError);
  CHECK_THROWS_AS(ledger.add_measured(0, Phase::train, -0.1), ParamError);
  CHECK_THROWS_AS(ledger.add_traffic(TrafficClass::protocol, 0, 1, 100, 99), ParamError);

  ledger.add_traffic(TrafficClass::protocol, 0, 1, 100, 128);
  ledger.add_traffic(TrafficClass::protocol, 0, 1, 100, 128);
  ledger.add_traffic(TrafficClass::broadcast, 1, 2, 50, 64);
  CHECK(ledger.payload_bits(TrafficClass::protocol) == 200);
  CHECK(ledger.ciphertext_bits(TrafficClass::protocol) == 256);
  CHECK(ledger.messages(TrafficClass::protocol) == 2);
  CHECK(ledger.payload_bits_from(0) == 200);
  CHECK(ledger.payload_bits_from(1) == 50);

  CostLedger other(3);
  other.add_measured(1, Phase::add, 1.0);
  other.add_traffic(TrafficClass::protocol, 0, 1, 10, 10);
  ledger.merge(other);
  CHECK(ledger.measured_seconds(1, Phase::add) == 1.0);
  CHECK(ledger.payload_bits(TrafficClass::protocol) == 210);
  CHECK_THROWS_AS(ledger.merge(CostLedger(2)), ParamError);

  // totals row equals the per-party sum
  const std::string csv = ledger.to_csv();
  CHECK(csv.find("party,train_s,encrypt_s,add_s,decrypt_s,communicate_s,sim_communicate_s") == 0);
  CHECK(ledger.total_measured(Phase::train) == 0.5);
  CHECK(ledger.total_measured(Phase::add) == 1.0);
  CHECK(ledger.pair_csv() == ledger.pair_csv());
}

TEST_CASE("simulated transport preserves FIFO order per ordered pair") {
  const auto session = urabe_session(3, 32, 1);
  SimTransport t(session, ChannelConfig{CipherKind::none, true}, KeyStore{}, BandwidthModel{});
  for (uint64_t v = 1; v <= 3; ++v) {
    ProtocolMessage m;
    m.kind = MsgKind::share;
    m.session = session.id;
    m.segment = static_cast<uint32_t>(v);  // distinct tags, same channel
    m.from = PartyId{1};
    m.to = PartyId{2};
    m.payload = RingVector::from_raw(session.modulus, {v});
    t.send(m);
  }
  for (uint64_t v = 1; v <= 3; ++v) {
    auto got = t.poll(PartyId{2});
    REQUIRE(got.has_value());
    CHECK(got->payload[0] == v);
  }
  CHECK(!t.poll(PartyId{2}).has_value());
}

TEST_CASE("ciphers change the ledger, never the sum") {
  const auto session = urabe_session(5, 32, 8);
  RandomSource rng(77);
  const auto inputs = random_inputs(session, rng);

  RingVector expected(session.modulus, session.vector_len);
  for (const auto& x : inputs) expected.add_in_place(x);

  std::optional<uint64_t> payload_bits;
  for (CipherKind cipher : {CipherKind::none, CipherKind::aes128_ecb, CipherKind::aes128_aead}) {
    SimTransport t(session, ChannelConfig{cipher, true}, test_keys(session.n), BandwidthModel{});
    const auto outcome = run_sum_over(t, session, inputs, RandomSource(123));
    CHECK(outcome.sum == expected);

    const auto& ledger = t.ledger();
    const uint64_t proto_bits = ledger.payload_bits(TrafficClass::protocol);
    const uint64_t bcast_bits = ledger.payload_bits(TrafficClass::broadcast);
    CHECK(proto_bits == message_bits(outcome.trace));
    CHECK(bcast_bits == uint64_t(session.n - 1) * session.vector_len * 32);
    CHECK(ledger.ciphertext_bits(TrafficClass::protocol) >= proto_bits);
    if (payload_bits) {
      CHECK(*payload_bits == proto_bits);
    }
    payload_bits = proto_bits;
    if (cipher == CipherKind::none) {
      CHECK(ledger.ciphertext_bits(TrafficClass::protocol) == proto_bits);
    }

    // the bandwidth-model replay of the trace books exactly what the live
    // transport booked
    const CostLedger replay = simulate_trace(outcome.trace, t.bandwidth(), cipher);
    CHECK(replay.pair_traffic(TrafficClass::protocol) ==
          ledger.pair_traffic(TrafficClass::protocol));
    CHECK(replay.pair_traffic(TrafficClass::broadcast) ==
          ledger.pair_traffic(TrafficClass::broadcast));
    for (uint32_t p = 0; p < session.n; ++p) {
      CHECK(replay.simulated_comm_seconds(p) ==
            doctest::Approx(ledger.simulated_comm_seconds(p)).epsilon(1e-12));
    }
  }
}

TEST_CASE("missing keys and cleartext TCP are refused") {
  const auto session = urabe_session(3, 32, 1);
  CHECK_THROWS_AS(
      SimTransport(session, ChannelConfig{CipherKind::aes128_aead, true}, KeyStore{},
                   BandwidthModel{}),
      ChannelError);
  ChannelConfig bad{CipherKind::none, false};
  CHECK_THROWS_AS(bad.validate(), ParamError);
}

TEST_CASE("derived keys are distinct per direction and reproducible") {
  const auto a = test_keys(4);
  const auto b = test_keys(4);
  CHECK(a.get(0, 1) == b.get(0, 1));
  CHECK(a.get(0, 1) != a.get(1, 0));
  CHECK(a.get(0, 1) != a.get(0, 2));
  CHECK(!a.has(1, 1));
}

TEST_CASE("non-private baseline: 70 ms of total transfer at the defaults") {
  const CostLedger ledger = simulate_baseline(10, 109386, 32, BandwidthModel{});
  CHECK(ledger.total_simulated_comm() == doctest::Approx(0.0700).epsilon(0.0015));
  CHECK(ledger.simulated_comm_seconds(0) == doctest::Approx(0.00700).epsilon(0.0015));
  CHECK(ledger.payload_bits(TrafficClass::protocol) == 2ull * 10 * 109386 * 32);

  const CostLedger empty = simulate_baseline(0, 109386, 32, BandwidthModel{});
  CHECK(empty.total_simulated_comm() == 0.0);
  CHECK(empty.payload_bits(TrafficClass::protocol) == 0);
}

TEST_CASE("urabe ledger bits follow the n(n-1)b/2 law with broadcast separate") {
  RandomSource rng(31);
  for (uint32_t n : {3u, 7u, 12u, 20u}) {
    const auto session = urabe_session(n, 32, 1);
    SimTransport t(session, ChannelConfig{CipherKind::none, true}, KeyStore{}, BandwidthModel{});
    const auto outcome = run_sum_over(t, session, random_inputs(session, rng), RandomSource(n));
    CHECK(t.ledger().payload_bits(TrafficClass::protocol) == uint64_t(n) * (n - 1) * 32 / 2);
    CHECK(t.ledger().payload_bits(TrafficClass::broadcast) == uint64_t(n - 1) * 32);
    CHECK(outcome.trace.complete);
  }
}
