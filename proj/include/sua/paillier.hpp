#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sua/ledger.hpp"
#include "sua/ring.hpp"
#include "sua/rng.hpp"

namespace sua {

/// Modular-arithmetic work counters; explain runtime gaps between schemes.
struct OpCounters {
  uint64_t modexp = 0;
  uint64_t modmul = 0;

  OpCounters& operator+=(const OpCounters& o) {
    modexp += o.modexp;
    modmul += o.modmul;
    return *this;
  }
};

struct PaillierPublicKey {
  mpz_class N;
  mpz_class N2;  // N^2, cached
  uint32_t key_bits = 0;

  /// SHA-256 of the decimal modulus; ties ciphertexts to their key.
  std::string fingerprint() const;
};

struct PaillierSecretKey {
  mpz_class lambda;
  mpz_class mu;
};

struct PaillierKeypair {
  PaillierPublicKey pk;
  PaillierSecretKey sk;
};

struct PaillierCiphertext {
  mpz_class value;
  std::string key_fp;
};

/// g = N+1 keypair. Primes carry their top two bits set, so N has exactly
/// `bits` bits; primality error is below 2^-80. Keys under 512 bits are for
/// tests only and must be requested explicitly.
PaillierKeypair paillier_keygen(uint32_t bits, RandomSource& rng, bool allow_short_keys = false);

PaillierCiphertext paillier_enc(const mpz_class& m, const PaillierPublicKey& pk,
                                RandomSource& rng, OpCounters* ops = nullptr);
mpz_class paillier_dec(const PaillierCiphertext& c, const PaillierKeypair& kp,
                       OpCounters* ops = nullptr);

/// Homomorphic sum: decrypts to m1 + m2 mod N.
PaillierCiphertext he_add(const PaillierCiphertext& c1, const PaillierCiphertext& c2,
                          const PaillierPublicKey& pk, OpCounters* ops = nullptr);

/// Plaintext scaling: decrypts to k·m mod N.
PaillierCiphertext he_scale(const PaillierCiphertext& c, const mpz_class& k,
                            const PaillierPublicKey& pk, OpCounters* ops = nullptr);

// Ciphertext wire form: 8-byte little-endian byte count, then the value as a
// big-endian magnitude.
std::vector<uint8_t> serialize_ciphertext(const PaillierCiphertext& c);
PaillierCiphertext deserialize_ciphertext(std::span<const uint8_t> bytes, const std::string& fp);

/// Slot layout for batching ring values into one plaintext: each value gets
/// value_bits + pad_bits, so sums of up to 2^pad_bits - 1 parties cannot
/// carry into the next slot.
struct PackingSpec {
  uint32_t value_bits = 32;
  uint32_t pad_bits = 15;
  uint32_t key_bits = 1024;

  uint32_t slot_width() const { return value_bits + pad_bits; }
  uint32_t slots() const { return key_bits / slot_width(); }

  void validate() const;
  /// Refuses party counts whose slot sums could carry: needs n < 2^pad_bits.
  void check_parties(uint32_t parties) const;
};

std::vector<mpz_class> pack(std::span<const uint64_t> values, const PackingSpec& spec);
std::vector<uint64_t> unpack(std::span<const mpz_class> packed, const PackingSpec& spec,
                             size_t count);

/// Full HE aggregation path: pack, encrypt per party, fold ciphertexts at a
/// keyless aggregator, decrypt once, unpack, reduce mod 2^b. Books encrypt
/// time per party and add/decrypt time under the key holder (party 0) when a
/// ledger is given; per-party op counters land in `ops` when given.
RingVector paillier_aggregate(const std::vector<RingVector>& inputs, const PaillierKeypair& kp,
                              const PackingSpec& spec, RandomSource& rng,
                              CostLedger* ledger = nullptr,
                              std::vector<OpCounters>* ops = nullptr);

// Key files: structured text with decimal integers. The secret half is
// optional so a public-only file can circulate.
void save_keypair(const std::string& path, const PaillierKeypair& kp, bool include_secret = true);
PaillierKeypair load_keypair(const std::string& path);

}  // namespace sua
