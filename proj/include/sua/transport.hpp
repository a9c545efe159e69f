#pragma once

#include <deque>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>

#include "sua/crypto.hpp"
#include "sua/ledger.hpp"
#include "sua/message.hpp"
#include "sua/protocols.hpp"

namespace sua {

enum class CipherKind : uint8_t { none = 0, aes128_ecb = 1, aes128_aead = 2 };

const char* cipher_name(CipherKind c);
std::optional<CipherKind> cipher_from_name(const std::string& name);

struct ChannelConfig {
  CipherKind cipher = CipherKind::aes128_aead;
  bool simulation = true;

  // Cleartext channels are a simulation-only convenience.
  void validate() const {
    if (cipher == CipherKind::none && !simulation)
      throw ParamError("cipher NONE is only allowed on the simulated transport");
  }
};

/// Pre-shared 128-bit keys per ordered party pair. Distribution is out of
/// band: either listed explicitly in config or derived from a master secret.
class KeyStore {
 public:
  void set(uint32_t from, uint32_t to, const AesKey& key) { keys_[{from, to}] = key; }
  const AesKey& get(uint32_t from, uint32_t to) const;
  bool has(uint32_t from, uint32_t to) const { return keys_.count({from, to}) > 0; }

  /// keys[(i,j)] = first 16 bytes of SHA-256(master || i || j), full mesh.
  static KeyStore derive(std::span<const uint8_t> master, uint32_t parties);

 private:
  std::map<std::pair<uint32_t, uint32_t>, AesKey> keys_;
};

/// Wire size of one sealed payload, in bits, without running the cipher.
/// NONE ships the packed elements as-is; ECB adds PKCS#7 padding; the AEAD
/// frame adds a 12-byte nonce and a 16-byte tag.
uint64_t sealed_bits(CipherKind cipher, uint64_t payload_bits);

/// In-process transport: per ordered-pair FIFO queues, real encryption, and
/// full cost accounting (measured cipher time, bandwidth-model transfer
/// time, payload and ciphertext bits). Safe for concurrent senders.
class SimTransport {
 public:
  SimTransport(const SumSession& session, ChannelConfig config, KeyStore keys, BandwidthModel bw);

  void send(const ProtocolMessage& msg);
  std::optional<ProtocolMessage> poll(PartyId to);

  const CostLedger& ledger() const { return ledger_; }
  CostLedger take_ledger() { return std::move(ledger_); }
  const BandwidthModel& bandwidth() const { return bw_; }

 private:
  struct Frame {
    MsgKind kind;
    uint32_t round;
    uint32_t segment;
    uint32_t from;
    std::vector<uint8_t> ciphertext;
  };

  SumSession session_;
  ChannelConfig config_;
  KeyStore keys_;
  BandwidthModel bw_;
  CostLedger ledger_;
  std::map<std::pair<uint32_t, uint32_t>, std::deque<Frame>> queues_;
  std::map<std::pair<uint32_t, uint32_t>, uint64_t> nonce_counters_;
  std::mutex mu_;
};

/// Drives a full session over a transport, polling parties round-robin.
/// The returned trace lists messages in delivery order.
SumOutcome run_sum_over(SimTransport& transport, const SumSession& session,
                        const std::vector<RingVector>& inputs, const RandomSource& rng);

/// Bandwidth-model accounting replayed from a finished trace: same pair
/// traffic and simulated seconds a SimTransport run with this cipher books.
CostLedger simulate_trace(const MessageTrace& trace, const BandwidthModel& bw, CipherKind cipher);

/// Non-private reference point: every party uploads its |W|·b-bit gradient to
/// an aggregation server and downloads the combined one. The server is the
/// virtual index n in the pair table.
CostLedger simulate_baseline(uint32_t parties, uint64_t weights, uint32_t bits,
                             const BandwidthModel& bw);

}  // namespace sua
