#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "sua/ring.hpp"

namespace sua {

struct PartyId {
  uint32_t index = 0;

  friend bool operator==(PartyId a, PartyId b) { return a.index == b.index; }
  friend bool operator!=(PartyId a, PartyId b) { return a.index != b.index; }
  friend bool operator<(PartyId a, PartyId b) { return a.index < b.index; }
};

struct SessionId {
  std::array<uint8_t, 16> bytes{};

  static SessionId from_u64(uint64_t v) {
    SessionId id;
    for (int i = 0; i < 8; ++i) id.bytes[i] = static_cast<uint8_t>(v >> (8 * i));
    return id;
  }
  static SessionId random(RandomSource& rng) {
    SessionId id;
    rng.fill(id.bytes.data(), id.bytes.size());
    return id;
  }
  std::string hex() const;

  friend bool operator==(const SessionId& a, const SessionId& b) { return a.bytes == b.bytes; }
};

enum class MsgKind : uint8_t {
  partial_sum = 0,
  share = 1,
  merged_share = 2,
  result = 3,
  loss_sum = 4,
  control = 5,
};

const char* msg_kind_name(MsgKind k);

inline bool is_result_kind(MsgKind k) {
  return k == MsgKind::result || k == MsgKind::loss_sum;
}

enum class SumProtocol : uint8_t { ring = 0, segmented = 1, urabe = 2 };

const char* protocol_name(SumProtocol p);
std::optional<SumProtocol> protocol_from_name(const std::string& name);

/// Static parameters shared by all parties of one secure-sum run.
struct SumSession {
  SessionId id;
  uint32_t n = 0;
  RingModulus modulus{32};
  size_t vector_len = 1;
  SumProtocol protocol = SumProtocol::urabe;
  std::optional<uint32_t> k;  // segments (segmented) or collusion bound (urabe)
  PartyId distributor{0};     // rotating p_0 role
  uint32_t round = 0;
  uint64_t order_seed = 0;    // shared derivation of segment-round party orders
  MsgKind result_kind = MsgKind::result;

  void validate() const;

  // role 0 is the collector/master; roles count up from the distributor
  uint32_t role_of(PartyId p) const { return (p.index + n - distributor.index) % n; }
  PartyId party_of(uint32_t role) const { return {(distributor.index + role) % n}; }
};

struct ProtocolMessage {
  MsgKind kind = MsgKind::partial_sum;
  SessionId session;
  uint32_t round = 0;
  uint32_t segment = 0;
  PartyId from;
  PartyId to;
  RingVector payload;
};

}  // namespace sua
