#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sua/message.hpp"

namespace sua {

/// One delivered protocol message, reduced to what cost accounting needs.
struct TraceRecord {
  MsgKind kind = MsgKind::partial_sum;
  uint32_t from = 0;
  uint32_t to = 0;
  uint32_t round = 0;
  uint32_t segment = 0;
  uint64_t payload_bits = 0;
};

struct MessageTrace {
  SessionId session;
  SumProtocol protocol = SumProtocol::urabe;
  uint32_t n = 0;
  uint32_t modulus_bits = 0;
  size_t vector_len = 0;
  bool complete = false;
  std::vector<TraceRecord> records;

  void push(const ProtocolMessage& m) {
    records.push_back({m.kind, m.from.index, m.to.index, m.round, m.segment,
                       m.payload.payload_bits()});
  }

  /// Tab-separated rendering, one record per line, stable across runs.
  std::string to_text() const;

  /// SHA-256 of to_text(), lowercase hex.
  std::string digest() const;
};

/// Total payload bits carried by non-result messages of a completed trace.
/// Result broadcasts are accounted separately by the ledger.
uint64_t message_bits(const MessageTrace& trace);

}  // namespace sua
