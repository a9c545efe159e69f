#include "sua/trace.hpp"

#include <sstream>

#include "sua/crypto.hpp"
#include "sua/errors.hpp"

namespace sua {

std::string MessageTrace::to_text() const {
  std::ostringstream os;
  os << "session=" << session.hex() << " protocol=" << protocol_name(protocol) << " n=" << n
     << " b=" << modulus_bits << " len=" << vector_len << "\n";
  for (const TraceRecord& r : records) {
    os << msg_kind_name(r.kind) << '\t' << r.from << '\t' << r.to << '\t' << r.round << '\t'
       << r.segment << '\t' << r.payload_bits << '\n';
  }
  return os.str();
}

std::string MessageTrace::digest() const { return sha256_hex(to_text()); }

uint64_t message_bits(const MessageTrace& trace) {
  if (!trace.complete) throw StateError("message_bits: trace is from an unfinished session");
  uint64_t total = 0;
  for (const TraceRecord& r : trace.records) {
    if (!is_result_kind(r.kind)) total += r.payload_bits;
  }
  return total;
}

}  // namespace sua
