#include "sua/message.hpp"

#include "sua/crypto.hpp"
#include "sua/errors.hpp"

namespace sua {

std::string SessionId::hex() const { return to_hex(bytes); }

const char* msg_kind_name(MsgKind k) {
  switch (k) {
    case MsgKind::partial_sum: return "PARTIAL_SUM";
    case MsgKind::share: return "SHARE";
    case MsgKind::merged_share: return "MERGED_SHARE";
    case MsgKind::result: return "RESULT";
    case MsgKind::loss_sum: return "LOSS_SUM";
    case MsgKind::control: return "CONTROL";
  }
  return "?";
}

const char* protocol_name(SumProtocol p) {
  switch (p) {
    case SumProtocol::ring: return "ring";
    case SumProtocol::segmented: return "segmented";
    case SumProtocol::urabe: return "urabe";
  }
  return "?";
}

std::optional<SumProtocol> protocol_from_name(const std::string& name) {
  if (name == "ring") return SumProtocol::ring;
  if (name == "segmented") return SumProtocol::segmented;
  if (name == "urabe") return SumProtocol::urabe;
  return std::nullopt;
}

void SumSession::validate() const {
  if (n < 3) throw ParamError("secure sum needs at least three parties");
  if (vector_len < 1) throw ParamError("session vector_len must be positive");
  if (distributor.index >= n) throw ParamError("distributor index out of range");
  if (result_kind != MsgKind::result && result_kind != MsgKind::loss_sum)
    throw ParamError("result kind must be RESULT or LOSS_SUM");
  switch (protocol) {
    case SumProtocol::ring:
      if (k.has_value()) throw ParamError("ring protocol takes no k parameter");
      break;
    case SumProtocol::segmented:
      if (!k.has_value() || *k < 2) throw ParamError("segmented protocol requires k >= 2");
      break;
    case SumProtocol::urabe:
      // k = n-1 is the full protocol; smaller k bounds the share fan-out.
      if (k.has_value() && (*k < 1 || *k > n - 1))
        throw ParamError("urabe collusion bound must satisfy 1 <= k <= n-1");
      break;
  }
}

}  // namespace sua
