#include "sua/transport.hpp"

#include <chrono>

namespace sua {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

TrafficClass class_of(MsgKind kind) {
  return is_result_kind(kind) ? TrafficClass::broadcast : TrafficClass::protocol;
}

std::array<uint8_t, kGcmNonceLen> counter_nonce(uint64_t counter) {
  std::array<uint8_t, kGcmNonceLen> nonce{};
  for (int i = 0; i < 8; ++i) nonce[i] = static_cast<uint8_t>(counter >> (8 * i));
  return nonce;
}

}  // namespace

const char* cipher_name(CipherKind c) {
  switch (c) {
    case CipherKind::none: return "none";
    case CipherKind::aes128_ecb: return "aes128-ecb";
    case CipherKind::aes128_aead: return "aes128-aead";
  }
  return "?";
}

std::optional<CipherKind> cipher_from_name(const std::string& name) {
  if (name == "none") return CipherKind::none;
  if (name == "aes128-ecb" || name == "ecb") return CipherKind::aes128_ecb;
  if (name == "aes128-aead" || name == "aead") return CipherKind::aes128_aead;
  return std::nullopt;
}

const AesKey& KeyStore::get(uint32_t from, uint32_t to) const {
  const auto it = keys_.find({from, to});
  if (it == keys_.end()) {
    throw ChannelError("no pre-shared key for channel " + std::to_string(from) + " -> " +
                       std::to_string(to));
  }
  return it->second;
}

KeyStore KeyStore::derive(std::span<const uint8_t> master, uint32_t parties) {
  KeyStore store;
  for (uint32_t i = 0; i < parties; ++i) {
    for (uint32_t j = 0; j < parties; ++j) {
      if (i == j) continue;
      std::vector<uint8_t> material(master.begin(), master.end());
      for (int b = 0; b < 4; ++b) material.push_back(static_cast<uint8_t>(i >> (8 * b)));
      for (int b = 0; b < 4; ++b) material.push_back(static_cast<uint8_t>(j >> (8 * b)));
      const auto digest = sha256(material);
      AesKey key;
      std::copy_n(digest.begin(), key.size(), key.begin());
      store.set(i, j, key);
    }
  }
  return store;
}

uint64_t sealed_bits(CipherKind cipher, uint64_t payload_bits) {
  const uint64_t data_bytes = (payload_bits + 7) / 8;
  switch (cipher) {
    case CipherKind::none:
      return data_bytes * 8;
    case CipherKind::aes128_ecb:
      return (data_bytes / kAesBlock + 1) * kAesBlock * 8;
    case CipherKind::aes128_aead:
      return (data_bytes + kGcmNonceLen + kGcmTagLen) * 8;
  }
  throw ParamError("unknown cipher");
}

SimTransport::SimTransport(const SumSession& session, ChannelConfig config, KeyStore keys,
                           BandwidthModel bw)
    : session_(session), config_(config), keys_(std::move(keys)), bw_(bw), ledger_(session.n) {
  session_.validate();
  config_.validate();
  if (!config_.simulation) throw ParamError("SimTransport is the simulated backend");
  if (config_.cipher != CipherKind::none) {
    for (uint32_t i = 0; i < session_.n; ++i) {
      for (uint32_t j = 0; j < session_.n; ++j) {
        if (i != j && !keys_.has(i, j)) {
          throw ChannelError("missing pre-shared key for channel " + std::to_string(i) + " -> " +
                             std::to_string(j));
        }
      }
    }
  }
}

void SimTransport::send(const ProtocolMessage& msg) {
  if (!(msg.session == session_.id)) throw ChannelError("message for a different session");
  if (msg.from.index >= session_.n || msg.to.index >= session_.n || msg.from == msg.to)
    throw ChannelError("unknown peer");

  const std::vector<uint8_t> clear = serialize_elements(msg.payload);
  const uint64_t payload_bits = msg.payload.payload_bits();

  std::lock_guard<std::mutex> lock(mu_);
  std::vector<uint8_t> ct;
  const auto t0 = Clock::now();
  switch (config_.cipher) {
    case CipherKind::none:
      ct = clear;
      break;
    case CipherKind::aes128_ecb:
      ct = aes_ecb_encrypt(keys_.get(msg.from.index, msg.to.index), clear);
      break;
    case CipherKind::aes128_aead: {
      const uint64_t counter = nonce_counters_[{msg.from.index, msg.to.index}]++;
      ct = aes_gcm_seal(keys_.get(msg.from.index, msg.to.index), clear, counter_nonce(counter));
      break;
    }
  }
  if (config_.cipher != CipherKind::none)
    ledger_.add_measured(msg.from.index, Phase::encrypt, seconds_since(t0));

  const uint64_t ct_bits = ct.size() * 8;
  ledger_.add_traffic(class_of(msg.kind), msg.from.index, msg.to.index, payload_bits, ct_bits);
  ledger_.add_simulated_comm(msg.from.index, bw_.transfer_seconds(ct_bits));
  queues_[{msg.from.index, msg.to.index}].push_back(
      Frame{msg.kind, msg.round, msg.segment, msg.from.index, std::move(ct)});
}

std::optional<ProtocolMessage> SimTransport::poll(PartyId to) {
  std::lock_guard<std::mutex> lock(mu_);
  for (uint32_t from = 0; from < session_.n; ++from) {
    const auto it = queues_.find({from, to.index});
    if (it == queues_.end() || it->second.empty()) continue;
    Frame frame = std::move(it->second.front());
    it->second.pop_front();

    std::vector<uint8_t> clear;
    const auto t0 = Clock::now();
    switch (config_.cipher) {
      case CipherKind::none:
        clear = std::move(frame.ciphertext);
        break;
      case CipherKind::aes128_ecb:
        clear = aes_ecb_decrypt(keys_.get(from, to.index), frame.ciphertext);
        break;
      case CipherKind::aes128_aead:
        clear = aes_gcm_open(keys_.get(from, to.index), frame.ciphertext);
        break;
    }
    if (config_.cipher != CipherKind::none)
      ledger_.add_measured(to.index, Phase::decrypt, seconds_since(t0));

    ProtocolMessage msg;
    msg.kind = frame.kind;
    msg.session = session_.id;
    msg.round = frame.round;
    msg.segment = frame.segment;
    msg.from = PartyId{frame.from};
    msg.to = to;
    msg.payload = deserialize_elements(clear, session_.modulus, session_.vector_len);
    return msg;
  }
  return std::nullopt;
}

SumOutcome run_sum_over(SimTransport& transport, const SumSession& session,
                        const std::vector<RingVector>& inputs, const RandomSource& rng) {
  session.validate();
  if (inputs.size() != session.n)
    throw ParamError("input count does not match the session party count");

  std::vector<std::unique_ptr<PartyState>> parties;
  parties.reserve(session.n);
  for (uint32_t i = 0; i < session.n; ++i) {
    parties.push_back(make_party(session, PartyId{i}, inputs[i], rng.fork(i)));
  }

  MessageTrace trace;
  trace.session = session.id;
  trace.protocol = session.protocol;
  trace.n = session.n;
  trace.modulus_bits = session.modulus.bits;
  trace.vector_len = session.vector_len;

  for (auto& p : parties) {
    for (const auto& m : p->start()) transport.send(m);
  }
  bool progressed = true;
  while (progressed) {
    progressed = false;
    for (uint32_t i = 0; i < session.n; ++i) {
      while (auto msg = transport.poll(PartyId{i})) {
        progressed = true;
        trace.push(*msg);
        for (const auto& m : parties[i]->on_message(*msg)) transport.send(m);
      }
    }
  }

  for (const auto& p : parties) {
    if (p->finished()) continue;
    std::string who = "secure sum stalled: party " + std::to_string(p->id().index) +
                      " still awaiting traffic from";
    for (uint32_t idx : p->missing_senders()) who += " " + std::to_string(idx);
    throw IncompleteRoundError(who);
  }
  trace.complete = true;
  return {parties[session.distributor.index]->result(), std::move(trace)};
}

CostLedger simulate_trace(const MessageTrace& trace, const BandwidthModel& bw, CipherKind cipher) {
  if (!trace.complete) throw StateError("simulate_trace: trace is from an unfinished session");
  CostLedger ledger(trace.n);
  for (const TraceRecord& rec : trace.records) {
    const uint64_t ct_bits = sealed_bits(cipher, rec.payload_bits);
    ledger.add_traffic(class_of(rec.kind), rec.from, rec.to, rec.payload_bits, ct_bits);
    ledger.add_simulated_comm(rec.from, bw.transfer_seconds(ct_bits));
  }
  return ledger;
}

CostLedger simulate_baseline(uint32_t parties, uint64_t weights, uint32_t bits,
                             const BandwidthModel& bw) {
  CostLedger ledger(parties);
  const uint64_t leg_bits = weights * bits;
  for (uint32_t i = 0; i < parties; ++i) {
    ledger.add_traffic(TrafficClass::protocol, i, parties, leg_bits, leg_bits);
    ledger.add_traffic(TrafficClass::protocol, parties, i, leg_bits, leg_bits);
    ledger.add_simulated_comm(i, bw.transfer_seconds(leg_bits) + bw.transfer_seconds(leg_bits));
  }
  return ledger;
}

}  // namespace sua
