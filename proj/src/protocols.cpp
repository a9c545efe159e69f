#include "sua/protocols.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "sua/errors.hpp"

namespace sua {

// ---------------------------------------------------------------------------
// PartyState

PartyState::PartyState(const SumSession& session, PartyId self, RingVector input, RandomSource rng)
    : session_(session),
      self_(self),
      role_(session.role_of(self)),
      input_(std::move(input)),
      rng_(std::move(rng)) {
  session_.validate();
  if (self_.index >= session_.n) throw ParamError("party index out of range");
  if (input_.modulus() != session_.modulus)
    throw ModulusMismatchError("party input modulus differs from session modulus");
  if (input_.size() != session_.vector_len)
    throw ParamError("party input length differs from session vector_len");
}

std::vector<ProtocolMessage> PartyState::start() {
  if (started_) throw StateError("party already started");
  started_ = true;
  return do_start();
}

std::vector<ProtocolMessage> PartyState::on_message(const ProtocolMessage& msg) {
  if (!started_) throw StateError("delivery before start()");
  if (!(msg.session == session_.id)) throw ProtocolViolation("message belongs to another session");
  if (msg.to != self_) throw ProtocolViolation("message delivered to the wrong party");
  if (msg.from.index >= session_.n || msg.from == self_)
    throw ProtocolViolation("message has an impossible sender");
  if (msg.round != session_.round) throw ProtocolViolation("message round does not match session");
  if (msg.payload.modulus() != session_.modulus)
    throw ModulusMismatchError("payload modulus differs from session modulus");
  if (msg.payload.size() != session_.vector_len)
    throw ProtocolViolation("payload length differs from session vector_len");
  if (finished_) throw ProtocolViolation("delivery to a finished party");
  return do_message(msg);
}

const RingVector& PartyState::result() const {
  if (!finished_) throw StateError("result requested before the protocol finished");
  return result_;
}

ProtocolMessage PartyState::make(MsgKind kind, PartyId to, RingVector payload,
                                 uint32_t segment) const {
  return {kind, session_.id, session_.round, segment, self_, to, std::move(payload)};
}

void PartyState::finish(RingVector y) {
  result_ = std::move(y);
  finished_ = true;
}

std::vector<ProtocolMessage> PartyState::finish_and_broadcast(RingVector y) {
  finish(std::move(y));
  std::vector<ProtocolMessage> out;
  out.reserve(session_.n - 1);
  for (uint32_t i = 0; i < session_.n; ++i) {
    if (i == self_.index) continue;
    out.push_back(make(session_.result_kind, PartyId{i}, result_));
  }
  return out;
}

void PartyState::note_received(const ProtocolMessage& msg) {
  auto key = std::make_tuple(static_cast<uint8_t>(msg.kind), msg.round, msg.segment,
                             msg.from.index);
  if (!received_.insert(key).second) {
    std::ostringstream os;
    os << "duplicate " << msg_kind_name(msg.kind) << " from party " << msg.from.index
       << " (round " << msg.round << ", segment " << msg.segment << ")";
    throw ProtocolViolation(os.str());
  }
}

// ---------------------------------------------------------------------------
// RingParty

RingParty::RingParty(const SumSession& session, PartyId self, RingVector input, RandomSource rng)
    : PartyState(session, self, std::move(input), std::move(rng)) {
  if (session_.protocol != SumProtocol::ring)
    throw ParamError("RingParty constructed for a non-ring session");
}

std::vector<ProtocolMessage> RingParty::init_master() {
  if (role_ != 0) {
    std::ostringstream os;
    os << "ring init requested by party " << self_.index << ", but the master is party "
       << session_.distributor.index;
    throw RoleError(os.str());
  }
  return start();
}

std::vector<ProtocolMessage> RingParty::do_start() {
  if (role_ != 0) return {};
  secret_r_ = RingVector::uniform(session_.modulus, session_.vector_len, rng_);
  return {make(MsgKind::partial_sum, session_.party_of(1), input_ + secret_r_)};
}

std::vector<ProtocolMessage> RingParty::do_message(const ProtocolMessage& msg) {
  if (msg.kind == session_.result_kind) {
    if (msg.from != session_.party_of(0)) throw ProtocolViolation("result from a non-master party");
    note_received(msg);
    finish(msg.payload);
    return {};
  }
  if (msg.kind != MsgKind::partial_sum) throw ProtocolViolation("unexpected message kind");
  note_received(msg);
  if (role_ == 0) {
    if (msg.from != session_.party_of(session_.n - 1))
      throw ProtocolViolation("final partial sum from the wrong party");
    return finish_and_broadcast(msg.payload - secret_r_);
  }
  if (msg.from != session_.party_of(role_ - 1))
    throw ProtocolViolation("partial sum from a party that is not the predecessor");
  forwarded_ = true;
  return {make(MsgKind::partial_sum, session_.party_of(role_ + 1), msg.payload + input_)};
}

std::vector<uint32_t> RingParty::missing_senders() const {
  if (finished_) return {};
  if (role_ == 0) return {session_.party_of(session_.n - 1).index};
  if (!forwarded_) return {session_.party_of(role_ - 1).index};
  return {session_.party_of(0).index};
}

// ---------------------------------------------------------------------------
// SegmentedParty

SegmentedParty::SegmentedParty(const SumSession& session, PartyId self, RingVector input,
                               RandomSource rng)
    : PartyState(session, self, std::move(input), std::move(rng)),
      accum_(session.modulus, session.vector_len) {
  if (session_.protocol != SumProtocol::segmented)
    throw ParamError("SegmentedParty constructed for a non-segmented session");
  contributed_.assign(*session_.k, false);
}

std::vector<uint32_t> SegmentedParty::segment_order(const SumSession& session, uint32_t segment) {
  std::vector<uint32_t> order(session.n - 1);
  for (uint32_t i = 0; i < session.n - 1; ++i) order[i] = i + 1;
  RandomSource r = RandomSource(session.order_seed).fork(segment);
  for (size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[r.next_below(i)]);
  }
  return order;
}

std::vector<ProtocolMessage> SegmentedParty::do_start() {
  segments_ = urabe_split(input_, *session_.k, rng_);
  if (role_ != 0) return {};
  return launch_segment(0);
}

std::vector<ProtocolMessage> SegmentedParty::launch_segment(uint32_t seg) {
  current_segment_ = seg;
  secret_r_ = RingVector::uniform(session_.modulus, session_.vector_len, rng_);
  const auto order = segment_order(session_, seg);
  return {make(MsgKind::partial_sum, session_.party_of(order.front()),
               segments_[seg] + secret_r_, seg)};
}

std::vector<ProtocolMessage> SegmentedParty::do_message(const ProtocolMessage& msg) {
  if (msg.kind == session_.result_kind) {
    if (msg.from != session_.party_of(0)) throw ProtocolViolation("result from a non-master party");
    note_received(msg);
    finish(msg.payload);
    return {};
  }
  if (msg.kind != MsgKind::partial_sum) throw ProtocolViolation("unexpected message kind");
  const uint32_t k = *session_.k;
  if (msg.segment >= k) throw ProtocolViolation("segment index out of range");
  note_received(msg);
  const auto order = segment_order(session_, msg.segment);

  if (role_ == 0) {
    if (msg.segment != current_segment_)
      throw ProtocolViolation("segment return does not match the live segment");
    if (msg.from != session_.party_of(order.back()))
      throw ProtocolViolation("segment return from the wrong party");
    accum_.add_in_place(msg.payload - secret_r_);
    if (current_segment_ + 1 < k) return launch_segment(current_segment_ + 1);
    return finish_and_broadcast(accum_);
  }

  const auto pos_it = std::find(order.begin(), order.end(), role_);
  const size_t pos = static_cast<size_t>(pos_it - order.begin());
  const PartyId expected_from =
      pos == 0 ? session_.party_of(0) : session_.party_of(order[pos - 1]);
  if (msg.from != expected_from)
    throw ProtocolViolation("partial sum from a party that is not the predecessor");
  if (contributed_[msg.segment]) throw ProtocolViolation("segment contributed twice");
  contributed_[msg.segment] = true;
  const PartyId next =
      pos + 1 < order.size() ? session_.party_of(order[pos + 1]) : session_.party_of(0);
  return {make(MsgKind::partial_sum, next, msg.payload + segments_[msg.segment], msg.segment)};
}

std::vector<uint32_t> SegmentedParty::missing_senders() const {
  if (finished_) return {};
  if (role_ == 0) {
    const auto order = segment_order(session_, current_segment_);
    return {session_.party_of(order.back()).index};
  }
  for (uint32_t seg = 0; seg < contributed_.size(); ++seg) {
    if (contributed_[seg]) continue;
    const auto order = segment_order(session_, seg);
    const auto pos_it = std::find(order.begin(), order.end(), role_);
    const size_t pos = static_cast<size_t>(pos_it - order.begin());
    return {(pos == 0 ? session_.party_of(0) : session_.party_of(order[pos - 1])).index};
  }
  return {session_.party_of(0).index};
}

// ---------------------------------------------------------------------------
// UrabeParty

UrabeParty::UrabeParty(const SumSession& session, PartyId self, RingVector input, RandomSource rng)
    : PartyState(session, self, std::move(input), std::move(rng)),
      k_(session.k.value_or(session.n - 1)),
      kept_(session.modulus, session.vector_len) {
  if (session_.protocol != SumProtocol::urabe)
    throw ParamError("UrabeParty constructed for a non-urabe session");
}

std::vector<uint32_t> UrabeParty::share_senders(uint32_t to, uint32_t n, uint32_t k) {
  std::vector<uint32_t> senders;
  if (to == 0) return senders;
  for (uint32_t j = 1; j < to; ++j) {
    if (to - j <= std::min(k, n - 1 - j)) senders.push_back(j);
  }
  return senders;
}

std::vector<ProtocolMessage> UrabeParty::do_start() {
  if (role_ == 0) {
    for (uint32_t r = 1; r < session_.n; ++r) pending_from_.insert(r);
    return {};
  }
  const uint32_t share_count = std::min(k_ + 1, session_.n - role_);
  auto shares = urabe_split(input_, share_count, rng_);
  kept_ = std::move(shares[0]);
  std::vector<ProtocolMessage> out;
  for (uint32_t m = 1; m < share_count; ++m) {
    out.push_back(make(MsgKind::share, session_.party_of(role_ + m), std::move(shares[m])));
  }
  for (uint32_t j : share_senders(role_, session_.n, k_)) pending_from_.insert(j);
  auto merged = maybe_merge();
  out.insert(out.end(), std::make_move_iterator(merged.begin()),
             std::make_move_iterator(merged.end()));
  return out;
}

std::vector<ProtocolMessage> UrabeParty::maybe_merge() {
  if (merged_sent_ || !pending_from_.empty()) return {};
  merged_sent_ = true;
  return {make(MsgKind::merged_share, session_.party_of(0), kept_)};
}

std::vector<ProtocolMessage> UrabeParty::do_message(const ProtocolMessage& msg) {
  if (msg.kind == session_.result_kind) {
    if (msg.from != session_.party_of(0)) throw ProtocolViolation("result from a non-collector");
    note_received(msg);
    finish(msg.payload);
    return {};
  }
  const uint32_t sender_role = session_.role_of(msg.from);

  if (msg.kind == MsgKind::share) {
    if (role_ == 0) throw ProtocolViolation("collector does not take shares");
    note_received(msg);
    if (pending_from_.erase(sender_role) == 0)
      throw ProtocolViolation("share from a party outside the fan-out window");
    kept_.add_in_place(msg.payload);
    return maybe_merge();
  }

  if (msg.kind == MsgKind::merged_share) {
    if (role_ != 0) throw ProtocolViolation("merged share sent to a non-collector");
    note_received(msg);
    if (pending_from_.erase(sender_role) == 0)
      throw ProtocolViolation("merged share from an unexpected party");
    kept_.add_in_place(msg.payload);
    if (!pending_from_.empty()) return {};
    return finish_and_broadcast(input_ + kept_);
  }

  throw ProtocolViolation("unexpected message kind");
}

std::vector<uint32_t> UrabeParty::missing_senders() const {
  if (finished_) return {};
  std::vector<uint32_t> out;
  if (merged_sent_) return {session_.party_of(0).index};
  for (uint32_t r : pending_from_) out.push_back(session_.party_of(r).index);
  return out;
}

// ---------------------------------------------------------------------------
// Free functions

std::unique_ptr<PartyState> make_party(const SumSession& session, PartyId self, RingVector input,
                                       RandomSource rng) {
  switch (session.protocol) {
    case SumProtocol::ring:
      return std::make_unique<RingParty>(session, self, std::move(input), std::move(rng));
    case SumProtocol::segmented:
      return std::make_unique<SegmentedParty>(session, self, std::move(input), std::move(rng));
    case SumProtocol::urabe:
      return std::make_unique<UrabeParty>(session, self, std::move(input), std::move(rng));
  }
  throw ParamError("unknown protocol");
}

std::vector<RingVector> urabe_split(const RingVector& x, uint32_t count, RandomSource& rng) {
  if (count < 1) throw ParamError("split share count must be positive");
  std::vector<RingVector> shares;
  shares.reserve(count);
  RingVector rest = x;
  for (uint32_t i = 0; i + 1 < count; ++i) {
    shares.push_back(RingVector::uniform(x.modulus(), x.size(), rng));
    rest.sub_in_place(shares.back());
  }
  shares.push_back(std::move(rest));
  return shares;
}

SumOutcome run_sum_session(const SumSession& session, const std::vector<RingVector>& inputs,
                           const RandomSource& rng, const MessageObserver& observer) {
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

  std::deque<ProtocolMessage> queue;
  for (auto& p : parties) {
    for (auto& m : p->start()) queue.push_back(std::move(m));
  }
  while (!queue.empty()) {
    ProtocolMessage msg = std::move(queue.front());
    queue.pop_front();
    if (msg.to.index >= session.n) throw ProtocolViolation("message addressed outside the session");
    trace.push(msg);
    if (observer) observer(msg);
    for (auto& m : parties[msg.to.index]->on_message(msg)) queue.push_back(std::move(m));
  }

  for (const auto& p : parties) {
    if (p->finished()) continue;
    std::ostringstream os;
    os << "secure sum stalled: party " << p->id().index << " still awaiting traffic from";
    for (uint32_t idx : p->missing_senders()) os << " " << idx;
    throw IncompleteRoundError(os.str());
  }
  trace.complete = true;

  SumOutcome out{parties[session.distributor.index]->result(), std::move(trace)};
  for (const auto& p : parties) {
    if (!(p->result() == out.sum)) throw StateError("parties disagree on the protocol result");
  }
  return out;
}

}  // namespace sua
