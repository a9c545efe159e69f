#pragma once

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <tuple>
#include <vector>

#include "sua/message.hpp"
#include "sua/trace.hpp"

namespace sua {

/// Reactive per-party protocol engine: feed it messages, collect emissions.
/// One owner per instance; distinct parties may run on distinct threads.
/// Transports live elsewhere — these machines never block and never touch IO.
class PartyState {
 public:
  virtual ~PartyState() = default;

  /// Emits the party's unprompted opening traffic (master mask, share
  /// distribution, ...). Must be called exactly once, before any delivery.
  std::vector<ProtocolMessage> start();

  /// Consumes one message addressed to this party and returns the traffic it
  /// triggers. Duplicate or malformed deliveries throw ProtocolViolation.
  std::vector<ProtocolMessage> on_message(const ProtocolMessage& msg);

  bool finished() const { return finished_; }

  /// The agreed sum; only readable once finished().
  const RingVector& result() const;

  /// Parties (by index) whose traffic this one still waits on. Empty once
  /// finished; used to name absentees when a round stalls.
  virtual std::vector<uint32_t> missing_senders() const = 0;

  PartyId id() const { return self_; }
  uint32_t role() const { return role_; }
  bool is_collector() const { return role_ == 0; }
  const SumSession& session() const { return session_; }

 protected:
  PartyState(const SumSession& session, PartyId self, RingVector input, RandomSource rng);

  virtual std::vector<ProtocolMessage> do_start() = 0;
  virtual std::vector<ProtocolMessage> do_message(const ProtocolMessage& msg) = 0;

  ProtocolMessage make(MsgKind kind, PartyId to, RingVector payload, uint32_t segment = 0) const;
  std::vector<ProtocolMessage> finish_and_broadcast(RingVector y);
  void finish(RingVector y);
  /// Records (kind, round, segment, from); a repeat is a protocol violation.
  void note_received(const ProtocolMessage& msg);

  SumSession session_;
  PartyId self_;
  uint32_t role_;
  RingVector input_;
  RandomSource rng_;
  bool started_ = false;
  bool finished_ = false;
  RingVector result_;
  std::set<std::tuple<uint8_t, uint32_t, uint32_t, uint32_t>> received_;
};

/// Clifton ring pass: the master masks its input with r, every party adds its
/// own value in index order, and the master unmasks and broadcasts.
class RingParty : public PartyState {
 public:
  RingParty(const SumSession& session, PartyId self, RingVector input, RandomSource rng);

  /// Master-only entry point that launches the pass. start() routes here for
  /// the master; calling it on any other party is a role error.
  std::vector<ProtocolMessage> init_master();

  std::vector<uint32_t> missing_senders() const override;

 protected:
  std::vector<ProtocolMessage> do_start() override;
  std::vector<ProtocolMessage> do_message(const ProtocolMessage& msg) override;

 private:
  RingVector secret_r_;   // master only
  bool forwarded_ = false;
};

/// Zhu's k-segmented variant: inputs are pre-split into k segments and one
/// ring pass runs per segment, each over a freshly permuted party order.
class SegmentedParty : public PartyState {
 public:
  SegmentedParty(const SumSession& session, PartyId self, RingVector input, RandomSource rng);

  std::vector<uint32_t> missing_senders() const override;

  /// Visiting order of non-master roles for one segment, derived from the
  /// session order seed so every party computes the same permutation.
  static std::vector<uint32_t> segment_order(const SumSession& session, uint32_t segment);

 protected:
  std::vector<ProtocolMessage> do_start() override;
  std::vector<ProtocolMessage> do_message(const ProtocolMessage& msg) override;

 private:
  std::vector<ProtocolMessage> launch_segment(uint32_t seg);

  std::vector<RingVector> segments_;
  std::vector<bool> contributed_;     // non-master: segment already added
  RingVector secret_r_;               // master, per live segment
  RingVector accum_;                  // master: finished segment totals
  uint32_t current_segment_ = 0;      // master only
};

/// Urabe three-phase protocol, full (k = n-1) or share-bounded. Roles count
/// from the distributor: role 0 collects, role i >= 1 splits its input into
/// min(k+1, n-i) shares and fans them out to the next roles.
class UrabeParty : public PartyState {
 public:
  UrabeParty(const SumSession& session, PartyId self, RingVector input, RandomSource rng);

  std::vector<uint32_t> missing_senders() const override;

  /// Roles that send role `to` a share under bound k (senders are lower roles
  /// within fan-out distance).
  static std::vector<uint32_t> share_senders(uint32_t to, uint32_t n, uint32_t k);

 protected:
  std::vector<ProtocolMessage> do_start() override;
  std::vector<ProtocolMessage> do_message(const ProtocolMessage& msg) override;

 private:
  std::vector<ProtocolMessage> maybe_merge();

  uint32_t k_;
  RingVector kept_;                 // own share, accumulates received ones
  std::set<uint32_t> pending_from_; // roles still owing a share / merged share
  bool merged_sent_ = false;
};

std::unique_ptr<PartyState> make_party(const SumSession& session, PartyId self, RingVector input,
                                       RandomSource rng);

/// Splits x into `count` vectors that sum to x mod l: count-1 uniformly random
/// shares plus one balancing share.
std::vector<RingVector> urabe_split(const RingVector& x, uint32_t count, RandomSource& rng);

using MessageObserver = std::function<void(const ProtocolMessage&)>;

struct SumOutcome {
  RingVector sum;
  MessageTrace trace;
};

/// In-process deterministic driver: runs one complete session over a global
/// FIFO queue. Party i's randomness is rng.fork(i), so a fixed seed replays a
/// byte-identical trace. An observer, when given, sees every delivered
/// message (tests use this to inspect payloads).
SumOutcome run_sum_session(const SumSession& session, const std::vector<RingVector>& inputs,
                           const RandomSource& rng, const MessageObserver& observer = {});

}  // namespace sua
