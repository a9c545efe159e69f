#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "sua/ledger.hpp"
#include "sua/message.hpp"
#include "sua/protocols.hpp"
#include "sua/transport.hpp"

namespace sua {

struct TcpPeer {
  std::string host = "127.0.0.1";
  uint16_t port = 0;
};

/// One party's network presence: a listening socket accepting inbound
/// channels plus one outbound TCP connection per peer. Every message is one
/// frame: magic "SSUM", version, session id, kind, round, segment, from, to,
/// ciphertext length, ciphertext — integers little-endian. The per-pair FIFO
/// contract falls out of TCP stream ordering.
class TcpEndpoint {
 public:
  TcpEndpoint(const SumSession& session, PartyId self, ChannelConfig config, KeyStore keys,
              uint16_t port = 0);
  ~TcpEndpoint();

  TcpEndpoint(const TcpEndpoint&) = delete;
  TcpEndpoint& operator=(const TcpEndpoint&) = delete;

  uint16_t port() const { return port_; }

  /// Dials every other party; peers is indexed by party. Blocks until all
  /// outbound channels are up.
  void connect(const std::vector<TcpPeer>& peers);

  void send(const ProtocolMessage& msg);

  /// Next decrypted message addressed to this party, or nullopt on timeout.
  std::optional<ProtocolMessage> receive(double timeout_s);

  /// This endpoint's cost rows (its own party index only).
  const CostLedger& ledger() const { return ledger_; }

  void shutdown();

 private:
  void accept_loop();
  void reader_loop(int fd);
  void fail_readers(const std::string& why);

  SumSession session_;
  PartyId self_;
  ChannelConfig config_;
  KeyStore keys_;
  CostLedger ledger_;

  int listen_fd_ = -1;
  uint16_t port_ = 0;
  std::vector<int> out_fds_;
  std::vector<uint64_t> nonce_counters_;
  std::thread acceptor_;
  std::vector<std::thread> readers_;
  std::vector<int> in_fds_;
  std::mutex reader_mu_;

  std::mutex inbox_mu_;
  std::condition_variable inbox_cv_;
  std::deque<ProtocolMessage> inbox_;
  std::string error_;
  std::atomic<bool> stopping_{false};
  std::mutex ledger_mu_;
  std::mutex send_mu_;
};

struct TcpRunResult {
  RingVector sum;
  CostLedger ledger;  // merged over all parties
};

/// Runs one complete session with every party on its own thread, talking
/// real TCP over loopback.
TcpRunResult run_sum_over_tcp(const SumSession& session, const std::vector<RingVector>& inputs,
                              ChannelConfig config, const KeyStore& keys, const RandomSource& rng);

}  // namespace sua
