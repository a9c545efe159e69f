#include "sua/tcp.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <chrono>
#include <cstring>

#include "sua/ring.hpp"

namespace sua {
namespace {

using Clock = std::chrono::steady_clock;

constexpr char kMagic[4] = {'S', 'S', 'U', 'M'};
constexpr uint8_t kVersion = 1;
constexpr size_t kHeaderLen = 4 + 1 + 16 + 1 + 4 + 4 + 4 + 4 + 8;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void put_u32(uint8_t* p, uint32_t v) {
  for (int i = 0; i < 4; ++i) p[i] = static_cast<uint8_t>(v >> (8 * i));
}

void put_u64(uint8_t* p, uint64_t v) {
  for (int i = 0; i < 8; ++i) p[i] = static_cast<uint8_t>(v >> (8 * i));
}

uint32_t get_u32(const uint8_t* p) {
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= uint32_t(p[i]) << (8 * i);
  return v;
}

uint64_t get_u64(const uint8_t* p) {
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= uint64_t(p[i]) << (8 * i);
  return v;
}

void write_all(int fd, const uint8_t* data, size_t len) {
  size_t done = 0;
  while (done < len) {
    const ssize_t n = ::write(fd, data + done, len - done);
    if (n <= 0) {
      if (n < 0 && errno == EINTR) continue;
      throw ChannelError("socket write failed");
    }
    done += static_cast<size_t>(n);
  }
}

// false on clean EOF at a frame boundary
bool read_all(int fd, uint8_t* data, size_t len) {
  size_t done = 0;
  while (done < len) {
    const ssize_t n = ::read(fd, data + done, len - done);
    if (n == 0) {
      if (done == 0) return false;
      throw ChannelError("peer closed mid-frame");
    }
    if (n < 0) {
      if (errno == EINTR) continue;
      throw ChannelError("socket read failed");
    }
    done += static_cast<size_t>(n);
  }
  return true;
}

std::array<uint8_t, kGcmNonceLen> counter_nonce(uint64_t counter) {
  std::array<uint8_t, kGcmNonceLen> nonce{};
  for (int i = 0; i < 8; ++i) nonce[i] = static_cast<uint8_t>(counter >> (8 * i));
  return nonce;
}

}  // namespace

TcpEndpoint::TcpEndpoint(const SumSession& session, PartyId self, ChannelConfig config,
                         KeyStore keys, uint16_t port)
    : session_(session),
      self_(self),
      config_(config),
      keys_(std::move(keys)),
      ledger_(session.n),
      out_fds_(session.n, -1),
      nonce_counters_(session.n, 0) {
  session_.validate();
  config_.simulation = false;
  config_.validate();

  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw ChannelError("socket() failed");
  const int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);

  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(port);
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
    ::close(listen_fd_);
    throw ChannelError("bind() failed");
  }
  socklen_t len = sizeof addr;
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
  if (::listen(listen_fd_, static_cast<int>(session_.n)) != 0) {
    ::close(listen_fd_);
    throw ChannelError("listen() failed");
  }
  acceptor_ = std::thread([this] { accept_loop(); });
}

TcpEndpoint::~TcpEndpoint() { shutdown(); }

void TcpEndpoint::shutdown() {
  if (stopping_.exchange(true)) {
    if (acceptor_.joinable()) acceptor_.join();
    for (auto& t : readers_) {
      if (t.joinable()) t.join();
    }
    return;
  }
  if (listen_fd_ >= 0) {
    ::shutdown(listen_fd_, SHUT_RDWR);
    ::close(listen_fd_);
    listen_fd_ = -1;
  }
  for (int& fd : out_fds_) {
    if (fd >= 0) {
      ::shutdown(fd, SHUT_RDWR);
      ::close(fd);
      fd = -1;
    }
  }
  if (acceptor_.joinable()) acceptor_.join();
  {
    // unblock readers stuck on peers that never close their write side
    std::lock_guard<std::mutex> lock(reader_mu_);
    for (int fd : in_fds_) ::shutdown(fd, SHUT_RDWR);
  }
  for (auto& t : readers_) {
    if (t.joinable()) t.join();
  }
  for (int fd : in_fds_) ::close(fd);
  in_fds_.clear();
}

void TcpEndpoint::accept_loop() {
  while (!stopping_) {
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      if (errno == EINTR) continue;
      return;  // listener closed
    }
    std::lock_guard<std::mutex> lock(reader_mu_);
    in_fds_.push_back(fd);
    readers_.emplace_back([this, fd] { reader_loop(fd); });
  }
}

void TcpEndpoint::fail_readers(const std::string& why) {
  std::lock_guard<std::mutex> lock(inbox_mu_);
  if (error_.empty()) error_ = why;
  inbox_cv_.notify_all();
}

void TcpEndpoint::reader_loop(int fd) {
  std::vector<uint8_t> header(kHeaderLen);
  try {
    while (read_all(fd, header.data(), header.size())) {
      if (std::memcmp(header.data(), kMagic, 4) != 0) throw ChannelError("bad frame magic");
      size_t off = 4;
      if (header[off++] != kVersion) throw ChannelError("unsupported frame version");
      SessionId sid;
      std::copy_n(header.data() + off, 16, sid.bytes.begin());
      off += 16;
      if (!(sid == session_.id)) throw ChannelError("frame for a different session");
      const auto kind = static_cast<MsgKind>(header[off++]);
      const uint32_t round = get_u32(header.data() + off);
      off += 4;
      const uint32_t segment = get_u32(header.data() + off);
      off += 4;
      const uint32_t from = get_u32(header.data() + off);
      off += 4;
      const uint32_t to = get_u32(header.data() + off);
      off += 4;
      const uint64_t ct_len = get_u64(header.data() + off);
      if (from >= session_.n || to != self_.index) throw ChannelError("frame peer mismatch");
      if (ct_len > (uint64_t(session_.vector_len) * session_.modulus.bits / 8) + (1 << 16))
        throw ChannelError("frame length implausible");

      std::vector<uint8_t> ct(ct_len);
      if (ct_len > 0 && !read_all(fd, ct.data(), ct.size()))
        throw ChannelError("peer closed mid-frame");

      std::vector<uint8_t> clear;
      const auto t0 = Clock::now();
      switch (config_.cipher) {
        case CipherKind::none:
          clear = std::move(ct);
          break;
        case CipherKind::aes128_ecb:
          clear = aes_ecb_decrypt(keys_.get(from, self_.index), ct);
          break;
        case CipherKind::aes128_aead:
          clear = aes_gcm_open(keys_.get(from, self_.index), ct);
          break;
      }
      {
        std::lock_guard<std::mutex> lock(ledger_mu_);
        ledger_.add_measured(self_.index, Phase::decrypt, seconds_since(t0));
      }

      ProtocolMessage msg;
      msg.kind = kind;
      msg.session = session_.id;
      msg.round = round;
      msg.segment = segment;
      msg.from = PartyId{from};
      msg.to = self_;
      msg.payload = deserialize_elements(clear, session_.modulus, session_.vector_len);

      {
        std::lock_guard<std::mutex> lock(inbox_mu_);
        inbox_.push_back(std::move(msg));
      }
      inbox_cv_.notify_one();
    }
  } catch (const std::exception& e) {
    fail_readers(e.what());
  }
  // fd stays open until shutdown() closes it; closing here would race with
  // the shutdown() wakeup and could hit a recycled descriptor
}

void TcpEndpoint::connect(const std::vector<TcpPeer>& peers) {
  if (peers.size() != session_.n) throw ParamError("peer list size must equal the party count");
  for (uint32_t j = 0; j < session_.n; ++j) {
    if (j == self_.index) continue;
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(peers[j].port);
    if (::inet_pton(AF_INET, peers[j].host.c_str(), &addr.sin_addr) != 1)
      throw ChannelError("bad peer address " + peers[j].host);
    int fd = -1;
    for (int attempt = 0; attempt < 100; ++attempt) {
      fd = ::socket(AF_INET, SOCK_STREAM, 0);
      if (fd < 0) throw ChannelError("socket() failed");
      if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) == 0) break;
      ::close(fd);
      fd = -1;
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    if (fd < 0)
      throw ChannelError("could not reach party " + std::to_string(j) + " on port " +
                         std::to_string(peers[j].port));
    const int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    out_fds_[j] = fd;
  }
}

void TcpEndpoint::send(const ProtocolMessage& msg) {
  if (msg.from != self_) throw ChannelError("endpoint can only send as its own party");
  if (msg.to.index >= session_.n || msg.to == self_) throw ChannelError("unknown peer");
  const int fd = out_fds_[msg.to.index];
  if (fd < 0) throw ChannelError("no channel to party " + std::to_string(msg.to.index));

  const std::vector<uint8_t> clear = serialize_elements(msg.payload);

  std::lock_guard<std::mutex> lock(send_mu_);
  std::vector<uint8_t> ct;
  const auto t0 = Clock::now();
  switch (config_.cipher) {
    case CipherKind::none:
      ct = clear;
      break;
    case CipherKind::aes128_ecb:
      ct = aes_ecb_encrypt(keys_.get(self_.index, msg.to.index), clear);
      break;
    case CipherKind::aes128_aead:
      ct = aes_gcm_seal(keys_.get(self_.index, msg.to.index), clear,
                        counter_nonce(nonce_counters_[msg.to.index]++));
      break;
  }
  const double enc_s = seconds_since(t0);

  std::vector<uint8_t> frame(kHeaderLen + ct.size());
  std::memcpy(frame.data(), kMagic, 4);
  size_t off = 4;
  frame[off++] = kVersion;
  std::copy(session_.id.bytes.begin(), session_.id.bytes.end(), frame.data() + off);
  off += 16;
  frame[off++] = static_cast<uint8_t>(msg.kind);
  put_u32(frame.data() + off, msg.round);
  off += 4;
  put_u32(frame.data() + off, msg.segment);
  off += 4;
  put_u32(frame.data() + off, msg.from.index);
  off += 4;
  put_u32(frame.data() + off, msg.to.index);
  off += 4;
  put_u64(frame.data() + off, ct.size());
  off += 8;
  std::copy(ct.begin(), ct.end(), frame.data() + off);

  const auto t1 = Clock::now();
  write_all(fd, frame.data(), frame.size());
  const double comm_s = seconds_since(t1);

  {
    std::lock_guard<std::mutex> lg(ledger_mu_);
    if (config_.cipher != CipherKind::none)
      ledger_.add_measured(self_.index, Phase::encrypt, enc_s);
    ledger_.add_measured(self_.index, Phase::communicate, comm_s);
    ledger_.add_traffic(is_result_kind(msg.kind) ? TrafficClass::broadcast
                                                 : TrafficClass::protocol,
                        self_.index, msg.to.index, msg.payload.payload_bits(), ct.size() * 8);
  }
}

std::optional<ProtocolMessage> TcpEndpoint::receive(double timeout_s) {
  std::unique_lock<std::mutex> lock(inbox_mu_);
  const bool got = inbox_cv_.wait_for(lock, std::chrono::duration<double>(timeout_s),
                                      [this] { return !inbox_.empty() || !error_.empty(); });
  if (!error_.empty()) throw ChannelError("channel failure: " + error_);
  if (!got || inbox_.empty()) return std::nullopt;
  ProtocolMessage msg = std::move(inbox_.front());
  inbox_.pop_front();
  return msg;
}

TcpRunResult run_sum_over_tcp(const SumSession& session, const std::vector<RingVector>& inputs,
                              ChannelConfig config, const KeyStore& keys,
                              const RandomSource& rng) {
  session.validate();
  if (inputs.size() != session.n)
    throw ParamError("input count does not match the session party count");
  config.simulation = false;
  config.validate();

  std::vector<std::unique_ptr<TcpEndpoint>> endpoints;
  std::vector<TcpPeer> peers(session.n);
  for (uint32_t i = 0; i < session.n; ++i) {
    endpoints.push_back(
        std::make_unique<TcpEndpoint>(session, PartyId{i}, config, keys));
    peers[i].port = endpoints.back()->port();
  }
  for (auto& ep : endpoints) ep->connect(peers);

  std::vector<std::unique_ptr<PartyState>> parties;
  for (uint32_t i = 0; i < session.n; ++i) {
    parties.push_back(make_party(session, PartyId{i}, inputs[i], rng.fork(i)));
  }

  std::vector<std::string> failures(session.n);
  std::vector<std::thread> threads;
  for (uint32_t i = 0; i < session.n; ++i) {
    threads.emplace_back([&, i] {
      try {
        for (const auto& m : parties[i]->start()) endpoints[i]->send(m);
        while (!parties[i]->finished()) {
          auto msg = endpoints[i]->receive(10.0);
          if (!msg) {
            std::string who = "secure sum stalled: party " + std::to_string(i) +
                              " still awaiting traffic from";
            for (uint32_t idx : parties[i]->missing_senders()) who += " " + std::to_string(idx);
            throw IncompleteRoundError(who);
          }
          for (const auto& m : parties[i]->on_message(*msg)) endpoints[i]->send(m);
        }
      } catch (const std::exception& e) {
        failures[i] = e.what();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& ep : endpoints) ep->shutdown();
  for (const auto& f : failures) {
    if (!f.empty()) throw ChannelError(f);
  }

  CostLedger merged(session.n);
  for (const auto& ep : endpoints) merged.merge(ep->ledger());
  return {parties[session.distributor.index]->result(), std::move(merged)};
}

}  // namespace sua
