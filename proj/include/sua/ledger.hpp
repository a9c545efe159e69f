#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sua/errors.hpp"

namespace sua {

enum class Phase : uint8_t { train = 0, encrypt = 1, add = 2, decrypt = 3, communicate = 4 };

constexpr std::array<Phase, 5> kAllPhases = {Phase::train, Phase::encrypt, Phase::add,
                                             Phase::decrypt, Phase::communicate};

const char* phase_name(Phase p);

/// Traffic buckets: protocol carries the sum-protocol messages themselves,
/// broadcast the final result fan-out, init one-off model distribution.
enum class TrafficClass : uint8_t { protocol = 0, broadcast = 1, init = 2 };

const char* traffic_class_name(TrafficClass c);

struct PairTraffic {
  uint64_t payload_bits = 0;
  uint64_t ciphertext_bits = 0;
  uint64_t messages = 0;

  friend bool operator==(const PairTraffic&, const PairTraffic&) = default;
};

/// Logical network clock: seconds a transfer occupies the configured link.
struct BandwidthModel {
  double rate_bps = 1e9;   // 1 Gbps default
  double latency_s = 0.0;  // per-message

  double transfer_seconds(uint64_t bits) const {
    if (rate_bps <= 0) throw ParamError("bandwidth rate must be positive");
    return static_cast<double>(bits) / rate_bps + latency_s;
  }
};

/// Per-party cost accounting. Measured wall-clock seconds (by phase) and
/// bandwidth-model seconds live in separate columns and are never mixed;
/// traffic is booked per ordered (from, to) pair and per bucket.
class CostLedger {
 public:
  CostLedger() = default;
  explicit CostLedger(uint32_t parties) : measured_(parties), simulated_comm_(parties, 0.0) {
    for (auto& row : measured_) row.fill(0.0);
  }

  uint32_t parties() const { return static_cast<uint32_t>(measured_.size()); }

  void add_measured(uint32_t party, Phase phase, double seconds);
  void add_simulated_comm(uint32_t party, double seconds);
  void add_traffic(TrafficClass cls, uint32_t from, uint32_t to, uint64_t payload_bits,
                   uint64_t ciphertext_bits);

  double measured_seconds(uint32_t party, Phase phase) const;
  double simulated_comm_seconds(uint32_t party) const;
  double total_measured(Phase phase) const;
  double total_simulated_comm() const;

  uint64_t payload_bits(TrafficClass cls) const;
  uint64_t ciphertext_bits(TrafficClass cls) const;
  uint64_t messages(TrafficClass cls) const;
  uint64_t payload_bits_from(uint32_t party) const;

  using PairKey = std::pair<uint32_t, uint32_t>;
  const std::map<PairKey, PairTraffic>& pair_traffic(TrafficClass cls) const;

  /// Folds another ledger (same party count) into this one.
  void merge(const CostLedger& other);

  /// Per-party summary rows plus a totals row; timing columns carry seconds.
  std::string to_csv() const;
  /// One row per (class, from, to) with bit and message counts. Fully
  /// deterministic, suitable for golden comparisons.
  std::string pair_csv() const;

 private:
  void check_party(uint32_t party) const;

  std::vector<std::array<double, 5>> measured_;
  std::vector<double> simulated_comm_;
  std::array<std::map<PairKey, PairTraffic>, 3> traffic_;
};

}  // namespace sua
