#include "sua/ledger.hpp"

#include <cinttypes>
#include <cstdio>
#include <sstream>

namespace sua {

const char* phase_name(Phase p) {
  switch (p) {
    case Phase::train: return "train";
    case Phase::encrypt: return "encrypt";
    case Phase::add: return "add";
    case Phase::decrypt: return "decrypt";
    case Phase::communicate: return "communicate";
  }
  return "?";
}

const char* traffic_class_name(TrafficClass c) {
  switch (c) {
    case TrafficClass::protocol: return "protocol";
    case TrafficClass::broadcast: return "broadcast";
    case TrafficClass::init: return "init";
  }
  return "?";
}

void CostLedger::check_party(uint32_t party) const {
  if (party >= measured_.size()) throw ParamError("ledger: party index out of range");
}

void CostLedger::add_measured(uint32_t party, Phase phase, double seconds) {
  check_party(party);
  if (seconds < 0) throw ParamError("ledger: negative time increment");
  measured_[party][static_cast<size_t>(phase)] += seconds;
}

void CostLedger::add_simulated_comm(uint32_t party, double seconds) {
  check_party(party);
  if (seconds < 0) throw ParamError("ledger: negative time increment");
  simulated_comm_[party] += seconds;
}

void CostLedger::add_traffic(TrafficClass cls, uint32_t from, uint32_t to, uint64_t payload_bits,
                             uint64_t ciphertext_bits) {
  if (ciphertext_bits < payload_bits)
    throw ParamError("ledger: ciphertext cannot be smaller than the payload");
  PairTraffic& t = traffic_[static_cast<size_t>(cls)][{from, to}];
  t.payload_bits += payload_bits;
  t.ciphertext_bits += ciphertext_bits;
  t.messages += 1;
}

double CostLedger::measured_seconds(uint32_t party, Phase phase) const {
  check_party(party);
  return measured_[party][static_cast<size_t>(phase)];
}

double CostLedger::simulated_comm_seconds(uint32_t party) const {
  check_party(party);
  return simulated_comm_[party];
}

double CostLedger::total_measured(Phase phase) const {
  double total = 0;
  for (const auto& row : measured_) total += row[static_cast<size_t>(phase)];
  return total;
}

double CostLedger::total_simulated_comm() const {
  double total = 0;
  for (double s : simulated_comm_) total += s;
  return total;
}

uint64_t CostLedger::payload_bits(TrafficClass cls) const {
  uint64_t total = 0;
  for (const auto& [key, t] : traffic_[static_cast<size_t>(cls)]) total += t.payload_bits;
  return total;
}

uint64_t CostLedger::ciphertext_bits(TrafficClass cls) const {
  uint64_t total = 0;
  for (const auto& [key, t] : traffic_[static_cast<size_t>(cls)]) total += t.ciphertext_bits;
  return total;
}

uint64_t CostLedger::messages(TrafficClass cls) const {
  uint64_t total = 0;
  for (const auto& [key, t] : traffic_[static_cast<size_t>(cls)]) total += t.messages;
  return total;
}

uint64_t CostLedger::payload_bits_from(uint32_t party) const {
  uint64_t total = 0;
  for (const auto& per_class : traffic_) {
    for (const auto& [key, t] : per_class) {
      if (key.first == party) total += t.payload_bits;
    }
  }
  return total;
}

const std::map<CostLedger::PairKey, PairTraffic>& CostLedger::pair_traffic(
    TrafficClass cls) const {
  return traffic_[static_cast<size_t>(cls)];
}

void CostLedger::merge(const CostLedger& other) {
  if (other.measured_.size() != measured_.size())
    throw ParamError("ledger merge: party counts differ");
  for (size_t p = 0; p < measured_.size(); ++p) {
    for (size_t ph = 0; ph < 5; ++ph) measured_[p][ph] += other.measured_[p][ph];
    simulated_comm_[p] += other.simulated_comm_[p];
  }
  for (size_t c = 0; c < traffic_.size(); ++c) {
    for (const auto& [key, t] : other.traffic_[c]) {
      PairTraffic& mine = traffic_[c][key];
      mine.payload_bits += t.payload_bits;
      mine.ciphertext_bits += t.ciphertext_bits;
      mine.messages += t.messages;
    }
  }
}

std::string CostLedger::to_csv() const {
  std::ostringstream os;
  os << "party,train_s,encrypt_s,add_s,decrypt_s,communicate_s,sim_communicate_s\n";
  char buf[64];
  const auto cell = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.9f", v);
    os << ',' << buf;
  };
  for (size_t p = 0; p < measured_.size(); ++p) {
    os << p;
    for (Phase ph : kAllPhases) cell(measured_[p][static_cast<size_t>(ph)]);
    cell(simulated_comm_[p]);
    os << '\n';
  }
  os << "total";
  for (Phase ph : kAllPhases) cell(total_measured(ph));
  cell(total_simulated_comm());
  os << '\n';
  return os.str();
}

std::string CostLedger::pair_csv() const {
  std::ostringstream os;
  os << "class,from,to,payload_bits,ciphertext_bits,messages\n";
  for (size_t c = 0; c < traffic_.size(); ++c) {
    for (const auto& [key, t] : traffic_[c]) {
      os << traffic_class_name(static_cast<TrafficClass>(c)) << ',' << key.first << ','
         << key.second << ',' << t.payload_bits << ',' << t.ciphertext_bits << ',' << t.messages
         << '\n';
    }
  }
  return os.str();
}

}  // namespace sua
