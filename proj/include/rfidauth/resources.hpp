#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace rfidauth {

/// Gates available for security logic on a passive tag.
inline constexpr unsigned kGateBudget = 2000;
inline constexpr unsigned kControlGates = 9;

struct ResourceReport {
  unsigned key_length = 0;
  unsigned lfsr_gates = 0;
  unsigned puf_gates = 0;
  unsigned alu_gates = 0;  // lfsr + puf
  unsigned control_gates = kControlGates;
  unsigned total_gates = 0;
  unsigned storage_bits = 0;  // IDS, ID, G_n
  unsigned messages_per_auth = 0;
  bool under_budget = false;
};

/// Throws Errc::UnsupportedWidth.
ResourceReport estimate(unsigned key_length);

/// One report per supported key length, ascending.
std::vector<ResourceReport> report_table();

nlohmann::ordered_json to_json(const ResourceReport& r);
/// Aligned text: one column per key length, rows ALU / Control / Total.
std::string format_table(const std::vector<ResourceReport>& rows);

}  // namespace rfidauth
