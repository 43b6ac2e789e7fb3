#include "rfidauth/resources.hpp"

#include <iomanip>
#include <sstream>

#include "rfidauth/lfsr.hpp"
#include "rfidauth/protocol.hpp"
#include "rfidauth/puf.hpp"
#include "rfidauth/word.hpp"

namespace rfidauth {

ResourceReport estimate(unsigned key_length) {
  require_supported_width(key_length);
  ResourceReport r;
  r.key_length = key_length;
  r.lfsr_gates = lfsr_gate_cost(key_length);
  r.puf_gates = puf_gate_cost(key_length);
  r.alu_gates = r.lfsr_gates + r.puf_gates;
  r.control_gates = kControlGates;
  r.total_gates = r.alu_gates + r.control_gates;
  r.storage_bits = tag_storage_bits(key_length);
  r.messages_per_auth = kMessagesPerAuthentication;
  r.under_budget = r.total_gates <= kGateBudget;
  return r;
}

std::vector<ResourceReport> report_table() {
  std::vector<ResourceReport> rows;
  for (unsigned l : kSupportedWidths) rows.push_back(estimate(l));
  return rows;
}

nlohmann::ordered_json to_json(const ResourceReport& r) {
  return {{"key_length", r.key_length},
          {"lfsr_gates", r.lfsr_gates},
          {"puf_gates", r.puf_gates},
          {"alu_gates", r.alu_gates},
          {"control_gates", r.control_gates},
          {"total_gates", r.total_gates},
          {"storage_bits", r.storage_bits},
          {"messages_per_auth", r.messages_per_auth},
          {"under_budget", r.under_budget}};
}

std::string format_table(const std::vector<ResourceReport>& rows) {
  std::ostringstream out;
  const auto row = [&](const char* label, auto field) {
    out << std::left << std::setw(14) << label << std::right;
    for (const auto& r : rows) out << std::setw(9) << field(r);
    out << '\n';
  };
  row("Key length", [](const ResourceReport& r) { return std::to_string(r.key_length) + "-bit"; });
  row("LFSR", [](const ResourceReport& r) { return r.lfsr_gates; });
  row("PUF", [](const ResourceReport& r) { return r.puf_gates; });
  row("ALU", [](const ResourceReport& r) { return r.alu_gates; });
  row("Control", [](const ResourceReport& r) { return r.control_gates; });
  row("Total", [](const ResourceReport& r) { return r.total_gates; });
  row("Storage bits", [](const ResourceReport& r) { return r.storage_bits; });
  row("Messages", [](const ResourceReport& r) { return r.messages_per_auth; });
  row("<= 2000", [](const ResourceReport& r) { return r.under_budget ? "yes" : "no"; });
  return out.str();
}

}  // namespace rfidauth
