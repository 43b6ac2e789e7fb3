// rfidsim: drive the tag/reader simulator from the command line.
//
//   rfidsim run      --key-length 64 --rounds 10 --seed 42 --out t.json
//   rfidsim attack   --scenario all --key-length 64 --seed 7
//   rfidsim transfer --key-length 64 --seed 1 --rounds 3
//   rfidsim gates    [--key-length 96] [--out gates.json]
//
// Exit status: 0 on success, 1 when a round or verdict fails, 2 on usage errors.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <string>

#include "rfidauth/adversary.hpp"
#include "rfidauth/error.hpp"
#include "rfidauth/protocol.hpp"
#include "rfidauth/resources.hpp"
#include "rfidauth/serialize.hpp"

namespace {

using rfidauth::SessionOutcome;

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct RunConfig {
  unsigned key_length = 64;
  std::uint64_t seed = 1;
  unsigned rounds = 1;
  std::string scenario = "all";
  std::string out;
};

// Writes `doc` to `path` ("-" is stdout). Returns false on I/O failure.
bool write_json(const nlohmann::ordered_json& doc, const std::string& path) {
  const std::string text = doc.dump(2) + "\n";
  if (path == "-") {
    std::cout << text;
    return static_cast<bool>(std::cout);
  }
  std::ofstream f(path, std::ios::binary);
  f << text;
  return static_cast<bool>(f);
}

// Human-readable lines go to stderr when JSON occupies stdout.
std::ostream& report_stream(const RunConfig& cfg) { return cfg.out == "-" ? std::cerr : std::cout; }

int cmd_run(const RunConfig& cfg) {
  auto [tag, reader] = rfidauth::provision(cfg.key_length, cfg.seed);
  std::vector<rfidauth::SessionTranscript> transcripts;
  unsigned ok = 0;
  for (unsigned r = 1; r <= cfg.rounds; ++r) {
    transcripts.push_back(rfidauth::run_honest_round(tag, reader, cfg.seed, r));
    ok += transcripts.back().outcome == SessionOutcome::MutualSuccess &&
          rfidauth::is_synchronized(tag, reader);
  }
  if (!cfg.out.empty() && !write_json(rfidauth::transcripts_to_json(transcripts), cfg.out)) {
    std::cerr << "error: cannot write " << cfg.out << '\n';
    return kExitFailure;
  }
  report_stream(cfg) << ok << "/" << cfg.rounds << " rounds MutualSuccess (L=" << cfg.key_length
                     << ", seed=" << cfg.seed << ")\n";
  return ok == cfg.rounds ? 0 : kExitFailure;
}

int cmd_attack(const RunConfig& cfg) {
  std::vector<rfidauth::ScenarioResult> results;
  if (cfg.scenario == "all") {
    results = rfidauth::run_all(cfg.key_length, cfg.seed);
  } else {
    results.push_back(rfidauth::run_scenario(cfg.scenario, cfg.key_length, cfg.seed));
  }
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  bool all_pass = true;
  auto& out = report_stream(cfg);
  for (const auto& r : results) {
    doc.push_back(rfidauth::scenario_to_json(r));
    all_pass = all_pass && r.verdict.pass;
    out << (r.verdict.pass ? "PASS " : "FAIL ") << r.verdict.scenario
        << "  expected=" << rfidauth::to_string(r.verdict.expected)
        << " observed=" << rfidauth::to_string(r.verdict.observed) << "  (" << r.verdict.detail
        << ")\n";
  }
  if (!cfg.out.empty() && !write_json(doc, cfg.out)) {
    std::cerr << "error: cannot write " << cfg.out << '\n';
    return kExitFailure;
  }
  return all_pass ? 0 : kExitFailure;
}

int cmd_transfer(const RunConfig& cfg) {
  auto [tag, old_owner] = rfidauth::provision(cfg.key_length, cfg.seed);
  std::vector<rfidauth::SessionTranscript> transcripts;
  unsigned round = 0;
  for (unsigned r = 0; r < cfg.rounds; ++r) {
    transcripts.push_back(rfidauth::run_honest_round(tag, old_owner, cfg.seed, ++round));
  }
  rfidauth::ReaderTable new_owner(old_owner.lfsr());
  new_owner.insert(old_owner.transfer_ownership(tag.secrets().ids).value());

  transcripts.push_back(rfidauth::run_honest_round(tag, new_owner, cfg.seed, ++round));
  const bool new_ok = transcripts.back().outcome == SessionOutcome::MutualSuccess &&
                      rfidauth::is_synchronized(tag, new_owner);
  transcripts.push_back(rfidauth::run_honest_round(tag, old_owner, cfg.seed, ++round));
  const bool old_locked = transcripts.back().outcome != SessionOutcome::MutualSuccess;

  nlohmann::ordered_json doc{{"key_length", cfg.key_length},
                             {"seed", cfg.seed},
                             {"new_owner_authenticated", new_ok},
                             {"old_owner_locked_out", old_locked},
                             {"transcripts", rfidauth::transcripts_to_json(transcripts)}};
  if (!cfg.out.empty() && !write_json(doc, cfg.out)) {
    std::cerr << "error: cannot write " << cfg.out << '\n';
    return kExitFailure;
  }
  report_stream(cfg) << "new owner: " << (new_ok ? "MutualSuccess" : "failed")
                     << "; old owner: " << (old_locked ? "locked out" : "still has access")
                     << '\n';
  return new_ok && old_locked ? 0 : kExitFailure;
}

int cmd_gates(const RunConfig& cfg, bool single) {
  const std::vector<rfidauth::ResourceReport> rows =
      single ? std::vector{rfidauth::estimate(cfg.key_length)} : rfidauth::report_table();
  if (!cfg.out.empty()) {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const auto& r : rows) doc.push_back(rfidauth::to_json(r));
    if (!write_json(doc, cfg.out)) {
      std::cerr << "error: cannot write " << cfg.out << '\n';
      return kExitFailure;
    }
  }
  if (cfg.out != "-") std::cout << rfidauth::format_table(rows);
  bool ok = true;
  for (const auto& r : rows) ok = ok && r.under_budget;
  return ok ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RFID mutual authentication / ownership transfer simulator"};
  app.require_subcommand(1);
  RunConfig cfg;

  const auto key_length_check = CLI::IsMember({8, 16, 32, 64, 96, 160});
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--key-length,-l", cfg.key_length, "Key length L in bits")
        ->check(key_length_check)
        ->capture_default_str();
    sub->add_option("--seed,-s", cfg.seed, "Provisioning seed")->capture_default_str();
    sub->add_option("--out,-o", cfg.out, "JSON output path ('-' for stdout)");
  };

  auto* run = app.add_subcommand("run", "Run honest mutual-authentication rounds");
  add_common(run);
  run->add_option("--rounds,-r", cfg.rounds, "Number of rounds")
      ->check(CLI::Range(1u, 1000000u))
      ->capture_default_str();

  auto* attack = app.add_subcommand("attack", "Run adversary scenarios");
  add_common(attack);
  attack->add_option("--scenario", cfg.scenario, "Scenario name or 'all'")->capture_default_str();

  auto* transfer = app.add_subcommand("transfer", "Hand a tag to a new owner and check lockout");
  add_common(transfer);
  transfer->add_option("--rounds,-r", cfg.rounds, "Rounds with the old owner before transfer")
      ->check(CLI::Range(1u, 1000000u))
      ->capture_default_str();

  auto* gates = app.add_subcommand("gates", "Print the hardware cost table");
  add_common(gates);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*run) return cmd_run(cfg);
    if (*attack) {
      if (cfg.scenario != "all") {
        bool known = false;
        for (const auto& info : rfidauth::scenario_registry()) known = known || info.name == cfg.scenario;
        if (!known) {
          std::cerr << "--scenario: unknown scenario '" << cfg.scenario << "'\n";
          return kExitUsage;
        }
      }
      return cmd_attack(cfg);
    }
    if (*transfer) return cmd_transfer(cfg);
    if (*gates) return cmd_gates(cfg, gates->count("--key-length") > 0);
  } catch (const rfidauth::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
