#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "rfidauth/protocol.hpp"

namespace rfidauth {

// ---- attack scripts ----

/// Selects messages by round, protocol step (1-4) and/or message type.
/// Unset fields match anything.
struct MessageMatch {
  std::optional<unsigned> round;
  std::optional<unsigned> step;
  std::optional<std::string> type;

  bool matches(unsigned round_no, unsigned step_no, const Message& msg) const;
};

struct PassAction {};
struct DropAction {};
/// Deliver the message recorded at `log_index` instead.
struct ReplayAction {
  std::size_t log_index;
};
/// XOR one mask into each payload word, in wire order.
struct ModifyAction {
  std::vector<Word> masks;
};
struct InjectAction {
  Message message;
};

using AttackAction = std::variant<PassAction, DropAction, ReplayAction, ModifyAction, InjectAction>;

struct AttackRule {
  MessageMatch match;
  AttackAction action;
};

/// Rules are checked in order; the first match decides. No match passes.
struct AttackScript {
  std::vector<AttackRule> rules;
};

struct LogRecord {
  unsigned round;
  unsigned step;
  Direction dir;
  Message sent;
  std::optional<Message> delivered;
  std::string action;  // "pass", "drop", "replay", "modify", "inject"
};

/// Tag-reader link under Dolev-Yao control: every transmission is recorded,
/// then the active script may drop, rewrite, replay or substitute it.
class Channel {
 public:
  explicit Channel(AttackScript script = {}) : script_(std::move(script)) {}

  void set_script(AttackScript script) { script_ = std::move(script); }
  void set_round(unsigned round) noexcept { round_ = round; }
  unsigned round() const noexcept { return round_; }

  /// Throws Errc::InvalidReplay if a replay rule points past the log.
  std::optional<Message> transmit(Direction dir, unsigned step, const Message& msg);

  /// Adapter for run_session. The channel must outlive the returned object.
  Interceptor interceptor();

  const std::vector<LogRecord>& log() const noexcept { return log_; }
  /// Indices of records in `round` carrying a message of `type`.
  std::vector<std::size_t> find(unsigned round, std::string_view type) const;

 private:
  AttackScript script_;
  std::vector<LogRecord> log_;
  unsigned round_ = 0;
};

/// A fake tag driven by the adversary: it presents `ids` and answers the
/// reader's Step-3 challenge with `reply` (or stays silent).
struct Counterfeit {
  Word ids;
  std::optional<TagAuth> reply;
};

/// A session between `reader` and an adversary-controlled tag, carried on
/// `channel` so it is logged like any other.
SessionTranscript run_counterfeit_session(ReaderTable& reader, Channel& channel,
                                          const Counterfeit& fake, std::uint64_t seed,
                                          unsigned round);

/// Greetings recoverable from a compromised current greeting and the
/// recorded TagAuth history (oldest first). F is public and invertible, so
/// each m1 = G_{j+1} xor F(G_j) yields G_j once G_{j+1} is known. Returns
/// the recovered greetings newest first, one per history entry.
std::vector<Word> recover_past_greetings(const LfsrSpec& lfsr, const Word& compromised_g_n,
                                         std::span<const TagAuth> history);

// ---- scenarios ----

enum class Expectation { AttackFails, AttackSucceeds, PermanentDesync };
std::string_view to_string(Expectation e) noexcept;

struct Verdict {
  std::string scenario;
  Expectation expected = Expectation::AttackFails;
  Expectation observed = Expectation::AttackFails;
  bool pass = false;
  std::string detail;
};

struct ScenarioResult {
  Verdict verdict;
  unsigned key_length = 0;
  std::uint64_t seed = 0;
  std::vector<SessionTranscript> transcripts;
};

struct ScenarioInfo {
  std::string_view name;
  Expectation expected;
  std::string_view claim;
};

/// Registered scenarios, in execution order.
std::span<const ScenarioInfo> scenario_registry() noexcept;

/// Deterministic in (name, l, seed). Throws Errc::UnknownScenario and
/// Errc::UnsupportedWidth.
ScenarioResult run_scenario(std::string_view name, unsigned l, std::uint64_t seed);

std::vector<ScenarioResult> run_all(unsigned l, std::uint64_t seed);

/// {scenario, key_length, seed, expected, observed, pass, transcripts}
nlohmann::ordered_json scenario_to_json(const ScenarioResult& r);

}  // namespace rfidauth
