#include "rfidauth/adversary.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "rfidauth/error.hpp"
#include "rfidauth/serialize.hpp"

namespace rfidauth {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Message apply_masks(const Message& msg, const std::vector<Word>& masks) {
  const auto mask = [&](std::size_t i, const Word& w) {
    return i < masks.size() ? w ^ masks[i] : w;
  };
  return std::visit(Overloaded{
                        [](const Req& m) -> Message { return m; },
                        [&](const IdsResponse& m) -> Message { return IdsResponse{mask(0, m.ids)}; },
                        [&](const ReaderAuth& m) -> Message {
                          return ReaderAuth{mask(0, m.id_xor_gn)};
                        },
                        [&](const TagAuth& m) -> Message {
                          return TagAuth{mask(0, m.m1), mask(1, m.m2)};
                        },
                    },
                    msg);
}

}  // namespace

bool MessageMatch::matches(unsigned round_no, unsigned step_no, const Message& msg) const {
  return (!round || *round == round_no) && (!step || *step == step_no) &&
         (!type || *type == message_type(msg));
}

std::optional<Message> Channel::transmit(Direction dir, unsigned step, const Message& msg) {
  const auto rule = std::find_if(script_.rules.begin(), script_.rules.end(),
                                 [&](const AttackRule& r) { return r.match.matches(round_, step, msg); });
  LogRecord rec{round_, step, dir, msg, msg, "pass"};
  if (rule != script_.rules.end()) {
    std::visit(Overloaded{
                   [&](const PassAction&) {},
                   [&](const DropAction&) {
                     rec.delivered.reset();
                     rec.action = "drop";
                   },
                   [&](const ReplayAction& a) {
                     if (a.log_index >= log_.size()) {
                       throw Error(Errc::InvalidReplay,
                                   "log index " + std::to_string(a.log_index) + " not yet recorded");
                     }
                     rec.delivered = log_[a.log_index].sent;
                     rec.action = "replay";
                   },
                   [&](const ModifyAction& a) {
                     rec.delivered = apply_masks(msg, a.masks);
                     rec.action = "modify";
                   },
                   [&](const InjectAction& a) {
                     rec.delivered = a.message;
                     rec.action = "inject";
                   },
               },
               rule->action);
  }
  log_.push_back(rec);
  return rec.delivered;
}

Interceptor Channel::interceptor() {
  return [this](Direction dir, unsigned step, const Message& msg) {
    return transmit(dir, step, msg);
  };
}

std::vector<std::size_t> Channel::find(unsigned round, std::string_view type) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < log_.size(); ++i) {
    if (log_[i].round == round && message_type(log_[i].sent) == type) out.push_back(i);
  }
  return out;
}

SessionTranscript run_counterfeit_session(ReaderTable& reader, Channel& channel,
                                          const Counterfeit& fake, std::uint64_t seed,
                                          unsigned round) {
  channel.set_round(round);
  SessionTranscript t;
  t.key_length = reader.key_length();
  t.seed = seed;
  t.round = round;
  const auto deliver = [&](Direction dir, unsigned step, const Message& m) {
    auto got = channel.transmit(dir, step, m);
    if (got) t.messages.push_back({dir, *got, t.messages.size()});
    return got;
  };
  const auto done = [&](SessionOutcome o) {
    t.outcome = o;
    return t;
  };

  if (!deliver(Direction::ReaderToTag, 1, reader_request())) return done(SessionOutcome::Dropped);
  const auto ids = deliver(Direction::TagToReader, 2, IdsResponse{fake.ids});
  if (!ids || !std::holds_alternative<IdsResponse>(*ids)) return done(SessionOutcome::Dropped);
  const Word presented = std::get<IdsResponse>(*ids).ids;
  const auto challenge = reader.authenticate(IdsResponse{presented});
  if (!challenge) return done(SessionOutcome::Dropped);
  if (!deliver(Direction::ReaderToTag, 3, *challenge) || !fake.reply) {
    return done(SessionOutcome::Dropped);
  }
  const auto reply = deliver(Direction::TagToReader, 4, *fake.reply);
  if (!reply || !std::holds_alternative<TagAuth>(*reply)) return done(SessionOutcome::Dropped);
  const auto verdict = reader.verify_and_update(presented, std::get<TagAuth>(*reply));
  if (verdict) return done(SessionOutcome::MutualSuccess);
  return done(verdict.failure() == AuthFailure::UnknownIds ? SessionOutcome::Dropped
                                                           : SessionOutcome::ReaderRejectedTag);
}

std::vector<Word> recover_past_greetings(const LfsrSpec& lfsr, const Word& compromised_g_n,
                                         std::span<const TagAuth> history) {
  std::vector<Word> out;
  Word next = compromised_g_n;
  for (auto it = history.rbegin(); it != history.rend(); ++it) {
    next = f_inverse(lfsr, it->m1 ^ next);
    out.push_back(next);
  }
  return out;
}

std::string_view to_string(Expectation e) noexcept {
  switch (e) {
    case Expectation::AttackFails: return "AttackFails";
    case Expectation::AttackSucceeds: return "AttackSucceeds";
    case Expectation::PermanentDesync: return "PermanentDesync";
  }
  return "Unknown";
}

namespace {

// Honest attempts made before a pair is declared permanently desynchronized.
constexpr unsigned kRecoveryAttempts = 3;

// One provisioned tag/reader pair, its channel and every transcript so far.
class Bench {
 public:
  Bench(unsigned l, std::uint64_t seed) : pair_(provision(l, seed)), seed_(seed) {}

  Tag& tag() { return pair_.tag; }
  ReaderTable& reader() { return pair_.reader; }
  Channel& channel() { return channel_; }
  unsigned round() const { return round_; }
  std::vector<SessionTranscript>& transcripts() { return transcripts_; }

  const SessionTranscript& session(AttackScript script = {}) {
    channel_.set_script(std::move(script));
    channel_.set_round(++round_);
    transcripts_.push_back(run_session(pair_.tag, pair_.reader, channel_.interceptor(), seed_, round_));
    channel_.set_script({});
    return transcripts_.back();
  }

  const SessionTranscript& counterfeit(const Counterfeit& fake) {
    transcripts_.push_back(run_counterfeit_session(pair_.reader, channel_, fake, seed_, ++round_));
    return transcripts_.back();
  }

  // Queries the genuine tag for its current IDS outside any reader session.
  Word skim_ids() {
    channel_.set_round(++round_);
    SessionTranscript t{pair_.reader.key_length(), seed_, round_, {}, SessionOutcome::Dropped};
    const Req req = reader_request();
    channel_.transmit(Direction::ReaderToTag, 1, req);
    t.messages.push_back({Direction::ReaderToTag, req, 0});
    const IdsResponse ids = pair_.tag.respond_ids(req);
    channel_.transmit(Direction::TagToReader, 2, ids);
    t.messages.push_back({Direction::TagToReader, ids, 1});
    pair_.tag.end_session();
    transcripts_.push_back(std::move(t));
    return ids.ids;
  }

  bool honest_round_succeeds() {
    return session().outcome == SessionOutcome::MutualSuccess &&
           is_synchronized(pair_.tag, pair_.reader);
  }

  bool recovers() {
    for (unsigned i = 0; i < kRecoveryAttempts; ++i) {
      if (honest_round_succeeds()) return true;
    }
    return false;
  }

 private:
  ProvisionedPair pair_;
  std::uint64_t seed_;
  Channel channel_;
  unsigned round_ = 0;
  std::vector<SessionTranscript> transcripts_;
};

struct State {
  SecretTuple tag;
  std::map<Word, ReaderEntry> reader;
  friend bool operator==(const State&, const State&) = default;
};

State snapshot(Bench& b) { return {b.tag().secrets(), b.reader().entries()}; }

struct Observation {
  Expectation observed;
  std::string detail;
};

struct ScenarioRun {
  Observation observation;
  std::vector<SessionTranscript> transcripts;
};

void append(std::vector<SessionTranscript>& into, std::vector<SessionTranscript>& from) {
  into.insert(into.end(), std::make_move_iterator(from.begin()),
              std::make_move_iterator(from.end()));
}

// -- eavesdrop-confidentiality --
// Each blinded payload is compared with the secrets it carries: ID xor G_n
// with ID and G_n, m1 with G_{n+1}, m2 with G_{n+2}. IDS never takes ID as
// an input; that is checked against a twin tag that differs only in ID and
// must emit the identical IDS sequence. (A plain IDS == ID comparison would
// fire at the 2^-L coincidence rate, which is not a leak.)
ScenarioRun eavesdrop_confidentiality(unsigned l, std::uint64_t seed) {
  constexpr unsigned kRounds = 100;
  Bench b(l, seed);

  SecretTuple twin_secrets = b.tag().secrets();
  twin_secrets.id.flip_bit(0);
  if (twin_secrets.id.is_zero()) twin_secrets.id.flip_bit(1);
  Tag twin(twin_secrets, b.tag().puf(), b.tag().lfsr());
  ReaderTable twin_reader(b.reader().lfsr());
  twin_reader.insert({twin_secrets.ids, twin_secrets.id, twin_secrets.g_n,
                      p_permute(twin.puf(), twin_secrets.g_n)});

  unsigned exposed = 0;
  unsigned id_dependent = 0;
  unsigned failures = 0;
  for (unsigned r = 0; r < kRounds; ++r) {
    const SecretTuple s = b.tag().secrets();
    const Word g1 = p_permute(b.tag().puf(), s.g_n);
    const Word g2 = p_permute(b.tag().puf(), g1);
    const auto& t = b.session();
    const auto& twin_t = run_honest_round(twin, twin_reader, seed, r + 1);
    if (t.outcome != SessionOutcome::MutualSuccess) ++failures;
    for (const auto& rec : b.channel().log()) {
      if (rec.round != b.round()) continue;
      std::visit(Overloaded{
                     [](const Req&) {},
                     [](const IdsResponse&) {},
                     [&](const ReaderAuth& m) { exposed += m.id_xor_gn == s.id || m.id_xor_gn == s.g_n; },
                     [&](const TagAuth& m) { exposed += (m.m1 == g1) + (m.m2 == g2); },
                 },
                 rec.sent);
    }
    const auto ids_of = [](const SessionTranscript& x) {
      return std::get<IdsResponse>(x.messages.at(1).message).ids;
    };
    id_dependent += ids_of(t) != ids_of(twin_t);
  }
  std::ostringstream d;
  d << kRounds << " rounds eavesdropped, " << b.channel().log().size() << " messages, " << exposed
    << " secrets in the clear, " << id_dependent << " IDS values depending on ID, " << failures
    << " failed rounds";
  const Expectation obs = exposed + id_dependent > 0 ? Expectation::AttackSucceeds
                          : failures > 0             ? Expectation::PermanentDesync
                                                     : Expectation::AttackFails;
  return {{obs, d.str()}, std::move(b.transcripts())};
}

// -- tracking-anonymity --
ScenarioRun tracking_anonymity(unsigned l, std::uint64_t seed) {
  constexpr unsigned kRounds = 100;
  Bench b(l, seed);
  std::vector<Word> seen;
  unsigned failures = 0;
  for (unsigned r = 0; r < kRounds; ++r) {
    if (b.session().outcome != SessionOutcome::MutualSuccess) ++failures;
  }
  for (const auto& rec : b.channel().log()) {
    if (const auto* m = std::get_if<IdsResponse>(&rec.sent)) seen.push_back(m->ids);
  }
  const std::set<Word> distinct(seen.begin(), seen.end());
  const auto collisions = static_cast<unsigned>(seen.size() - distinct.size());
  std::ostringstream d;
  d << seen.size() << " IDS observed, " << collisions << " repeats, " << failures
    << " failed rounds";
  const Expectation obs = collisions > 0 ? Expectation::AttackSucceeds
                          : failures > 0 ? Expectation::PermanentDesync
                                         : Expectation::AttackFails;
  return {{obs, d.str()}, std::move(b.transcripts())};
}

// -- replay-reader-auth --
ScenarioRun replay_reader_auth(unsigned l, std::uint64_t seed) {
  Bench b(l, seed);
  b.session();
  const std::size_t old_auth = b.channel().find(b.round(), "ReaderAuth").at(0);
  const State before = snapshot(b);

  AttackScript script{{{MessageMatch{b.round() + 1, 3, {}}, ReplayAction{old_auth}}}};
  const auto outcome = b.session(std::move(script)).outcome;
  const bool untouched = snapshot(b) == before;
  const bool accepted = outcome != SessionOutcome::TagRejectedReader;

  std::ostringstream d;
  d << "replayed ReaderAuth -> " << to_string(outcome)
    << (untouched ? ", secrets unchanged" : ", secrets changed");
  Expectation obs = Expectation::AttackFails;
  if (!b.recovers()) {
    obs = Expectation::PermanentDesync;
  } else if (accepted || !untouched) {
    obs = Expectation::AttackSucceeds;
  }
  return {{obs, d.str()}, std::move(b.transcripts())};
}

// -- replay-tag-auth --
// The adversary skims the tag's fresh IDS and plays the tag to the reader,
// answering the challenge with the TagAuth recorded in the previous round.
ScenarioRun replay_tag_auth(unsigned l, std::uint64_t seed) {
  Bench b(l, seed);
  b.session();
  const auto& old = b.channel().log().at(b.channel().find(b.round(), "TagAuth").at(0));
  const TagAuth recorded = std::get<TagAuth>(old.sent);

  const Word ids = b.skim_ids();
  const State before = snapshot(b);
  const auto outcome = b.counterfeit({ids, recorded}).outcome;
  const bool untouched = snapshot(b) == before;

  std::ostringstream d;
  d << "replayed TagAuth -> " << to_string(outcome)
    << (untouched ? ", secrets unchanged" : ", secrets changed");
  Expectation obs = Expectation::AttackFails;
  if (!b.recovers()) {
    obs = Expectation::PermanentDesync;
  } else if (outcome == SessionOutcome::MutualSuccess || !untouched) {
    obs = Expectation::AttackSucceeds;
  }
  return {{obs, d.str()}, std::move(b.transcripts())};
}

// -- mitm-bitflip --
// Three independent pairs: one bit flipped in ID xor G_n, in m1, in m2.
ScenarioRun mitm_bitflip(unsigned l, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x6d69746dULL);
  std::uniform_int_distribution<unsigned> pick_bit(0, l - 1);
  std::vector<SessionTranscript> all;
  std::ostringstream d;
  bool desync = false;
  bool undetected = false;

  struct Target {
    const char* label;
    unsigned step;
    unsigned word;  // payload word index
  };
  constexpr Target kTargets[] = {{"ReaderAuth", 3, 0}, {"TagAuth.m1", 4, 0}, {"TagAuth.m2", 4, 1}};

  for (const auto& target : kTargets) {
    Bench b(l, seed);
    b.session();
    std::vector<Word> masks(target.word + 1, Word(l));
    masks[target.word].flip_bit(pick_bit(rng));
    const State before = snapshot(b);
    const auto outcome =
        b.session({{{MessageMatch{b.round() + 1, target.step, {}}, ModifyAction{masks}}}}).outcome;
    const bool untouched = snapshot(b) == before;
    const bool recovered = b.recovers();
    if (!recovered) desync = true;
    if (recovered && !untouched) undetected = true;
    d << target.label << " flipped -> " << to_string(outcome)
      << (untouched ? ", secrets unchanged" : ", secrets changed")
      << (recovered ? ", recovered" : ", desynchronized") << "; ";
    append(all, b.transcripts());
  }
  const Expectation obs = desync       ? Expectation::PermanentDesync
                          : undetected ? Expectation::AttackSucceeds
                                       : Expectation::AttackFails;
  return {{obs, d.str()}, std::move(all)};
}

// -- forgery-clone --
// A clone built from k eavesdropped rounds: it presents the last IDS it saw
// and, with the genuine tag's skimmed IDS, every recorded TagAuth.
ScenarioRun forgery_clone(unsigned l, std::uint64_t seed) {
  std::vector<SessionTranscript> all;
  std::ostringstream d;
  bool accepted = false;
  bool broken = false;
  for (unsigned k : {1u, 10u}) {
    Bench b(l, seed);
    for (unsigned r = 0; r < k; ++r) b.session();
    std::vector<TagAuth> replies;
    std::optional<Word> last_ids;
    for (const auto& rec : b.channel().log()) {
      if (const auto* m = std::get_if<TagAuth>(&rec.sent)) replies.push_back(*m);
      if (const auto* m = std::get_if<IdsResponse>(&rec.sent)) last_ids = m->ids;
    }
    const State before = snapshot(b);
    unsigned attempts = 0;
    unsigned successes = 0;
    for (const auto& reply : replies) {
      ++attempts;
      successes += b.counterfeit({*last_ids, reply}).outcome == SessionOutcome::MutualSuccess;
    }
    const Word fresh = b.skim_ids();
    for (const auto& reply : replies) {
      ++attempts;
      successes += b.counterfeit({fresh, reply}).outcome == SessionOutcome::MutualSuccess;
    }
    const bool untouched = snapshot(b) == before;
    const bool recovered = b.recovers();
    accepted = accepted || successes > 0 || !untouched;
    broken = broken || !recovered;
    d << "k=" << k << ": " << successes << "/" << attempts << " clone sessions accepted; ";
    append(all, b.transcripts());
  }
  const Expectation obs = broken     ? Expectation::PermanentDesync
                          : accepted ? Expectation::AttackSucceeds
                                     : Expectation::AttackFails;
  return {{obs, d.str()}, std::move(all)};
}

// -- forward-security --
// The tag is compromised after n rounds; its current secrets must not
// coincide with the IDS or greeting of any earlier round.
ScenarioRun forward_security(unsigned l, std::uint64_t seed) {
  constexpr unsigned kRounds = 10;
  Bench b(l, seed);
  std::vector<SecretTuple> history;
  unsigned failures = 0;
  for (unsigned r = 0; r < kRounds; ++r) {
    history.push_back(b.tag().secrets());
    if (b.session().outcome != SessionOutcome::MutualSuccess) ++failures;
  }
  const SecretTuple compromised = b.tag().secrets();
  unsigned reused = 0;
  for (const auto& past : history) {
    reused += (past.g_n == compromised.g_n) + (past.ids == compromised.ids);
  }
  std::ostringstream d;
  d << "compromise after " << kRounds << " rounds; " << reused
    << " past IDS/greeting values equal the current ones";
  const Expectation obs = reused > 0     ? Expectation::AttackSucceeds
                          : failures > 0 ? Expectation::PermanentDesync
                                         : Expectation::AttackFails;
  return {{obs, d.str()}, std::move(b.transcripts())};
}

// -- block-dos --
ScenarioRun block_dos(unsigned l, std::uint64_t seed) {
  Bench b(l, seed);
  b.session();
  const auto outcome =
      b.session({{{MessageMatch{b.round() + 1, 4, {}}, DropAction{}}}}).outcome;
  const bool tag_moved = b.reader().find(b.tag().secrets().ids) == nullptr;
  const bool recovered = b.recovers();
  std::ostringstream d;
  d << "TagAuth dropped -> " << to_string(outcome)
    << (tag_moved ? ", tag advanced alone" : ", tag still indexed") << ", "
    << (recovered ? "recovered" : "no honest round succeeds afterwards");
  return {{recovered ? Expectation::AttackFails : Expectation::PermanentDesync, d.str()},
          std::move(b.transcripts())};
}

// -- ownership-lockout --
ScenarioRun ownership_lockout(unsigned l, std::uint64_t seed) {
  Bench b(l, seed);
  b.session();
  ReaderTable new_owner(b.reader().lfsr());
  new_owner.insert(b.reader().transfer_ownership(b.tag().secrets().ids).value());

  Channel& ch = b.channel();
  std::vector<SessionTranscript>& ts = b.transcripts();
  unsigned round = b.round();

  ch.set_round(++round);
  ts.push_back(run_session(b.tag(), new_owner, ch.interceptor(), seed, round));
  const bool new_owner_ok =
      ts.back().outcome == SessionOutcome::MutualSuccess && is_synchronized(b.tag(), new_owner);

  ch.set_round(++round);
  ts.push_back(run_session(b.tag(), b.reader(), ch.interceptor(), seed, round));
  const bool old_owner_locked = ts.back().outcome == SessionOutcome::Dropped &&
                                !b.reader().authenticate(IdsResponse{b.tag().secrets().ids});

  ch.set_round(++round);
  ts.push_back(run_session(b.tag(), new_owner, ch.interceptor(), seed, round));
  const bool new_owner_again = ts.back().outcome == SessionOutcome::MutualSuccess;

  std::ostringstream d;
  d << "new owner " << (new_owner_ok && new_owner_again ? "authenticates" : "fails")
    << ", old owner " << (old_owner_locked ? "gets UnknownIds" : "still authenticates");
  const Expectation obs = old_owner_locked && new_owner_ok && new_owner_again
                              ? Expectation::AttackFails
                              : Expectation::AttackSucceeds;
  return {{obs, d.str()}, std::move(ts)};
}

using ScenarioFn = ScenarioRun (*)(unsigned, std::uint64_t);

struct RegistryEntry {
  ScenarioInfo info;
  ScenarioFn run;
};

const std::array<RegistryEntry, 9>& registry() {
  static const std::array<RegistryEntry, 9> entries{{
      {{"eavesdrop-confidentiality", Expectation::AttackFails,
        "passive eavesdropping never sees ID or a greeting in the clear"},
       eavesdrop_confidentiality},
      {{"tracking-anonymity", Expectation::AttackFails,
        "the tag never repeats an IDS across rounds"},
       tracking_anonymity},
      {{"replay-reader-auth", Expectation::AttackFails,
        "a replayed ID xor G_n is rejected without state change"},
       replay_reader_auth},
      {{"replay-tag-auth", Expectation::AttackFails,
        "a replayed TagAuth is rejected without state change"},
       replay_tag_auth},
      {{"mitm-bitflip", Expectation::AttackFails,
        "a single flipped bit in Step 3 or Step 4 is rejected without state change"},
       mitm_bitflip},
      {{"forgery-clone", Expectation::AttackFails,
        "a clone built from eavesdropped rounds cannot authenticate"},
       forgery_clone},
      {{"forward-security", Expectation::AttackFails,
        "compromised secrets differ from every earlier round's IDS and greeting"},
       forward_security},
      {{"block-dos", Expectation::PermanentDesync,
        "blocking Step 4 desynchronizes the pair with no recovery"},
       block_dos},
      {{"ownership-lockout", Expectation::AttackFails,
        "after transfer and one round the old owner cannot reach the tag"},
       ownership_lockout},
  }};
  return entries;
}

}  // namespace

std::span<const ScenarioInfo> scenario_registry() noexcept {
  static const auto infos = [] {
    std::array<ScenarioInfo, 9> out{};
    std::transform(registry().begin(), registry().end(), out.begin(),
                   [](const RegistryEntry& e) { return e.info; });
    return out;
  }();
  return infos;
}

ScenarioResult run_scenario(std::string_view name, unsigned l, std::uint64_t seed) {
  const auto& entries = registry();
  const auto it = std::find_if(entries.begin(), entries.end(),
                               [&](const RegistryEntry& e) { return e.info.name == name; });
  if (it == entries.end()) throw Error(Errc::UnknownScenario, std::string(name));
  require_supported_width(l);

  ScenarioRun run = it->run(l, seed);
  ScenarioResult result;
  result.verdict.scenario = std::string(it->info.name);
  result.verdict.expected = it->info.expected;
  result.verdict.observed = run.observation.observed;
  result.verdict.pass = result.verdict.expected == result.verdict.observed;
  result.verdict.detail = std::move(run.observation.detail);
  result.key_length = l;
  result.seed = seed;
  result.transcripts = std::move(run.transcripts);
  return result;
}

std::vector<ScenarioResult> run_all(unsigned l, std::uint64_t seed) {
  std::vector<ScenarioResult> out;
  for (const auto& info : scenario_registry()) out.push_back(run_scenario(info.name, l, seed));
  return out;
}

nlohmann::ordered_json scenario_to_json(const ScenarioResult& r) {
  return {{"scenario", r.verdict.scenario},
          {"key_length", r.key_length},
          {"seed", r.seed},
          {"expected", to_string(r.verdict.expected)},
          {"observed", to_string(r.verdict.observed)},
          {"pass", r.verdict.pass},
          {"transcripts", transcripts_to_json(r.transcripts)}};
}

}  // namespace rfidauth
