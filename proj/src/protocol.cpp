#include "rfidauth/protocol.hpp"

#include "rfidauth/error.hpp"

namespace rfidauth {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_nonzero(const Word& w, const char* what) {
  if (w.is_zero()) throw Error(Errc::InvalidSecret, std::string(what) + " must be nonzero");
}

void require_width(const Word& w, unsigned l, const char* what) {
  if (w.width() != l) {
    throw Error(Errc::WidthMismatch, std::string(what) + " is " + std::to_string(w.width()) +
                                         " bits, key length is " + std::to_string(l));
  }
}

}  // namespace

std::string_view message_type(const Message& msg) noexcept {
  return std::visit(Overloaded{
                        [](const Req&) { return std::string_view("Req"); },
                        [](const IdsResponse&) { return std::string_view("IdsResponse"); },
                        [](const ReaderAuth&) { return std::string_view("ReaderAuth"); },
                        [](const TagAuth&) { return std::string_view("TagAuth"); },
                    },
                    msg);
}

std::vector<Word> payload_words(const Message& msg) {
  return std::visit(Overloaded{
                        [](const Req&) { return std::vector<Word>{}; },
                        [](const IdsResponse& m) { return std::vector<Word>{m.ids}; },
                        [](const ReaderAuth& m) { return std::vector<Word>{m.id_xor_gn}; },
                        [](const TagAuth& m) { return std::vector<Word>{m.m1, m.m2}; },
                    },
                    msg);
}

std::string payload_hex(const Message& msg) {
  std::string out;
  for (const auto& w : payload_words(msg)) out += w.to_hex();
  return out;
}

std::string_view to_string(AuthFailure f) noexcept {
  switch (f) {
    case AuthFailure::ReaderRejected: return "ReaderRejected";
    case AuthFailure::UnknownIds: return "UnknownIds";
    case AuthFailure::ReaderRejectedTag: return "ReaderRejectedTag";
  }
  return "Unknown";
}

std::string_view to_string(Direction d) noexcept {
  return d == Direction::ReaderToTag ? "reader->tag" : "tag->reader";
}

std::string_view to_string(SessionOutcome o) noexcept {
  switch (o) {
    case SessionOutcome::MutualSuccess: return "MutualSuccess";
    case SessionOutcome::TagRejectedReader: return "TagRejectedReader";
    case SessionOutcome::ReaderRejectedTag: return "ReaderRejectedTag";
    case SessionOutcome::Dropped: return "Dropped";
  }
  return "Unknown";
}

// ---- tag ----

Tag::Tag(SecretTuple secrets, PufInstance puf, LfsrSpec lfsr)
    : secrets_(std::move(secrets)), puf_(std::move(puf)), lfsr_(std::move(lfsr)) {
  const unsigned l = lfsr_.width;
  require_width(secrets_.ids, l, "IDS");
  require_width(secrets_.id, l, "ID");
  require_width(secrets_.g_n, l, "G_n");
  if (puf_.width() != l) throw Error(Errc::WidthMismatch, "PUF width differs from key length");
  require_nonzero(secrets_.ids, "IDS");
  require_nonzero(secrets_.id, "ID");
  require_nonzero(secrets_.g_n, "G_n");
}

IdsResponse Tag::respond_ids(const Req&) {
  if (phase_ != TagPhase::Idle) throw Error(Errc::WrongPhase, "tag is mid-session");
  phase_ = TagPhase::AwaitingReaderAuth;
  return IdsResponse{secrets_.ids};
}

Outcome<TagAuth> Tag::verify_and_reply(const ReaderAuth& msg) {
  if (phase_ != TagPhase::AwaitingReaderAuth) {
    throw Error(Errc::WrongPhase, "no IDS has been sent in this session");
  }
  if (msg.id_xor_gn != (secrets_.id ^ secrets_.g_n)) {
    phase_ = TagPhase::Idle;
    return AuthFailure::ReaderRejected;
  }
  const Word g1 = p_permute(puf_, secrets_.g_n);
  const Word g2 = p_permute(puf_, g1);
  const Word k = f_permute(lfsr_, secrets_.g_n);
  const Word k_prime = f_permute(lfsr_, k);
  TagAuth reply{g1 ^ k, g2 ^ k_prime};

  // IDS rotation reads the greeting after it has advanced.
  secrets_.g_n = g1;
  secrets_.ids = f_permute(lfsr_, secrets_.ids ^ secrets_.g_n);
  phase_ = TagPhase::Done;
  return reply;
}

// ---- reader ----

Req reader_request() noexcept { return Req{}; }

ReaderTable::ReaderTable(LfsrSpec lfsr) : lfsr_(std::move(lfsr)) {}

void ReaderTable::insert(ReaderEntry entry) {
  const unsigned l = key_length();
  require_width(entry.ids, l, "IDS");
  require_width(entry.id, l, "ID");
  require_width(entry.g_n, l, "G_n");
  require_width(entry.g_n1, l, "G_{n+1}");
  require_nonzero(entry.ids, "IDS");
  require_nonzero(entry.id, "ID");
  require_nonzero(entry.g_n, "G_n");
  if (entries_.contains(entry.ids)) {
    throw Error(Errc::InvalidSecret, "IDS " + entry.ids.to_hex() + " already enrolled");
  }
  Word key = entry.ids;
  entries_.emplace(std::move(key), std::move(entry));
}

const ReaderEntry* ReaderTable::find(const Word& ids) const {
  const auto it = entries_.find(ids);
  return it == entries_.end() ? nullptr : &it->second;
}

Outcome<ReaderAuth> ReaderTable::authenticate(const IdsResponse& msg) const {
  const ReaderEntry* entry = find(msg.ids);
  if (entry == nullptr) return AuthFailure::UnknownIds;
  return ReaderAuth{entry->id ^ entry->g_n};
}

Outcome<Word> ReaderTable::verify_and_update(const Word& ids, const TagAuth& msg) {
  auto node = entries_.find(ids);
  if (node == entries_.end()) return AuthFailure::UnknownIds;
  if (msg.m1.width() != key_length() || msg.m2.width() != key_length()) {
    return AuthFailure::ReaderRejectedTag;
  }
  const ReaderEntry& entry = node->second;
  const Word k = f_permute(lfsr_, entry.g_n);
  if ((msg.m1 ^ k) != entry.g_n1) return AuthFailure::ReaderRejectedTag;

  const Word k_prime = f_permute(lfsr_, k);
  ReaderEntry next = entry;
  next.g_n = entry.g_n1;
  next.g_n1 = msg.m2 ^ k_prime;
  next.ids = f_permute(lfsr_, entry.ids ^ next.g_n);

  // TODO: an evolved IDS equal to another enrolled tag's key overwrites that
  // entry (probability ~ size/2^L per round); needs a collision policy.
  entries_.erase(node);
  Word new_ids = next.ids;
  entries_.insert_or_assign(new_ids, std::move(next));
  return new_ids;
}

Outcome<ReaderEntry> ReaderTable::transfer_ownership(const Word& ids) const {
  const ReaderEntry* entry = find(ids);
  if (entry == nullptr) return AuthFailure::UnknownIds;
  return *entry;
}

// ---- provisioning ----

Tag enroll(ReaderTable& reader, std::mt19937_64& rng) {
  const unsigned l = reader.key_length();
  PufInstance puf = fabricate(l, rng());
  SecretTuple secrets{Word::random_nonzero(l, rng), Word::random_nonzero(l, rng),
                      Word::random_nonzero(l, rng)};
  while (reader.find(secrets.ids) != nullptr) secrets.ids = Word::random_nonzero(l, rng);
  reader.insert(ReaderEntry{secrets.ids, secrets.id, secrets.g_n, p_permute(puf, secrets.g_n)});
  return Tag(std::move(secrets), std::move(puf), reader.lfsr());
}

ProvisionedPair provision(unsigned l, std::uint64_t seed) {
  require_supported_width(l);
  std::mt19937_64 rng(seed);
  ReaderTable reader(lfsr_spec_for(l));
  Tag tag = enroll(reader, rng);
  return ProvisionedPair{std::move(tag), std::move(reader)};
}

bool is_synchronized(const Tag& tag, const ReaderTable& reader) {
  const ReaderEntry* entry = reader.find(tag.secrets().ids);
  return entry != nullptr && entry->id == tag.secrets().id && entry->g_n == tag.secrets().g_n &&
         entry->g_n1 == p_permute(tag.puf(), tag.secrets().g_n);
}

// ---- sessions ----

SessionTranscript run_session(Tag& tag, ReaderTable& reader, const Interceptor& channel,
                              std::uint64_t seed, unsigned round) {
  SessionTranscript t;
  t.key_length = reader.key_length();
  t.seed = seed;
  t.round = round;

  const auto deliver = [&](Direction dir, unsigned step, Message sent) -> std::optional<Message> {
    std::optional<Message> got = channel ? channel(dir, step, sent) : std::optional(sent);
    if (got) t.messages.push_back({dir, *got, t.messages.size()});
    return got;
  };
  const auto finish = [&](SessionOutcome outcome) {
    tag.end_session();
    t.outcome = outcome;
    return t;
  };

  // Step 1
  const auto req = deliver(Direction::ReaderToTag, 1, reader_request());
  if (!req || !std::holds_alternative<Req>(*req)) return finish(SessionOutcome::Dropped);

  // Step 2
  const auto ids_msg =
      deliver(Direction::TagToReader, 2, tag.respond_ids(std::get<Req>(*req)));
  if (!ids_msg || !std::holds_alternative<IdsResponse>(*ids_msg)) {
    return finish(SessionOutcome::Dropped);
  }
  const IdsResponse& ids = std::get<IdsResponse>(*ids_msg);

  // Step 3
  const auto reader_auth = reader.authenticate(ids);
  if (!reader_auth) return finish(SessionOutcome::Dropped);
  const auto at_tag = deliver(Direction::ReaderToTag, 3, *reader_auth);
  if (!at_tag || !std::holds_alternative<ReaderAuth>(*at_tag)) {
    return finish(SessionOutcome::Dropped);
  }
  const auto tag_auth = tag.verify_and_reply(std::get<ReaderAuth>(*at_tag));
  if (!tag_auth) return finish(SessionOutcome::TagRejectedReader);

  // Steps 4-5
  const auto at_reader = deliver(Direction::TagToReader, 4, *tag_auth);
  if (!at_reader || !std::holds_alternative<TagAuth>(*at_reader)) {
    return finish(SessionOutcome::Dropped);
  }
  const auto updated = reader.verify_and_update(ids.ids, std::get<TagAuth>(*at_reader));
  if (!updated) {
    return finish(updated.failure() == AuthFailure::UnknownIds
                      ? SessionOutcome::Dropped
                      : SessionOutcome::ReaderRejectedTag);
  }
  return finish(SessionOutcome::MutualSuccess);
}

SessionTranscript run_honest_round(Tag& tag, ReaderTable& reader, std::uint64_t seed,
                                   unsigned round) {
  return run_session(tag, reader, Interceptor{}, seed, round);
}

}  // namespace rfidauth
