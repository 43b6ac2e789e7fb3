#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "rfidauth/lfsr.hpp"
#include "rfidauth/puf.hpp"
#include "rfidauth/word.hpp"

namespace rfidauth {

/// Secrets preloaded into both tag and reader. All three are nonzero.
struct SecretTuple {
  Word ids;  // index pseudonym, rotated every successful round
  Word id;   // fixed identity, never on the wire
  Word g_n;  // current greeting

  friend bool operator==(const SecretTuple&, const SecretTuple&) = default;
};

// Wire messages. Req carries nothing; every payload word is exactly L bits.
struct Req {
  friend bool operator==(const Req&, const Req&) = default;
};
struct IdsResponse {
  Word ids;
  friend bool operator==(const IdsResponse&, const IdsResponse&) = default;
};
struct ReaderAuth {
  Word id_xor_gn;
  friend bool operator==(const ReaderAuth&, const ReaderAuth&) = default;
};
struct TagAuth {
  Word m1;  // G_{n+1} xor K_n
  Word m2;  // G_{n+2} xor K'_n
  friend bool operator==(const TagAuth&, const TagAuth&) = default;
};

using Message = std::variant<Req, IdsResponse, ReaderAuth, TagAuth>;

std::string_view message_type(const Message& msg) noexcept;
/// Payload words in wire order.
std::vector<Word> payload_words(const Message& msg);
/// Concatenated fixed-width lowercase hex of payload_words(); empty for Req.
std::string payload_hex(const Message& msg);

enum class AuthFailure {
  ReaderRejected,     // tag refused the reader's ID xor G_n
  UnknownIds,         // reader has no entry for the presented IDS
  ReaderRejectedTag,  // reader's recovered G_{n+1} did not match
};

std::string_view to_string(AuthFailure f) noexcept;

/// Either a value or the authentication failure that prevented it.
template <typename T>
class Outcome {
 public:
  Outcome(T value) : value_(std::move(value)) {}  // NOLINT(google-explicit-constructor)
  Outcome(AuthFailure failure) : failure_(failure) {}  // NOLINT(google-explicit-constructor)

  bool ok() const noexcept { return value_.has_value(); }
  explicit operator bool() const noexcept { return ok(); }
  const T& value() const { return value_.value(); }
  const T& operator*() const { return value(); }
  const T* operator->() const { return &value(); }
  AuthFailure failure() const { return *failure_; }

 private:
  std::optional<T> value_;
  std::optional<AuthFailure> failure_;
};

enum class TagPhase { Idle, AwaitingReaderAuth, Done };

/// Tag-side state machine: Idle -> AwaitingReaderAuth -> Done -> Idle.
class Tag {
 public:
  /// Throws Errc::InvalidSecret for zero secrets and Errc::WidthMismatch when
  /// the secrets, PUF and LFSR disagree on the key length.
  Tag(SecretTuple secrets, PufInstance puf, LfsrSpec lfsr);

  const SecretTuple& secrets() const noexcept { return secrets_; }
  const PufInstance& puf() const noexcept { return puf_; }
  const LfsrSpec& lfsr() const noexcept { return lfsr_; }
  TagPhase phase() const noexcept { return phase_; }
  unsigned key_length() const noexcept { return lfsr_.width; }

  /// Step 2. Requires Idle, otherwise throws Errc::WrongPhase.
  IdsResponse respond_ids(const Req& req);

  /// Steps 3-5. Requires AwaitingReaderAuth, otherwise throws
  /// Errc::WrongPhase. On a mismatch the tag stays silent, returns to Idle
  /// and keeps its secrets. On success it advances G_n and IDS and emits
  /// the TagAuth reply.
  Outcome<TagAuth> verify_and_reply(const ReaderAuth& msg);

  /// Field loss / end of session: back to Idle, secrets untouched.
  void end_session() noexcept { phase_ = TagPhase::Idle; }

 private:
  SecretTuple secrets_;
  PufInstance puf_;
  LfsrSpec lfsr_;
  TagPhase phase_ = TagPhase::Idle;
};

/// Reader-side tuple for one tag, plus the precomputed next greeting.
struct ReaderEntry {
  Word ids;
  Word id;
  Word g_n;
  Word g_n1;

  friend bool operator==(const ReaderEntry&, const ReaderEntry&) = default;
};

Req reader_request() noexcept;

/// The reader's table of enrolled tags, keyed by current IDS.
class ReaderTable {
 public:
  explicit ReaderTable(LfsrSpec lfsr);

  unsigned key_length() const noexcept { return lfsr_.width; }
  const LfsrSpec& lfsr() const noexcept { return lfsr_; }
  std::size_t size() const noexcept { return entries_.size(); }
  const std::map<Word, ReaderEntry>& entries() const noexcept { return entries_; }

  /// Throws Errc::InvalidSecret on zero fields or a duplicate IDS.
  void insert(ReaderEntry entry);
  const ReaderEntry* find(const Word& ids) const;

  /// Step 3: ID xor G_n for the presented IDS. No table mutation.
  Outcome<ReaderAuth> authenticate(const IdsResponse& msg) const;

  /// Step 4-5 on the reader: verify m1, extract G_{n+2} from m2, advance the
  /// greetings and re-key the entry under the new IDS. Returns the new IDS.
  Outcome<Word> verify_and_update(const Word& ids, const TagAuth& msg);

  /// Copy of the entry for a new owner. The entry stays in this table.
  Outcome<ReaderEntry> transfer_ownership(const Word& ids) const;

 private:
  LfsrSpec lfsr_;
  std::map<Word, ReaderEntry> entries_;
};

struct ProvisionedPair {
  Tag tag;
  ReaderTable reader;
};

/// Fabricates a tag for key length `l` from `seed`, with a reader table
/// holding its single entry. Throws Errc::UnsupportedWidth.
ProvisionedPair provision(unsigned l, std::uint64_t seed);

/// Fabricates another tag from `rng` and enrolls it in `reader`.
Tag enroll(ReaderTable& reader, std::mt19937_64& rng);

/// Tag and reader agree on IDS, ID and G_n, and the reader's G_{n+1} is the
/// tag's P(G_n).
bool is_synchronized(const Tag& tag, const ReaderTable& reader);

enum class Direction { ReaderToTag, TagToReader };
std::string_view to_string(Direction d) noexcept;

enum class SessionOutcome { MutualSuccess, TagRejectedReader, ReaderRejectedTag, Dropped };
std::string_view to_string(SessionOutcome o) noexcept;

struct TranscriptEntry {
  Direction dir;
  Message message;
  std::size_t index;  // position in the session, from 0
};

struct SessionTranscript {
  unsigned key_length = 0;
  std::uint64_t seed = 0;
  unsigned round = 0;
  std::vector<TranscriptEntry> messages;
  SessionOutcome outcome = SessionOutcome::Dropped;
};

/// Called once per protocol step (1-4) with the message as sent; returns
/// what the receiver gets, or nullopt to drop it.
using Interceptor =
    std::function<std::optional<Message>(Direction, unsigned step, const Message&)>;

/// One four-step session. Messages are recorded as delivered. The tag's
/// session always ends in Idle.
SessionTranscript run_session(Tag& tag, ReaderTable& reader, const Interceptor& channel,
                              std::uint64_t seed = 0, unsigned round = 1);

/// run_session over a lossless, untouched link.
SessionTranscript run_honest_round(Tag& tag, ReaderTable& reader, std::uint64_t seed = 0,
                                   unsigned round = 1);

/// Persistent tag secret storage in bits: IDS, ID and G_n.
constexpr unsigned tag_storage_bits(unsigned l) noexcept { return 3 * l; }

/// Messages in a complete mutual authentication.
inline constexpr unsigned kMessagesPerAuthentication = 4;

}  // namespace rfidauth
