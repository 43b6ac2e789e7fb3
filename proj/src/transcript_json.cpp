#include "rfidauth/error.hpp"
#include "rfidauth/serialize.hpp"

namespace rfidauth {

namespace {

Direction parse_direction(const std::string& s) {
  if (s == to_string(Direction::ReaderToTag)) return Direction::ReaderToTag;
  if (s == to_string(Direction::TagToReader)) return Direction::TagToReader;
  throw Error(Errc::ParseError, "unknown direction '" + s + "'");
}

SessionOutcome parse_outcome(const std::string& s) {
  for (auto o : {SessionOutcome::MutualSuccess, SessionOutcome::TagRejectedReader,
                 SessionOutcome::ReaderRejectedTag, SessionOutcome::Dropped}) {
    if (s == to_string(o)) return o;
  }
  throw Error(Errc::ParseError, "unknown outcome '" + s + "'");
}

Message parse_message(unsigned l, const std::string& type, const std::string& hex) {
  const std::size_t w = Word::hex_digits(l);
  const auto word_at = [&](std::size_t i) {
    if (hex.size() < (i + 1) * w) throw Error(Errc::ParseError, "payload too short for " + type);
    return Word::from_hex(l, std::string_view(hex).substr(i * w, w));
  };
  const auto expect_len = [&](std::size_t words) {
    if (hex.size() != words * w) throw Error(Errc::ParseError, "bad payload length for " + type);
  };
  if (type == "Req") {
    expect_len(0);
    return Req{};
  }
  if (type == "IdsResponse") {
    expect_len(1);
    return IdsResponse{word_at(0)};
  }
  if (type == "ReaderAuth") {
    expect_len(1);
    return ReaderAuth{word_at(0)};
  }
  if (type == "TagAuth") {
    expect_len(2);
    return TagAuth{word_at(0), word_at(1)};
  }
  throw Error(Errc::ParseError, "unknown message type '" + type + "'");
}

}  // namespace

nlohmann::ordered_json transcript_to_json(const SessionTranscript& t) {
  nlohmann::ordered_json messages = nlohmann::ordered_json::array();
  for (const auto& e : t.messages) {
    messages.push_back({{"dir", to_string(e.dir)},
                        {"type", message_type(e.message)},
                        {"payload_hex", payload_hex(e.message)}});
  }
  return {{"key_length", t.key_length},
          {"seed", t.seed},
          {"messages", std::move(messages)},
          {"outcome", to_string(t.outcome)},
          {"rounds", t.round}};
}

SessionTranscript transcript_from_json(const nlohmann::ordered_json& doc) {
  try {
    SessionTranscript t;
    t.key_length = doc.at("key_length").get<unsigned>();
    require_supported_width(t.key_length);
    t.seed = doc.at("seed").get<std::uint64_t>();
    t.round = doc.at("rounds").get<unsigned>();
    t.outcome = parse_outcome(doc.at("outcome").get<std::string>());
    for (const auto& m : doc.at("messages")) {
      t.messages.push_back({parse_direction(m.at("dir").get<std::string>()),
                            parse_message(t.key_length, m.at("type").get<std::string>(),
                                          m.at("payload_hex").get<std::string>()),
                            t.messages.size()});
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ParseError, e.what());
  }
}

nlohmann::ordered_json transcripts_to_json(const std::vector<SessionTranscript>& ts) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& t : ts) out.push_back(transcript_to_json(t));
  return out;
}

}  // namespace rfidauth
