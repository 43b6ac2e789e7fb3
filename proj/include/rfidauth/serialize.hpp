#pragma once

#include <json.hpp>

#include "rfidauth/protocol.hpp"

namespace rfidauth {

/// {key_length, seed, messages: [{dir, type, payload_hex}], outcome, rounds}
///
/// `rounds` is the 1-based index of the session within its run.
nlohmann::ordered_json transcript_to_json(const SessionTranscript& t);

/// Parses the document produced by transcript_to_json. Throws Errc::ParseError.
SessionTranscript transcript_from_json(const nlohmann::ordered_json& doc);

nlohmann::ordered_json transcripts_to_json(const std::vector<SessionTranscript>& ts);

}  // namespace rfidauth
