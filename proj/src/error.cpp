#include "rfidauth/error.hpp"

namespace rfidauth {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::UnsupportedWidth: return "UnsupportedWidth";
    case Errc::WidthMismatch: return "WidthMismatch";
    case Errc::ZeroState: return "ZeroState";
    case Errc::OddWidth: return "OddWidth";
    case Errc::InvalidSecret: return "InvalidSecret";
    case Errc::WrongPhase: return "WrongPhase";
    case Errc::UnknownScenario: return "UnknownScenario";
    case Errc::InvalidReplay: return "InvalidReplay";
    case Errc::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace rfidauth
