#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rfidauth {

enum class Errc {
  UnsupportedWidth,
  WidthMismatch,
  ZeroState,
  OddWidth,
  InvalidSecret,
  WrongPhase,
  UnknownScenario,
  InvalidReplay,
  ParseError,
};

std::string_view to_string(Errc code) noexcept;

// Contract violations: bad widths, degenerate inputs, out-of-order calls.
// Authentication failures are ordinary protocol outcomes and never throw.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace rfidauth
