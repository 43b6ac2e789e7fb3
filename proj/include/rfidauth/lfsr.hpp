#pragma once

#include <string>
#include <vector>

#include "rfidauth/word.hpp"

namespace rfidauth {

/// Fibonacci LFSR description. The register shifts toward bit 0 (the output
/// stage) and the feedback bit enters at bit width-1. Tap t (1-based, t in
/// [1, width]) reads register bit width - t, so tap `width` is the output
/// stage itself; the characteristic polynomial is x^width + sum of x^t + 1
/// over the remaining taps.
struct LfsrSpec {
  unsigned width = 0;
  std::vector<unsigned> taps;

  /// Feedback mask: bit (width - t) set for each tap t.
  Word tap_mask() const;
};

/// Published primitive polynomial for one of the supported key lengths.
LfsrSpec lfsr_spec_for(unsigned width);

struct TapTableRow {
  unsigned width;
  std::vector<unsigned> taps;
  std::string tap_mask_hex;
};

/// The full width -> polynomial table, in ascending width order.
std::vector<TapTableRow> lfsr_tap_table();

/// One clock. Throws Errc::ZeroState for the all-zero state.
Word lfsr_step(const LfsrSpec& spec, const Word& state);

/// The public permutation F: load `x` and clock `width` times. F(0) = 0.
Word f_permute(const LfsrSpec& spec, const Word& x);

/// Inverse of f_permute (clocks the register backwards).
Word f_inverse(const LfsrSpec& spec, const Word& y);

/// 4 gates per register bit plus 3 XOR gates for the feedback.
constexpr unsigned lfsr_gate_cost(unsigned width) noexcept { return 4 * width + 3; }

}  // namespace rfidauth
