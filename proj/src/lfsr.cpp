#include "rfidauth/lfsr.hpp"

#include <algorithm>

#include "rfidauth/error.hpp"

namespace rfidauth {

namespace {

struct TapEntry {
  unsigned width;
  std::vector<unsigned> taps;
};

// Primitive trinomials/pentanomials; see README for the hex masks.
const std::vector<TapEntry>& tap_entries() {
  static const std::vector<TapEntry> entries{
      {8, {8, 6, 5, 4}},
      {16, {16, 15, 13, 4}},
      {32, {32, 22, 2, 1}},
      {64, {64, 63, 61, 60}},
      {96, {96, 94, 49, 47}},
      {160, {160, 159, 142, 141}},
  };
  return entries;
}

void check_state(const LfsrSpec& spec, const Word& state) {
  if (state.width() != spec.width) {
    throw Error(Errc::WidthMismatch, "LFSR state width " + std::to_string(state.width()) +
                                         " for a " + std::to_string(spec.width) + "-bit register");
  }
}

// Clocks backwards: recovers the dropped output bit from the feedback bit.
Word step_back(const LfsrSpec& spec, const Word& mask, const Word& state) {
  const unsigned top = spec.width - 1;
  const bool feedback = state.bit(top);
  Word prev(spec.width);
  for (unsigned i = 1; i < spec.width; ++i) prev.set_bit(i, state.bit(i - 1));
  // feedback = parity(prev & mask); mask bit 0 is always set (tap `width`).
  const bool others = prev.masked_parity(mask);
  prev.set_bit(0, feedback ^ others);
  return prev;
}

}  // namespace

Word LfsrSpec::tap_mask() const {
  Word mask(width);
  for (unsigned t : taps) {
    if (t == 0 || t > width) {
      throw Error(Errc::UnsupportedWidth, "tap " + std::to_string(t) + " outside register");
    }
    mask.set_bit(width - t, true);
  }
  return mask;
}

LfsrSpec lfsr_spec_for(unsigned width) {
  require_supported_width(width);
  const auto& entries = tap_entries();
  const auto it = std::find_if(entries.begin(), entries.end(),
                               [&](const TapEntry& e) { return e.width == width; });
  return LfsrSpec{it->width, it->taps};
}

std::vector<TapTableRow> lfsr_tap_table() {
  std::vector<TapTableRow> rows;
  for (const auto& e : tap_entries()) {
    const LfsrSpec spec{e.width, e.taps};
    rows.push_back({e.width, e.taps, spec.tap_mask().to_hex()});
  }
  return rows;
}

Word lfsr_step(const LfsrSpec& spec, const Word& state) {
  check_state(spec, state);
  if (state.is_zero()) throw Error(Errc::ZeroState, "LFSR state must be nonzero");
  Word next = state;
  next.shift_right_insert(state.masked_parity(spec.tap_mask()));
  return next;
}

Word f_permute(const LfsrSpec& spec, const Word& x) {
  check_state(spec, x);
  if (x.is_zero()) return x;
  const Word mask = spec.tap_mask();
  Word s = x;
  for (unsigned i = 0; i < spec.width; ++i) s.shift_right_insert(s.masked_parity(mask));
  return s;
}

Word f_inverse(const LfsrSpec& spec, const Word& y) {
  check_state(spec, y);
  if (y.is_zero()) return y;
  const Word mask = spec.tap_mask();
  Word s = y;
  for (unsigned i = 0; i < spec.width; ++i) s = step_back(spec, mask, s);
  return s;
}

}  // namespace rfidauth
