#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "rfidauth/word.hpp"

namespace rfidauth {

/// Feistel rounds wrapped around the arbiter responses in p_permute.
inline constexpr unsigned kFeistelRounds = 4;

/// Software arbiter PUF under the additive linear delay model.
///
/// The instance holds `width` independent arbiter chains, each with `width`
/// multiplexer stages. Stage i of a chain contributes one of two delay
/// differences depending on challenge bit i: a straight stage adds its
/// delta to the running top/bottom difference, a crossed stage swaps the
/// two paths (negating the difference) before adding its own delta. The
/// arbiter outputs 1 when the accumulated difference is positive.
///
/// Deltas are i.i.d. standard normal, drawn from a 64-bit Mersenne Twister
/// seeded with the fabrication seed, so only (width, seed) identifies a chip.
class PufInstance {
 public:
  PufInstance(unsigned width, std::uint64_t fabrication_seed);

  unsigned width() const noexcept { return width_; }
  std::uint64_t fabrication_seed() const noexcept { return seed_; }

  /// Straight/crossed deltas for (chain, stage).
  double straight_delay(unsigned chain, unsigned stage) const;
  double crossed_delay(unsigned chain, unsigned stage) const;

  /// One arbiter decision per chain; noiseless.
  Word raw_response(const Word& challenge) const;

  /// Responses of `count` chains starting at `first_chain`, wrapping
  /// around; bit i comes from chain (first_chain + i) mod width.
  Word raw_response_window(const Word& challenge, unsigned first_chain, unsigned count) const;

  /// raw_response with each bit independently flipped with probability
  /// `flip_probability`, for robustness experiments.
  Word noisy_response(const Word& challenge, double flip_probability,
                      std::mt19937_64& rng) const;

  friend bool operator==(const PufInstance& a, const PufInstance& b) {
    return a.width_ == b.width_ && a.seed_ == b.seed_;
  }

 private:
  bool arbiter(unsigned chain, const Word& challenge) const;

  unsigned width_;
  std::uint64_t seed_;
  // Row-major [chain][stage][straight, crossed].
  std::vector<double> deltas_;
};

/// Equivalent to PufInstance(width, seed) but validates `width` first.
PufInstance fabricate(unsigned width, std::uint64_t fabrication_seed);

/// Keyed permutation P: a balanced Feistel network. Round r feeds
/// (r+1 || right half) to the arbiters and keeps a half-width window of
/// chains starting at r * width/4, so no two rounds that land in the same
/// half share a chain (a chain's static bias would otherwise cancel out).
/// The Feistel output is cycle-walked so that P maps nonzero words to
/// nonzero words (a greeting can never become 0); P(0) = 0.
/// Throws Errc::OddWidth for odd widths.
Word p_permute(const PufInstance& puf, const Word& x);

/// Inverse of p_permute.
Word p_inverse(const PufInstance& puf, const Word& y);

/// 8 gates per challenge bit plus 4 for the arbiter.
constexpr unsigned puf_gate_cost(unsigned width) noexcept { return 8 * width + 4; }

}  // namespace rfidauth
