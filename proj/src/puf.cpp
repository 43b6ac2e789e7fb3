#include "rfidauth/puf.hpp"

#include <cmath>
#include <numbers>

#include "rfidauth/error.hpp"

namespace rfidauth {

namespace {

// Box-Muller over the raw engine output; std::normal_distribution is
// implementation-defined and would break cross-platform reproducibility.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : rng_(seed) {}

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = unit_open();
    const double u2 = unit_open();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  // Uniform on (0, 1].
  double unit_open() { return (static_cast<double>(rng_() >> 11) + 1.0) * 0x1.0p-53; }

  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

void check_input(const PufInstance& puf, const Word& w) {
  if (w.width() != puf.width()) {
    throw Error(Errc::WidthMismatch, "PUF input width " + std::to_string(w.width()) +
                                         " for a " + std::to_string(puf.width()) + "-bit PUF");
  }
  if (puf.width() % 2 != 0) throw Error(Errc::OddWidth, "Feistel needs an even width");
}

Word round_function(const PufInstance& puf, unsigned round, const Word& half) {
  const unsigned h = puf.width() / 2;
  const Word tag = Word::from_u64(h, round + 1);
  return puf.raw_response_window(Word::concat(tag, half), round * (h / 2), h);
}

}  // namespace

PufInstance::PufInstance(unsigned width, std::uint64_t fabrication_seed)
    : width_(width), seed_(fabrication_seed) {
  if (width == 0 || width > Word::kMaxBits) {
    throw Error(Errc::UnsupportedWidth, "PUF width " + std::to_string(width));
  }
  GaussianSource source(fabrication_seed);
  deltas_.resize(static_cast<std::size_t>(width) * width * 2);
  for (auto& d : deltas_) d = source.next();
}

double PufInstance::straight_delay(unsigned chain, unsigned stage) const {
  return deltas_.at((static_cast<std::size_t>(chain) * width_ + stage) * 2);
}

double PufInstance::crossed_delay(unsigned chain, unsigned stage) const {
  return deltas_.at((static_cast<std::size_t>(chain) * width_ + stage) * 2 + 1);
}

bool PufInstance::arbiter(unsigned chain, const Word& challenge) const {
  const double* d = deltas_.data() + static_cast<std::size_t>(chain) * width_ * 2;
  double diff = 0.0;
  for (unsigned stage = 0; stage < width_; ++stage) {
    if (challenge.bit(stage)) {
      diff = -diff + d[2 * stage + 1];
    } else {
      diff += d[2 * stage];
    }
  }
  return diff > 0.0;
}

Word PufInstance::raw_response(const Word& challenge) const {
  return raw_response_window(challenge, 0, width_);
}

Word PufInstance::raw_response_window(const Word& challenge, unsigned first_chain,
                                      unsigned count) const {
  if (challenge.width() != width_) {
    throw Error(Errc::WidthMismatch, "challenge width " + std::to_string(challenge.width()));
  }
  Word out(count);
  for (unsigned i = 0; i < count; ++i) {
    out.set_bit(i, arbiter((first_chain + i) % width_, challenge));
  }
  return out;
}

Word PufInstance::noisy_response(const Word& challenge, double flip_probability,
                                 std::mt19937_64& rng) const {
  Word out = raw_response(challenge);
  std::bernoulli_distribution flip(flip_probability);
  for (unsigned i = 0; i < width_; ++i) {
    if (flip(rng)) out.flip_bit(i);
  }
  return out;
}

PufInstance fabricate(unsigned width, std::uint64_t fabrication_seed) {
  require_supported_width(width);
  return PufInstance(width, fabrication_seed);
}

namespace {

Word feistel_forward(const PufInstance& puf, const Word& x) {
  const unsigned h = puf.width() / 2;
  Word left = x.slice(h, h);
  Word right = x.slice(0, h);
  for (unsigned r = 0; r < kFeistelRounds; ++r) {
    Word next_right = left ^ round_function(puf, r, right);
    left = right;
    right = next_right;
  }
  return Word::concat(left, right);
}

Word feistel_backward(const PufInstance& puf, const Word& y) {
  const unsigned h = puf.width() / 2;
  Word left = y.slice(h, h);
  Word right = y.slice(0, h);
  for (unsigned r = kFeistelRounds; r-- > 0;) {
    Word prev_left = right ^ round_function(puf, r, left);
    right = left;
    left = prev_left;
  }
  return Word::concat(left, right);
}

}  // namespace

// Cycle-walk over the Feistel permutation so the nonzero words map onto
// themselves; the one nonzero word whose image is 0 takes the image of 0.
Word p_permute(const PufInstance& puf, const Word& x) {
  check_input(puf, x);
  if (x.is_zero()) return x;
  const Word y = feistel_forward(puf, x);
  return y.is_zero() ? feistel_forward(puf, y) : y;
}

Word p_inverse(const PufInstance& puf, const Word& y) {
  check_input(puf, y);
  if (y.is_zero()) return y;
  const Word x = feistel_backward(puf, y);
  return x.is_zero() ? feistel_backward(puf, x) : x;
}

}  // namespace rfidauth
