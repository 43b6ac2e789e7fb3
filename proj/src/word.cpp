#include "rfidauth/word.hpp"

#include <algorithm>
#include <bit>

#include "rfidauth/error.hpp"

namespace rfidauth {

namespace {

void require_width(unsigned width) {
  if (width == 0 || width > Word::kMaxBits) {
    throw Error(Errc::UnsupportedWidth, "word width " + std::to_string(width));
  }
}

void require_same_width(const Word& a, const Word& b) {
  if (a.width() != b.width()) {
    throw Error(Errc::WidthMismatch,
                std::to_string(a.width()) + " vs " + std::to_string(b.width()));
  }
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

bool is_supported_width(unsigned width) noexcept {
  return std::find(kSupportedWidths.begin(), kSupportedWidths.end(), width) !=
         kSupportedWidths.end();
}

void require_supported_width(unsigned width) {
  if (!is_supported_width(width)) {
    throw Error(Errc::UnsupportedWidth,
                "key length " + std::to_string(width) + " (expected 8, 16, 32, 64, 96 or 160)");
  }
}

Word::Word(unsigned width) : width_(width) { require_width(width); }

Word Word::from_u64(unsigned width, std::uint64_t value) {
  Word w(width);
  w.limbs_[0] = value;
  w.mask_top();
  return w;
}

Word Word::from_hex(unsigned width, std::string_view hex) {
  Word w(width);
  if (hex.size() != hex_digits(width)) {
    throw Error(Errc::ParseError, "expected " + std::to_string(hex_digits(width)) +
                                      " hex digits, got '" + std::string(hex) + "'");
  }
  for (std::size_t i = 0; i < hex.size(); ++i) {
    const int v = hex_value(hex[hex.size() - 1 - i]);
    if (v < 0) throw Error(Errc::ParseError, "bad hex digit in '" + std::string(hex) + "'");
    w.limbs_[i / 16] |= static_cast<std::uint64_t>(v) << (4 * (i % 16));
  }
  const Word masked = [&] {
    Word m = w;
    m.mask_top();
    return m;
  }();
  if (masked != w) throw Error(Errc::ParseError, "value exceeds " + std::to_string(width) + " bits");
  return w;
}

Word Word::random(unsigned width, std::mt19937_64& rng) {
  Word w(width);
  for (unsigned i = 0; i < (width + 63) / 64; ++i) w.limbs_[i] = rng();
  w.mask_top();
  return w;
}

Word Word::random_nonzero(unsigned width, std::mt19937_64& rng) {
  Word w = random(width, rng);
  while (w.is_zero()) w = random(width, rng);
  return w;
}

bool Word::bit(unsigned i) const noexcept {
  if (i >= width_) return false;
  return (limbs_[i / 64] >> (i % 64)) & 1u;
}

void Word::set_bit(unsigned i, bool value) noexcept {
  if (i >= width_) return;
  const std::uint64_t m = std::uint64_t{1} << (i % 64);
  if (value) {
    limbs_[i / 64] |= m;
  } else {
    limbs_[i / 64] &= ~m;
  }
}

bool Word::is_zero() const noexcept {
  return std::all_of(limbs_.begin(), limbs_.end(), [](std::uint64_t l) { return l == 0; });
}

unsigned Word::popcount() const noexcept {
  unsigned n = 0;
  for (auto l : limbs_) n += static_cast<unsigned>(std::popcount(l));
  return n;
}

bool Word::masked_parity(const Word& mask) const {
  require_same_width(*this, mask);
  std::uint64_t acc = 0;
  for (unsigned i = 0; i < kLimbs; ++i) acc ^= limbs_[i] & mask.limbs_[i];
  return std::popcount(acc) & 1;
}

void Word::shift_right_insert(bool top) noexcept {
  for (unsigned i = 0; i + 1 < kLimbs; ++i) {
    limbs_[i] = (limbs_[i] >> 1) | (limbs_[i + 1] << 63);
  }
  limbs_[kLimbs - 1] >>= 1;
  set_bit(width_ - 1, top);
}

Word Word::slice(unsigned offset, unsigned count) const {
  if (offset + count > width_) {
    throw Error(Errc::WidthMismatch, "slice beyond word width");
  }
  Word out(count);
  for (unsigned i = 0; i < count; ++i) out.set_bit(i, bit(offset + i));
  return out;
}

Word Word::concat(const Word& high, const Word& low) {
  Word out(high.width_ + low.width_);
  for (unsigned i = 0; i < low.width_; ++i) out.set_bit(i, low.bit(i));
  for (unsigned i = 0; i < high.width_; ++i) out.set_bit(low.width_ + i, high.bit(i));
  return out;
}

Word& Word::operator^=(const Word& other) {
  require_same_width(*this, other);
  for (unsigned i = 0; i < kLimbs; ++i) limbs_[i] ^= other.limbs_[i];
  return *this;
}

std::string Word::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  const unsigned n = hex_digits(width_);
  std::string out(n, '0');
  for (unsigned i = 0; i < n; ++i) {
    out[n - 1 - i] = kDigits[(limbs_[i / 16] >> (4 * (i % 16))) & 0xf];
  }
  return out;
}

void Word::mask_top() noexcept {
  for (unsigned i = 0; i < kLimbs; ++i) {
    const unsigned lo = i * 64;
    if (width_ <= lo) {
      limbs_[i] = 0;
    } else if (width_ < lo + 64) {
      limbs_[i] &= (std::uint64_t{1} << (width_ - lo)) - 1;
    }
  }
}

unsigned hamming_distance(const Word& a, const Word& b) { return (a ^ b).popcount(); }

}  // namespace rfidauth
