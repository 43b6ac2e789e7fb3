#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>

namespace rfidauth {

/// Key lengths the protocol is defined for.
inline constexpr std::array<unsigned, 6> kSupportedWidths{8, 16, 32, 64, 96, 160};

bool is_supported_width(unsigned width) noexcept;

/// Throws Errc::UnsupportedWidth unless `width` is one of kSupportedWidths.
void require_supported_width(unsigned width);

/// Fixed-width bit vector of up to 160 bits. Bit 0 is the least significant
/// bit; bits at or above width() are always zero.
class Word {
 public:
  static constexpr unsigned kMaxBits = 160;
  static constexpr unsigned kLimbs = (kMaxBits + 63) / 64;

  Word() = default;
  explicit Word(unsigned width);

  static Word from_u64(unsigned width, std::uint64_t value);
  /// Accepts exactly hex_digits(width) digits, either case.
  static Word from_hex(unsigned width, std::string_view hex);
  /// Uniform draw over all 2^width words.
  static Word random(unsigned width, std::mt19937_64& rng);
  /// Uniform draw over the nonzero words.
  static Word random_nonzero(unsigned width, std::mt19937_64& rng);

  /// Number of hex digits in the fixed-width rendering: ceil(width / 4).
  static unsigned hex_digits(unsigned width) noexcept { return (width + 3) / 4; }

  unsigned width() const noexcept { return width_; }
  bool bit(unsigned i) const noexcept;
  void set_bit(unsigned i, bool value) noexcept;
  void flip_bit(unsigned i) noexcept { set_bit(i, !bit(i)); }

  bool is_zero() const noexcept;
  unsigned popcount() const noexcept;
  /// XOR of the bits selected by `mask`.
  bool masked_parity(const Word& mask) const;
  std::uint64_t low64() const noexcept { return limbs_[0]; }

  /// Shifts right by one and inserts `top` as bit width()-1.
  void shift_right_insert(bool top) noexcept;

  /// Bits [offset, offset + count) as a `count`-bit word.
  Word slice(unsigned offset, unsigned count) const;
  /// `low` in the low half, `high` above it.
  static Word concat(const Word& high, const Word& low);

  Word& operator^=(const Word& other);
  friend Word operator^(Word lhs, const Word& rhs) { return lhs ^= rhs; }

  std::string to_hex() const;

  friend bool operator==(const Word&, const Word&) = default;
  friend std::strong_ordering operator<=>(const Word&, const Word&) = default;

 private:
  void mask_top() noexcept;

  unsigned width_ = 0;
  std::array<std::uint64_t, kLimbs> limbs_{};
};

unsigned hamming_distance(const Word& a, const Word& b);

}  // namespace rfidauth
