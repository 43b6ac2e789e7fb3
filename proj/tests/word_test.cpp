#include <gtest/gtest.h>

#include <random>

#include "rfidauth/error.hpp"
#include "rfidauth/word.hpp"

namespace rfidauth {
namespace {

TEST(Word, HexIsFixedWidthLowercase) {
  EXPECT_EQ(Word::from_u64(8, 0x0a).to_hex(), "0a");
  EXPECT_EQ(Word::from_u64(64, 0xABCDEF).to_hex(), "0000000000abcdef");
  EXPECT_EQ(Word(160).to_hex().size(), 40u);
  EXPECT_EQ(Word(96).to_hex().size(), 24u);
}

TEST(Word, HexParseRejectsBadInput) {
  EXPECT_THROW(Word::from_hex(8, "abc"), Error);
  EXPECT_THROW(Word::from_hex(8, "zz"), Error);
  EXPECT_EQ(Word::from_hex(8, "FF"), Word::from_u64(8, 0xff));
}

TEST(Word, HexRoundTripRandom) {
  std::mt19937_64 rng(11);
  for (unsigned l : kSupportedWidths) {
    for (int i = 0; i < 200; ++i) {
      const Word w = Word::random(l, rng);
      EXPECT_EQ(Word::from_hex(l, w.to_hex()), w);
    }
  }
}

TEST(Word, TopBitsStayClear) {
  const Word w = Word::from_u64(8, 0xffff);
  EXPECT_EQ(w.low64(), 0xffu);
  Word x(96);
  x.set_bit(96, true);
  EXPECT_TRUE(x.is_zero());
}

TEST(Word, ShiftRightInsertCrossesLimbs) {
  Word w(160);
  w.set_bit(64, true);
  w.set_bit(128, true);
  w.shift_right_insert(true);
  EXPECT_TRUE(w.bit(63));
  EXPECT_TRUE(w.bit(127));
  EXPECT_TRUE(w.bit(159));
  EXPECT_EQ(w.popcount(), 3u);
}

TEST(Word, SliceConcatInverse) {
  std::mt19937_64 rng(5);
  const Word w = Word::random(96, rng);
  EXPECT_EQ(Word::concat(w.slice(48, 48), w.slice(0, 48)), w);
}

TEST(Word, XorWidthMismatchThrows) {
  try {
    (void)(Word(8) ^ Word(16));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::WidthMismatch);
  }
}

TEST(Word, SupportedWidths) {
  EXPECT_TRUE(is_supported_width(96));
  EXPECT_FALSE(is_supported_width(4));
  EXPECT_FALSE(is_supported_width(128));
  EXPECT_THROW(require_supported_width(12), Error);
}

}  // namespace
}  // namespace rfidauth
