#include <gtest/gtest.h>

#include <random>
#include <set>

#include "rfidauth/error.hpp"
#include "rfidauth/puf.hpp"

namespace rfidauth {
namespace {

TEST(Puf, FabricationIsDeterministic) {
  const PufInstance a = fabricate(64, 42);
  const PufInstance b = fabricate(64, 42);
  for (unsigned chain = 0; chain < 64; ++chain) {
    for (unsigned stage = 0; stage < 64; ++stage) {
      ASSERT_EQ(a.straight_delay(chain, stage), b.straight_delay(chain, stage));
      ASSERT_EQ(a.crossed_delay(chain, stage), b.crossed_delay(chain, stage));
    }
  }
}

TEST(Puf, DistinctSeedsGiveDistinctDelays) {
  const PufInstance a = fabricate(64, 42);
  const PufInstance b = fabricate(64, 43);
  EXPECT_NE(a.straight_delay(0, 0), b.straight_delay(0, 0));
  EXPECT_NE(a.crossed_delay(63, 63), b.crossed_delay(63, 63));
}

TEST(Puf, DelaysLookStandardNormal) {
  const PufInstance p = fabricate(160, 5);
  double sum = 0;
  double sq = 0;
  const double n = 160.0 * 160.0 * 2.0;
  for (unsigned c = 0; c < 160; ++c) {
    for (unsigned s = 0; s < 160; ++s) {
      for (double d : {p.straight_delay(c, s), p.crossed_delay(c, s)}) {
        sum += d;
        sq += d * d;
      }
    }
  }
  EXPECT_NEAR(sum / n, 0.0, 0.02);
  EXPECT_NEAR(sq / n, 1.0, 0.02);
}

TEST(Puf, UnsupportedWidth) {
  try {
    fabricate(12, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::UnsupportedWidth);
  }
}

// Independent evaluation of one chain, straight from the delay table.
bool chain_oracle(const PufInstance& p, unsigned chain, const Word& c) {
  double top = 0;
  double bottom = 0;
  for (unsigned s = 0; s < p.width(); ++s) {
    // Express the stage delta as top-path minus bottom-path excess.
    if (c.bit(s)) {
      std::swap(top, bottom);
      top += p.crossed_delay(chain, s);
    } else {
      top += p.straight_delay(chain, s);
    }
  }
  return top - bottom > 0;
}

TEST(Puf, RawResponseMatchesPathModel) {
  const PufInstance p = fabricate(32, 9);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    const Word c = Word::random(32, rng);
    const Word r = p.raw_response(c);
    for (unsigned chain = 0; chain < 32; ++chain) {
      ASSERT_EQ(r.bit(chain), chain_oracle(p, chain, c));
    }
  }
}

TEST(Puf, NoiselessResponsesRepeat) {
  const PufInstance p = fabricate(64, 42);
  std::mt19937_64 rng(2);
  for (int i = 0; i < 100; ++i) {
    const Word c = Word::random(64, rng);
    EXPECT_EQ(p.raw_response(c), p.raw_response(c));
  }
}

TEST(Puf, InterChipHammingDistance) {
  const PufInstance a = fabricate(64, 42);
  const PufInstance b = fabricate(64, 43);
  std::mt19937_64 rng(2024);
  double total = 0;
  constexpr int kChallenges = 10000;
  for (int i = 0; i < kChallenges; ++i) {
    const Word c = Word::random(64, rng);
    total += hamming_distance(a.raw_response(c), b.raw_response(c));
  }
  EXPECT_NEAR(total / kChallenges, 32.0, 0.05 * 64);
}

TEST(Puf, SingleBitAvalanche) {
  const PufInstance p = fabricate(64, 42);
  std::mt19937_64 rng(8);
  double flipped = 0;
  constexpr int kTrials = 5000;
  for (int i = 0; i < kTrials; ++i) {
    const Word c = Word::random(64, rng);
    Word c2 = c;
    c2.flip_bit(static_cast<unsigned>(rng() % 64));
    flipped += hamming_distance(p.raw_response(c), p.raw_response(c2));
  }
  // Regression band; measured 0.50 at seed 42.
  const double rate = flipped / (kTrials * 64.0);
  EXPECT_GT(rate, 0.4);
  EXPECT_LT(rate, 0.6);
}

TEST(Puf, PerBitBiasExhaustiveAtEightBits) {
  // Arbiter chains carry a static bias that differs per chip; instance 42 is
  // the documented reference.
  const PufInstance p = fabricate(8, 42);
  unsigned ones[8] = {};
  for (std::uint64_t x = 0; x < 256; ++x) {
    const Word r = p.raw_response(Word::from_u64(8, x));
    for (unsigned i = 0; i < 8; ++i) ones[i] += r.bit(i);
  }
  for (unsigned i = 0; i < 8; ++i) EXPECT_NEAR(ones[i] / 256.0, 0.5, 0.1) << "bit " << i;

  // Across many chips the mean is unbiased.
  double mean = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const PufInstance q = fabricate(8, seed);
    for (std::uint64_t x = 0; x < 256; ++x) mean += q.raw_response(Word::from_u64(8, x)).popcount();
  }
  EXPECT_NEAR(mean / (100.0 * 256 * 8), 0.5, 0.02);
}

TEST(Puf, NoisyResponseFlipsAtRequestedRate) {
  const PufInstance p = fabricate(64, 42);
  std::mt19937_64 challenges(3);
  std::mt19937_64 noise(4);
  double flips = 0;
  for (int i = 0; i < 2000; ++i) {
    const Word c = Word::random(64, challenges);
    flips += hamming_distance(p.raw_response(c), p.noisy_response(c, 0.05, noise));
  }
  EXPECT_NEAR(flips / (2000 * 64.0), 0.05, 0.005);
  EXPECT_EQ(p.noisy_response(Word(64), 0.0, noise), p.raw_response(Word(64)));
}

TEST(PufPermute, BijectiveExhaustiveAtEightBits) {
  for (std::uint64_t seed : {1u, 42u, 1000u}) {
    const PufInstance p = fabricate(8, seed);
    std::set<Word> images;
    for (std::uint64_t x = 0; x < 256; ++x) {
      const Word in = Word::from_u64(8, x);
      const Word out = p_permute(p, in);
      images.insert(out);
      ASSERT_EQ(p_inverse(p, out), in);
    }
    EXPECT_EQ(images.size(), 256u);
  }
}

TEST(PufPermute, NonzeroWordsStayNonzero) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const PufInstance p = fabricate(8, seed);
    EXPECT_TRUE(p_permute(p, Word(8)).is_zero());
    for (std::uint64_t x = 1; x < 256; ++x) {
      ASSERT_FALSE(p_permute(p, Word::from_u64(8, x)).is_zero()) << seed << " " << x;
    }
  }
}

TEST(PufPermute, InverseRoundTripSampledAtWideWidths) {
  std::mt19937_64 rng(21);
  for (unsigned l : {16u, 32u, 64u, 96u, 160u}) {
    const PufInstance p = fabricate(l, l);
    for (int i = 0; i < 50; ++i) {
      const Word x = Word::random(l, rng);
      EXPECT_EQ(p_inverse(p, p_permute(p, x)), x);
    }
  }
}

TEST(PufPermute, Deterministic) {
  const PufInstance p = fabricate(64, 42);
  const Word x = Word::from_u64(64, 0x1234);
  EXPECT_EQ(p_permute(p, x), p_permute(fabricate(64, 42), x));
}

TEST(PufPermute, DistinctChipsDisagreeAtEightBits) {
  const PufInstance a = fabricate(8, 42);
  const PufInstance b = fabricate(8, 43);
  unsigned collisions = 0;
  for (std::uint64_t x = 1; x < 256; ++x) {
    collisions += p_permute(a, Word::from_u64(8, x)) == p_permute(b, Word::from_u64(8, x));
  }
  EXPECT_EQ(collisions, 0u);  // exhaustive over nonzero inputs (0 is fixed by both)
}

TEST(PufPermute, InterChipHammingDistance) {
  std::mt19937_64 rng(99);
  for (std::uint64_t seed : {40u, 42u, 44u}) {
    const PufInstance a = fabricate(64, seed);
    const PufInstance b = fabricate(64, seed + 100);
    double total = 0;
    for (int i = 0; i < 4000; ++i) {
      const Word x = Word::random(64, rng);
      total += hamming_distance(p_permute(a, x), p_permute(b, x));
    }
    EXPECT_NEAR(total / 4000, 32.0, 0.1 * 32.0) << seed;
  }
}

TEST(PufPermute, OddWidthRejected) {
  const PufInstance odd(7, 1);
  try {
    p_permute(odd, Word(7));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::OddWidth);
  }
}

TEST(Puf, GateCost) {
  EXPECT_EQ(puf_gate_cost(64), 516u);
  EXPECT_EQ(puf_gate_cost(8), 68u);
}

}  // namespace
}  // namespace rfidauth
