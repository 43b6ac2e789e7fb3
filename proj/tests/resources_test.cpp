#include <gtest/gtest.h>

#include "rfidauth/error.hpp"
#include "rfidauth/lfsr.hpp"
#include "rfidauth/puf.hpp"
#include "rfidauth/resources.hpp"

namespace rfidauth {
namespace {

TEST(Resources, EightBit) {
  const auto r = estimate(8);
  EXPECT_EQ(r.alu_gates, 103u);
  EXPECT_EQ(r.control_gates, 9u);
  EXPECT_EQ(r.total_gates, 112u);
}

TEST(Resources, SixtyFourBit) {
  const auto r = estimate(64);
  EXPECT_EQ(r.lfsr_gates, 259u);
  EXPECT_EQ(r.puf_gates, 516u);
  EXPECT_EQ(r.alu_gates, 775u);
  EXPECT_EQ(r.total_gates, 784u);
  EXPECT_EQ(r.storage_bits, 192u);
  EXPECT_EQ(r.messages_per_auth, 4u);
  EXPECT_TRUE(r.under_budget);
}

TEST(Resources, WideKeysStayUnderBudget) {
  EXPECT_EQ(estimate(96).total_gates, 1168u);
  EXPECT_EQ(estimate(160).total_gates, 1936u);
  EXPECT_TRUE(estimate(160).under_budget);
}

TEST(Resources, TableMatchesPublishedRows) {
  const auto rows = report_table();
  ASSERT_EQ(rows.size(), 6u);
  const unsigned alu[] = {103, 199, 391, 775, 1159, 1927};
  const unsigned total[] = {112, 208, 400, 784, 1168, 1936};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].alu_gates, alu[i]);
    EXPECT_EQ(rows[i].control_gates, 9u);
    EXPECT_EQ(rows[i].total_gates, total[i]);
    EXPECT_EQ(rows[i].total_gates, rows[i].alu_gates + rows[i].control_gates);
    EXPECT_EQ(rows[i].lfsr_gates, lfsr_gate_cost(rows[i].key_length));
    EXPECT_EQ(rows[i].puf_gates, puf_gate_cost(rows[i].key_length));
    EXPECT_EQ(rows[i].under_budget, rows[i].total_gates <= kGateBudget);
  }
}

TEST(Resources, UnsupportedWidth) { EXPECT_THROW(estimate(128), Error); }

TEST(Resources, TextTableHasEveryColumn) {
  const std::string text = format_table(report_table());
  for (const char* cell : {"103", "1927", "112", "1936", "160-bit"}) {
    EXPECT_NE(text.find(cell), std::string::npos) << cell;
  }
}

}  // namespace
}  // namespace rfidauth
