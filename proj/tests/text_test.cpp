#include "satml/rng.hpp"
#include "satml/text.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace satml;

TEST(FormatDoubleTest, ShortestRoundTrip) {
  for (double x : {0.0, 1.0, 0.1, 1.0 / 3.0, -2.5e-300, 123456789.125, 0.6931471805599453}) {
    const std::string s = format_double(x);
    EXPECT_EQ(parse_double(s), x) << s;
  }
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_THROW(format_double(std::numeric_limits<double>::infinity()), std::invalid_argument);
}

TEST(ParseTest, Errors) {
  EXPECT_THROW(parse_double("1.5x"), std::invalid_argument);
  EXPECT_THROW(parse_u64("-3"), std::invalid_argument);
  EXPECT_EQ(parse_u64("0x10"), 16U);
  EXPECT_EQ(parse_u64("18446744073709551615"), 18446744073709551615ULL);
}

TEST(SplitTest, KeepsEmptyCells) {
  const auto cells = split("a,,b,", ',');
  ASSERT_EQ(cells.size(), 4U);
  EXPECT_EQ(cells[1], "");
  EXPECT_EQ(cells[2], "b");
}

TEST(RngTest, BelowIsInRangeAndCoversIt) {
  Rng rng(7);
  std::vector<int> hits(5, 0);
  for (int i = 0; i < 1000; ++i)
    ++hits[rng.below(5)];
  for (int h : hits)
    EXPECT_GT(h, 150);
  EXPECT_NE(derive_seed(1, 2, 3), derive_seed(1, 3, 2));
  EXPECT_EQ(derive_seed(1, 2, 3), derive_seed(1, 2, 3));
}
