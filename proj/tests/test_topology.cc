#include <gtest/gtest.h>

#include "dlive/syntax.h"
#include "dlive/topology.h"

namespace dlive {
namespace {

const std::vector<std::string> kUV = {"u", "v"};

TopoVerdict closed(const char* f) { return check_closed(parse_formula(f), kUV); }
TopoVerdict open(const char* f) { return check_open(parse_formula(f), kUV); }

TEST(TopologyTest, ClosedAndOpenAtoms) {
  EXPECT_TRUE(closed("1 <= u^2 + v^2 <= 2").holds());
  EXPECT_FALSE(open("1 <= u^2 + v^2 <= 2").holds());
  EXPECT_TRUE(open("u^2 + v^2 < 2 | u > 1").holds());
  EXPECT_FALSE(closed("1 <= u^2 + v^2 & u^2 + v^2 < 2").holds());
  EXPECT_FALSE(open("1 <= u^2 + v^2 & u^2 + v^2 < 2").holds());
  EXPECT_TRUE(closed("u = v").holds());
  EXPECT_TRUE(open("u != v").holds());
}

TEST(TopologyTest, NegationSwaps) {
  EXPECT_TRUE(open("!(u^2 + v^2 >= 2)").holds());
  EXPECT_TRUE(closed("!(u > 0)").holds());
}

TEST(TopologyTest, TrueAndFalseAreBoth) {
  for (const char* f : {"true", "false"}) {
    EXPECT_TRUE(closed(f).holds()) << f;
    EXPECT_TRUE(open(f).holds()) << f;
  }
}

TEST(TopologyTest, ParameterAtomsCountAsBoth) {
  EXPECT_TRUE(check_closed(parse_formula("e > 0 & u >= e"), kUV).holds());
  EXPECT_TRUE(check_open(parse_formula("e >= 0 & u > e"), kUV).holds());
}

TEST(TopologyTest, BoundedWitness) {
  const TopoVerdict v = check_bounded(parse_formula("1 <= u^2 + v^2 <= 2"), kUV);
  ASSERT_TRUE(v.holds());
  ASSERT_TRUE(v.witness);
  EXPECT_EQ(*v.witness, 2);
  EXPECT_FALSE(check_bounded(parse_formula("u^2 + v^2 >= 1"), kUV).holds());
}

TEST(TopologyTest, CompactNeedsClosedAndBounded) {
  EXPECT_TRUE(check_compact(parse_formula("1 <= u^2 + v^2 <= 2"), kUV).holds());
  EXPECT_FALSE(check_compact(parse_formula("1 <= u^2 + v^2 & u^2 + v^2 < 2"), kUV).holds());
  EXPECT_FALSE(check_compact(Formula::tru(), kUV).holds());
  EXPECT_TRUE(check_compact(Formula::fls(), kUV).holds());
}

}  // namespace
}  // namespace dlive
