#include <gtest/gtest.h>

#include <random>

#include "dlive/arith.h"
#include "dlive/syntax.h"

namespace dlive {
namespace {

ArithObligation ob(const char* hyp, const char* concl, std::vector<std::string> vars = {"u", "v"}) {
  return {std::move(vars), parse_formula(hyp), parse_formula(concl)};
}

Box square(const std::vector<std::string>& vars, int lo, int hi) {
  Box b;
  for (const auto& v : vars) b[v] = Interval::of(lo, hi);
  return b;
}

TEST(ProveTest, AnnulusDerivativeBound) {
  const ArithVerdict v = prove_implication(
      ob("1 <= u^2 + v^2 <= 2", "2*(u^2 + v^2)*(u^2 + v^2 - 1/4) >= 3/2"));
  EXPECT_EQ(v.status, ArithStatus::Valid);
  EXPECT_TRUE(v.global);
  EXPECT_GT(v.trace.cells + v.trace.certified_disjuncts, 0u);
}

TEST(ProveTest, LinearInFactsIsGlobal) {
  const ArithVerdict v = prove_implication(ob("1/4 < u^2 + v^2", "2*(u^2 + v^2) >= 1/2"));
  EXPECT_EQ(v.status, ArithStatus::Valid);
  EXPECT_TRUE(v.global);
}

TEST(ProveTest, CallerBoxForUnboundedHypothesis) {
  const ArithObligation o = ob("u >= 0", "u^3 - 3*u + 3 >= 0", {"u"});
  const ArithVerdict open = prove_implication(o, {}, Budget{2000, 10});
  EXPECT_EQ(open.status, ArithStatus::Unknown);
  EXPECT_EQ(open.reason, "UnboundedDomain");
  const ArithVerdict v = prove_implication(o, square({"u"}, -4, 4));
  EXPECT_EQ(v.status, ArithStatus::Valid);
  EXPECT_FALSE(v.global);
}

TEST(ProveTest, TooStrongBoundIsFalsified) {
  const ArithObligation o = ob("1 <= u^2 + v^2 <= 2", "2*(u^2 + v^2)*(u^2 + v^2 - 1/4) >= 2");
  const ArithVerdict v = prove_implication(o);
  ASSERT_EQ(v.status, ArithStatus::Falsified);
  ASSERT_TRUE(v.counterexample);
  EXPECT_TRUE(is_counterexample(o, *v.counterexample));
  // The failure sits near the inner circle, where the left side is 3/2.
  const Rational r2 = v.counterexample->at("u") * v.counterexample->at("u") +
                      v.counterexample->at("v") * v.counterexample->at("v");
  EXPECT_LT(r2, Rational(3, 2));
}

TEST(ProveTest, StrictBoundaryNotCertified) {
  // x > 0 fails at the boundary point x = 0 of the hypothesis.
  const ArithVerdict v = prove_implication(ob("0 <= x <= 1", "x > 0", {"x"}));
  EXPECT_NE(v.status, ArithStatus::Valid);
}

TEST(ProveTest, BudgetExhaustedIsUnknown) {
  const ArithVerdict v =
      prove_implication(ob("-1 <= x <= 1", "x^2 >= 0 & (x - 1/3)^2 > 0 | x = 1/3", {"x"}), {},
                        Budget{3, 10});
  EXPECT_EQ(v.status, ArithStatus::Unknown);
  EXPECT_EQ(v.reason, "BudgetExhausted");
}

TEST(FalsifyTest, Trivial) {
  const ArithVerdict a = falsify(ob("true", "x^2 >= 1", {"x"}), 1000, 1);
  ASSERT_EQ(a.status, ArithStatus::Falsified);
  EXPECT_LT(abs(a.counterexample->at("x")), 1);
  EXPECT_EQ(falsify(ob("x >= 2", "x^2 >= 4", {"x"}), 1000, 1).status, ArithStatus::Unknown);
  const ArithVerdict c =
      falsify(ob("1 <= u^2 + v^2 <= 2", "2*(u^2 + v^2)*(u^2 + v^2 - 1/4) >= 2"), 4000, 3);
  EXPECT_EQ(c.status, ArithStatus::Falsified);
}

TEST(FalsifyTest, Deterministic) {
  const ArithObligation o = ob("-3 <= u <= 3 & -3 <= v <= 3", "u*v < 2");
  const ArithVerdict a = falsify(o, 500, 42), b = falsify(o, 500, 42);
  EXPECT_EQ(a.status, b.status);
  EXPECT_EQ(a.counterexample, b.counterexample);
}

TEST(IntervalTest, EnclosesSampledValues) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> unit(0, 1);
  const Polynomial p = parse_polynomial("x^3 - 2*x*y + y^2 - 1/3");
  for (int trial = 0; trial < 20; ++trial) {
    const double lx = -2 + 3 * unit(rng), ly = -2 + 3 * unit(rng);
    const Box box{{"x", Interval::of(from_double(lx), from_double(lx + unit(rng)))},
                  {"y", Interval::of(from_double(ly), from_double(ly + unit(rng)))}};
    Interval range = Interval::point(0);
    bool first = true;
    for (const auto& [m, c] : p.terms()) {
      Interval t = Interval::point(c);
      for (const auto& [v, e] : m) t = t * ipow(box.at(v), e);
      range = first ? t : range + t;
      first = false;
    }
    for (int i = 0; i < 100; ++i) {
      const Rational x = box.at("x").lo.value + (box.at("x").hi.value - box.at("x").lo.value) *
                                                     from_double(unit(rng));
      const Rational y = box.at("y").lo.value + (box.at("y").hi.value - box.at("y").lo.value) *
                                                     from_double(unit(rng));
      EXPECT_TRUE(range.contains(p.eval({{"x", x}, {"y", y}})));
    }
  }
}

TEST(IntervalTest, EvenPowersNonNegative) {
  const Interval a = ipow(Interval::of(-2, 1), 2);
  EXPECT_EQ(a.lo.value, 0);
  EXPECT_EQ(a.hi.value, 4);
  EXPECT_TRUE(Interval::whole().width().inf == 1);
}

TEST(ImpliedBoxTest, LinearAndCircleBounds) {
  const Box a = implied_box(parse_formula("-1 <= x & x <= 3 & 2*y >= 1"));
  EXPECT_EQ(a.at("x").lo.value, -1);
  EXPECT_EQ(a.at("x").hi.value, 3);
  EXPECT_EQ(a.at("y").lo.value, Rational(1, 2));
  EXPECT_FALSE(a.at("y").hi.finite());
  const Box b = implied_box(parse_formula("u^2 + v^2 <= 4"));
  EXPECT_LE(b.at("u").hi.value, Rational(21, 10));
  EXPECT_GE(b.at("u").hi.value, 2);
}

TEST(SmtlibTest, DirectTranslation) {
  const std::string s = emit_smtlib(ob("x >= 0", "x + 1 > 0", {"x"}));
  EXPECT_NE(s.find("(set-logic QF_NRA)"), std::string::npos);
  EXPECT_NE(s.find("(assert (>= x 0))"), std::string::npos);
  EXPECT_NE(s.find("(assert (not (> (+ x 1) 0)))"), std::string::npos);
  EXPECT_NE(emit_smtlib(ob("x >= 1/4", "x > 0", {"x"})).find("(/ 1 4)"), std::string::npos);
}

TEST(SmtlibTest, StableNames) {
  const ArithObligation o = ob("x >= 0", "x + 1 > 0", {"x"});
  EXPECT_EQ(emit_smtlib(o), emit_smtlib(o));
  const std::string name = smtlib_filename(3, o);
  EXPECT_EQ(name, smtlib_filename(3, o));
  EXPECT_EQ(name.rfind("ob-3-", 0), 0u);
  EXPECT_EQ(name.substr(name.size() - 5), ".smt2");
  EXPECT_NE(name, smtlib_filename(3, ob("x >= 0", "x + 2 > 0", {"x"})));
}

}  // namespace
}  // namespace dlive
