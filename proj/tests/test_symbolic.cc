#include <gtest/gtest.h>

#include <random>

#include "dlive/ode.h"
#include "dlive/syntax.h"

namespace dlive {
namespace {

Polynomial P(const char* s) { return parse_polynomial(s); }
Polynomial var(const char* s) { return Polynomial::variable(s); }

TEST(RationalTest, ParseAndPrint) {
  EXPECT_EQ(parse_rational("-6/4"), Rational(-3, 2));
  EXPECT_EQ(to_string(Rational(-3, 2)), "-3/2");
  EXPECT_EQ(to_string(parse_rational("4/2")), "2");
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_rational("abc"), std::invalid_argument);
}

TEST(RationalTest, FloorCeilDyadic) {
  EXPECT_EQ(floor(Rational(-7, 2)), -4);
  EXPECT_EQ(ceil(Rational(-7, 2)), -3);
  EXPECT_EQ(floor_dyadic(Rational(1, 3), 2), Rational(1, 4));
  EXPECT_EQ(ceil_dyadic(Rational(1, 3), 2), Rational(1, 2));
  const Rational s = sqrt_upper(2);
  EXPECT_GE(s * s, 2);
  EXPECT_LT(s - Rational(1414214, 1000000), Rational(1, 1000));
  EXPECT_EQ(from_double(0.375), Rational(3, 8));
}

TEST(PolynomialTest, ZeroCoefficientsVanish) {
  const Polynomial p = var("x") * var("y") - var("y") * var("x");
  EXPECT_TRUE(p.is_zero());
  EXPECT_TRUE(p.terms().empty());
}

TEST(PolynomialTest, ArithmeticMatchesFloatingPoint) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> small(-5, 5);
  const Polynomial a = P("3*x^2*y - 2*y + 1/2");
  const Polynomial b = P("x - y^3 + 4");
  const Polynomial prod = a * b;
  const Polynomial cube = (a + b).pow(3);
  for (int i = 0; i < 50; ++i) {
    const int x = small(rng), y = small(rng);
    const double av = 3.0 * x * x * y - 2.0 * y + 0.5;
    const double bv = x - double(y) * y * y + 4;
    const std::map<std::string, Rational> pt{{"x", x}, {"y", y}};
    EXPECT_DOUBLE_EQ(to_double(prod.eval(pt)), av * bv);
    EXPECT_DOUBLE_EQ(to_double(cube.eval(pt)), (av + bv) * (av + bv) * (av + bv));
  }
}

TEST(PolynomialTest, EvalNeedsEveryVariable) {
  EXPECT_THROW(P("x + y").eval({{"x", 1}}), MissingBinding);
}

TEST(PolynomialTest, DegreeLimit) {
  EXPECT_THROW(var("x").pow(int(Polynomial::degree_limit()) + 1), DegreeLimitExceeded);
}

TEST(PolynomialTest, PartialAndSubstitute) {
  const Polynomial p = P("x^3*y + 2*x*y^2");
  EXPECT_EQ(p.partial("x"), P("3*x^2*y + 2*y^2"));
  EXPECT_EQ(p.substitute("y", P("x + 1")), P("x^4 + x^3 + 2*x^3 + 4*x^2 + 2*x"));
}

TEST(PolynomialTest, CanonicalText) {
  EXPECT_EQ(P("-1/2*v^2 + 2*u^4 + 4*u^2*v^2 + 2*v^4 - 1/2*u^2").to_string({"u", "v"}),
            "2*u^4 + 4*u^2*v^2 + 2*v^4 - 1/2*u^2 - 1/2*v^2");
  EXPECT_EQ(Polynomial().to_string(), "0");
}

TEST(PolynomialTest, DivisionIdentity) {
  const Polynomial p = P("u^4 + u^2*v^2 + 3*u + 1");
  const Polynomial d = P("u^2 + v^2 - 1");
  const DivisionResult r = divide(p, d, {"u", "v"});
  EXPECT_EQ(r.quotient * d + r.remainder, p);
  EXPECT_EQ(r.remainder, P("3*u - v^2 + 2"));
  EXPECT_EQ(r.quotient, P("u^2 + 1"));
}

OdeSystem linear_spiral() {
  OdeSystem s;
  s.vars = {"u", "v"};
  s.rhs = {P("-v - u"), P("u - v")};
  return s;
}

TEST(LieTest, RadiusDecaysOnLinearSpiral) {
  EXPECT_EQ(lie_derivative(P("u^2 + v^2"), linear_spiral()), P("-2*u^2 - 2*v^2"));
  EXPECT_EQ(higher_lie(P("u"), linear_spiral(), 2), P("2*v"));
  EXPECT_EQ(higher_lie(P("u"), linear_spiral(), 0), P("u"));
}

TEST(LieTest, MatchesChainRuleNumerically) {
  OdeSystem s;
  s.vars = {"x", "y"};
  s.rhs = {P("x*y - 1"), P("x^2 + 1/3*y")};
  const Polynomial p = P("x^3 - x*y + y^2");
  const Polynomial lp = lie_derivative(p, s);
  // Forward-difference oracle along one Euler step.
  const double x = 0.7, y = -0.4, h = 1e-6;
  auto pf = [](double a, double b) { return a * a * a - a * b + b * b; };
  const double fx = x * y - 1, fy = x * x + y / 3;
  const double fd = (pf(x + h * fx, y + h * fy) - pf(x - h * fx, y - h * fy)) / (2 * h);
  EXPECT_NEAR(to_double(lp.eval({{"x", from_double(x)}, {"y", from_double(y)}})), fd, 1e-6);
}

TEST(LieTest, ParametersAreConstant) {
  OdeSystem s = linear_spiral();
  s.params = {"a"};
  s.rhs[0] = P("a*v");
  EXPECT_EQ(lie_derivative(P("a*u"), s), P("a^2*v"));
}

TEST(OdeTest, ClockAddsUnitRate) {
  const OdeSystem c = with_clock(linear_spiral(), "t");
  EXPECT_EQ(lie_derivative(P("t"), c), Polynomial::constant(1));
  EXPECT_THROW(with_clock(c, "s"), InvalidSystem);
  EXPECT_THROW(with_clock(linear_spiral(), "u"), InvalidSystem);
  EXPECT_EQ(var_order(c), (VarOrder{"u", "v", "t"}));
}

TEST(OdeTest, ValidateRejectsBadSystems) {
  OdeSystem s = linear_spiral();
  s.rhs.pop_back();
  EXPECT_THROW(validate(s), InvalidSystem);
  OdeSystem t = linear_spiral();
  t.rhs[0] = P("w");
  EXPECT_THROW(validate(t), InvalidSystem);
  EXPECT_NO_THROW(validate(linear_spiral()));
}

TEST(OdeTest, Affinity) {
  EXPECT_TRUE(is_affine(linear_spiral()));
  OdeSystem s = linear_spiral();
  s.rhs[1] = P("u*v");
  EXPECT_FALSE(is_affine(s));
}

TEST(FormulaTest, SimplifyingConstructors) {
  const Formula a = Formula::cmp(var("x"), CmpOp::Gt, Polynomial());
  EXPECT_EQ(mk_and(Formula::tru(), a), a);
  EXPECT_TRUE(mk_and(Formula::fls(), a).is_false());
  EXPECT_TRUE(mk_or(Formula::tru(), a).is_true());
  EXPECT_EQ(mk_not(mk_not(a)), a);
}

TEST(FormulaTest, NnfFoldsNegation) {
  const Formula f = parse_formula("!(x > 0 & y <= 1)");
  EXPECT_EQ(nnf(f), parse_formula("x <= 0 | y > 1"));
  EXPECT_EQ(nnf(parse_formula("x > 0 -> y = 1")), parse_formula("x <= 0 | y = 1"));
}

TEST(FormulaTest, EvalAndSubstitute) {
  const Formula f = parse_formula("x^2 + y^2 <= 1 & x != y");
  EXPECT_TRUE(eval_formula(f, {{"x", Rational(1, 2)}, {"y", 0}}));
  EXPECT_FALSE(eval_formula(f, {{"x", Rational(1, 2)}, {"y", Rational(1, 2)}}));
  EXPECT_EQ(substitute(f, "y", P("0")), parse_formula("x^2 <= 1 & x != 0"));
}

TEST(FormulaTest, FreeIdentifiersSkipBinders) {
  const Formula f = Formula::forall("x", parse_formula("x + y > z"));
  EXPECT_EQ(free_identifiers(f), (std::set<std::string>{"y", "z"}));
}

}  // namespace
}  // namespace dlive
