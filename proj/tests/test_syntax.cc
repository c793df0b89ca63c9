#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "dlive/syntax.h"

namespace dlive {
namespace {

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(DLIVE_PROBLEMS) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(ParseTest, LinearSpiralOde) {
  const ProblemFile pf = parse_problem("ode { u' = -v - u; v' = u - v }\ngoal { u^2 + v^2 >= 2 }");
  ASSERT_EQ(pf.ode.vars, (std::vector<std::string>{"u", "v"}));
  EXPECT_EQ(pf.ode.rhs[0], parse_polynomial("-u - v"));
  EXPECT_EQ(pf.goal.kind(), Formula::Kind::Cmp);
  EXPECT_EQ(pf.goal.op(), CmpOp::Ge);
  EXPECT_TRUE(pf.ode.domain.is_true());
  EXPECT_TRUE(pf.certificate.empty());
}

TEST(ParseTest, SyntaxErrorPointsAtBrace) {
  const std::string text = "ode { x' = 1 }\ngoal { u^2 + }";
  try {
    parse_problem(text);
    FAIL() << "expected SyntaxError";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.pos().offset, text.rfind('}'));
    EXPECT_EQ(e.pos().line, 2u);
    EXPECT_FALSE(e.expected().empty());
  }
}

TEST(ParseTest, UndeclaredIdentifier) {
  EXPECT_THROW(parse_problem("ode { x' = 1 }\ngoal { y >= 0 }"), UnknownIdentifier);
}

TEST(ParseTest, DuplicateDeclarations) {
  EXPECT_THROW(parse_problem("ode { x' = 1; x' = 2 }\ngoal { x >= 0 }"), DuplicateDeclaration);
  EXPECT_THROW(parse_problem("param a;\nparam a;\node { x' = a }\ngoal { x >= 0 }"),
               DuplicateDeclaration);
  EXPECT_THROW(parse_problem("param a;\node { a' = 1 }\ngoal { a >= 0 }"), DuplicateDeclaration);
}

TEST(ParseTest, ComparisonChainDesugars) {
  EXPECT_EQ(parse_formula("1 <= x <= 2"), parse_formula("1 <= x & x <= 2"));
}

TEST(ParseTest, NoFloatingLiterals) {
  EXPECT_THROW(parse_formula("x >= 0.5"), ParseError);
}

TEST(ParseTest, CertificateBindings) {
  const ProblemFile pf = parse_problem(slurp("ex2.dl"));
  ASSERT_EQ(pf.certificate.size(), 1u);
  const CertStep& s = pf.certificate[0];
  EXPECT_EQ(s.rule, "SP_c");
  ASSERT_NE(s.find("eps"), nullptr);
  EXPECT_EQ(std::get<Polynomial>(s.find("eps")->value), Polynomial::constant(Rational(3, 2)));
  ASSERT_NE(s.find("inv"), nullptr);
  EXPECT_EQ(std::get<Hint>(s.find("inv")->value).steps.size(), 2u);
  EXPECT_EQ(s.find("nope"), nullptr);
}

TEST(ParseTest, ErrorsStayInsideInput) {
  for (const std::string text : {"", "ode {", "ode { x' = }", "goal { x >= }", "ode { x' = 1 } junk"}) {
    try {
      parse_problem(text);
      ADD_FAILURE() << "accepted: " << text;
    } catch (const ParseError& e) {
      EXPECT_LE(e.pos().offset, text.size()) << text;
    }
  }
}

TEST(PrintTest, CanonicalForms) {
  EXPECT_EQ(print_formula(parse_formula("u^2 <= 1/4 & v^2 <= 1/4")), "u^2 <= 1/4 & v^2 <= 1/4");
  EXPECT_EQ(print_formula(Formula::neg(parse_formula("p >= 0"))), "!(p >= 0)");
  EXPECT_EQ(print_polynomial(Polynomial()), "0");
}

// Random ASTs over a small vocabulary.
struct Gen {
  std::mt19937_64 rng;
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

  Polynomial poly() {
    Polynomial p;
    const char* vars[] = {"x", "y", "z"};
    for (int t = 0, n = 1 + pick(3); t < n; ++t) {
      Rational c(pick(9) - 4, 1 + pick(3));
      c.canonicalize();
      Polynomial m = Polynomial::constant(c);
      for (int k = pick(3); k > 0; --k) m = m * Polynomial::variable(vars[pick(3)]);
      p += m;
    }
    return p;
  }

  Formula formula(int depth) {
    const int k = depth == 0 ? 0 : pick(7);
    switch (k) {
      case 0: {
        const CmpOp ops[] = {CmpOp::Eq, CmpOp::Ne, CmpOp::Lt, CmpOp::Le, CmpOp::Gt, CmpOp::Ge};
        return Formula::cmp(poly(), ops[pick(6)], poly());
      }
      case 1: return Formula::neg(formula(depth - 1));
      case 2: return Formula::conj(formula(depth - 1), formula(depth - 1));
      case 3: return Formula::disj(formula(depth - 1), formula(depth - 1));
      case 4: return Formula::implies(formula(depth - 1), formula(depth - 1));
      case 5: return Formula::forall("z", formula(depth - 1));
      default: {
        OdeSystem s;
        s.vars = {"x", "y"};
        s.rhs = {poly(), poly()};
        s.domain = pick(2) ? Formula::tru() : formula(0);
        return pick(2) ? Formula::box(s, formula(depth - 1)) : Formula::diamond(s, formula(depth - 1));
      }
    }
  }
};

TEST(PrintTest, RoundTripRandomFormulas) {
  Gen g{std::mt19937_64(11)};
  for (int i = 0; i < 300; ++i) {
    const Formula f = g.formula(3);
    const std::string text = print_formula(f);
    EXPECT_EQ(parse_formula(text), f) << text;
    EXPECT_EQ(print_formula(f), text);
  }
}

TEST(PrintTest, RoundTripRandomPolynomials) {
  Gen g{std::mt19937_64(5)};
  for (int i = 0; i < 300; ++i) {
    const Polynomial p = g.poly();
    EXPECT_EQ(parse_polynomial(print_polynomial(p)), p);
  }
}

TEST(PrintTest, RoundTripShippedProblems) {
  for (const char* name : {"ex1.dl", "ex2.dl", "ex2_cor.dl", "ce1.dl", "ce2.dl", "ce3.dl", "ce4.dl"}) {
    const ProblemFile pf = parse_problem(slurp(name));
    const std::string text = print_problem(pf);
    EXPECT_EQ(parse_problem(text), pf) << name;
    EXPECT_EQ(print_problem(parse_problem(text)), text) << name;
  }
}

TEST(RuleNamesTest, ContainsDerivedAndRefinementRules) {
  const auto& names = known_rule_names();
  for (const char* r : {"dV_geq", "SP_c", "SLyap", "M_dia", "K_dia", "COR", "SAR", "DC", "DW", "BC"}) {
    EXPECT_TRUE(names.count(r)) << r;
  }
}

}  // namespace
}  // namespace dlive
