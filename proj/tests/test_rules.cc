#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "dlive/ode.h"
#include "dlive/rules.h"

namespace dlive {
namespace {

Formula F(const char* s) { return parse_formula(s); }
Polynomial P(const char* s) { return parse_polynomial(s); }

ProblemFile load(const std::string& name) {
  std::ifstream in(std::string(DLIVE_PROBLEMS) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_problem(ss.str());
}

ProblemFile inline_problem(const std::string& text) { return parse_problem(text); }

CertStep step(const std::string& text) {
  return parse_problem("ode { x' = 1; y' = 0 }\ngoal { x >= 0 }\nproof { " + text + " }")
      .certificate.at(0);
}

// Walks from the first node named names[0] up through its ancestors (the next
// post-order line of smaller depth) and matches the remaining names in order.
bool ancestor_chain(const std::string& trace, const std::vector<std::string>& names) {
  std::vector<std::pair<int, std::string>> nodes;
  std::istringstream in(trace);
  for (std::string line; std::getline(in, line);) {
    std::istringstream ls(line);
    int depth;
    std::string name;
    if (ls >> depth >> name) nodes.emplace_back(depth, name);
  }
  size_t i = 0;
  while (i < nodes.size() && nodes[i].second != names[0]) ++i;
  if (i == nodes.size()) return false;
  size_t want = 1;
  for (int depth = nodes[i].first; i < nodes.size() && want < names.size(); ++i) {
    if (nodes[i].first >= depth) continue;
    depth = nodes[i].first;
    if (nodes[i].second == names[want]) ++want;
  }
  return want == names.size();
}

TEST(InitialValueTest, ReducesModuloEqualities) {
  EXPECT_EQ(initial_value({F("u^2 + v^2 = 1")}, P("u^2 + v^2")), Rational(1));
  EXPECT_EQ(initial_value({F("u^2 + v^2 = 1")}, P("2*u^2 + 2*v^2 - 1/2")), Rational(3, 2));
  EXPECT_EQ(initial_value({F("x = 2"), F("t = 2")}, P("t - 2")), Rational(0));
  EXPECT_FALSE(initial_value({F("u^2 + v^2 = 1")}, P("u")));
  EXPECT_EQ(initial_value({}, P("7")), Rational(7));
}

TEST(VerifiedBoundTest, AnnulusLowerAndUpper) {
  const Formula S = F("1 <= u^2 + v^2 <= 2");
  const auto lo = verified_bound(S, P("2*(u^2+v^2)*(u^2+v^2-1/4)"), true, {"u", "v"}, {});
  ASSERT_TRUE(lo);
  EXPECT_LE(*lo, Rational(3, 2));
  EXPECT_GT(*lo, 1);
  const auto hi = verified_bound(S, P("u^2 + v^2"), false, {"u", "v"}, {});
  ASSERT_TRUE(hi);
  EXPECT_GE(*hi, 2);
  EXPECT_LE(*hi, 3);
}

TEST(InvarianceTest, HintsDriveTheProof) {
  Kernel k;
  OdeSystem s;
  s.vars = {"u", "v"};
  s.rhs = {P("-v - u*(1/4 - u^2 - v^2)"), P("u - v*(1/4 - u^2 - v^2)")};
  s.domain = F("u^2 + v^2 < 2");
  const Sequent seq{{F("u^2 + v^2 = 1")}, Formula::box(s, F("1 <= u^2 + v^2"))};
  const ProblemFile flipped = inline_problem(
      "ode { u' = 1; v' = 1 }\ngoal { u >= 0 }\nproof { rule BC { p = u^2 + v^2 - 1 } }");
  EXPECT_THROW(prove_invariance(k, seq, flipped.certificate), KernelError);
  const ProblemFile pf = inline_problem(
      "ode { u' = 1; v' = 1 }\ngoal { u >= 0 }\nproof { rule BC { p = 1 - (u^2 + v^2) } }");
  const ProofPtr ok = prove_invariance(k, seq, pf.certificate);
  EXPECT_EQ(ok->verdict(), Verdict::Proved);
}

TEST(InvarianceTest, TrailingHintAfterTerminalIsRejected) {
  Kernel k;
  OdeSystem s;
  s.vars = {"x"};
  s.rhs = {Polynomial::constant(1)};
  const Sequent seq{{}, Formula::box(s, F("x >= 0"))};
  const ProblemFile pf = inline_problem(
      "ode { x' = 1 }\ngoal { x >= 0 }\nproof { rule DI { } rule DW { } }");
  EXPECT_THROW(prove_invariance(k, seq, pf.certificate), KernelError);
}

TEST(ApplyRuleTest, UnknownRuleAndMissingField) {
  Kernel k;
  const ProblemFile pf = load("ex1.dl");
  const Sequent goal = problem_sequent(pf);
  EXPECT_THROW(apply_rule(k, goal, step("rule DW { }")), KernelError);
  try {
    apply_rule(k, goal, step("rule dV_geq { p = x }"));
    FAIL();
  } catch (const KernelError& e) {
    EXPECT_EQ(e.code(), "MissingCertificateField");
  }
}

TEST(ApplyRuleTest, DerivedNamesAreKnownToParser) {
  for (const auto& n : derived_rule_names()) {
    EXPECT_TRUE(known_rule_names().count(n)) << n;
    EXPECT_TRUE(is_derived_rule(n));
  }
  EXPECT_FALSE(is_derived_rule("DC"));
}

TEST(CheckTest, LinearSpiralChain) {
  const CheckReport r = check_problem(load("ex1.dl"));
  EXPECT_EQ(r.verdict, Verdict::Proved) << r.trace;
  EXPECT_EQ(exit_code(r.verdict), 0);
  EXPECT_TRUE(ancestor_chain(r.trace, {"GEx", "dV_geq", "K⟨&⟩", "M◇′"})) << r.trace;
  EXPECT_FALSE(ancestor_chain(r.trace, {"GEx", "dV_geq", "M◇′", "K⟨&⟩"}));
  EXPECT_EQ(r.trace.rfind("\n0 M◇′ Proved"), r.trace.rfind("\n0 "));
  EXPECT_NE(r.trace.find("_gt > 3/2"), std::string::npos);
}

TEST(CheckTest, NonlinearStagedChain) {
  const CheckReport r = check_problem(load("ex2.dl"));
  EXPECT_EQ(r.verdict, Verdict::Proved) << r.trace;
  EXPECT_NE(r.trace.find("BEx"), std::string::npos);
  EXPECT_NE(r.trace.find("_gt > 2/3"), std::string::npos);
  size_t count = 0;
  for (size_t p = r.trace.find("K⟨&⟩"); p != std::string::npos; p = r.trace.find("K⟨&⟩", p + 1)) {
    ++count;
  }
  EXPECT_GE(count, 2u);
}

TEST(CheckTest, TraceIsDeterministic) {
  EXPECT_EQ(check_problem(load("ex2.dl")).trace, check_problem(load("ex2.dl")).trace);
}

TEST(CheckTest, CatalogGates) {
  const std::pair<const char*, const char*> cases[] = {{"ce1.dl", "RuleRefused(GlobalLipschitz)"},
                                                       {"ce2.dl", "RuleRefused(TopoUnknown)"},
                                                       {"ce3.dl", "RuleRefused(InitialState)"},
                                                       {"ce4.dl", "RuleRefused(Compact(K))"}};
  for (const auto& [file, gate] : cases) {
    const CheckReport r = check_problem(load(file));
    EXPECT_NE(r.trace.find(gate), std::string::npos) << file << "\n" << r.trace;
    EXPECT_EQ(exit_code(r.verdict), 2) << file;
  }
}

TEST(CheckTest, StepAfterClosedGoal) {
  ProblemFile pf = load("ex2.dl");
  pf.certificate.push_back(pf.certificate[0]);
  EXPECT_THROW(check_problem(pf), KernelError);
}

TEST(CheckTest, EmptyCertificateIsOpen) {
  ProblemFile pf = load("ex1.dl");
  pf.certificate.clear();
  const CheckReport r = check_problem(pf);
  EXPECT_EQ(r.verdict, Verdict::Unknown);
  EXPECT_NE(r.trace.find("Open"), std::string::npos);
}

TEST(CheckTest, WrongEpsilonIsNotProved) {
  const ProblemFile pf = inline_problem(R"(ode { u' = -v - u*(1/4 - u^2 - v^2); v' = u - v*(1/4 - u^2 - v^2) }
assume { u^2 + v^2 = 1 }
goal { u^2 + v^2 >= 2 }
proof {
  rule SP_c {
    p = u^2 + v^2;
    S = 1 <= u^2 + v^2 <= 2;
    eps = 2;
    inv = hint [ rule DC { C = u^2 + v^2 >= 1; by = hint [ rule DI { } ] } rule DW { } ]
  }
})");
  const CheckReport r = check_problem(pf);
  EXPECT_NE(r.verdict, Verdict::Proved) << r.trace;
  EXPECT_NE(exit_code(r.verdict), 0);
}

TEST(CheckTest, AssumeStepIsConditional) {
  ProblemFile pf = load("ex1.dl");
  pf.certificate.resize(2);
  pf.certificate.push_back(step("rule Assume { }"));
  const CheckReport r = check_problem(pf);
  EXPECT_EQ(r.verdict, Verdict::ConditionallyProved) << r.trace;
  EXPECT_EQ(exit_code(r.verdict), 2);
}

}  // namespace
}  // namespace dlive
