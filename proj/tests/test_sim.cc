#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "dlive/sim.h"

namespace dlive {
namespace {

ProblemFile load(const std::string& name) {
  std::ifstream in(std::string(DLIVE_PROBLEMS) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_problem(ss.str());
}

double r2(const std::vector<double>& s) { return s[0] * s[0] + s[1] * s[1]; }

TEST(NumericTest, PolyAndFormula) {
  const std::vector<std::string> vars = {"x", "y"};
  const NumPoly p(parse_polynomial("x^2*y - 3*y + 1/2"), vars);
  const double pt[] = {2, -1};
  EXPECT_DOUBLE_EQ(p(pt), -4 + 3 + 0.5);
  EXPECT_THROW(NumPoly(parse_polynomial("z"), vars), MissingBinding);

  const NumFormula f(parse_formula("x >= 2 & !(y > 0)"), vars);
  EXPECT_TRUE(f.eval(pt));
  const NumFormula eq(parse_formula("x = 2"), vars);
  const double near[] = {2 + 1e-10, 0};
  EXPECT_FALSE(eq.eval(near));
  EXPECT_TRUE(eq.eval_tol(near, 1e-9, false));
  const NumFormula strict(parse_formula("x > 2"), vars);
  EXPECT_TRUE(strict.eval(near));
  EXPECT_FALSE(strict.eval_tol(near, 1e-9, true));
  EXPECT_EQ(strict.signs(near), (std::vector<int>{1}));
}

TEST(SimulateTest, LinearSpiralEnergy) {
  const ProblemFile pf = load("ex1.dl");
  SimOptions opt;
  opt.horizon = 3;
  const Trajectory tr = simulate(pf.ode, {{"u", 1}, {"v", 0}}, Formula::fls(), opt);
  ASSERT_EQ(tr.events.back().kind, EventKind::HorizonReached);
  EXPECT_DOUBLE_EQ(tr.times.back(), 3.0);
  for (size_t i = 0; i < tr.times.size(); ++i) {
    const double exact = std::exp(-2 * tr.times[i]);
    EXPECT_LE(std::abs(r2(tr.states[i]) - exact) / exact, 1e-6) << tr.times[i];
  }
  EXPECT_TRUE(std::is_sorted(tr.times.begin(), tr.times.end()));
}

TEST(SimulateTest, GoalEventTime) {
  const ProblemFile pf = load("ex1.dl");
  const Trajectory tr = simulate(pf.ode, {{"u", 1}, {"v", 0}}, parse_formula("u^2 + v^2 <= 1/4"));
  ASSERT_EQ(tr.events.back().kind, EventKind::GoalEntered);
  EXPECT_NEAR(tr.events.back().time, std::log(4.0) / 2, 1e-6);
}

TEST(SimulateTest, NonlinearEscapeTime) {
  const ProblemFile pf = load("ex2.dl");
  const Trajectory tr = simulate(pf.ode, {{"u", 1}, {"v", 0}}, pf.goal);
  ASSERT_EQ(tr.events.back().kind, EventKind::GoalEntered);
  // r' = 2r(r - 1/4) from r = 1 reaches 2 at 2 ln(7/6).
  EXPECT_NEAR(tr.events.back().time, 2 * std::log(7.0 / 6.0), 1e-6);
  EXPECT_LT(tr.events.back().time, 2.0 / 3.0);
}

TEST(SimulateTest, TangentBlowUp) {
  const ProblemFile pf = load("ce1.dl");
  const Trajectory tr = simulate(pf.ode, {{"x", 0}, {"t", 0}}, pf.goal);
  ASSERT_EQ(tr.events.back().kind, EventKind::BlowUpSuspected);
  EXPECT_NEAR(tr.events.back().time, std::numbers::pi / 2, 1e-3);
  double mx = 0;
  for (const auto& s : tr.states) mx = std::max(mx, std::abs(s[0]));
  EXPECT_GT(mx, 1e9);
}

TEST(SimulateTest, DomainExitAtCrossing) {
  const ProblemFile pf = load("ce2.dl");
  const Trajectory tr = simulate(pf.ode, {{"x", 0}}, pf.goal);
  ASSERT_EQ(tr.events.size(), 1u);
  EXPECT_EQ(tr.events[0].kind, EventKind::DomainExited);
  EXPECT_NEAR(tr.events[0].time, 1.0, 1e-6);
}

TEST(SimulateTest, DomainFalseAtStart) {
  const ProblemFile pf = load("ce3.dl");
  const Trajectory tr = simulate(pf.ode, {{"x", 1}}, pf.goal);
  EXPECT_EQ(tr.events.back().kind, EventKind::DomainExited);
  EXPECT_EQ(tr.events.back().time, 0.0);
}

TEST(SimulateTest, Deterministic) {
  const ProblemFile pf = load("ex2.dl");
  const Trajectory a = simulate(pf.ode, {{"u", 0.6}, {"v", 0.8}}, pf.goal);
  const Trajectory b = simulate(pf.ode, {{"u", 0.6}, {"v", 0.8}}, pf.goal);
  EXPECT_EQ(a.times, b.times);
  EXPECT_EQ(a.states, b.states);
}

TEST(SimulateTest, MissingInitialValue) {
  const ProblemFile pf = load("ex1.dl");
  EXPECT_THROW(simulate(pf.ode, {{"u", 1}}, pf.goal), MissingBinding);
}

TEST(SamplingTest, UnitCircle) {
  const ProblemFile pf = load("ex1.dl");
  const auto pts = sample_initial(pf, 16, 3);
  ASSERT_EQ(pts.size(), 16u);
  for (const auto& p : pts) EXPECT_NEAR(p.at("u") * p.at("u") + p.at("v") * p.at("v"), 1, 1e-12);
  EXPECT_EQ(sample_initial(pf, 16, 3), pts);
}

TEST(SamplingTest, FixedAndInequalities) {
  const ProblemFile pf = parse_problem(
      "ode { x' = 1; y' = 1; z' = 0 }\nassume { x = 3 & 0 <= y & y <= 1/2 & z > 1 }\ngoal { x > 4 }");
  for (const auto& p : sample_initial(pf, 20, 1)) {
    EXPECT_EQ(p.at("x"), 3);
    EXPECT_GE(p.at("y"), 0);
    EXPECT_LE(p.at("y"), 0.5);
    EXPECT_GT(p.at("z"), 1);
  }
}

TEST(SamplingTest, EmptySetIsUnsamplable) {
  const ProblemFile pf = parse_problem("ode { x' = 1 }\nassume { x > 1 & x < 0 }\ngoal { x > 4 }");
  EXPECT_THROW(sample_initial(pf, 1, 0), UnsamplableInitSet);
}

TEST(FalsifyTest, LinearSpiralWitnesses) {
  const FalsifyReport r = falsify_liveness(load("ex1.dl"), 8, 0);
  EXPECT_EQ(r.counts.at(SampleClass::Witness), 8u);
  EXPECT_EQ(r.exit_code(), 0);
}

TEST(FalsifyTest, BlowUpRefutes) {
  const FalsifyReport r = falsify_liveness(load("ce1.dl"), 4, 0);
  EXPECT_EQ(r.counts.at(SampleClass::BlowUp), 4u);
  EXPECT_EQ(r.exit_code(), 1);
}

TEST(FalsifyTest, FalseGoalIsInconclusive) {
  ProblemFile pf = load("ex1.dl");
  pf.goal = Formula::fls();
  SimOptions opt;
  opt.horizon = 2;
  const FalsifyReport r = falsify_liveness(pf, 4, 0, opt);
  EXPECT_FALSE(r.counts.count(SampleClass::Witness));
  EXPECT_EQ(r.exit_code(), 2);
  EXPECT_NE(r.summary().find("INCONCLUSIVE 4"), std::string::npos);
}

TEST(LieCheckTest, SecondOrderConvergence) {
  const ProblemFile pf = load("ex1.dl");
  const Trajectory tr = integrate_uniform(pf.ode, {{"u", 1}, {"v", 0}}, 1, 5e-5);
  const Polynomial p = parse_polynomial("u^2 + v^2");
  const LieReport a = lie_consistency_check(p, pf.ode, tr, 1e-4);
  const LieReport b = lie_consistency_check(p, pf.ode, tr, 5e-5);
  EXPECT_LE(a.max_error, 1e-5);
  EXPECT_GE(a.max_error / b.max_error, 3.0);
  EXPECT_GT(a.points, 1000u);
}

TEST(LieCheckTest, ConstantsAndClock) {
  ProblemFile pf = parse_problem("param a;\node { x' = a*x }\ngoal { x > 4 }");
  const Trajectory tr = integrate_uniform(pf.ode, {{"x", 1}, {"a", 0.5}}, 1, 1e-3);
  EXPECT_LE(lie_consistency_check(parse_polynomial("a"), pf.ode, tr, 1e-3).max_error, 1e-12);
  ProblemFile c = parse_problem("ode { x' = x; t' = 1 }\ngoal { x > 4 }");
  const Trajectory tc = integrate_uniform(c.ode, {{"x", 1}, {"t", 0}}, 1, 1e-3);
  EXPECT_LE(lie_consistency_check(parse_polynomial("t"), c.ode, tc, 1e-3).max_error, 1e-10);
}

TEST(LieCheckTest, SpacingMustDivideH) {
  const ProblemFile pf = load("ex1.dl");
  const Trajectory tr = integrate_uniform(pf.ode, {{"u", 1}, {"v", 0}}, 1, 1e-3);
  EXPECT_THROW(lie_consistency_check(parse_polynomial("u"), pf.ode, tr, 1.5e-3), InsufficientSamples);
  EXPECT_THROW(lie_consistency_check(parse_polynomial("u"), pf.ode, tr, 1e-4), InsufficientSamples);
}

TEST(CsvTest, HeaderAndEventColumn) {
  const ProblemFile pf = load("ce2.dl");
  const std::string csv = trajectory_csv(simulate(pf.ode, {{"x", 0}}, pf.goal));
  EXPECT_EQ(csv.rfind("t,x,event\n", 0), 0u);
  EXPECT_NE(csv.find(",DomainExited\n"), std::string::npos);
}

TEST(CatalogTest, FourEntriesAllPass) {
  ASSERT_EQ(catalog().size(), 4u);
  for (const auto& e : catalog()) {
    EXPECT_EQ(parse_problem(e.source), e.problem) << e.id;
    const CatalogResult r = run_catalog_entry(e);
    EXPECT_TRUE(r.gate_ok) << e.id << " " << r.detail;
    EXPECT_TRUE(r.falsifier_ok) << e.id << " " << r.detail;
  }
}

TEST(CatalogTest, ShippedFilesMatch) {
  const char* files[] = {"ce1.dl", "ce2.dl", "ce3.dl", "ce4.dl"};
  for (size_t i = 0; i < 4; ++i) EXPECT_EQ(load(files[i]), catalog()[i].problem) << files[i];
}

TEST(CatalogTest, NoUnsoundRefinementStep) { EXPECT_TRUE(unsound_refinement_steps().empty()); }

}  // namespace
}  // namespace dlive
