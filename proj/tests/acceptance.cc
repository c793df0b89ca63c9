#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "dlive/ode.h"
#include "dlive/sim.h"
#include "dlive/topology.h"

using namespace dlive;

namespace {

using Clock = std::chrono::steady_clock;

ProblemFile load(const std::string& name) {
  std::ifstream in(std::string(DLIVE_PROBLEMS) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_problem(ss.str());
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

bool has_line(const std::string& trace, const std::string& name, const std::string& text) {
  std::istringstream in(trace);
  for (std::string line; std::getline(in, line);) {
    if (line.find(" " + name + " ") != std::string::npos &&
        line.find(text) != std::string::npos) {
      return true;
    }
  }
  return false;
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

Outcome criterion1() {
  Outcome o;
  const auto t0 = Clock::now();
  const CheckReport r = check_problem(load("ex1.dl"));
  o.require(exit_code(r.verdict) == 0, "exit 0");
  o.require(ancestor_chain(r.trace, {"GEx", "dV_geq", "K⟨&⟩", "M◇′"}), "chain GEx, dV_geq, K, M");

  const ArithObligation premise{{"u", "v"}, parse_formula("1/4 < u^2 + v^2"),
                                parse_formula("2*(u^2 + v^2) >= 1/2")};
  const Box box{{"u", Interval::of(-4, 4)}, {"v", Interval::of(-4, 4)}};
  const auto t1 = Clock::now();
  const ArithVerdict v = prove_implication(premise, box);
  const double arith_s = seconds_since(t1);
  o.require(v.status == ArithStatus::Valid, "premise Valid in box");
  o.require(arith_s <= 1.0, "premise within 1 s");
  o.detail << "verdict " << verdict_text(r.verdict) << ", premise " << status_text(v.status)
           << " in " << arith_s << " s, total " << seconds_since(t0) << " s";
  return o;
}

Outcome criterion2() {
  Outcome o;
  const auto t0 = Clock::now();
  const CheckReport r = check_problem(load("ex2.dl"));
  const double s = seconds_since(t0);
  o.require(exit_code(r.verdict) == 0, "exit 0");
  o.require(s <= 2.0, "within 2 s");
  const TopoVerdict c = check_compact(parse_formula("1 <= u^2 + v^2 <= 2"), {"u", "v"});
  o.require(c.holds() && c.witness && *c.witness == 2, "Compact(S) with B = 2");
  o.require(r.trace.find("Compact(1 <= u^2 + v^2 & u^2 + v^2 <= 2) [B = 2]") != std::string::npos,
            "Compact(S) in trace");
  o.require(ancestor_chain(r.trace, {"dI", "dC"}) || ancestor_chain(r.trace, {"dI_strict", "dC"}),
            "DC(DI)");
  o.require(has_line(r.trace, "dW", "Proved"), "DW");
  o.detail << "verdict " << verdict_text(r.verdict) << " in " << s << " s, Compact B = "
           << (c.witness ? to_string(*c.witness) : "-");
  return o;
}

Outcome criterion3() {
  Outcome o;
  const CheckReport a = check_problem(load("ex1.dl"));
  const CheckReport b = check_problem(load("ex2.dl"));
  o.require(has_line(a.trace, "GEx", "_gt > 3/2"), "GEx with 3/2");
  o.require(has_line(b.trace, "BEx", "_gt > 2/3"), "BEx with 2/3");
  o.detail << "GEx bound 3/2, BEx bound 2/3";
  return o;
}

Outcome criterion4() {
  Outcome o;
  for (const auto& r : run_catalog()) {
    o.require(r.pass(), r.id);
    o.detail << r.id << " {" << r.detail << "} ";
  }
  return o;
}

Polynomial random_poly(std::mt19937_64& rng, const std::vector<std::string>& vars, unsigned deg,
                       size_t terms) {
  std::uniform_int_distribution<int> coeff(-8, 8), d(0, int(deg));
  std::uniform_int_distribution<size_t> pick(0, vars.size() - 1);
  Polynomial p;
  for (size_t i = 0; i < terms; ++i) {
    Rational c(coeff(rng), 8);
    c.canonicalize();
    Polynomial m = Polynomial::constant(c);
    for (int k = d(rng); k > 0; --k) m = m * Polynomial::variable(vars[pick(rng)]);
    p += m;
  }
  return p;
}

Outcome criterion5() {
  Outcome o;
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> dim(1, 3);
  std::uniform_real_distribution<double> start(-0.5, 0.5), horizon(0.5, 1.0);
  const std::vector<std::string> names = {"x", "y", "z"};
  double worst = 0, worst_ratio = INFINITY;
  int systems = 0, attempts = 0;
  while (systems < 20 && attempts < 200) {
    ++attempts;
    const int n = dim(rng);
    OdeSystem sys;
    sys.vars.assign(names.begin(), names.begin() + n);
    for (int i = 0; i < n; ++i) sys.rhs.push_back(random_poly(rng, sys.vars, 3, 4));
    const Polynomial p = random_poly(rng, sys.vars, 3, 4) + Polynomial::variable("x");
    NumPoint init;
    for (const auto& v : sys.vars) init[v] = start(rng);
    const Trajectory tr = integrate_uniform(sys, init, horizon(rng), 5e-5);
    if (tr.events.back().kind != EventKind::HorizonReached) continue;
    const LieReport a = lie_consistency_check(p, sys, tr, 1e-4);
    const LieReport b = lie_consistency_check(p, sys, tr, 5e-5);
    worst = std::max(worst, a.max_error);
    worst_ratio = std::min(worst_ratio, a.max_error / b.max_error);
    ++systems;
  }
  o.require(systems == 20, "20 systems");
  o.require(worst <= 1e-5, "error at h = 1e-4");
  o.require(worst_ratio >= 3, "halving ratio");
  o.detail << systems << " systems, max error " << worst << ", min ratio " << worst_ratio;
  return o;
}

Outcome criterion6() {
  Outcome o;
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> dim(1, 2), lo(-3, 0), width(1, 3), op(0, 3);
  const std::vector<std::string> names = {"x", "y"};
  const CmpOp ops[] = {CmpOp::Ge, CmpOp::Gt, CmpOp::Le, CmpOp::Lt};
  size_t valid = 0, falsified = 0, unsound = 0, bad_cex = 0;
  for (int i = 0; i < 500; ++i) {
    const int n = dim(rng);
    const std::vector<std::string> vars(names.begin(), names.begin() + n);
    std::vector<Formula> hyp;
    Box box;
    for (const auto& v : vars) {
      const int l = lo(rng), h = l + width(rng);
      hyp.push_back(Formula::cmp(Polynomial::constant(l), CmpOp::Le, Polynomial::variable(v)));
      hyp.push_back(Formula::cmp(Polynomial::variable(v), CmpOp::Le, Polynomial::constant(h)));
      box[v] = Interval::of(l, h);
    }
    const Formula concl = Formula::cmp(random_poly(rng, vars, 2, 3), ops[op(rng)],
                                       Polynomial::constant(Rational(op(rng) - 2, 2)));
    const ArithObligation ob{vars, mk_and(hyp), concl};
    const ArithVerdict v = prove_implication(ob, box, Budget{20000, 2.0});
    if (v.status == ArithStatus::Valid) {
      ++valid;
      if (falsify(ob, 100000, uint64_t(i), box).status == ArithStatus::Falsified) ++unsound;
    } else if (v.status == ArithStatus::Falsified) {
      ++falsified;
      if (!v.counterexample || !is_counterexample(ob, *v.counterexample)) ++bad_cex;
    }
    const ArithVerdict f = falsify(ob, 2000, uint64_t(i) + 1000, box);
    if (f.status == ArithStatus::Falsified) {
      if (!is_counterexample(ob, *f.counterexample)) ++bad_cex;
      if (v.status == ArithStatus::Valid) ++unsound;
    }
  }
  o.require(unsound == 0, "no Valid obligation falsified");
  o.require(bad_cex == 0, "counterexamples exact");
  o.detail << "500 obligations: " << valid << " Valid, " << falsified << " Falsified, " << unsound
           << " conflicts, " << bad_cex << " inexact counterexamples";
  return o;
}

Outcome criterion7() {
  Outcome o;
  const ProblemFile ex1 = load("ex1.dl");
  SimOptions opt;
  opt.horizon = 3;
  const Trajectory tr = simulate(ex1.ode, {{"u", 1}, {"v", 0}}, Formula::fls(), opt);
  double rel = 0;
  for (size_t i = 0; i < tr.times.size(); ++i) {
    const double r2 = tr.states[i][0] * tr.states[i][0] + tr.states[i][1] * tr.states[i][1];
    const double exact = std::exp(-2 * tr.times[i]);
    rel = std::max(rel, std::abs(r2 - exact) / exact);
  }
  o.require(tr.times.back() == 3.0 && rel <= 1e-6, "energy oracle");

  const FalsifyReport rep = falsify_liveness(load("ex2.dl"), 64, 0);
  double latest = 0;
  size_t early = 0;
  for (const auto& s : rep.samples) {
    latest = std::max(latest, s.last.time);
    if (s.cls == SampleClass::Witness && s.last.time < 2.0 / 3.0 + 0.05) ++early;
  }
  o.require(early == 64, "64 escapes before 2/3 + 0.05");
  o.detail << "max relative error " << rel << ", " << early << "/64 escapes, latest " << latest;
  return o;
}

Outcome criterion8() {
  Outcome o;
  const CheckReport open = check_problem(load("ex2_cor_open.dl"));
  const CheckReport closed = check_problem(load("ex2_cor.dl"));
  o.require(open.trace.find("COR RuleRefused(TopoUnknown)") != std::string::npos,
            "half-open domain refused");
  o.require(exit_code(closed.verdict) == 0, "closed domain verifies");
  o.detail << "half-open: " << verdict_text(open.verdict)
           << ", closed: " << verdict_text(closed.verdict);
  return o;
}

Outcome criterion9() {
  Outcome o;
  const auto kinds = all_step_kinds();
  o.require(step_table().size() == kinds.size(), "every step kind has a shape");
  const auto bad = unsound_refinement_steps();
  o.require(bad.empty(), "no unsound refinement step");

  // CE-2: both premises of the unsound shape hold, the conclusion fails.
  Kernel k;
  const ProblemFile ce2 = load("ce2.dl");
  const OdeSystem free_ode = ce2.ode.with_domain(Formula::tru());
  const Sequent live{ce2.assumptions, Formula::diamond(free_ode, ce2.goal)};
  const CertStep dv = ce2.certificate.at(1);
  const ProofPtr reach = apply_rule(k, live, dv);
  o.require(reach->verdict() == Verdict::Proved, "<x' = 1>(x >= 1) proved");
  const Sequent stay{ce2.assumptions,
                     Formula::box(ce2.ode.with_domain(negate(ce2.goal)), ce2.ode.domain)};
  const ProofPtr inv = prove_invariance(k, stay, {});
  o.require(inv->verdict() == Verdict::Proved, "[x' = 1 & x < 1](x < 1 | x > 1) proved");
  const CatalogResult r = run_catalog_entry(catalog().at(1));
  o.require(r.falsifier_ok, "falsifier reports the domain exit");
  o.detail << kinds.size() << " step kinds, " << bad.size() << " unsound; CE-2 " << r.detail;
  return o;
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria = {
      criterion1, criterion2, criterion3, criterion4, criterion5,
      criterion6, criterion7, criterion8, criterion9};
  int failed = 0;
  const auto t0 = Clock::now();
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    std::cout << "criterion " << i + 1 << ": " << (o.pass ? "PASS" : "FAIL") << " -- "
              << o.detail.str() << std::endl;
    failed += o.pass ? 0 : 1;
  }
  std::cout << "total " << seconds_since(t0) << " s" << std::endl;
  return failed == 0 ? 0 : 1;
}
