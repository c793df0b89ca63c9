#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "dlive/sim.h"

namespace dlive {

namespace {

const char* const kCe1 = R"(# x' = 1 + x^2 blows up at t = pi/2, before the goal t >= 2.
ode { x' = 1 + x^2; t' = 1 }
assume { x = 0 & t = 0 }
goal { t >= 2 }
proof {
  rule dV_geq { p = t - 2; eps = 1 }
}
)";

const char* const kCe2 = R"(# The state reaches x >= 1 only at x = 1, where the domain does not hold.
ode { x' = 1 }
domain { x < 1 | x > 1 }
assume { x = 0 }
goal { x >= 1 }
proof {
  rule COR { R = true; inv = hint [ rule DW { } ] }
  rule dV_geq { p = x - 1; eps = 1 }
}
)";

const char* const kCe3 = R"(# The initial state already violates the domain x <= -1.
ode { x' = 1 }
domain { x <= -1 }
assume { x = 1 }
goal { x >= 0 }
proof {
  rule dV_geq_dom { p = x; eps = 1 }
}
)";

const char* const kCe4 = R"(# x' = x^2 from x = 2 blows up at t = 5/2, so t > 3 is never reached.
ode { x' = x^2; t' = 1 }
assume { x = 2 & t = 2 }
goal { t > 3 }
proof {
  rule SLyap { p = t - 2; K = true }
}
)";

CatalogEntry entry(std::string id, const char* src, std::string broken, std::string gate,
                   std::string expectation, EventKind outcome, std::string measure,
                   double expected, double tol) {
  return {std::move(id), src,      parse_problem(src), std::move(broken), std::move(gate),
          std::move(expectation), outcome, std::move(measure), expected, tol};
}

void find_refusals(const ProofPtr& n, std::vector<std::string>& out) {
  if (n->refusal()) out.push_back(*n->refusal());
  for (const auto& c : n->children()) find_refusals(c, out);
}

}  // namespace

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = {
      entry("CE-1", kCe1, "dV_geq without the global Lipschitz condition", "GlobalLipschitz",
            "refused at GlobalLipschitz; blow-up at t = pi/2 before the goal",
            EventKind::BlowUpSuspected, "", std::numbers::pi / 2, 1e-3),
      entry("CE-2", kCe2, "domain refinement from <f & R>P and [f & R & !P]Q alone", "",
            "no kernel step has the premise shape; the state leaves the domain at x = 1",
            EventKind::DomainExited, "", 1.0, 1e-6),
      entry("CE-3", kCe3, "dV_geq_dom without the initial premise !(p >= 0)", "InitialState",
            "refused at InitialState; the domain is false at time 0", EventKind::DomainExited,
            "", 0.0, 1e-12),
      entry("CE-4", kCe4, "SLyap with a closed rather than compact K", "Compact(K)",
            "refused at Compact(K); blow-up with t reaching only 5/2 < 3",
            EventKind::BlowUpSuspected, "t", 2.5, 1e-3),
  };
  return entries;
}

std::vector<StepKind> unsound_refinement_steps() {
  std::vector<StepKind> out;
  for (const auto& s : step_table()) {
    if (s.refines_domain && s.box_domain == BoxDomain::RefinedAndNotGoal && !s.topo_gate &&
        !s.initial_not_goal) {
      out.push_back(s.kind);
    }
  }
  return out;
}

CatalogResult run_catalog_entry(const CatalogEntry& e, uint64_t seed) {
  CatalogResult r;
  r.id = e.id;
  std::ostringstream detail;

  if (e.gate.empty()) {
    const auto bad = unsound_refinement_steps();
    r.gate_ok = bad.empty();
    detail << "steps with the unsound shape: " << bad.size();
  } else {
    const CheckReport rep = check_problem(e.problem);
    std::vector<std::string> gates;
    find_refusals(rep.root, gates);
    r.gate_ok = std::find(gates.begin(), gates.end(), e.gate) != gates.end() &&
                rep.verdict != Verdict::Proved;
    detail << "refused at " << (gates.empty() ? "-" : gates.front());
  }

  const NumPoint init = sample_initial(e.problem, 1, seed).front();
  const Trajectory tr = simulate(e.problem.ode, init, e.problem.goal);
  const Event last = tr.events.back();
  if (e.measure.empty()) {
    r.measured = last.time;
  } else {
    const auto it = std::find(tr.vars.begin(), tr.vars.end(), e.measure);
    const size_t i = size_t(it - tr.vars.begin());
    r.measured = -INFINITY;
    if (it != tr.vars.end()) {
      for (const auto& s : tr.states) r.measured = std::max(r.measured, s[i]);
    }
  }
  r.falsifier_ok = last.kind == e.outcome && std::abs(r.measured - e.expected) <= e.tolerance;
  detail << "; " << event_text(last.kind) << " at t = " << last.time << ", measured "
         << r.measured;
  r.detail = detail.str();
  return r;
}

std::vector<CatalogResult> run_catalog(uint64_t seed) {
  std::vector<CatalogResult> out;
  for (const auto& e : catalog()) out.push_back(run_catalog_entry(e, seed));
  return out;
}

}  // namespace dlive
