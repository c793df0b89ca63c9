#include <algorithm>
#include <chrono>
#include <deque>

#include "internal.h"

namespace dlive {

using namespace arith_detail;

const char* status_text(ArithStatus s) {
  switch (s) {
    case ArithStatus::Valid: return "Valid";
    case ArithStatus::Falsified: return "Falsified";
    case ArithStatus::Unknown: return "Unknown";
  }
  return "?";
}

std::vector<std::string> effective_universals(const ArithObligation& ob) {
  std::vector<std::string> out = ob.universals;
  std::set<std::string> seen(out.begin(), out.end());
  std::set<std::string> rest = free_identifiers(ob.hypothesis);
  for (const auto& v : free_identifiers(ob.conclusion)) rest.insert(v);
  for (const auto& v : rest) {
    if (seen.insert(v).second) out.push_back(v);
  }
  return out;
}

bool is_counterexample(const ArithObligation& ob, const Point& point) {
  Point full = point;
  for (const auto& v : effective_universals(ob)) full.try_emplace(v, Rational(0));
  return eval_formula(ob.hypothesis, full) && !eval_formula(ob.conclusion, full);
}

Box implied_box(const Formula& f) {
  if (!f.is_arith()) return {};
  std::vector<Atom> atoms;
  for (const auto& c : conjuncts(nnf(f))) {
    if (c.kind() == Formula::Kind::Cmp) atoms.push_back(normalize(c));
  }
  return facts_box(atoms);
}

namespace {

using Clock = std::chrono::steady_clock;

struct Search {
  const ArithObligation& ob;
  const Budget& budget;
  Clock::time_point start;
  ArithStats stats;

  double elapsed() const {
    return std::chrono::duration<double>(Clock::now() - start).count();
  }
  bool out_of_budget() const {
    return stats.cells >= budget.max_cells || elapsed() > budget.max_seconds;
  }
};

enum class Outcome { Valid, Falsified, Unknown };

bool box_contains(const Box& outer, const Box& inner) {
  for (const auto& [v, iv] : outer) {
    auto it = inner.find(v);
    const Interval in = it == inner.end() ? Interval::whole() : it->second;
    if (!iv.contains(in)) return false;
  }
  return true;
}

// Splits an interval into two closed halves; unbounded sides are cut at a
// finite point so the bounded half can be decided.
std::pair<Interval, Interval> split(const Interval& iv) {
  Rational m;
  if (iv.bounded()) {
    m = (iv.lo.value + iv.hi.value) / 2;
  } else if (iv.lo.finite()) {
    m = iv.lo.value + std::max(Rational(1), Rational(abs(iv.lo.value)));
  } else if (iv.hi.finite()) {
    m = iv.hi.value - std::max(Rational(1), Rational(abs(iv.hi.value)));
  } else {
    m = 0;
  }
  return {Interval(iv.lo, {m, 0}), Interval({m, 0}, iv.hi)};
}

Outcome branch_and_bound(Search& s, const std::vector<Atom>& facts, const Tree& goal,
                         const Box& region, const std::vector<std::string>& vars, Point* cex,
                         std::string* reason) {
  struct Cell {
    Box box;
    size_t depth;
  };
  static const Rational kMinWidth = Rational(1, 1 << 30);
  std::deque<Cell> queue;
  Box root;
  for (const auto& v : vars) {
    auto it = region.find(v);
    root[v] = it == region.end() ? Interval::whole() : it->second;
    if (root[v].empty()) return Outcome::Valid;
  }
  queue.push_back({root, 0});
  bool stuck = false, unbounded = false;
  while (!queue.empty()) {
    if (s.out_of_budget()) {
      *reason = unbounded ? "UnboundedDomain" : "BudgetExhausted";
      return Outcome::Unknown;
    }
    Cell cell = std::move(queue.front());
    queue.pop_front();
    ++s.stats.cells;
    s.stats.max_depth = std::max(s.stats.max_depth, cell.depth);

    bool hyp_false = false;
    for (const auto& f : facts) {
      if (eval3(f, cell.box) == Tri::False) {
        hyp_false = true;
        break;
      }
    }
    if (hyp_false) continue;
    if (eval3(goal, cell.box) == Tri::True) continue;

    Point center;
    for (const auto& [v, iv] : cell.box) center[v] = iv.pick();
    bool facts_hold = true;
    for (const auto& f : facts) {
      if (!holds_exact(f, center)) {
        facts_hold = false;
        break;
      }
    }
    if (facts_hold && !holds_exact(goal, center)) {
      Point full = center;
      for (const auto& v : effective_universals(s.ob)) full.try_emplace(v, Rational(0));
      if (is_counterexample(s.ob, full)) {
        *cex = full;
        return Outcome::Falsified;
      }
    }

    std::string widest;
    ExtRational best{Rational(-1), 0};
    for (const auto& [v, iv] : cell.box) {
      const ExtRational w = iv.width();
      if (best < w) {
        best = w;
        widest = v;
      }
    }
    if (widest.empty() || (best.finite() && best.value < kMinWidth)) {
      stuck = true;
      continue;
    }
    if (!best.finite()) unbounded = true;
    auto [a, b] = split(cell.box[widest]);
    Cell left{cell.box, cell.depth + 1}, right{cell.box, cell.depth + 1};
    left.box[widest] = a;
    right.box[widest] = b;
    queue.push_back(std::move(left));
    queue.push_back(std::move(right));
  }
  if (stuck) {
    *reason = "BoundaryUndecided";
    return Outcome::Unknown;
  }
  return Outcome::Valid;
}

}  // namespace

ArithVerdict prove_implication(const ArithObligation& ob, const std::optional<Box>& box,
                               const Budget& budget) {
  Search s{ob, budget, Clock::now(), {}};
  ArithVerdict out;
  auto finish = [&](ArithVerdict v) {
    v.trace = s.stats;
    v.trace.seconds = s.elapsed();
    return v;
  };
  if (!ob.hypothesis.is_arith() || !ob.conclusion.is_arith()) {
    out.reason = "NotArithmetic";
    return finish(out);
  }
  std::vector<std::vector<Atom>> disjuncts;
  if (!dnf(nnf(ob.hypothesis), 256, &disjuncts)) {
    out.reason = "HypothesisTooLarge";
    return finish(out);
  }
  const Tree goal = to_tree(nnf(ob.conclusion));
  s.stats.disjuncts = disjuncts.size();

  bool all_valid = true, global = true;
  std::string reason;
  for (const auto& facts : disjuncts) {
    const Box fbox = facts_box(facts);
    Certifier cert(facts, fbox);
    if (cert.contradictory() || cert.holds(goal)) {
      ++s.stats.certified_disjuncts;
      continue;
    }
    std::set<std::string> var_set;
    for (const auto& f : facts) {
      for (const auto& v : f.p.variables()) var_set.insert(v);
    }
    tree_vars(goal, &var_set);
    const std::vector<std::string> vars(var_set.begin(), var_set.end());
    Box region = fbox;
    bool restricted = false;
    if (box) {
      Box user;
      for (const auto& v : vars) {
        auto it = box->find(v);
        if (it != box->end()) user[v] = it->second;
      }
      region = intersect(fbox, user);
      restricted = !box_contains(user, fbox);
    }
    Point cex;
    std::string why;
    const Outcome o = branch_and_bound(s, facts, goal, region, vars, &cex, &why);
    if (o == Outcome::Falsified) {
      out.status = ArithStatus::Falsified;
      out.counterexample = cex;
      return finish(out);
    }
    if (o == Outcome::Unknown) {
      all_valid = false;
      if (reason.empty()) reason = why;
      continue;
    }
    if (restricted) global = false;
  }
  if (all_valid) {
    out.status = ArithStatus::Valid;
    out.global = global;
  } else {
    out.reason = reason;
  }
  return finish(out);
}

}  // namespace dlive
