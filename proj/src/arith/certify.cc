#include <algorithm>
#include <set>

#include "internal.h"

namespace dlive::arith_detail {

Atom normalize(const Polynomial& p, CmpOp op) {
  Atom a;
  switch (op) {
    case CmpOp::Le:
      a = {-p, CmpOp::Ge};
      break;
    case CmpOp::Lt:
      a = {-p, CmpOp::Gt};
      break;
    default:
      a = {p, op};
  }
  if (a.p.is_zero()) return a;
  const Rational lc = a.p.leading_term({}).second;
  Rational s = Rational(1) / abs(lc);
  if ((a.rel == CmpOp::Eq || a.rel == CmpOp::Ne) && sgn(lc) < 0) s = -s;
  a.p = a.p * s;
  return a;
}

Atom normalize(const Formula& cmp) { return normalize(cmp.lhs() - cmp.rhs(), cmp.op()); }

Atom negate(const Atom& a) {
  switch (a.rel) {
    case CmpOp::Ge: return {-a.p, CmpOp::Gt};
    case CmpOp::Gt: return {-a.p, CmpOp::Ge};
    case CmpOp::Eq: return {a.p, CmpOp::Ne};
    default: return {a.p, CmpOp::Eq};
  }
}

Tri eval3(const Atom& a, const Box& box) {
  const Interval iv = eval_interval(a.p, box);
  const int lo = iv.lo.sign(), hi = iv.hi.sign();
  switch (a.rel) {
    case CmpOp::Ge:
      if (lo >= 0) return Tri::True;
      if (hi < 0) return Tri::False;
      return Tri::Maybe;
    case CmpOp::Gt:
      if (lo > 0) return Tri::True;
      if (hi <= 0) return Tri::False;
      return Tri::Maybe;
    case CmpOp::Eq:
      if (lo == 0 && hi == 0) return Tri::True;
      if (lo > 0 || hi < 0) return Tri::False;
      return Tri::Maybe;
    default:
      if (lo > 0 || hi < 0) return Tri::True;
      if (lo == 0 && hi == 0) return Tri::False;
      return Tri::Maybe;
  }
}

bool holds_exact(const Atom& a, const Point& point) {
  return cmp_holds(a.rel, sgn(a.p.eval(point)));
}

Tree to_tree(const Formula& f) {
  using K = Formula::Kind;
  Tree t;
  switch (f.kind()) {
    case K::True:
      t.kind = Tree::Kind::True;
      return t;
    case K::False:
      t.kind = Tree::Kind::False;
      return t;
    case K::Cmp:
      t.kind = Tree::Kind::Atom;
      t.atom = normalize(f);
      return t;
    case K::And:
    case K::Or:
      t.kind = f.kind() == K::And ? Tree::Kind::And : Tree::Kind::Or;
      t.kids.push_back(to_tree(f.left()));
      t.kids.push_back(to_tree(f.right()));
      return t;
    default:
      return to_tree(nnf(f));
  }
}

Tri eval3(const Tree& t, const Box& box) {
  switch (t.kind) {
    case Tree::Kind::True: return Tri::True;
    case Tree::Kind::False: return Tri::False;
    case Tree::Kind::Atom: return eval3(t.atom, box);
    case Tree::Kind::And: {
      Tri out = Tri::True;
      for (const auto& k : t.kids) {
        const Tri r = eval3(k, box);
        if (r == Tri::False) return Tri::False;
        if (r == Tri::Maybe) out = Tri::Maybe;
      }
      return out;
    }
    case Tree::Kind::Or: {
      Tri out = Tri::False;
      for (const auto& k : t.kids) {
        const Tri r = eval3(k, box);
        if (r == Tri::True) return Tri::True;
        if (r == Tri::Maybe) out = Tri::Maybe;
      }
      return out;
    }
  }
  return Tri::Maybe;
}

bool holds_exact(const Tree& t, const Point& point) {
  switch (t.kind) {
    case Tree::Kind::True: return true;
    case Tree::Kind::False: return false;
    case Tree::Kind::Atom: return holds_exact(t.atom, point);
    case Tree::Kind::And:
      for (const auto& k : t.kids) {
        if (!holds_exact(k, point)) return false;
      }
      return true;
    case Tree::Kind::Or:
      for (const auto& k : t.kids) {
        if (holds_exact(k, point)) return true;
      }
      return false;
  }
  return false;
}

void tree_vars(const Tree& t, std::set<std::string>* out) {
  if (t.kind == Tree::Kind::Atom) {
    for (const auto& v : t.atom.p.variables()) out->insert(v);
  }
  for (const auto& k : t.kids) tree_vars(k, out);
}

bool dnf(const Formula& f, size_t cap, std::vector<std::vector<Atom>>* out) {
  using K = Formula::Kind;
  out->clear();
  switch (f.kind()) {
    case K::True:
      out->push_back({});
      return true;
    case K::False:
      return true;
    case K::Cmp: {
      Atom a = normalize(f);
      if (a.p.is_constant()) {
        if (cmp_holds(a.rel, sgn(a.p.constant_term()))) out->push_back({});
        return true;
      }
      out->push_back({a});
      return true;
    }
    case K::Or: {
      std::vector<std::vector<Atom>> l, r;
      if (!dnf(f.left(), cap, &l) || !dnf(f.right(), cap, &r)) return false;
      if (l.size() + r.size() > cap) return false;
      *out = std::move(l);
      out->insert(out->end(), r.begin(), r.end());
      return true;
    }
    case K::And: {
      std::vector<std::vector<Atom>> l, r;
      if (!dnf(f.left(), cap, &l) || !dnf(f.right(), cap, &r)) return false;
      if (l.size() * r.size() > cap) return false;
      for (const auto& a : l) {
        for (const auto& b : r) {
          std::vector<Atom> d = a;
          d.insert(d.end(), b.begin(), b.end());
          out->push_back(std::move(d));
        }
      }
      return true;
    }
    default:
      return dnf(nnf(f), cap, out);
  }
}

namespace {

// p = s*(c - sum a_i x_i^2) with all a_i > 0 and c >= 0, for some sign s.
// Fills the per-variable radius bounds.
bool disk_bounds(const Polynomial& p, bool allow_flip, Box* out) {
  for (int s : {1, -1}) {
    if (s == -1 && !allow_flip) break;
    const Polynomial q = p * Rational(s);
    const Rational c = q.constant_term();
    if (sgn(c) < 0) continue;
    bool ok = true;
    Box b;
    for (const auto& [m, coef] : q.terms()) {
      if (m.empty()) continue;
      if (m.size() != 1 || m[0].second != 2 || sgn(coef) >= 0) {
        ok = false;
        break;
      }
      const Rational r = sqrt_upper(c / -coef);
      b[m[0].first] = Interval::of(-r, r);
    }
    if (ok && !b.empty()) {
      *out = intersect(*out, b);
      return true;
    }
  }
  return false;
}

}  // namespace

Box facts_box(const std::vector<Atom>& facts) {
  Box box;
  for (const auto& a : facts) {
    if (a.rel == CmpOp::Ne) continue;
    const auto vars = a.p.variables();
    if (vars.size() == 1 && a.p.total_degree() == 1) {
      const std::string& x = *vars.begin();
      const Rational k = a.p.coefficient({{x, 1}});
      const Rational root = -a.p.constant_term() / k;
      Interval iv;
      if (a.rel == CmpOp::Eq) {
        iv = Interval::point(root);
      } else if (sgn(k) > 0) {
        iv = Interval({root, 0}, ExtRational::pos_inf());
      } else {
        iv = Interval(ExtRational::neg_inf(), {root, 0});
      }
      box = intersect(box, Box{{x, iv}});
      continue;
    }
    disk_bounds(a.p, a.rel == CmpOp::Eq, &box);
  }
  return box;
}

Certifier::Certifier(std::vector<Atom> facts, Box region)
    : facts_(std::move(facts)), region_(std::move(region)) {}

bool Certifier::holds(const Atom& goal, int depth) { return holds_rec(goal.p, goal.rel, depth); }

bool Certifier::holds(const Tree& goal, int depth) {
  switch (goal.kind) {
    case Tree::Kind::True: return true;
    case Tree::Kind::False: return false;
    case Tree::Kind::Atom: return holds(goal.atom, depth);
    case Tree::Kind::And:
      for (const auto& k : goal.kids) {
        if (!holds(k, depth)) return false;
      }
      return true;
    case Tree::Kind::Or:
      for (const auto& k : goal.kids) {
        if (holds(k, depth)) return true;
      }
      return false;
  }
  return false;
}

bool Certifier::contradictory() {
  for (const auto& f : facts_) {
    if (eval3(f, region_) == Tri::False) return true;
  }
  for (const auto& f : facts_) {
    if (holds(negate(f), 2)) return true;
  }
  return false;
}

bool Certifier::holds_rec(const Polynomial& q, CmpOp rel, int depth) {
  if (q.is_constant()) return cmp_holds(rel, sgn(q.constant_term()));
  const std::string key = q.to_string() + " " + cmp_text(rel);
  if (proven_.count(key)) return true;
  auto failed = failed_depth_.find(key);
  if (failed != failed_depth_.end() && failed->second >= depth) return false;

  auto done = [&](bool ok) {
    if (ok) {
      proven_.insert(key);
    } else {
      int& d = failed_depth_[key];
      d = std::max(d, depth);
    }
    return ok;
  };

  if (eval3(Atom{q, rel}, region_) == Tri::True) return done(true);
  if (depth <= 0) return done(false);

  if (rel == CmpOp::Ne) {
    return done(holds_rec(q, CmpOp::Gt, depth) || holds_rec(-q, CmpOp::Gt, depth));
  }
  // Equality facts: q = h*e + r with e = 0 gives q = r.
  for (const auto& e : facts_) {
    if (e.rel != CmpOp::Eq) continue;
    const Polynomial r = divide(q, e.p, order_).remainder;
    if (r == q) continue;
    if (rel == CmpOp::Eq && r.is_zero()) return done(true);
    if (holds_rec(r, rel, depth - 1)) return done(true);
  }
  if (rel == CmpOp::Eq) return done(false);

  // q = g*f + r with f >= 0 (or > 0), g >= 0 and r >= 0 (or > 0).
  for (const auto& f : facts_) {
    if (f.rel != CmpOp::Ge && f.rel != CmpOp::Gt) continue;
    const DivisionResult d = divide(q, f.p, order_);
    if (d.quotient.is_zero()) continue;
    if (!holds_rec(d.quotient, CmpOp::Ge, depth - 1)) continue;
    if (rel == CmpOp::Ge) {
      if (holds_rec(d.remainder, CmpOp::Ge, depth - 1)) return done(true);
    } else {
      if (holds_rec(d.remainder, CmpOp::Gt, depth - 1)) return done(true);
      if (f.rel == CmpOp::Gt && holds_rec(d.quotient, CmpOp::Gt, depth - 1) &&
          holds_rec(d.remainder, CmpOp::Ge, depth - 1)) {
        return done(true);
      }
    }
  }
  // h = q*m + r with h >= 0, m > 0 and r <= 0 gives q >= 0.
  for (const auto& h : facts_) {
    if (h.rel != CmpOp::Ge && h.rel != CmpOp::Gt) continue;
    const DivisionResult d = divide(h.p, q, order_);
    if (d.quotient.is_zero()) continue;
    if (!holds_rec(d.quotient, CmpOp::Gt, depth - 1)) continue;
    const Polynomial neg_r = -d.remainder;
    if (rel == CmpOp::Ge || h.rel == CmpOp::Gt) {
      if (holds_rec(neg_r, CmpOp::Ge, depth - 1)) return done(true);
    } else if (holds_rec(neg_r, CmpOp::Gt, depth - 1)) {
      return done(true);
    }
  }
  return done(false);
}

}  // namespace dlive::arith_detail
