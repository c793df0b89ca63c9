#include <algorithm>
#include <cmath>
#include <random>

#include "internal.h"

namespace dlive {

std::optional<Rational> initial_value(const std::vector<Formula>& gamma, const Polynomial& p) {
  if (p.is_constant()) return p.constant_term();
  std::vector<Polynomial> eqs;
  for (const auto& f : gamma) {
    if (f.kind() == Formula::Kind::Cmp && f.op() == CmpOp::Eq) {
      const Polynomial d = f.lhs() - f.rhs();
      if (!d.is_zero() && !d.is_constant()) eqs.push_back(d);
    }
  }
  for (const auto& d : eqs) {
    const Polynomial r = divide(p, d, {}).remainder;
    if (r.is_constant()) return r.constant_term();
  }
  Polynomial r = p;
  for (size_t pass = 0; pass <= eqs.size(); ++pass) {
    const Polynomial before = r;
    for (const auto& d : eqs) {
      r = divide(r, d, {}).remainder;
      if (r.is_constant()) return r.constant_term();
    }
    if (r == before) break;
  }
  return std::nullopt;
}

std::optional<Rational> verified_bound(const Formula& S, const Polynomial& q, bool lower,
                                       const std::vector<std::string>& vars, const Budget& budget,
                                       uint64_t seed) {
  Box box = implied_box(S);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::optional<Rational> best;
  for (int i = 0; i < 4000; ++i) {
    Point pt;
    for (const auto& v : vars) {
      double lo = -10, hi = 10;
      if (auto it = box.find(v); it != box.end()) {
        if (it->second.lo.finite()) lo = to_double(it->second.lo.value);
        if (it->second.hi.finite()) hi = to_double(it->second.hi.value);
        if (!it->second.lo.finite() && it->second.hi.finite()) lo = hi - 20;
        if (it->second.lo.finite() && !it->second.hi.finite()) hi = lo + 20;
      }
      Rational x = floor_dyadic(from_double(lo + (hi - lo) * unit(rng)), 12);
      if (i % 8 == 0) x = unit(rng) < 0.5 ? from_double(lo) : from_double(hi);
      pt[v] = x;
    }
    try {
      if (!eval_formula(S, pt)) continue;
      const Rational val = q.eval(pt);
      if (!best || (lower ? val < *best : val > *best)) best = val;
    } catch (const MissingBinding&) {
      return std::nullopt;
    }
  }
  if (!best) return std::nullopt;

  std::vector<Rational> cands;
  for (int d : {1, 2, 3, 4, 5, 6, 8, 10, 12, 16, 20, 25, 32, 50, 64, 100, 128, 1000}) {
    const Rational scaled = *best * d;
    cands.push_back((lower ? floor(scaled) : ceil(scaled)) / d);
  }
  for (const Rational& slack : {Rational(1, 10), Rational(1), Rational(10)}) {
    cands.push_back(lower ? floor(*best - slack) : ceil(*best + slack));
  }
  std::stable_sort(cands.begin(), cands.end(), [&](const Rational& a, const Rational& b) {
    return lower ? a > b : a < b;
  });
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());

  const Polynomial zero;
  size_t tries = 0;
  for (const auto& c : cands) {
    if (++tries > 12) break;
    ArithObligation ob{vars, S,
                       Formula::cmp(q, lower ? CmpOp::Ge : CmpOp::Le, Polynomial::constant(c))};
    const ArithVerdict v = prove_implication(ob, std::nullopt, budget);
    if (v.status == ArithStatus::Valid && v.global) return c;
  }
  return std::nullopt;
}

}  // namespace dlive

namespace dlive::rules_detail {

const char* const kClock = "_gt";

void Chain::push(const ProofPtr& step) {
  if (!root) {
    root = step;
  } else {
    close_open(root, step);
  }
}

namespace {

Rational factorial(unsigned n) {
  Rational r = 1;
  for (unsigned i = 2; i <= n; ++i) r *= i;
  return r;
}

// q_i(t) = sum_{j=i}^{k-1} c_j t^{j-i}/(j-i)! + eps t^{k-i}/(k-i)!
std::vector<Polynomial> bound_polys(const std::vector<Polynomial>& c, const Polynomial& eps,
                                    unsigned k) {
  const Polynomial t = Polynomial::variable(kClock);
  std::vector<Polynomial> q(k);
  for (unsigned i = 0; i < k; ++i) {
    Polynomial s;
    for (unsigned j = i; j < k; ++j) s += c[j] * t.pow(int(j - i)) * (Rational(1) / factorial(j - i));
    s += eps * t.pow(int(k - i)) * (Rational(1) / factorial(k - i));
    q[i] = s;
  }
  return q;
}

bool all_constant(const std::vector<Polynomial>& ps) {
  return std::all_of(ps.begin(), ps.end(), [](const Polynomial& p) { return p.is_constant(); });
}

// Smallest T found by doubling such that h(T + s) has positive constant term
// and nonnegative coefficients, so h > 0 for all s > 0.
std::optional<Rational> shift_bound(const Polynomial& h) {
  const Polynomial t = Polynomial::variable(kClock);
  const unsigned deg = h.degree_in(kClock);
  for (int e = -1; e <= 40; ++e) {
    const Rational T = e < 0 ? Rational(0) : Rational(mpz_class(1) << e);
    const Polynomial shifted = h.substitute(kClock, t + Polynomial::constant(T));
    bool ok = shifted.constant_term() > 0;
    for (unsigned d = 1; ok && d <= deg; ++d) {
      ok = shifted.coefficient({{kClock, d}}) >= 0;
    }
    if (ok) return T;
  }
  return std::nullopt;
}

Formula clock_gt(const Polynomial& T) {
  return Formula::cmp(Polynomial::variable(kClock), CmpOp::Gt, T);
}

}  // namespace

ProofPtr integrate(Kernel& k, const Sequent& clocked, const Integration& spec) {
  const OdeSystem& sys = clocked.succedent.ode();
  std::vector<Polynomial> c;
  for (unsigned i = 0; i < spec.k; ++i) c.push_back(*spec.init.at(i));
  const std::vector<Polynomial> q = bound_polys(c, spec.eps, spec.k);

  Formula G = Formula::cmp(q[0], CmpOp::Gt, spec.top);
  if (spec.stay) G = mk_or(mk_not(*spec.stay), G);

  Chain chain{clocked, nullptr};
  ProofPtr refine = k.goal_refine(clocked, G);
  std::vector<CertStep> hints = spec.pre_hints;
  for (unsigned i = spec.k; i-- > 0;) {
    const Polynomial lp = higher_lie(spec.p, sys, i);
    hints.push_back(make_step("DC", {bind("C", Formula::cmp(lp, CmpOp::Ge, q[i])),
                                     bind("by", Hint{{make_step("DI")}})}));
  }
  hints.push_back(make_step("DW"));
  refine->close_invariance(0, prove_invariance_with(k, refine->obligations()[0].sequent, hints,
                                                    spec.known));
  chain.push(refine);

  if (spec.exit == Exit::Assume) {
    chain.push(k.assume(chain.goal(), "Duration"));
    return chain.root;
  }

  Polynomial T;
  const Polynomial h = q[0] - spec.top;
  if (spec.k == 1 && spec.eps.is_constant()) {
    T = (spec.top - c[0]) * (Rational(1) / spec.eps.constant_term());
  } else if (spec.k == 1) {
    const std::string g = "_gT";
    chain.push(k.ghost_const(chain.goal(), g,
                             Formula::cmp(spec.eps * Polynomial::variable(g) + c[0] - spec.top,
                                          CmpOp::Ge, Polynomial())));
    T = Polynomial::variable(g);
  } else {
    std::optional<Rational> shift;
    if (all_constant(c) && spec.eps.is_constant() && spec.top.is_constant()) shift = shift_bound(h);
    if (!shift) {
      ProofPtr open = k.open(chain.goal());
      open->add_note("no time bound for symbolic initial values of higher derivatives");
      chain.push(open);
      return chain.root;
    }
    T = Polynomial::constant(*shift);
  }

  const Formula R = spec.stay ? mk_or(mk_not(*spec.stay), clock_gt(T)) : clock_gt(T);
  chain.push(k.monotone_dia(chain.goal(), R));
  const Sequent& last = chain.goal();
  if (spec.exit == Exit::Global) {
    chain.push(k.exist_global(last.context, last.succedent.ode(), T));
  } else {
    chain.push(k.exist_bounded(last.context, last.succedent.ode(), *spec.stay, T));
  }
  return chain.root;
}

ProofPtr clocked_chain(Kernel& k, const Sequent& target, Integration spec) {
  const OdeSystem& sys = target.succedent.ode();
  spec.init.resize(spec.k);
  Chain chain{target, nullptr};
  for (unsigned i = 0; i < spec.k; ++i) {
    if (spec.init[i]) continue;
    const Polynomial lp = higher_lie(spec.p, sys, i);
    if (auto v = initial_value(target.context, lp)) {
      spec.init[i] = Polynomial::constant(*v);
      continue;
    }
    const std::string g = i == 0 ? "_gp0" : "_gl" + std::to_string(i);
    chain.push(k.ghost_const(chain.goal(), g, Formula::cmp(lp, CmpOp::Eq, Polynomial::variable(g))));
    spec.init[i] = Polynomial::variable(g);
  }
  chain.push(k.ghost_clock(chain.goal(), kClock));
  chain.push(integrate(k, chain.goal(), spec));
  return chain.root;
}

}  // namespace dlive::rules_detail
