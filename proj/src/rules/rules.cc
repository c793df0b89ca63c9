#include <algorithm>

#include "internal.h"

namespace dlive {

namespace {

using namespace rules_detail;

const Budget kBoundBudget{50000, 2.0};

std::optional<CmpOp> match_cmp(const Formula& P, const Polynomial& p) {
  if (P.kind() != Formula::Kind::Cmp) return std::nullopt;
  const Polynomial d = P.lhs() - P.rhs();
  if (d == p) return P.op();
  if (d == -p) return cmp_flip(P.op());
  return std::nullopt;
}

// P itself when it already reads p op 0, else the canonical atom.
Formula goal_atom(const Formula& P, const Polynomial& p, CmpOp op) {
  if (match_cmp(P, p) == op) return P;
  return mk_cmp0(p, op);
}

Formula sum_squares_le(const std::vector<std::string>& vars, const Rational& B) {
  Polynomial s;
  for (const auto& v : vars) s += Polynomial::variable(v).pow(2);
  return Formula::cmp(s, CmpOp::Le, Polynomial::constant(B));
}

// S, or S with the compactness witness when its atoms do not bound every variable.
Formula with_bounds(const Formula& S, const std::vector<std::string>& vars,
                    const std::optional<Rational>& witness) {
  const Box b = implied_box(S);
  const bool bounded = std::all_of(vars.begin(), vars.end(), [&](const std::string& v) {
    auto it = b.find(v);
    return it != b.end() && it->second.bounded();
  });
  if (bounded || !witness) return S;
  return mk_and(S, sum_squares_le(vars, *witness));
}

// c with S containing p <= c (or p < c) as a conjunct.
std::optional<Polynomial> atom_upper(const Formula& S, const Polynomial& p) {
  for (const auto& a : conjuncts(S)) {
    if (a.kind() != Formula::Kind::Cmp) continue;
    const Polynomial d = a.lhs() - a.rhs();
    const Polynomial c = p - d;
    const Polynomial c2 = p + d;
    if ((a.op() == CmpOp::Le || a.op() == CmpOp::Lt) && c.is_constant()) return c;
    if ((a.op() == CmpOp::Ge || a.op() == CmpOp::Gt) && c2.is_constant()) return c2;
  }
  return std::nullopt;
}

CertStep dc(const Formula& C, std::vector<CertStep> by) {
  return make_step("DC", {bind("C", C), bind("by", Hint{std::move(by)})});
}

ProofPtr noted_open(Kernel& k, const Sequent& s, const std::string& note) {
  ProofPtr n = k.open(s);
  n->add_note(note);
  return n;
}

class RuleCtx {
 public:
  RuleCtx(Kernel& k, const Sequent& target, const CertStep& cert)
      : k(k), target(target), cert(cert), sys(target.succedent.ode()), P(target.succedent.left()),
        Q(sys.domain), gc(context_filter(target.context, sys)), order(var_order(sys)),
        vars(sys.vars) {
    if (auto b = opt_formula(cert, "box")) box = implied_box(*b);
  }

  Kernel& k;
  const Sequent& target;
  const CertStep& cert;
  const OdeSystem& sys;
  Formula P, Q;
  std::vector<Formula> gc;
  VarOrder order;
  std::vector<std::string> vars;
  std::optional<Box> box;

  std::vector<Obligation> obs;
  std::vector<std::pair<size_t, ProofPtr>> inv;
  std::vector<ProofPtr> known;
  std::optional<std::string> failed;

  bool gate(Obligation ob, const std::string& name) {
    k.discharge(ob);
    const bool ok = ob.status == ObStatus::Valid;
    obs.push_back(std::move(ob));
    if (!ok) failed = name;
    return ok;
  }

  bool check(bool ok, const std::string& name) {
    if (!ok) failed = name;
    return ok;
  }

  bool domain_true() { return check(Q.is_true(), "Domain"); }

  bool constant_eps(const Polynomial& eps) {
    bool ok = true;
    for (const auto& v : eps.variables()) ok = ok && sys.params.count(v) > 0;
    return check(ok, "ConstantEpsilon");
  }

  bool lipschitz() { return gate(lipschitz_obligation(ObRole::SideCondition, sys), "GlobalLipschitz"); }

  bool eps_positive(const Polynomial& eps) {
    return gate(arith_obligation(ObRole::SideCondition, "EpsilonPositive", gc,
                                 mk_cmp0(eps, CmpOp::Gt), order),
                "EpsilonPositive");
  }

  bool initial(const Formula& f, const std::string& label = "InitialState") {
    return gate(arith_obligation(ObRole::SideCondition, label, target.context, f, order), label);
  }

  bool topo(const Formula& f, TopoProperty prop, const std::string& name) {
    return gate(topo_obligation(ObRole::SideCondition, f, prop, vars),
                std::string(property_text(prop)) + "(" + name + ")");
  }

  std::optional<Rational> witness() const {
    for (auto it = obs.rbegin(); it != obs.rend(); ++it) {
      if (it->kind == ObKind::Topo && it->witness) return it->witness;
    }
    return std::nullopt;
  }

  void premise(const std::vector<Formula>& hyps, const Formula& concl, bool boxed = true) {
    std::vector<Formula> lhs = gc;
    lhs.insert(lhs.end(), hyps.begin(), hyps.end());
    obs.push_back(arith_obligation(ObRole::Premise, "", lhs, concl, order,
                                   boxed ? box : std::nullopt));
  }

  ProofPtr premise_inv(const Formula& domain, const Formula& post,
                       const std::vector<CertStep>& hints) {
    const Sequent seq{target.context, Formula::box(sys.with_domain(domain), post)};
    ProofPtr proof = prove_invariance_with(k, seq, hints, {});
    obs.push_back(invariance_obligation(ObRole::Premise, "", seq));
    inv.emplace_back(obs.size() - 1, proof);
    known.push_back(proof);
    return proof;
  }

  ProofPtr lemma(const Sequent& at, const std::vector<Formula>& hyps, const Formula& concl,
                 bool boxed = true) {
    struct Reset {
      Kernel& k;
      ~Reset() { k.set_arith_box(std::nullopt); }
    } reset{k};
    if (boxed) k.set_arith_box(box);
    return k.lemma(at, hyps, concl);
  }

  ProofPtr refuse() {
    ProofPtr n = k.refused(cert.rule, target, failed.value_or("Unknown"), obs);
    attach(n);
    return n;
  }

  ProofPtr finish(const ProofPtr& derivation) {
    ProofPtr n = k.derived(cert.rule, target, obs, {derivation});
    attach(n);
    return n;
  }

 private:
  void attach(const ProofPtr& n) {
    for (const auto& [i, proof] : inv) n->close_invariance(i, proof);
  }
};

unsigned need_order(const CertStep& c) {
  const Polynomial kp = need_poly(c, "k");
  if (!kp.is_constant()) throw KernelError("HintMismatch", "k must be a positive integer");
  const Rational r = kp.constant_term();
  if (r.get_den() != 1 || r < 1 || r > 8) {
    throw KernelError("HintMismatch", "k must be an integer between 1 and 8");
  }
  return unsigned(r.get_num().get_ui());
}

// Proves Γ ⊢ <f>!S for a compact staging set S on which L^deg p is positive.
ProofPtr staged(RuleCtx& c, const Sequent& target, const Formula& S, const Polynomial& p,
                unsigned deg, std::optional<Polynomial> eps, std::optional<Polynomial> p1) {
  Kernel& k = c.k;
  const OdeSystem& sys = target.succedent.ode();
  const Formula Sb = with_bounds(S, c.vars, c.witness());
  const Polynomial lk = higher_lie(p, sys, deg);
  const uint64_t seed = k.config().seed;
  Chain ch{target, nullptr};
  auto bail = [&](const std::string& note) {
    ch.push(noted_open(k, ch.goal(), note));
    return ch.root;
  };

  if (!eps) {
    if (auto e = verified_bound(Sb, lk, true, c.vars, kBoundBudget, seed); e && *e > 0) {
      eps = Polynomial::constant(*e);
    } else {
      return bail("no positive lower bound on " + print_polynomial(lk) + " over the staging set");
    }
    ch.push(c.lemma(ch.goal(), {Sb}, Formula::cmp(lk, CmpOp::Ge, *eps), false));
  }

  Integration spec;
  spec.p = p;
  spec.k = deg;
  spec.eps = *eps;
  spec.stay = S;
  spec.exit = Exit::Bounded;
  spec.known = c.known;
  spec.init.resize(deg);
  if (auto v = initial_value(target.context, p)) {
    spec.init[0] = Polynomial::constant(*v);
  } else if (auto lo = verified_bound(Sb, p, true, c.vars, kBoundBudget, seed)) {
    spec.init[0] = Polynomial::constant(*lo);
  }
  for (unsigned i = 1; i < deg; ++i) {
    const Polynomial li = higher_lie(p, sys, i);
    auto lo = verified_bound(Sb, li, true, c.vars, kBoundBudget, seed);
    if (!lo) return bail("no lower bound on " + print_polynomial(li) + " over the staging set");
    spec.init[i] = Polynomial::constant(*lo);
  }
  if (!p1) p1 = atom_upper(S, p);
  if (!p1) {
    auto hi = verified_bound(Sb, p, false, c.vars, kBoundBudget, seed);
    if (!hi) return bail("no upper bound on " + print_polynomial(p) + " over the staging set");
    p1 = Polynomial::constant(*hi);
  }
  spec.top = *p1;
  if (Sb != S) spec.pre_hints.push_back(dc(conjuncts(Sb).back(), {make_step("DW")}));
  spec.pre_hints.push_back(make_step("DX"));
  spec.pre_hints.push_back(dc(Formula::cmp(p, CmpOp::Le, *p1), {make_step("DW")}));
  ch.push(clocked_chain(k, ch.goal(), spec));
  return ch.root;
}

// ---------------------------------------------------------------- dV family

ProofPtr dv_geq(RuleCtx& c, bool strict) {
  const Polynomial p = need_poly(c.cert, "p");
  const Polynomial eps = need_poly(c.cert, "eps");
  if (!c.domain_true() || !c.constant_eps(eps) || !c.lipschitz() || !c.eps_positive(eps)) {
    return c.refuse();
  }
  const Formula pg = goal_atom(c.P, p, strict ? CmpOp::Gt : CmpOp::Ge);
  const Formula off = negate(pg);
  const Formula concl = Formula::cmp(lie(p, c.sys), CmpOp::Ge, eps);
  c.premise({off}, concl);

  Chain ch{c.target, nullptr};
  if (pg != c.P) ch.push(c.k.monotone_dia(ch.goal(), pg));
  ch.push(c.lemma(ch.goal(), {off}, concl));
  Integration spec;
  spec.p = p;
  spec.eps = eps;
  ch.push(clocked_chain(c.k, ch.goal(), spec));
  return c.finish(ch.root);
}

ProofPtr dv_geq_star(RuleCtx& c) {
  const Polynomial p = need_poly(c.cert, "p");
  const Polynomial eps = need_poly(c.cert, "eps");
  const std::vector<CertStep> duration = hints_of(c.cert, "duration");
  if (duration.size() > 1) throw KernelError("HintMismatch", "duration takes a single step");
  const std::string how = duration.empty() ? "Assume" : duration[0].rule;
  if (how != "Assume" && how != "GEx" && how != "BEx") {
    throw KernelError("HintMismatch", "duration must be GEx, BEx or Assume");
  }
  if (!c.domain_true() || !c.constant_eps(eps)) return c.refuse();
  std::optional<Formula> B;
  if (how == "GEx" && (!c.lipschitz() || !c.eps_positive(eps))) return c.refuse();
  if (how == "BEx") {
    B = need_formula(duration[0], "B");
    if (!c.topo(*B, TopoProperty::Bounded, "B") || !c.eps_positive(eps)) return c.refuse();
  }
  const Formula pg = goal_atom(c.P, p, CmpOp::Ge);
  const Formula off = negate(pg);
  const Formula concl = Formula::cmp(lie(p, c.sys), CmpOp::Ge, eps);
  c.premise({off}, concl);
  std::vector<CertStep> b_hints;
  if (B) {
    b_hints = hints_of(duration[0], "inv");
    c.premise_inv(off, *B, b_hints);
  }

  Chain ch{c.target, nullptr};
  if (pg != c.P) ch.push(c.k.monotone_dia(ch.goal(), pg));
  ch.push(c.lemma(ch.goal(), {off}, concl));
  Integration spec;
  spec.p = p;
  spec.eps = eps;
  spec.known = c.known;
  if (how == "Assume") spec.exit = Exit::Assume;
  if (B) {
    spec.exit = Exit::Bounded;
    spec.stay = *B;
    std::vector<CertStep> by{make_step("ClockDrop")};
    by.insert(by.end(), b_hints.begin(), b_hints.end());
    spec.pre_hints.push_back(dc(*B, by));
  }
  ch.push(clocked_chain(c.k, ch.goal(), spec));
  return c.finish(ch.root);
}

// K<&> with p>=0; the barrier keeps p<0 until p=0 is reached.
ProofPtr goal_geq(RuleCtx& c, const Sequent& at, const Polynomial& p) {
  ProofPtr ref = c.k.goal_refine(at, mk_cmp0(p, CmpOp::Ge));
  ref->close_invariance(0, prove_invariance_with(c.k, ref->obligations()[0].sequent,
                                                 std::vector<CertStep>{make_step("DX"),
                                                                       make_step("BC", {bind("p", p)})},
                                                 {}));
  return ref;
}

ProofPtr dv_eq(RuleCtx& c, bool monotone) {
  const Polynomial p = need_poly(c.cert, "p");
  const Polynomial eps = need_poly(c.cert, "eps");
  if (!c.domain_true() || !c.constant_eps(eps) || !c.lipschitz() || !c.eps_positive(eps) ||
      !c.initial(mk_cmp0(p, CmpOp::Le))) {
    return c.refuse();
  }
  const Formula peq = monotone ? mk_cmp0(p, CmpOp::Eq) : goal_atom(c.P, p, CmpOp::Eq);
  const Formula off = mk_cmp0(p, CmpOp::Lt);
  const Formula concl = Formula::cmp(lie(p, c.sys), CmpOp::Ge, eps);
  c.premise({off}, concl);
  if (monotone) c.premise({peq}, c.P, false);

  Chain ch{c.target, nullptr};
  if (peq != c.P) ch.push(c.k.monotone_dia(ch.goal(), peq));
  ch.push(goal_geq(c, ch.goal(), p));
  ch.push(c.lemma(ch.goal(), {off}, concl));
  Integration spec;
  spec.p = p;
  spec.eps = eps;
  ch.push(clocked_chain(c.k, ch.goal(), spec));
  return c.finish(ch.root);
}

ProofPtr dv_k(RuleCtx& c) {
  const Polynomial p = need_poly(c.cert, "p");
  const Polynomial eps = need_poly(c.cert, "eps");
  const unsigned order = need_order(c.cert);
  if (!c.domain_true() || !c.constant_eps(eps) || !c.lipschitz() || !c.eps_positive(eps)) {
    return c.refuse();
  }
  const bool strict = match_cmp(c.P, p) == CmpOp::Gt;
  const Formula pg = goal_atom(c.P, p, strict ? CmpOp::Gt : CmpOp::Ge);
  const Formula off = negate(pg);
  const Formula concl = Formula::cmp(lie(p, c.sys, order), CmpOp::Ge, eps);
  c.premise({off}, concl);

  Chain ch{c.target, nullptr};
  if (pg != c.P) ch.push(c.k.monotone_dia(ch.goal(), pg));
  ch.push(c.lemma(ch.goal(), {off}, concl));
  Integration spec;
  spec.p = p;
  spec.k = order;
  spec.eps = eps;
  ch.push(clocked_chain(c.k, ch.goal(), spec));
  return c.finish(ch.root);
}

// ---------------------------------------------------------------- staging sets

// Γ ⊢ <f & true>!S from S ⊢ p<=0 & Lp>=eps, with no exit from S but the goal.
ProofPtr sp_tail(RuleCtx& c, const Sequent& at, const Formula& S, const Polynomial& p,
                 const Polynomial& eps) {
  Integration spec;
  spec.p = p;
  spec.eps = eps;
  spec.known = c.known;
  spec.pre_hints = {make_step("DX"), dc(mk_cmp0(p, CmpOp::Le), {make_step("DW")})};
  return clocked_chain(c.k, at, spec);
}

ProofPtr goal_not(RuleCtx& c, const Sequent& at, const Formula& S,
                  const std::vector<CertStep>& hints) {
  ProofPtr ref = c.k.goal_refine(at, negate(S));
  ref->close_invariance(0, prove_invariance_with(c.k, ref->obligations()[0].sequent, hints, c.known));
  return ref;
}

ProofPtr sp(RuleCtx& c) {
  const Polynomial p = need_poly(c.cert, "p");
  const Polynomial eps = need_poly(c.cert, "eps");
  const Formula S = need_formula(c.cert, "S");
  const auto hints = hints_of(c.cert, "inv");
  if (!c.domain_true() || !c.constant_eps(eps) || !c.lipschitz() || !c.eps_positive(eps)) {
    return c.refuse();
  }
  c.premise_inv(negate(c.P), S, hints);
  const Formula concl = mk_and(mk_cmp0(p, CmpOp::Le), Formula::cmp(lie(p, c.sys), CmpOp::Ge, eps));
  c.premise({S}, concl);

  Chain ch{c.target, nullptr};
  ch.push(goal_not(c, ch.goal(), S, hints));
  ch.push(c.lemma(ch.goal(), {S}, concl));
  ch.push(sp_tail(c, ch.goal(), S, p, eps));
  return c.finish(ch.root);
}

ProofPtr sp_b(RuleCtx& c) {
  const Polynomial p = need_poly(c.cert, "p");
  const Polynomial eps = need_poly(c.cert, "eps");
  const Formula S = need_formula(c.cert, "S");
  const auto hints = hints_of(c.cert, "inv");
  if (!c.domain_true() || !c.constant_eps(eps) || !c.topo(S, TopoProperty::Bounded, "S") ||
      !c.eps_positive(eps)) {
    return c.refuse();
  }
  c.premise_inv(negate(c.P), S, hints);
  const Formula Sb = with_bounds(S, c.vars, c.witness());
  const Formula concl = Formula::cmp(lie(p, c.sys), CmpOp::Ge, eps);
  c.premise({Sb}, concl);

  Chain ch{c.target, nullptr};
  ch.push(goal_not(c, ch.goal(), S, hints));
  ch.push(c.lemma(ch.goal(), {Sb}, concl));
  ch.push(staged(c, ch.goal(), S, p, 1, eps, opt_poly(c.cert, "p1")));
  return c.finish(ch.root);
}

ProofPtr sp_c(RuleCtx& c) {
  const Polynomial p = need_poly(c.cert, "p");
  const Formula S = need_formula(c.cert, "S");
  const auto hints = hints_of(c.cert, "inv");
  const auto eps = opt_poly(c.cert, "eps");
  if (!c.domain_true() || !c.topo(S, TopoProperty::Compact, "S")) return c.refuse();
  if (eps && (!c.constant_eps(*eps) || !c.eps_positive(*eps))) return c.refuse();
  c.premise_inv(negate(c.P), S, hints);
  const Formula Sb = with_bounds(S, c.vars, c.witness());
  const Polynomial lp = lie(p, c.sys);
  c.premise({Sb}, mk_cmp0(lp, CmpOp::Gt), false);

  Chain ch{c.target, nullptr};
  ch.push(goal_not(c, ch.goal(), S, hints));
  if (eps) ch.push(c.lemma(ch.goal(), {Sb}, Formula::cmp(lp, CmpOp::Ge, *eps), false));
  ch.push(staged(c, ch.goal(), S, p, 1, eps, opt_poly(c.cert, "p1")));
  return c.finish(ch.root);
}

// ---------------------------------------------------------------- Lyapunov

ProofPtr slyap_tail(RuleCtx& c, Chain& ch, const Polynomial& p, const Formula& K) {
  const Formula S = mk_and(negate(c.P), K);
  std::vector<CertStep> hints{dc(mk_cmp0(p, CmpOp::Ge), {make_step("DI")}), make_step("DW")};
  ch.push(goal_not(c, ch.goal(), S, hints));
  ch.push(staged(c, ch.goal(), S, p, 1, std::nullopt, std::nullopt));
  return ch.root;
}

bool slyap_gates(RuleCtx& c, const Formula& K, const Formula& init) {
  return c.topo(K, TopoProperty::Compact, "K") && c.topo(c.P, TopoProperty::Open, "P") &&
         c.initial(init);
}

ProofPtr slyap(RuleCtx& c) {
  const Polynomial p = need_poly(c.cert, "p");
  const Formula K = need_formula(c.cert, "K");
  if (!c.domain_true() || !slyap_gates(c, K, mk_cmp0(p, CmpOp::Ge))) return c.refuse();
  const Formula pos = mk_cmp0(p, CmpOp::Ge);
  const Formula lp = mk_cmp0(lie(p, c.sys), CmpOp::Gt);
  c.premise({pos}, K, false);
  c.premise({negate(c.P), K}, lp, false);

  Chain ch{c.target, nullptr};
  ch.push(c.lemma(ch.goal(), {pos}, K, false));
  ch.push(c.lemma(ch.goal(), {negate(c.P), K}, lp, false));
  return c.finish(slyap_tail(c, ch, p, K));
}

ProofPtr slyap_dom(RuleCtx& c) {
  const Polynomial p = need_poly(c.cert, "p");
  const Formula K = need_formula(c.cert, "K");
  const Formula gt = mk_cmp0(p, CmpOp::Gt);
  if (!c.check(match_cmp(c.Q, p) == CmpOp::Gt, "Domain") || !slyap_gates(c, K, gt)) {
    return c.refuse();
  }
  const Formula pos = mk_cmp0(p, CmpOp::Ge);
  const Formula lp = mk_cmp0(lie(p, c.sys), CmpOp::Gt);
  c.premise({pos}, K, false);
  c.premise({negate(c.P), K}, lp, false);

  Chain ch{c.target, nullptr};
  ch.push(c.lemma(ch.goal(), {pos}, K, false));
  ch.push(c.lemma(ch.goal(), {negate(c.P), K}, lp, false));
  ch.push(c.k.dia_skip(ch.goal()));
  ProofPtr cor = c.k.topo_closed_open(ch.goal(), Formula::tru());
  if (cor->refusal()) {
    ch.push(cor);
    return c.finish(ch.root);
  }
  for (size_t i = 0; i < cor->obligations().size(); ++i) {
    if (cor->obligations()[i].kind == ObKind::Invariance) {
      cor->close_invariance(i, prove_invariance_with(c.k, cor->obligations()[i].sequent,
                                                     std::vector<CertStep>{make_step("DI")}, {}));
    }
  }
  ch.push(cor);
  return c.finish(slyap_tail(c, ch, p, K));
}

// ---------------------------------------------------------------- domains

// COR with R = true, reusing the invariance premise for the domain.
ProofPtr cor_true(RuleCtx& c, const Sequent& at, const std::vector<CertStep>& hints) {
  ProofPtr cor = c.k.topo_closed_open(at, Formula::tru());
  for (size_t i = 0; i < cor->obligations().size(); ++i) {
    if (cor->obligations()[i].kind == ObKind::Invariance) {
      cor->close_invariance(i, prove_invariance_with(c.k, cor->obligations()[i].sequent, hints,
                                                     c.known));
    }
  }
  return cor;
}

std::vector<CertStep> clock_dropped(const std::vector<CertStep>& hints) {
  std::vector<CertStep> by{make_step("ClockDrop")};
  by.insert(by.end(), hints.begin(), hints.end());
  return by;
}

ProofPtr dv_geq_dom(RuleCtx& c, bool strict) {
  const Polynomial p = need_poly(c.cert, "p");
  const Polynomial eps = need_poly(c.cert, "eps");
  const auto hints = hints_of(c.cert, "inv");
  const Formula pg = goal_atom(c.P, p, strict ? CmpOp::Gt : CmpOp::Ge);
  const Formula off = negate(pg);
  if (!c.topo(c.Q, strict ? TopoProperty::Open : TopoProperty::Closed, "Q") || !c.initial(off) ||
      !c.lipschitz() || !c.constant_eps(eps) || !c.eps_positive(eps)) {
    return c.refuse();
  }
  c.premise_inv(off, c.Q, hints);
  const Formula concl = Formula::cmp(lie(p, c.sys), CmpOp::Ge, eps);
  c.premise({off, c.Q}, concl);

  Chain ch{c.target, nullptr};
  if (pg != c.P) ch.push(c.k.monotone_dia(ch.goal(), pg));
  ProofPtr cor = cor_true(c, ch.goal(), hints);
  ch.push(cor);
  if (cor->refusal()) return c.finish(ch.root);
  ch.push(c.lemma(ch.goal(), {off, c.Q}, concl));
  Integration spec;
  spec.p = p;
  spec.eps = eps;
  spec.known = c.known;
  spec.pre_hints = {dc(c.Q, clock_dropped(hints))};
  ch.push(clocked_chain(c.k, ch.goal(), spec));
  return c.finish(ch.root);
}

ProofPtr dv_eq_dom(RuleCtx& c, bool monotone) {
  const Polynomial p = need_poly(c.cert, "p");
  const Polynomial eps = need_poly(c.cert, "eps");
  const auto hints = hints_of(c.cert, "inv");
  const Formula off = mk_cmp0(p, CmpOp::Lt);
  if (!c.topo(c.Q, TopoProperty::Closed, "Q") || !c.initial(mk_cmp0(p, CmpOp::Le)) ||
      !c.initial(c.Q, "InitialDomain") || !c.lipschitz() || !c.constant_eps(eps) ||
      !c.eps_positive(eps)) {
    return c.refuse();
  }
  const Formula peq = monotone ? mk_cmp0(p, CmpOp::Eq) : goal_atom(c.P, p, CmpOp::Eq);
  c.premise_inv(off, c.Q, hints);
  const Formula concl = Formula::cmp(lie(p, c.sys), CmpOp::Ge, eps);
  c.premise({off, c.Q}, concl);
  if (monotone) c.premise({c.Q, peq}, c.P, false);

  Chain ch{c.target, nullptr};
  if (peq != c.P) ch.push(c.k.monotone_dia(ch.goal(), peq));
  ch.push(c.k.dia_skip(ch.goal()));
  ch.push(goal_geq(c, ch.goal(), p));
  ProofPtr cor = cor_true(c, ch.goal(), hints);
  ch.push(cor);
  if (cor->refusal()) return c.finish(ch.root);
  ch.push(c.lemma(ch.goal(), {off, c.Q}, concl));
  Integration spec;
  spec.p = p;
  spec.eps = eps;
  spec.known = c.known;
  spec.pre_hints = {dc(c.Q, clock_dropped(hints))};
  ch.push(clocked_chain(c.k, ch.goal(), spec));
  return c.finish(ch.root);
}

// SAR with R = true followed by K<&> with !S; both invariance steps fall back
// on the premise Γ ⊢ [f & !(P & Q)]S.
void sar_stage(RuleCtx& c, Chain& ch, const Formula& S, const Formula& escape) {
  ProofPtr sar = c.k.topo_semialg(ch.goal(), Formula::tru());
  const Sequent& inv = sar->obligations()[0].sequent;
  ProofPtr mono = c.k.monotone_box(inv, S);
  mono->close(0, prove_invariance_with(c.k, mono->children()[0]->conclusion(), {}, c.known));
  sar->close_invariance(0, mono);
  ch.push(sar);
  ch.push(goal_not(c, ch.goal(), S,
                   {make_step("DomainWeaken", {bind("R", escape)})}));
}

ProofPtr sp_dom(RuleCtx& c) {
  const Polynomial p = need_poly(c.cert, "p");
  const Polynomial eps = need_poly(c.cert, "eps");
  const Formula S = need_formula(c.cert, "S");
  const auto hints = hints_of(c.cert, "inv");
  if (!c.constant_eps(eps) || !c.lipschitz() || !c.eps_positive(eps)) return c.refuse();
  const Formula escape = mk_not(mk_and(c.P, c.Q));
  c.premise_inv(escape, S, hints);
  const Formula concl = mk_and({c.Q, mk_cmp0(p, CmpOp::Le), Formula::cmp(lie(p, c.sys), CmpOp::Ge, eps)});
  c.premise({S}, concl);

  Chain ch{c.target, nullptr};
  sar_stage(c, ch, S, escape);
  ch.push(c.lemma(ch.goal(), {S}, concl));
  ch.push(sp_tail(c, ch.goal(), S, p, eps));
  return c.finish(ch.root);
}

ProofPtr sp_ck_dom(RuleCtx& c) {
  const Polynomial p = need_poly(c.cert, "p");
  const Formula S = need_formula(c.cert, "S");
  const unsigned order = need_order(c.cert);
  const auto hints = hints_of(c.cert, "inv");
  if (!c.topo(S, TopoProperty::Compact, "S")) return c.refuse();
  const Formula escape = mk_not(mk_and(c.P, c.Q));
  c.premise_inv(escape, S, hints);
  const Formula Sb = with_bounds(S, c.vars, c.witness());
  const Formula concl = mk_and(c.Q, mk_cmp0(lie(p, c.sys, order), CmpOp::Gt));
  c.premise({Sb}, concl, false);

  Chain ch{c.target, nullptr};
  sar_stage(c, ch, S, escape);
  ch.push(c.lemma(ch.goal(), {Sb}, concl, false));
  ch.push(staged(c, ch.goal(), S, p, order, std::nullopt, std::nullopt));
  return c.finish(ch.root);
}

ProofPtr e_c_dom(RuleCtx& c) {
  const Polynomial p = need_poly(c.cert, "p");
  const auto hints = hints_of(c.cert, "inv");
  const Formula S = mk_and(c.Q, negate(c.P));
  if (!c.topo(S, TopoProperty::Compact, "Q & !P")) return c.refuse();
  const Formula escape = mk_not(mk_and(c.P, c.Q));
  c.premise_inv(escape, c.Q, hints);
  const Formula Sb = with_bounds(S, c.vars, c.witness());
  const Formula lp = mk_cmp0(lie(p, c.sys), CmpOp::Gt);
  c.premise({c.Q, negate(c.P)}, lp, false);

  Chain ch{c.target, nullptr};
  ProofPtr sar = c.k.topo_semialg(ch.goal(), Formula::tru());
  sar->close_invariance(0, prove_invariance_with(c.k, sar->obligations()[0].sequent, hints, c.known));
  ch.push(sar);
  ch.push(goal_not(c, ch.goal(), S,
                   {dc(c.Q, {make_step("DomainWeaken", {bind("R", escape)})}), make_step("DW")}));
  ch.push(c.lemma(ch.goal(), {c.Q, negate(c.P)}, lp, false));
  if (Sb != S) ch.push(c.lemma(ch.goal(), {S}, conjuncts(Sb).back(), false));
  ch.push(staged(c, ch.goal(), S, p, 1, std::nullopt, std::nullopt));
  return c.finish(ch.root);
}

ProofPtr dispatch(RuleCtx& c) {
  const std::string& r = c.cert.rule;
  if (r == "dV_geq") return dv_geq(c, false);
  if (r == "dV_gt") return dv_geq(c, true);
  if (r == "dV_geq_star") return dv_geq_star(c);
  if (r == "dV_eq") return dv_eq(c, false);
  if (r == "dV_eqM") return dv_eq(c, true);
  if (r == "dV_k") return dv_k(c);
  if (r == "SP") return sp(c);
  if (r == "SP_b") return sp_b(c);
  if (r == "SP_c") return sp_c(c);
  if (r == "SLyap") return slyap(c);
  if (r == "dV_geq_dom") return dv_geq_dom(c, false);
  if (r == "dV_gt_dom") return dv_geq_dom(c, true);
  if (r == "dV_eq_dom") return dv_eq_dom(c, false);
  if (r == "dV_eqM_dom") return dv_eq_dom(c, true);
  if (r == "SLyap_dom") return slyap_dom(c);
  if (r == "SP_dom") return sp_dom(c);
  if (r == "SP_ck_dom") return sp_ck_dom(c);
  if (r == "E_c_dom") return e_c_dom(c);
  throw KernelError("UnknownRule", "'" + r + "' is not a derived rule");
}

}  // namespace

const std::vector<std::string>& derived_rule_names() {
  static const std::vector<std::string> names = {
      "dV_geq", "dV_gt",      "dV_geq_star", "dV_eq",      "dV_eqM",     "dV_k",
      "SP",     "SP_b",       "SP_c",        "SLyap",      "dV_geq_dom", "dV_gt_dom",
      "dV_eq_dom", "dV_eqM_dom", "SLyap_dom", "SP_dom",     "SP_ck_dom",  "E_c_dom"};
  return names;
}

bool is_derived_rule(const std::string& name) {
  const auto& n = derived_rule_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

ProofPtr apply_rule(Kernel& k, const Sequent& target, const CertStep& cert) {
  if (!is_derived_rule(cert.rule)) {
    throw KernelError("UnknownRule", "'" + cert.rule + "' is not a derived rule");
  }
  if (target.succedent.kind() != Formula::Kind::Diamond) {
    throw KernelError("ShapeMismatch", cert.rule + " needs a diamond succedent");
  }
  RuleCtx c(k, target, cert);
  try {
    return dispatch(c);
  } catch (const KernelError& e) {
    if (e.code() == "MissingCertificateField" || e.code() == "HintMismatch") throw;
    c.failed = e.code();
    ProofPtr n = c.refuse();
    n->add_note(e.what());
    return n;
  }
}

}  // namespace dlive
