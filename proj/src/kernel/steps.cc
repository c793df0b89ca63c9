#include <algorithm>

#include "dlive/kernel.h"
#include "dlive/syntax.h"

namespace dlive {

namespace {

struct Modal {
  const OdeSystem& sys;
  const Formula& post;
};

Modal expect(const Sequent& target, Formula::Kind kind, const char* what) {
  if (target.succedent.kind() != kind) {
    throw KernelError("ShapeMismatch", std::string("expected a ") + what + " succedent, got '" +
                                           print_formula(target.succedent) + "'");
  }
  return {target.succedent.ode(), target.succedent.left()};
}

Modal expect_dia(const Sequent& t) { return expect(t, Formula::Kind::Diamond, "diamond"); }
Modal expect_box(const Sequent& t) { return expect(t, Formula::Kind::Box, "box"); }

std::vector<std::string> state_list(const OdeSystem& sys) {
  std::vector<std::string> out = sys.vars;
  if (sys.clock) out.push_back(*sys.clock);
  return out;
}

// Constant context plus extra hypotheses, for obligations that must hold in
// every reachable state.
std::vector<Formula> everywhere(const Sequent& target, const OdeSystem& sys,
                                std::initializer_list<Formula> extra) {
  std::vector<Formula> out = context_filter(target.context, sys);
  out.insert(out.end(), extra.begin(), extra.end());
  return out;
}

std::vector<Formula> with(const std::vector<Formula>& ctx, std::initializer_list<Formula> extra) {
  std::vector<Formula> out = ctx;
  out.insert(out.end(), extra.begin(), extra.end());
  return out;
}

bool mentions(const Formula& f, const std::string& v) { return free_identifiers(f).count(v) > 0; }

bool mentions_state(const Polynomial& p, const OdeSystem& sys) {
  const auto state = sys.state_vars();
  for (const auto& v : p.variables()) {
    if (state.count(v)) return true;
  }
  return false;
}

std::string arith_key(const Obligation& ob) {
  std::string key = print_formula(ob.arith.hypothesis) + " |- " + print_formula(ob.arith.conclusion);
  if (ob.box) {
    for (const auto& [v, iv] : *ob.box) key += " " + v + iv.to_string();
  }
  return key;
}

std::string point_text(const Point& p) {
  std::string out;
  for (const auto& [v, r] : p) {
    if (!out.empty()) out += ", ";
    out += v + " = " + to_string(r);
  }
  return out;
}

}  // namespace

ProofPtr Kernel::open(Sequent s) const {
  return ProofPtr(new ProofNode(std::move(s), StepKind::Open, step_name(StepKind::Open)));
}

ProofPtr Kernel::make(const Sequent& c, StepKind k, std::vector<Obligation> obs,
                      std::vector<ProofPtr> children) {
  ProofPtr node(new ProofNode(c, k, step_name(k)));
  for (auto& ob : obs) {
    if (ob.kind == ObKind::Arith && !ob.box && arith_box_) ob.box = arith_box_;
    discharge(ob);
  }
  node->obligations_ = std::move(obs);
  node->children_ = std::move(children);
  return node;
}

void Kernel::discharge(Obligation& ob) {
  switch (ob.kind) {
    case ObKind::Arith: {
      const std::string key = arith_key(ob);
      auto hit = arith_cache_.find(key);
      if (hit != arith_cache_.end()) {
        ob.status = hit->second.status;
        ob.detail = hit->second.detail;
        ob.counterexample = hit->second.counterexample;
        return;
      }
      const ArithVerdict v = prove_implication(ob.arith, ob.box, cfg_.budget);
      ob.counterexample.reset();
      if (v.status == ArithStatus::Valid && v.global) {
        ob.status = ObStatus::Valid;
        ob.detail.clear();
      } else if (v.status == ArithStatus::Falsified) {
        ob.status = ObStatus::Falsified;
        ob.counterexample = v.counterexample;
      } else {
        ArithVerdict f = falsify(ob.arith, cfg_.falsify_samples, cfg_.seed, ob.box, 1.0);
        if (f.status != ArithStatus::Falsified) {
          f = falsify(ob.arith, cfg_.falsify_samples, cfg_.seed + 1, ob.box, 4.0);
        }
        if (f.status == ArithStatus::Falsified) {
          ob.status = ObStatus::Falsified;
          ob.counterexample = f.counterexample;
        } else if (v.status == ArithStatus::Valid) {
          ob.status = ObStatus::ValidInBox;
          ob.detail = "valid inside the box only; no counterexample sampled outside";
        } else {
          ob.status = ObStatus::Unknown;
          ob.detail = v.reason;
        }
      }
      if (ob.counterexample) ob.detail = "counterexample " + point_text(*ob.counterexample);
      arith_cache_[key] = ob;
      return;
    }
    case ObKind::Topo: {
      const std::string key = std::string(property_text(ob.property)) + ":" +
                              print_formula(ob.formula);
      auto hit = topo_cache_.find(key);
      TopoVerdict v;
      if (hit != topo_cache_.end()) {
        v = hit->second;
      } else {
        switch (ob.property) {
          case TopoProperty::Closed: v = check_closed(ob.formula, ob.vars); break;
          case TopoProperty::Open: v = check_open(ob.formula, ob.vars); break;
          case TopoProperty::Bounded: v = check_bounded(ob.formula, ob.vars, cfg_.topo_budget); break;
          case TopoProperty::Compact: v = check_compact(ob.formula, ob.vars, cfg_.topo_budget); break;
        }
        topo_cache_[key] = v;
      }
      ob.status = v.holds() ? ObStatus::Valid : ObStatus::Unknown;
      ob.witness = v.witness;
      ob.detail = v.witness ? "B = " + to_string(*v.witness) : v.reason;
      return;
    }
    case ObKind::GlobalLipschitz:
      ob.status = is_affine(ob.ode) ? ObStatus::Valid : ObStatus::Unknown;
      ob.detail = ob.status == ObStatus::Valid ? "affine right-hand side"
                                               : "right-hand side is not affine";
      return;
    case ObKind::Invariance:
    case ObKind::Assumption:
      return;
  }
}

void Kernel::recheck(const ProofPtr& node) {
  arith_cache_.clear();
  topo_cache_.clear();
  std::vector<ProofPtr> stack{node};
  while (!stack.empty()) {
    ProofPtr n = stack.back();
    stack.pop_back();
    for (auto& ob : n->obligations_) {
      discharge(ob);
      arith_cache_.clear();
      topo_cache_.clear();
      if (ob.proof) stack.push_back(ob.proof);
    }
    for (const auto& c : n->children_) stack.push_back(c);
  }
}

ProofPtr Kernel::refine_domain(const Sequent& target, const Formula& R) {
  const Modal m = expect_dia(target);
  const Sequent live{target.context, Formula::diamond(m.sys.with_domain(R), m.post)};
  const Sequent inv{target.context, Formula::box(m.sys.with_domain(R), m.sys.domain)};
  return make(target, StepKind::DomainRefine,
              {invariance_obligation(ObRole::Premise, "", inv)}, {open(live)});
}

ProofPtr Kernel::goal_refine(const Sequent& target, const Formula& G) {
  const Modal m = expect_dia(target);
  const Sequent live{target.context, Formula::diamond(m.sys, G)};
  const Sequent inv{target.context,
                    Formula::box(m.sys.with_domain(mk_and(m.sys.domain, negate(m.post))), negate(G))};
  return make(target, StepKind::GoalRefine,
              {invariance_obligation(ObRole::Premise, "", inv)}, {open(live)});
}

ProofPtr Kernel::topo_closed_open(const Sequent& target, const Formula& R) {
  const Modal m = expect_dia(target);
  const Formula& P = m.post;
  const Formula& Q = m.sys.domain;
  if (!P.is_arith() || !Q.is_arith()) {
    throw KernelError("ShapeMismatch", "goal and domain must be arithmetic");
  }
  const auto vars = state_list(m.sys);
  std::vector<Obligation> obs;
  bool ok = false;
  for (TopoProperty prop : {TopoProperty::Closed, TopoProperty::Open}) {
    Obligation op = topo_obligation(ObRole::SideCondition, P, prop, vars);
    Obligation oq = topo_obligation(ObRole::SideCondition, Q, prop, vars);
    discharge(op);
    discharge(oq);
    if (op.status == ObStatus::Valid && oq.status == ObStatus::Valid) {
      obs = {op, oq};
      ok = true;
      break;
    }
    if (obs.empty()) obs = {op, oq};
  }
  if (!ok) {
    ProofPtr node = make(target, StepKind::TopoClosedOpen, std::move(obs), {});
    node->refusal_ = "TopoUnknown";
    return node;
  }
  obs.push_back(arith_obligation(ObRole::SideCondition, "InitialState",
                                 target.context, negate(P), var_order(m.sys)));
  const Sequent inv{target.context, Formula::box(m.sys.with_domain(mk_and(R, negate(P))), Q)};
  obs.push_back(invariance_obligation(ObRole::Premise, "", inv));
  const Sequent live{target.context, Formula::diamond(m.sys.with_domain(R), P)};
  return make(target, StepKind::TopoClosedOpen, std::move(obs), {open(live)});
}

ProofPtr Kernel::topo_semialg(const Sequent& target, const Formula& R) {
  const Modal m = expect_dia(target);
  const Formula& Q = m.sys.domain;
  if (!Q.is_arith()) throw KernelError("ShapeMismatch", "domain must be arithmetic");
  const Sequent inv{target.context,
                    Formula::box(m.sys.with_domain(mk_and(R, mk_not(mk_and(m.post, Q)))), Q)};
  const Sequent live{target.context, Formula::diamond(m.sys.with_domain(R), m.post)};
  return make(target, StepKind::TopoSemialg, {invariance_obligation(ObRole::Premise, "", inv)},
              {open(live)});
}

ProofPtr Kernel::monotone_dia(const Sequent& target, const Formula& R) {
  const Modal m = expect_dia(target);
  const Sequent live{target.context, Formula::diamond(m.sys, R)};
  return make(target, StepKind::MonotoneDia,
              {arith_obligation(ObRole::Premise, "", everywhere(target, m.sys, {m.sys.domain, R}),
                                m.post, var_order(m.sys))},
              {open(live)});
}

ProofPtr Kernel::dia_skip(const Sequent& target) {
  const Modal m = expect_dia(target);
  const Sequent live{with(target.context, {negate(m.post)}), target.succedent};
  return make(target, StepKind::DiaSkip,
              {arith_obligation(ObRole::Internal, "", with(target.context, {m.post}),
                                m.sys.domain, var_order(m.sys))},
              {open(live)});
}

ProofPtr Kernel::exist_global(const std::vector<Formula>& context, const OdeSystem& sys,
                              const Polynomial& bound) {
  if (!sys.clock) throw KernelError("NoClock", "GEx needs a clock");
  if (mentions_state(bound, sys)) {
    throw KernelError("NonConstantBound", "bound '" + print_polynomial(bound) + "' changes along the ODE");
  }
  if (!sys.domain.is_true()) throw KernelError("ShapeMismatch", "GEx has no domain constraint");
  const Sequent c{context, Formula::diamond(sys, Formula::cmp(Polynomial::variable(*sys.clock),
                                                               CmpOp::Gt, bound))};
  return make(c, StepKind::ExistGlobal, {lipschitz_obligation(ObRole::SideCondition, sys)}, {});
}

ProofPtr Kernel::exist_bounded(const std::vector<Formula>& context, const OdeSystem& sys,
                               const Formula& B, const Polynomial& bound) {
  if (!sys.clock) throw KernelError("NoClock", "BEx needs a clock");
  if (mentions_state(bound, sys)) {
    throw KernelError("NonConstantBound", "bound '" + print_polynomial(bound) + "' changes along the ODE");
  }
  if (!sys.domain.is_true()) throw KernelError("ShapeMismatch", "BEx has no domain constraint");
  if (!B.is_arith() || mentions(B, *sys.clock)) {
    throw KernelError("ShapeMismatch", "bounded set must be arithmetic over the ODE variables");
  }
  const Formula post =
      mk_or(mk_not(B), Formula::cmp(Polynomial::variable(*sys.clock), CmpOp::Gt, bound));
  return make({context, Formula::diamond(sys, post)}, StepKind::ExistBounded,
              {topo_obligation(ObRole::SideCondition, B, TopoProperty::Bounded, sys.vars)}, {});
}

ProofPtr Kernel::ghost_clock(const Sequent& target, const std::string& clock) {
  if (!target.succedent.is_modal()) throw KernelError("ShapeMismatch", "dGt needs a modality");
  const OdeSystem& sys = target.succedent.ode();
  bool fresh = !sys.clock && !sys.params.count(clock) && !mentions(target.succedent, clock);
  for (const auto& f : target.context) fresh = fresh && !mentions(f, clock);
  if (!fresh) throw KernelError("ClockNotFresh", "'" + clock + "' is already in use");
  OdeSystem clocked;
  try {
    clocked = with_clock(sys, clock);
  } catch (const InvalidSystem& e) {
    throw KernelError("ClockNotFresh", e.what());
  }
  const Formula post = target.succedent.left();
  const Formula succ = target.succedent.kind() == Formula::Kind::Box
                           ? Formula::box(clocked, post)
                           : Formula::diamond(clocked, post);
  const Sequent child{with(target.context, {Formula::cmp(Polynomial::variable(clock), CmpOp::Eq,
                                                         Polynomial())}),
                      succ};
  return make(target, StepKind::GhostClock, {}, {open(child)});
}

ProofPtr Kernel::ghost_clock_drop(const Sequent& target) {
  const Modal m = expect_box(target);
  if (!m.sys.clock) throw KernelError("NoClock", "nothing to drop");
  const std::string& t = *m.sys.clock;
  if (mentions(m.post, t) || mentions(m.sys.domain, t)) {
    throw KernelError("ShapeMismatch", "clock '" + t + "' is used in the box");
  }
  OdeSystem plain = m.sys;
  plain.clock.reset();
  std::vector<Formula> ctx;
  for (const auto& f : target.context) {
    if (!mentions(f, t)) ctx.push_back(f);
  }
  return make(target, StepKind::GhostClockDrop, {}, {open({ctx, Formula::box(plain, m.post)})});
}

ProofPtr Kernel::ghost_const(const Sequent& target, const std::string& g, const Formula& fact) {
  if (g.rfind("_g", 0) != 0) throw KernelError("ShapeMismatch", "ghost names start with _g");
  bool fresh = !mentions(target.succedent, g);
  for (const auto& f : target.context) fresh = fresh && !mentions(f, g);
  if (!fresh) throw KernelError("ShapeMismatch", "ghost '" + g + "' is not fresh");
  if (fact.kind() != Formula::Kind::Cmp) throw KernelError("ShapeMismatch", "ghost fact must be a comparison");
  const Polynomial d = fact.lhs() - fact.rhs();
  if (d.degree_in(g) != 1) throw KernelError("ShapeMismatch", "ghost fact must be linear in the ghost");
  const Polynomial c = d.partial(g);
  std::vector<Obligation> obs;
  if (!(c.is_constant() && !c.is_zero())) {
    const OdeSystem* sys = target.succedent.is_modal() ? &target.succedent.ode() : nullptr;
    obs.push_back(arith_obligation(ObRole::Internal, "GhostExists",
                                   sys ? context_filter(target.context, *sys) : target.context,
                                   mk_cmp0(c, CmpOp::Ne)));
  }
  return make(target, StepKind::GhostConst, std::move(obs),
              {open({with(target.context, {fact}), target.succedent})});
}

ProofPtr Kernel::cut(const Sequent& target, const Formula& A, ObRole role, std::string label) {
  const VarOrder order = target.succedent.is_modal() ? var_order(target.succedent.ode()) : VarOrder{};
  return make(target, StepKind::Cut,
              {arith_obligation(role, std::move(label), target.context, A, order)},
              {open({with(target.context, {A}), target.succedent})});
}

ProofPtr Kernel::assume(const Sequent& target, std::string label) {
  Obligation ob = assumption_obligation(target.succedent, std::move(label));
  ob.sequent = target;
  return make(target, StepKind::Assume, {ob}, {});
}

ProofPtr Kernel::lemma(const Sequent& target, const std::vector<Formula>& hyps,
                       const Formula& concl) {
  if (!target.succedent.is_modal()) throw KernelError("ShapeMismatch", "lemma needs a modality");
  const OdeSystem& sys = target.succedent.ode();
  Formula closed = hyps.empty() ? concl : Formula::implies(mk_and(hyps), concl);
  const auto ids = free_identifiers(closed);
  const auto state = state_list(sys);
  for (auto it = state.rbegin(); it != state.rend(); ++it) {
    if (ids.count(*it)) closed = Formula::forall(*it, closed);
  }
  std::vector<Formula> lhs = context_filter(target.context, sys);
  lhs.insert(lhs.end(), hyps.begin(), hyps.end());
  return make(target, StepKind::Cut,
              {arith_obligation(ObRole::Internal, "Lemma", lhs, concl, var_order(sys))},
              {open({with(target.context, {closed}), target.succedent})});
}

ProofPtr Kernel::monotone_box(const Sequent& target, const Formula& R) {
  const Modal m = expect_box(target);
  return make(target, StepKind::MonotoneBox,
              {arith_obligation(ObRole::Internal, "", everywhere(target, m.sys, {m.sys.domain, R}),
                                m.post, var_order(m.sys))},
              {open({target.context, Formula::box(m.sys, R)})});
}

ProofPtr Kernel::diff_ind(const Sequent& target, bool strict_boundary) {
  const Modal m = expect_box(target);
  const Formula& C = m.post;
  if (C.kind() != Formula::Kind::Cmp || C.op() == CmpOp::Ne) {
    throw KernelError("HintMismatch", "dI needs an atomic =, >=, >, <= or < postcondition");
  }
  Polynomial a = C.lhs() - C.rhs();
  if (C.op() == CmpOp::Le || C.op() == CmpOp::Lt) a = -a;
  const Polynomial la = lie(a, m.sys);
  const VarOrder order = var_order(m.sys);
  std::vector<Obligation> obs;
  obs.push_back(arith_obligation(ObRole::Internal, "Init", target.context, C, order));
  if (!strict_boundary) {
    const CmpOp rel = C.op() == CmpOp::Eq ? CmpOp::Eq : CmpOp::Ge;
    obs.push_back(arith_obligation(ObRole::Internal, "dI", everywhere(target, m.sys, {m.sys.domain}),
                                   mk_cmp0(la, rel), order));
    return make(target, StepKind::DiffInd, std::move(obs), {});
  }
  if (C.op() == CmpOp::Eq) throw KernelError("HintMismatch", "strict boundary form needs an inequality");
  obs.push_back(arith_obligation(ObRole::Internal, "dI_strict",
                                 everywhere(target, m.sys, {m.sys.domain, mk_cmp0(a, CmpOp::Eq)}),
                                 mk_cmp0(la, CmpOp::Gt), order));
  return make(target, StepKind::DiffIndStrict, std::move(obs), {});
}

ProofPtr Kernel::diff_cut(const Sequent& target, const Formula& C) {
  const Modal m = expect_box(target);
  const Sequent cut{target.context, Formula::box(m.sys, C)};
  const Sequent rest{target.context,
                     Formula::box(m.sys.with_domain(mk_and(m.sys.domain, C)), m.post)};
  return make(target, StepKind::DiffCut, {}, {open(cut), open(rest)});
}

ProofPtr Kernel::diff_weaken(const Sequent& target) {
  const Modal m = expect_box(target);
  return make(target, StepKind::DiffWeaken,
              {arith_obligation(ObRole::Internal, "dW", everywhere(target, m.sys, {m.sys.domain}),
                                m.post, var_order(m.sys))},
              {});
}

ProofPtr Kernel::diff_skip(const Sequent& target) {
  const Modal m = expect_box(target);
  return make(target, StepKind::DiffSkip, {},
              {open({with(target.context, {m.sys.domain}), target.succedent})});
}

ProofPtr Kernel::barrier(const Sequent& target, const Polynomial& p) {
  const Modal m = expect_box(target);
  const Formula& C = m.post;
  bool ok = C.kind() == Formula::Kind::Cmp && C.op() != CmpOp::Eq && C.op() != CmpOp::Ne &&
            !p.is_zero();
  if (ok) {
    Polynomial a = C.lhs() - C.rhs();
    if (C.op() == CmpOp::Ge || C.op() == CmpOp::Gt) a = -a;
    if (a.is_zero()) {
      ok = false;
    } else {
      const Rational ratio = a.leading_term({}).second / p.leading_term({}).second;
      ok = sgn(ratio) > 0 && a == p * ratio;
    }
  }
  if (!ok) {
    throw KernelError("HintMismatch", "BC(" + print_polynomial(p) + ") needs postcondition " +
                                          print_polynomial(p) + " < 0 or <= 0, got '" +
                                          print_formula(C) + "'");
  }
  const VarOrder order = var_order(m.sys);
  std::vector<Obligation> obs;
  obs.push_back(arith_obligation(ObRole::Internal, "Init", target.context, C, order));
  obs.push_back(arith_obligation(ObRole::Internal, "BC",
                                 everywhere(target, m.sys, {m.sys.domain, mk_cmp0(p, CmpOp::Eq)}),
                                 mk_cmp0(lie(p, m.sys), CmpOp::Lt), order));
  return make(target, StepKind::Barrier, std::move(obs), {});
}

ProofPtr Kernel::domain_weaken(const Sequent& target, const Formula& R) {
  const Modal m = expect_box(target);
  return make(target, StepKind::DomainWeaken,
              {arith_obligation(ObRole::Internal, "", everywhere(target, m.sys, {m.sys.domain}), R,
                                var_order(m.sys))},
              {open({target.context, Formula::box(m.sys.with_domain(R), m.post)})});
}

ProofPtr Kernel::derived(const std::string& rule, const Sequent& target,
                         std::vector<Obligation> obs, std::vector<ProofPtr> children) {
  ProofPtr node = make(target, StepKind::Derived, std::move(obs), std::move(children));
  node->name_ = rule;
  return node;
}

ProofPtr Kernel::refused(const std::string& rule, const Sequent& target, const std::string& gate,
                         std::vector<Obligation> obs) {
  ProofPtr node = make(target, StepKind::Derived, std::move(obs), {});
  node->name_ = rule;
  node->refusal_ = gate;
  return node;
}

}  // namespace dlive
