#include <algorithm>

#include "dlive/kernel.h"
#include "dlive/syntax.h"

namespace dlive {

namespace {

// Universally closed hypotheses are instantiated at the free variables of
// the same name.
Formula instantiate(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Forall: return instantiate(f.left());
    case Formula::Kind::And: return mk_and(instantiate(f.left()), instantiate(f.right()));
    default: return f;
  }
}

VarOrder order_of(const Formula& f) {
  if (f.is_modal()) return var_order(f.ode());
  return {};
}

}  // namespace

bool Sequent::operator==(const Sequent& o) const {
  return context == o.context && succedent == o.succedent;
}

std::string print_sequent(const Sequent& s) {
  const VarOrder order = order_of(s.succedent);
  std::string out;
  for (size_t i = 0; i < s.context.size(); ++i) {
    if (i) out += ", ";
    out += print_formula(s.context[i], order);
  }
  if (!out.empty()) out += " ";
  return out + "|- " + print_formula(s.succedent, order);
}

const char* step_name(StepKind k) {
  switch (k) {
    case StepKind::DomainRefine: return "DR⟨·⟩";
    case StepKind::GoalRefine: return "K⟨&⟩";
    case StepKind::ExistGlobal: return "GEx";
    case StepKind::ExistBounded: return "BEx";
    case StepKind::TopoClosedOpen: return "COR";
    case StepKind::TopoSemialg: return "SAR";
    case StepKind::MonotoneDia: return "M◇′";
    case StepKind::MonotoneBox: return "M□′";
    case StepKind::GhostClock: return "dGt";
    case StepKind::GhostClockDrop: return "dGt⁻¹";
    case StepKind::GhostConst: return "Ghost";
    case StepKind::DiffInd: return "dI";
    case StepKind::DiffIndStrict: return "dI_strict";
    case StepKind::DiffCut: return "dC";
    case StepKind::DiffWeaken: return "dW";
    case StepKind::DiffSkip: return "DX";
    case StepKind::Barrier: return "BC";
    case StepKind::DomainWeaken: return "DomWeaken";
    case StepKind::DiaSkip: return "DX◇";
    case StepKind::Cut: return "Cut";
    case StepKind::Derived: return "Derived";
    case StepKind::Assume: return "Assume";
    case StepKind::Open: return "Open";
  }
  return "?";
}

std::vector<StepKind> all_step_kinds() {
  std::vector<StepKind> out;
  for (int k = 0; k <= static_cast<int>(StepKind::Open); ++k) out.push_back(StepKind(k));
  return out;
}

const std::vector<StepShape>& step_table() {
  using K = StepKind;
  using B = BoxDomain;
  static const std::vector<StepShape> table = {
      {K::DomainRefine, true, B::Refined, false, false},
      {K::GoalRefine, false, B::OldAndNotGoal, false, false},
      {K::ExistGlobal, false, B::None, false, false},
      {K::ExistBounded, false, B::None, true, false},
      {K::TopoClosedOpen, true, B::RefinedAndNotGoal, true, true},
      {K::TopoSemialg, true, B::RefinedAndNotGoalAndOld, false, false},
      {K::MonotoneDia, false, B::None, false, false},
      {K::MonotoneBox, false, B::None, false, false},
      {K::GhostClock, false, B::None, false, false},
      {K::GhostClockDrop, false, B::None, false, false},
      {K::GhostConst, false, B::None, false, false},
      {K::DiffInd, false, B::None, false, false},
      {K::DiffIndStrict, false, B::None, false, false},
      {K::DiffCut, false, B::Other, false, false},
      {K::DiffWeaken, false, B::None, false, false},
      {K::DiffSkip, false, B::None, false, false},
      {K::Barrier, false, B::None, false, false},
      {K::DomainWeaken, false, B::Other, false, false},
      {K::DiaSkip, false, B::None, false, false},
      {K::Cut, false, B::None, false, false},
      {K::Derived, false, B::None, false, false},
      {K::Assume, false, B::None, false, false},
      {K::Open, false, B::None, false, false},
  };
  return table;
}

const char* ob_kind_text(ObKind k) {
  switch (k) {
    case ObKind::Arith: return "Arith";
    case ObKind::Topo: return "Topo";
    case ObKind::GlobalLipschitz: return "GlobalLipschitz";
    case ObKind::Invariance: return "Invariance";
    case ObKind::Assumption: return "Assumption";
  }
  return "?";
}

const char* ob_status_text(ObStatus s, ObKind k) {
  const bool property = k == ObKind::Topo || k == ObKind::GlobalLipschitz;
  switch (s) {
    case ObStatus::Valid: return property ? "Holds" : (k == ObKind::Invariance ? "Proved" : "Valid");
    case ObStatus::ValidInBox: return k == ObKind::Invariance ? "ConditionallyProved" : "ValidInBox";
    case ObStatus::Falsified: return k == ObKind::Invariance ? "Refuted" : "Falsified";
    case ObStatus::Unknown: return "Unknown";
    case ObStatus::Assumed: return "Assumed";
  }
  return "?";
}

const char* ob_role_text(ObRole r) {
  switch (r) {
    case ObRole::Premise: return "premise";
    case ObRole::SideCondition: return "side";
    case ObRole::Internal: return "internal";
  }
  return "?";
}

std::string Obligation::text() const {
  std::string out;
  switch (kind) {
    case ObKind::Arith: {
      const VarOrder& order = arith.universals;
      out = print_formula(arith.hypothesis, order) + " |- " + print_formula(arith.conclusion, order);
      if (box) {
        out += " in box";
        for (const auto& [v, iv] : *box) out += " " + v + "∈" + iv.to_string();
      }
      break;
    }
    case ObKind::Topo:
      out = std::string(property_text(property)) + "(" + print_formula(formula) + ")";
      break;
    case ObKind::GlobalLipschitz: {
      out = "GlobalLipschitz(";
      const VarOrder order = var_order(ode);
      for (size_t i = 0; i < ode.vars.size(); ++i) {
        if (i) out += ", ";
        out += ode.vars[i] + "' = " + print_polynomial(ode.rhs[i], order);
      }
      out += ")";
      break;
    }
    case ObKind::Invariance:
      out = print_sequent(sequent);
      break;
    case ObKind::Assumption:
      out = print_formula(formula);
      break;
  }
  if (!label.empty()) out = label + ": " + out;
  return out;
}

Obligation arith_obligation(ObRole role, std::string label, const std::vector<Formula>& hyps,
                            Formula concl, const VarOrder& order, std::optional<Box> box) {
  Obligation ob;
  ob.kind = ObKind::Arith;
  ob.role = role;
  ob.label = std::move(label);
  ob.arith.universals = order;
  std::vector<Formula> inst;
  for (const auto& h : hyps) inst.push_back(instantiate(h));
  ob.arith.hypothesis = mk_and(inst);
  ob.arith.conclusion = std::move(concl);
  ob.box = std::move(box);
  return ob;
}

Obligation topo_obligation(ObRole role, Formula f, TopoProperty prop,
                           std::vector<std::string> vars) {
  Obligation ob;
  ob.kind = ObKind::Topo;
  ob.role = role;
  ob.formula = std::move(f);
  ob.property = prop;
  ob.vars = std::move(vars);
  return ob;
}

Obligation lipschitz_obligation(ObRole role, const OdeSystem& sys) {
  Obligation ob;
  ob.kind = ObKind::GlobalLipschitz;
  ob.role = role;
  ob.ode = sys;
  return ob;
}

Obligation invariance_obligation(ObRole role, std::string label, Sequent seq) {
  Obligation ob;
  ob.kind = ObKind::Invariance;
  ob.role = role;
  ob.label = std::move(label);
  ob.sequent = std::move(seq);
  return ob;
}

Obligation assumption_obligation(Formula f, std::string label) {
  Obligation ob;
  ob.kind = ObKind::Assumption;
  ob.role = ObRole::Premise;
  ob.label = std::move(label);
  ob.formula = std::move(f);
  ob.status = ObStatus::Assumed;
  return ob;
}

const char* verdict_text(Verdict v) {
  switch (v) {
    case Verdict::Proved: return "Proved";
    case Verdict::ConditionallyProved: return "ConditionallyProved";
    case Verdict::Unknown: return "Unknown";
    case Verdict::Refuted: return "Refuted";
  }
  return "?";
}

Verdict worst(Verdict a, Verdict b) {
  auto rank = [](Verdict v) {
    switch (v) {
      case Verdict::Proved: return 0;
      case Verdict::ConditionallyProved: return 1;
      case Verdict::Unknown: return 2;
      case Verdict::Refuted: return 3;
    }
    return 2;
  };
  return rank(a) >= rank(b) ? a : b;
}

Verdict ob_verdict(const Obligation& ob) {
  if (ob.kind == ObKind::Invariance) return ob.proof ? ob.proof->verdict() : Verdict::Unknown;
  switch (ob.status) {
    case ObStatus::Valid: return Verdict::Proved;
    case ObStatus::ValidInBox:
    case ObStatus::Assumed: return Verdict::ConditionallyProved;
    case ObStatus::Falsified: return Verdict::Refuted;
    case ObStatus::Unknown: return Verdict::Unknown;
  }
  return Verdict::Unknown;
}

Verdict ProofNode::verdict() const {
  if (kind_ == StepKind::Open) return Verdict::Unknown;
  if (refusal_) return Verdict::Unknown;
  Verdict v = Verdict::Proved;
  for (const auto& ob : obligations_) v = worst(v, ob_verdict(ob));
  for (const auto& c : children_) v = worst(v, c->verdict());
  return v;
}

void ProofNode::close(size_t i, ProofPtr proof) {
  if (i >= children_.size() || !children_[i]->is_open()) {
    throw KernelError("ShapeMismatch", "no open premise " + std::to_string(i));
  }
  if (!proof || !(proof->conclusion() == children_[i]->conclusion())) {
    throw KernelError("ShapeMismatch",
                      "proof of '" + (proof ? print_sequent(proof->conclusion()) : "") +
                          "' does not match premise '" +
                          print_sequent(children_[i]->conclusion()) + "'");
  }
  children_[i] = std::move(proof);
}

void ProofNode::close_invariance(size_t i, ProofPtr proof) {
  if (i >= obligations_.size() || obligations_[i].kind != ObKind::Invariance ||
      obligations_[i].proof) {
    throw KernelError("ShapeMismatch", "no open invariance obligation " + std::to_string(i));
  }
  if (!proof || !(proof->conclusion() == obligations_[i].sequent)) {
    throw KernelError("ShapeMismatch", "invariance proof concludes a different sequent");
  }
  obligations_[i].proof = std::move(proof);
  const Verdict v = obligations_[i].proof->verdict();
  obligations_[i].status = v == Verdict::Proved               ? ObStatus::Valid
                           : v == Verdict::ConditionallyProved ? ObStatus::ValidInBox
                           : v == Verdict::Refuted             ? ObStatus::Falsified
                                                               : ObStatus::Unknown;
}

std::vector<Formula> context_filter(const std::vector<Formula>& gamma, const OdeSystem& sys) {
  const std::set<std::string> state = sys.state_vars();
  std::vector<Formula> out;
  for (const auto& f : gamma) {
    const auto ids = free_identifiers(f);
    if (std::none_of(ids.begin(), ids.end(), [&](const std::string& v) { return state.count(v); })) {
      out.push_back(f);
    }
  }
  return out;
}

Formula negate(const Formula& f) {
  if (f.kind() == Formula::Kind::Cmp) return Formula::cmp(f.lhs(), cmp_negate(f.op()), f.rhs());
  return mk_not(f);
}

Polynomial lie(const Polynomial& p, const OdeSystem& sys, unsigned k) {
  OdeSystem s = sys;
  const std::set<std::string> state = sys.state_vars();
  for (const auto& v : p.variables()) {
    if (!state.count(v)) s.params.insert(v);
  }
  for (const auto& r : sys.rhs) {
    for (const auto& v : r.variables()) {
      if (!state.count(v)) s.params.insert(v);
    }
  }
  return higher_lie(p, s, k);
}

}  // namespace dlive
