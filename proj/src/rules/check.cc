#include "internal.h"

namespace dlive {

namespace {

using namespace rules_detail;

void prove_invariances(Kernel& k, const ProofPtr& node, const std::vector<CertStep>& hints) {
  for (size_t i = 0; i < node->obligations().size(); ++i) {
    if (node->obligations()[i].kind == ObKind::Invariance && !node->obligations()[i].proof) {
      node->close_invariance(i, prove_invariance(k, node->obligations()[i].sequent, hints));
    }
  }
}

ProofPtr refinement(Kernel& k, const Sequent& goal, const CertStep& step) {
  const std::vector<CertStep> hints = hints_of(step, "inv");
  ProofPtr node;
  if (step.rule == "M_dia") {
    return k.monotone_dia(goal, need_formula(step, "R"));
  } else if (step.rule == "K_dia") {
    node = k.goal_refine(goal, need_formula(step, "G"));
  } else if (step.rule == "DR") {
    node = k.refine_domain(goal, need_formula(step, "R"));
  } else if (step.rule == "COR") {
    node = k.topo_closed_open(goal, need_formula(step, "R"));
  } else if (step.rule == "SAR") {
    node = k.topo_semialg(goal, need_formula(step, "R"));
  } else if (step.rule == "Assume") {
    return k.assume(goal);
  } else {
    throw KernelError("UnknownRule", "'" + step.rule + "' cannot be used as a proof step");
  }
  prove_invariances(k, node, hints);
  return node;
}

bool input_error(const KernelError& e) {
  return e.code() == "MissingCertificateField" || e.code() == "UnknownRule";
}

}  // namespace

Sequent problem_sequent(const ProblemFile& pf) {
  return {pf.assumptions, Formula::diamond(pf.ode, pf.goal)};
}

CheckReport check_problem(const ProblemFile& pf, const KernelConfig& cfg) {
  Kernel k(cfg);
  Chain ch{problem_sequent(pf), nullptr};
  for (const auto& step : pf.certificate) {
    if (ch.root && !has_open(ch.root)) {
      throw KernelError("UnknownRule", "step '" + step.rule + "' follows a closed goal");
    }
    const Sequent goal = ch.goal();
    ProofPtr node;
    try {
      node = is_derived_rule(step.rule) ? apply_rule(k, goal, step) : refinement(k, goal, step);
    } catch (const KernelError& e) {
      if (input_error(e)) throw;
      node = k.refused(step.rule, goal, e.code(), {});
      node->add_note(e.what());
    }
    ch.push(node);
    if (node->refusal()) break;
  }
  CheckReport out;
  out.root = ch.root ? ch.root : k.open(ch.start);
  out.verdict = out.root->verdict();
  out.trace = render_trace(out.root);
  return out;
}

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::Proved: return 0;
    case Verdict::Refuted: return 1;
    default: return 2;
  }
}

}  // namespace dlive
