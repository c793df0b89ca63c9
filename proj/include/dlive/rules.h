#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dlive/kernel.h"
#include "dlive/syntax.h"

namespace dlive {

/// Proves Γ ⊢ [f & Q]C by applying hints in order: DI, DC{C; by}, DW, DX,
/// BC{p}, DomainWeaken{R}. With no hints left, tries DW and then DI.
/// Throws KernelError("HintMismatch") on a malformed hint.
ProofPtr prove_invariance(Kernel& k, const Sequent& seq, const std::vector<CertStep>& hints);

/// Names accepted by apply_rule.
const std::vector<std::string>& derived_rule_names();
bool is_derived_rule(const std::string& name);

/// Applies a derived rule to Γ ⊢ <f & Q>P. The returned node proves the
/// target; its own obligations are the rule's premises and side conditions,
/// its children replay the derivation with kernel steps. A failed side
/// condition yields a refused node naming the gate.
/// Throws KernelError("MissingCertificateField") when a required binding is absent.
ProofPtr apply_rule(Kernel& k, const Sequent& target, const CertStep& cert);

/// Γ ⊢ <f & Q>P for a parsed problem.
Sequent problem_sequent(const ProblemFile& pf);

struct CheckReport {
  ProofPtr root;
  Verdict verdict = Verdict::Unknown;
  std::string trace;
};

/// Runs the proof block against the problem sequent. Refinement steps
/// (M_dia, K_dia, DR, COR, SAR, Assume) leave an open goal for the next
/// step; derived rules close it.
CheckReport check_problem(const ProblemFile& pf, const KernelConfig& cfg = {});

/// 0 Proved, 1 Refuted, 2 otherwise.
int exit_code(Verdict v);

// Helpers shared by the rule macros; exposed for testing.

/// Constant c with Γ ⊢ p = c, found by reducing p modulo equalities of Γ.
std::optional<Rational> initial_value(const std::vector<Formula>& gamma, const Polynomial& p);

/// A simple rational c with S ⊢ q >= c (lower) or S ⊢ q <= c (upper),
/// estimated by sampling S and confirmed by the prover.
std::optional<Rational> verified_bound(const Formula& S, const Polynomial& q, bool lower,
                                       const std::vector<std::string>& vars, const Budget& budget,
                                       uint64_t seed = 0);

}  // namespace dlive
