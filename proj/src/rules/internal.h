#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dlive/rules.h"

namespace dlive::rules_detail {

const Binding* find(const CertStep& c, std::string_view key);
Polynomial need_poly(const CertStep& c, std::string_view key);
std::optional<Polynomial> opt_poly(const CertStep& c, std::string_view key);
Formula need_formula(const CertStep& c, std::string_view key);
std::optional<Formula> opt_formula(const CertStep& c, std::string_view key);
std::vector<CertStep> hints_of(const CertStep& c, std::string_view key);

CertStep make_step(std::string rule, std::vector<Binding> bindings = {});
Binding bind(std::string key, BindingValue value);

/// prove_invariance that reuses any proof in `known` whose conclusion is the
/// sequent at hand.
ProofPtr prove_invariance_with(Kernel& k, const Sequent& seq, std::span<const CertStep> hints,
                               const std::vector<ProofPtr>& known);

/// Lowest-ranked verdict wins; ties keep a.
bool better(Verdict a, Verdict b);

/// Replaces the single open leaf reachable from `root` by `proof`.
void close_open(const ProofPtr& root, const ProofPtr& proof);
bool has_open(const ProofPtr& root);
/// Conclusion of the single open leaf below `root`.
const Sequent& open_goal(const ProofPtr& root);

enum class Exit { Global, Bounded, Assume };

/// Bound chain after the clock ghost: proves Γ' ⊢ <f, t'=1 & true>P from
/// L^i p >= q_i(t) with q_0(t) eventually above `top`.
struct Integration {
  Polynomial p;
  unsigned k = 1;
  std::vector<std::optional<Polynomial>> init;  // lower bound on L^i p at time 0
  Polynomial eps;
  Polynomial top;
  std::optional<Formula> stay;  // G = !stay | q_0 > top
  std::vector<CertStep> pre_hints;
  Exit exit = Exit::Global;
  std::vector<ProofPtr> known;
};

ProofPtr integrate(Kernel& k, const Sequent& clocked, const Integration& spec);

/// Adds ghosts for undetermined initial values and the clock, then integrates.
/// Missing `spec.init` entries are read off the context or named by ghosts.
ProofPtr clocked_chain(Kernel& k, const Sequent& target, Integration spec);

/// Appends proof steps, each closing the open leaf left by the previous one.
struct Chain {
  Sequent start;
  ProofPtr root;
  void push(const ProofPtr& step);
  const Sequent& goal() const { return root ? open_goal(root) : start; }
};

extern const char* const kClock;

}  // namespace dlive::rules_detail
