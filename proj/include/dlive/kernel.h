#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dlive/arith.h"
#include "dlive/ode.h"
#include "dlive/topology.h"

namespace dlive {

/// Γ ⊢ φ
struct Sequent {
  std::vector<Formula> context;
  Formula succedent;

  bool operator==(const Sequent& o) const;
};

std::string print_sequent(const Sequent& s);

/// Structural errors raised by step constructors.
class KernelError : public std::runtime_error {
 public:
  KernelError(std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

enum class StepKind {
  DomainRefine,    // DR<.>
  GoalRefine,      // K<&>
  ExistGlobal,     // GEx
  ExistBounded,    // BEx
  TopoClosedOpen,  // COR
  TopoSemialg,     // SAR
  MonotoneDia,     // M<>'
  MonotoneBox,     // M[]'
  GhostClock,      // dGt
  GhostClockDrop,  // dGt, inverse direction on boxes
  GhostConst,      // fresh constant with a satisfiable defining fact
  DiffInd,         // dI
  DiffIndStrict,   // dI with the strict boundary condition
  DiffCut,         // dC
  DiffWeaken,      // dW
  DiffSkip,        // DX on boxes
  Barrier,         // BC
  DomainWeaken,
  DiaSkip,         // DX on diamonds
  Cut,
  Derived,         // a derived rule application
  Assume,
  Open,
};

const char* step_name(StepKind k);
std::vector<StepKind> all_step_kinds();

/// Which box obligation a step generates when it changes the domain of a
/// liveness goal.
enum class BoxDomain { None, Refined, RefinedAndNotGoal, RefinedAndNotGoalAndOld, OldAndNotGoal, Other };

struct StepShape {
  StepKind kind;
  bool refines_domain;  // <f & R>P is the liveness premise of a conclusion <f & Q>P
  BoxDomain box_domain;
  bool topo_gate;
  bool initial_not_goal;  // Γ ⊢ ¬P is a premise
};

/// Shape of the liveness premise and box obligation of every step.
const std::vector<StepShape>& step_table();

enum class ObKind { Arith, Topo, GlobalLipschitz, Invariance, Assumption };
enum class ObStatus { Valid, ValidInBox, Falsified, Unknown, Assumed };
enum class ObRole { Premise, SideCondition, Internal };

const char* ob_kind_text(ObKind k);
const char* ob_status_text(ObStatus s, ObKind k);
const char* ob_role_text(ObRole r);

class ProofNode;
using ProofPtr = std::shared_ptr<ProofNode>;

struct Obligation {
  ObKind kind = ObKind::Arith;
  ObRole role = ObRole::Internal;
  std::string label;
  ObStatus status = ObStatus::Unknown;
  std::string detail;

  // Arith
  ArithObligation arith;
  std::optional<Box> box;
  std::optional<Point> counterexample;
  // Topo
  Formula formula;
  TopoProperty property = TopoProperty::Closed;
  std::vector<std::string> vars;
  std::optional<Rational> witness;
  // GlobalLipschitz
  OdeSystem ode;
  // Invariance
  Sequent sequent;
  ProofPtr proof;

  /// One-line description of what must hold.
  std::string text() const;
};

Obligation arith_obligation(ObRole role, std::string label, const std::vector<Formula>& hyps,
                            Formula concl, const VarOrder& order = {},
                            std::optional<Box> box = std::nullopt);
Obligation topo_obligation(ObRole role, Formula f, TopoProperty prop,
                           std::vector<std::string> vars);
Obligation lipschitz_obligation(ObRole role, const OdeSystem& sys);
Obligation invariance_obligation(ObRole role, std::string label, Sequent seq);
Obligation assumption_obligation(Formula f, std::string label);

enum class Verdict { Proved, ConditionallyProved, Unknown, Refuted };
const char* verdict_text(Verdict v);
/// Refuted > Unknown > ConditionallyProved > Proved
Verdict worst(Verdict a, Verdict b);
Verdict ob_verdict(const Obligation& ob);

class ProofNode {
 public:
  const Sequent& conclusion() const { return conclusion_; }
  StepKind kind() const { return kind_; }
  /// Step name, or the rule name for derived rules.
  const std::string& name() const { return name_; }
  const std::vector<ProofPtr>& children() const { return children_; }
  const std::vector<Obligation>& obligations() const { return obligations_; }
  const std::optional<std::string>& refusal() const { return refusal_; }
  const std::vector<std::string>& notes() const { return notes_; }

  bool is_open() const { return kind_ == StepKind::Open; }
  Verdict verdict() const;

  /// Replaces open child i by a proof whose conclusion is the same sequent.
  void close(size_t i, ProofPtr proof);
  /// Attaches a proof to invariance obligation i; the sequents must match.
  void close_invariance(size_t i, ProofPtr proof);
  void add_note(std::string note) { notes_.push_back(std::move(note)); }

 private:
  friend class Kernel;
  ProofNode(Sequent c, StepKind k, std::string name)
      : conclusion_(std::move(c)), kind_(k), name_(std::move(name)) {}

  Sequent conclusion_;
  StepKind kind_;
  std::string name_;
  std::vector<ProofPtr> children_;
  std::vector<Obligation> obligations_;
  std::optional<std::string> refusal_;
  std::vector<std::string> notes_;
};

struct KernelConfig {
  Budget budget;
  Budget topo_budget{4000, 1.0};
  size_t falsify_samples = 4000;
  uint64_t seed = 0;
};

/// Formulas of Γ that mention no state variable of sys (kept across rules
/// that discard state-dependent assumptions).
std::vector<Formula> context_filter(const std::vector<Formula>& gamma, const OdeSystem& sys);

/// Negation that flips a single comparison instead of wrapping it.
Formula negate(const Formula& f);

/// Lie derivative treating every identifier outside the state as constant.
Polynomial lie(const Polynomial& p, const OdeSystem& sys, unsigned k = 1);

/// The only way to build proof nodes. Obligations are discharged when a node
/// is created.
class Kernel {
 public:
  explicit Kernel(KernelConfig cfg = {}) : cfg_(cfg) {}

  const KernelConfig& config() const { return cfg_; }

  ProofPtr open(Sequent s) const;

  // Refinement steps on Γ ⊢ <f & Q>P.
  ProofPtr refine_domain(const Sequent& target, const Formula& R);
  ProofPtr goal_refine(const Sequent& target, const Formula& G);
  ProofPtr topo_closed_open(const Sequent& target, const Formula& R);
  ProofPtr topo_semialg(const Sequent& target, const Formula& R);
  ProofPtr monotone_dia(const Sequent& target, const Formula& R);
  ProofPtr dia_skip(const Sequent& target);

  // Existence axioms; leaves.
  ProofPtr exist_global(const std::vector<Formula>& context, const OdeSystem& sys,
                        const Polynomial& bound);
  ProofPtr exist_bounded(const std::vector<Formula>& context, const OdeSystem& sys,
                         const Formula& B, const Polynomial& bound);

  // Context and ghost steps.
  ProofPtr ghost_clock(const Sequent& target, const std::string& clock);
  ProofPtr ghost_clock_drop(const Sequent& target);
  /// Adds a defining fact for a fresh ghost constant g. The fact must be a
  /// comparison linear in g, so some value of g satisfies it.
  ProofPtr ghost_const(const Sequent& target, const std::string& g, const Formula& fact);
  ProofPtr cut(const Sequent& target, const Formula& A, ObRole role = ObRole::Internal,
               std::string label = "Cut");
  ProofPtr assume(const Sequent& target, std::string label = "Assumption");
  /// Proves Γc ∧ hyps ⊢ concl and adds its closure over the state variables
  /// to the context.
  ProofPtr lemma(const Sequent& target, const std::vector<Formula>& hyps, const Formula& concl);

  // Invariance steps on Γ ⊢ [f & Q]C.
  ProofPtr monotone_box(const Sequent& target, const Formula& R);
  ProofPtr diff_ind(const Sequent& target, bool strict_boundary);
  ProofPtr diff_cut(const Sequent& target, const Formula& C);
  ProofPtr diff_weaken(const Sequent& target);
  ProofPtr diff_skip(const Sequent& target);
  ProofPtr barrier(const Sequent& target, const Polynomial& p);
  ProofPtr domain_weaken(const Sequent& target, const Formula& R);

  /// A derived rule: obligations are discharged, children are attached as is.
  ProofPtr derived(const std::string& rule, const Sequent& target, std::vector<Obligation> obs,
                   std::vector<ProofPtr> children);
  /// A derived rule that refused to fire because a gate failed.
  ProofPtr refused(const std::string& rule, const Sequent& target, const std::string& gate,
                   std::vector<Obligation> obs);

  /// Box used for arithmetic obligations created from now on.
  void set_arith_box(std::optional<Box> box) { arith_box_ = std::move(box); }

  /// Discharges an obligation in place (arith, topo and Lipschitz kinds).
  void discharge(Obligation& ob);
  /// Re-runs every obligation of a tree without caches.
  void recheck(const ProofPtr& node);

 private:
  ProofPtr make(const Sequent& c, StepKind k, std::vector<Obligation> obs,
                std::vector<ProofPtr> children);

  KernelConfig cfg_;
  std::optional<Box> arith_box_;
  std::map<std::string, Obligation> arith_cache_;
  std::map<std::string, TopoVerdict> topo_cache_;
};

/// Post-order trace: `<depth> <RuleName> <verdict> -- <sequent>` per node,
/// then `ob <index> <Kind> <Status> -- <text>` per obligation.
std::string render_trace(const ProofPtr& root);

/// Obligations in trace order (the index in the trace is position + 1).
std::vector<const Obligation*> collect_obligations(const ProofPtr& root);

}  // namespace dlive
