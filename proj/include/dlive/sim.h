#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "dlive/rules.h"
#include "dlive/syntax.h"

namespace dlive {

class UnsamplableInitSet : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InsufficientSamples : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using NumPoint = std::map<std::string, double>;

/// Polynomial compiled for fast floating-point evaluation over a fixed
/// variable list.
class NumPoly {
 public:
  NumPoly() = default;
  NumPoly(const Polynomial& p, const std::vector<std::string>& vars);
  double operator()(const double* x) const;

 private:
  struct Term {
    double coeff;
    std::vector<std::pair<size_t, unsigned>> powers;
  };
  std::vector<Term> terms_;
};

/// Arithmetic formula compiled over a fixed variable list. Atoms can be read
/// off individually for event detection.
class NumFormula {
 public:
  NumFormula() = default;
  NumFormula(const Formula& f, const std::vector<std::string>& vars);

  /// Exact floating-point truth value.
  bool eval(const double* x) const;
  /// Truth value with atoms judged at tolerance eta: equalities hold when
  /// |p| <= eta; with `pessimistic`, strict atoms and disequalities need
  /// margin eta while non-strict atoms get slack eta.
  bool eval_tol(const double* x, double eta, bool pessimistic) const;
  /// Sign (-1, 0, +1) of every atom polynomial, in a fixed order.
  std::vector<int> signs(const double* x) const;

 private:
  struct Node {
    enum class Kind { True, False, Atom, Not, And, Or } kind;
    size_t atom = 0;
    std::vector<Node> kids{};
  };
  bool eval_node(const Node& n, const double* x, double eta, int mode) const;

  Node root_{Node::Kind::True};
  std::vector<NumPoly> polys_;
  std::vector<CmpOp> ops_;
};

enum class EventKind { GoalEntered, DomainExited, BlowUpSuspected, HorizonReached };
const char* event_text(EventKind k);

struct Event {
  double time = 0;
  EventKind kind = EventKind::HorizonReached;
};

struct StepStats {
  size_t accepted = 0;
  size_t rejected = 0;
  double min_step = 0;
};

/// Time-ordered samples of the ODE variables.
struct Trajectory {
  std::vector<std::string> vars;  // ODE variables, then the clock
  NumPoint params;
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  std::vector<Event> events;
  StepStats stats;
};

struct SimOptions {
  double horizon = 10;
  double tol = 1e-9;
  double max_step = 0.05;
  double blowup = 1e9;
  double event_tol = 1e-9;
  double eta = 1e-7;  // boundary tolerance for goal and domain atoms
};

/// Adaptive RK4 (step doubling) from `init` until the goal is entered, the
/// domain is exited, the state blows up or the horizon is reached. Parameters
/// are read from `init` and held fixed.
Trajectory simulate(const OdeSystem& sys, const NumPoint& init, const Formula& goal,
                    const SimOptions& opt = {});

/// Fixed-step RK4 with samples every `dt` (each split into `substeps`).
Trajectory integrate_uniform(const OdeSystem& sys, const NumPoint& init, double horizon,
                             double dt, unsigned substeps = 4);

enum class SampleClass { Witness, RefutedSample, BlowUp, Inconclusive };
const char* sample_class_text(SampleClass c);

struct SampleResult {
  NumPoint init;
  SampleClass cls = SampleClass::Inconclusive;
  Event last;
  Trajectory traj;
};

struct FalsifyReport {
  std::vector<SampleResult> samples;
  std::map<SampleClass, size_t> counts;
  /// 0 witnesses only, 1 some refuted or blown-up sample, 2 otherwise.
  int exit_code() const;
  std::string summary() const;
};

/// Initial states satisfying the `assume` block. Throws UnsamplableInitSet.
std::vector<NumPoint> sample_initial(const ProblemFile& pf, size_t n, uint64_t seed);

FalsifyReport falsify_liveness(const ProblemFile& pf, size_t samples, uint64_t seed,
                               const SimOptions& opt = {});

struct LieReport {
  double max_error = 0;
  double h = 0;
  size_t points = 0;
};

/// Compares centered differences of p along the trajectory with L_f p.
/// Needs uniformly spaced samples whose spacing divides h.
LieReport lie_consistency_check(const Polynomial& p, const OdeSystem& sys, const Trajectory& traj,
                                double h);

/// `t,<var>,...` header followed by one row per sample.
std::string trajectory_csv(const Trajectory& traj);

struct CatalogEntry {
  std::string id;
  std::string source;  // problem file text
  ProblemFile problem;
  std::string broken_rule;
  std::string gate;  // expected refusal gate; empty when no rule applies
  std::string expectation;
  EventKind outcome = EventKind::HorizonReached;
  std::string measure;  // variable whose maximum is compared; empty means event time
  double expected = 0;
  double tolerance = 0;
};

const std::vector<CatalogEntry>& catalog();

struct CatalogResult {
  std::string id;
  bool gate_ok = false;
  bool falsifier_ok = false;
  double measured = 0;  // blow-up or exit time observed by the falsifier
  std::string detail;
  bool pass() const { return gate_ok && falsifier_ok; }
};

CatalogResult run_catalog_entry(const CatalogEntry& e, uint64_t seed = 0);
std::vector<CatalogResult> run_catalog(uint64_t seed = 0);

/// Step kinds whose shape would conclude <f & Q>P from <f & R>P and
/// [f & R & !P]Q without a topological gate or an initial-state premise.
std::vector<StepKind> unsound_refinement_steps();

}  // namespace dlive
