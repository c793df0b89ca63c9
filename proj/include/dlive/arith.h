#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dlive/formula.h"
#include "dlive/interval.h"

namespace dlive {

/// forall universals. hypothesis -> conclusion, over quantifier-free bodies.
struct ArithObligation {
  std::vector<std::string> universals;
  Formula hypothesis;
  Formula conclusion;
};

enum class ArithStatus { Valid, Falsified, Unknown };
const char* status_text(ArithStatus s);

using Point = std::map<std::string, Rational>;

struct ArithStats {
  size_t cells = 0;
  size_t max_depth = 0;
  size_t certified_disjuncts = 0;
  size_t disjuncts = 0;
  double seconds = 0;
};

struct ArithVerdict {
  ArithStatus status = ArithStatus::Unknown;
  std::optional<Point> counterexample;
  ArithStats trace;
  /// Valid over all reals (false when validity was only shown inside a caller box).
  bool global = true;
  /// Why the verdict is Unknown: "BudgetExhausted", "UnboundedDomain", ...
  std::string reason;
};

struct Budget {
  size_t max_cells = 200000;
  double max_seconds = 10.0;
};

/// Universals in declaration order followed by any other free identifiers.
std::vector<std::string> effective_universals(const ArithObligation& ob);

/// Sound, incomplete decision: Valid is never returned for a falsifiable
/// obligation, and Falsified always carries an exactly checked counterexample.
/// With a box, the search is restricted to it and `global` reports whether the
/// box was implied by the hypothesis.
ArithVerdict prove_implication(const ArithObligation& ob, const std::optional<Box>& box = {},
                               const Budget& budget = {});

/// Random and boundary-biased rational sampling. Never returns Valid. The
/// sampling region is the box (or hypothesis bounds, else [-10, 10]) scaled
/// by `spread`.
ArithVerdict falsify(const ArithObligation& ob, size_t samples, uint64_t seed,
                     const std::optional<Box>& box = {}, double spread = 1.0);

/// Exact check that hypothesis holds and conclusion fails at the point.
bool is_counterexample(const ArithObligation& ob, const Point& point);

/// Per-variable bounds implied syntactically by a formula's top-level
/// conjuncts (linear single-variable atoms and c - sum a_i x_i^2 >= 0).
Box implied_box(const Formula& f);

/// SMT-LIB2 (QF_NRA) script asserting hypothesis and the negated conclusion.
std::string emit_smtlib(const ArithObligation& ob);
/// `ob-<index>-<fnv1a64 hex>.smt2`
std::string smtlib_filename(size_t index, const ArithObligation& ob);

}  // namespace dlive
