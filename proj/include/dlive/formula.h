#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dlive/polynomial.h"

namespace dlive {

enum class CmpOp { Eq, Ne, Ge, Gt, Le, Lt };

const char* cmp_text(CmpOp op);
/// Logical negation: !(a >= b) is a < b.
CmpOp cmp_negate(CmpOp op);
/// Operand swap: a >= b is b <= a.
CmpOp cmp_flip(CmpOp op);
/// Whether `sign` (of lhs - rhs) satisfies the comparison.
bool cmp_holds(CmpOp op, int sign);

struct OdeSystem;

/// Immutable first-order formula over polynomial comparisons with ODE
/// modalities. Copies share structure.
class Formula {
 public:
  enum class Kind { True, False, Cmp, Not, And, Or, Implies, Forall, Exists, Box, Diamond };

  Formula();  // true

  static Formula tru();
  static Formula fls();
  static Formula cmp(Polynomial lhs, CmpOp op, Polynomial rhs);
  static Formula neg(Formula a);
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula implies(Formula a, Formula b);
  static Formula forall(std::string var, Formula body);
  static Formula exists(std::string var, Formula body);
  static Formula box(OdeSystem ode, Formula post);
  static Formula diamond(OdeSystem ode, Formula post);

  Kind kind() const;
  const Polynomial& lhs() const;
  const Polynomial& rhs() const;
  CmpOp op() const;
  /// Operand of Not / quantifier body / modality postcondition, or left operand.
  const Formula& left() const;
  const Formula& right() const;
  const std::string& var() const;
  const OdeSystem& ode() const;

  bool is_true() const { return kind() == Kind::True; }
  bool is_false() const { return kind() == Kind::False; }
  bool is_modal() const { return kind() == Kind::Box || kind() == Kind::Diamond; }
  /// No modalities and no quantifiers anywhere.
  bool is_arith() const;

  bool operator==(const Formula& o) const;
  bool operator!=(const Formula& o) const { return !(*this == o); }

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

/// x' = f(x) & Q with constant parameters and an optional unit-rate clock.
struct OdeSystem {
  std::vector<std::string> vars;
  std::vector<Polynomial> rhs;
  Formula domain;
  std::set<std::string> params;
  std::optional<std::string> clock;

  /// ODE variables plus the clock.
  std::set<std::string> state_vars() const;
  /// Same equations, different domain.
  OdeSystem with_domain(Formula q) const;
  /// Equations and clock only; domains and params are ignored.
  bool same_dynamics(const OdeSystem& o) const;
  bool operator==(const OdeSystem& o) const;
};

/// Simplifying constructors (true/false absorption, double negation).
Formula mk_not(const Formula& a);
Formula mk_and(const Formula& a, const Formula& b);
Formula mk_or(const Formula& a, const Formula& b);
Formula mk_and(const std::vector<Formula>& fs);
Formula mk_or(const std::vector<Formula>& fs);
Formula mk_cmp0(const Polynomial& p, CmpOp op);

/// Identifiers occurring free (quantified identifiers excluded; modality
/// state variables included).
std::set<std::string> free_identifiers(const Formula& f);

/// Negation normal form with implications eliminated and negations folded into
/// comparisons. Requires an arithmetic formula.
Formula nnf(const Formula& f);

/// Top-level conjuncts (flattening nested And).
std::vector<Formula> conjuncts(const Formula& f);

/// All comparison atoms, left to right.
void collect_atoms(const Formula& f, std::vector<Formula>* out);

/// Exact truth value of an arithmetic formula at a point.
bool eval_formula(const Formula& f, const std::map<std::string, Rational>& point);

/// Replaces `var` by `value` in every polynomial (not inside binders of var).
Formula substitute(const Formula& f, const std::string& var, const Polynomial& value);

}  // namespace dlive
