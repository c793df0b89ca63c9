#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "dlive/arith.h"

namespace dlive::arith_detail {

/// p rel 0 with rel in {Ge, Gt, Eq, Ne}, scaled so the leading coefficient
/// has absolute value 1 (positive for Eq and Ne).
struct Atom {
  Polynomial p;
  CmpOp rel = CmpOp::Ge;
};

Atom normalize(const Polynomial& p, CmpOp op);
Atom normalize(const Formula& cmp);
Atom negate(const Atom& a);

enum class Tri { False, True, Maybe };
Tri eval3(const Atom& a, const Box& box);
bool holds_exact(const Atom& a, const Point& point);

/// Quantifier-free NNF formula with normalized atoms.
struct Tree {
  enum class Kind { True, False, Atom, And, Or } kind = Kind::True;
  Atom atom;
  std::vector<Tree> kids;
};

Tree to_tree(const Formula& nnf_formula);
Tri eval3(const Tree& t, const Box& box);
bool holds_exact(const Tree& t, const Point& point);
void tree_vars(const Tree& t, std::set<std::string>* out);

/// Disjunctive normal form of an NNF formula. Returns false when more than
/// `cap` disjuncts would be produced.
bool dnf(const Formula& nnf_formula, size_t cap, std::vector<std::vector<Atom>>* out);

/// Bounds implied by individual atoms.
Box facts_box(const std::vector<Atom>& facts);

/// Proves atoms from a fixed conjunction of facts by interval evaluation,
/// reduction by equality facts, and division by inequality facts.
class Certifier {
 public:
  Certifier(std::vector<Atom> facts, Box region);

  bool holds(const Atom& goal, int depth = 3);
  bool holds(const Tree& goal, int depth = 3);
  /// True when some fact's negation follows from the facts.
  bool contradictory();

 private:
  bool holds_rec(const Polynomial& q, CmpOp rel, int depth);

  std::vector<Atom> facts_;
  Box region_;
  VarOrder order_;
  std::set<std::string> proven_;
  std::map<std::string, int> failed_depth_;
};

}  // namespace dlive::arith_detail
