#include "dlive/topology.h"

#include <set>

namespace dlive {

const char* property_text(TopoProperty p) {
  switch (p) {
    case TopoProperty::Open: return "Open";
    case TopoProperty::Closed: return "Closed";
    case TopoProperty::Bounded: return "Bounded";
    case TopoProperty::Compact: return "Compact";
  }
  return "?";
}

namespace {

bool mentions_any(const Formula& atom, const std::set<std::string>& vars) {
  for (const auto& v : free_identifiers(atom)) {
    if (vars.count(v)) return true;
  }
  return false;
}

// Every NNF atom over vars uses one of the allowed comparison operators.
bool atoms_in(const Formula& f, const std::set<std::string>& vars, bool closed,
              std::string* why) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::True:
    case K::False:
      return true;
    case K::Cmp: {
      if (!mentions_any(f, vars)) return true;
      const CmpOp op = f.op();
      const bool ok = closed ? (op == CmpOp::Eq || op == CmpOp::Ge || op == CmpOp::Le)
                             : (op == CmpOp::Ne || op == CmpOp::Gt || op == CmpOp::Lt);
      if (!ok) *why = std::string("atom with '") + cmp_text(op) + "'";
      return ok;
    }
    case K::And:
    case K::Or:
      return atoms_in(f.left(), vars, closed, why) && atoms_in(f.right(), vars, closed, why);
    default:
      *why = "unsupported connective";
      return false;
  }
}

TopoVerdict syntactic(const Formula& f, const std::vector<std::string>& vars, bool closed) {
  TopoVerdict out;
  out.property = closed ? TopoProperty::Closed : TopoProperty::Open;
  if (!f.is_arith()) {
    out.reason = "quantified or modal formula";
    return out;
  }
  const std::set<std::string> vs(vars.begin(), vars.end());
  if (atoms_in(nnf(f), vs, closed, &out.reason)) out.status = TopoStatus::Holds;
  return out;
}

}  // namespace

TopoVerdict check_closed(const Formula& f, const std::vector<std::string>& vars) {
  return syntactic(f, vars, true);
}

TopoVerdict check_open(const Formula& f, const std::vector<std::string>& vars) {
  return syntactic(f, vars, false);
}

TopoVerdict check_bounded(const Formula& f, const std::vector<std::string>& vars,
                          const Budget& per_query) {
  TopoVerdict out;
  out.property = TopoProperty::Bounded;
  if (!f.is_arith()) {
    out.reason = "quantified or modal formula";
    return out;
  }
  Polynomial norm;
  for (const auto& v : vars) norm += Polynomial::variable(v).pow(2);
  for (int k = 0; k <= 32; ++k) {
    const Rational bound(mpz_class(1) << k);
    ArithObligation ob{vars, f, Formula::cmp(norm, CmpOp::Le, Polynomial::constant(bound))};
    if (prove_implication(ob, std::nullopt, per_query).status == ArithStatus::Valid) {
      out.status = TopoStatus::Holds;
      out.witness = bound;
      return out;
    }
  }
  out.reason = "no bound up to 2^32 proved";
  return out;
}

TopoVerdict check_compact(const Formula& f, const std::vector<std::string>& vars,
                          const Budget& per_query) {
  TopoVerdict out;
  out.property = TopoProperty::Compact;
  const TopoVerdict closed = check_closed(f, vars);
  if (!closed.holds()) {
    out.reason = "not certified closed: " + closed.reason;
    return out;
  }
  const TopoVerdict bounded = check_bounded(f, vars, per_query);
  if (!bounded.holds()) {
    out.reason = "not certified bounded: " + bounded.reason;
    return out;
  }
  out.status = TopoStatus::Holds;
  out.witness = bounded.witness;
  return out;
}

}  // namespace dlive
