#include <cstdio>
#include <sstream>

#include "dlive/arith.h"

namespace dlive {

namespace {

std::string smt_rational(const Rational& r) {
  const Rational a = abs(r);
  std::string body = a.get_den() == 1 ? a.get_num().get_str()
                                      : "(/ " + a.get_num().get_str() + " " +
                                            a.get_den().get_str() + ")";
  return sgn(r) < 0 ? "(- " + body + ")" : body;
}

std::string smt_poly(const Polynomial& p, const VarOrder& order) {
  if (p.is_zero()) return "0";
  std::vector<std::string> terms;
  for (const auto& [m, c] : p.ordered_terms(order)) {
    std::vector<std::string> factors;
    if (c != 1 || m.empty()) factors.push_back(smt_rational(c));
    for (const auto& [v, e] : m) {
      for (unsigned k = 0; k < e; ++k) factors.push_back(v);
    }
    if (factors.size() == 1) {
      terms.push_back(factors[0]);
    } else {
      std::string t = "(*";
      for (const auto& f : factors) t += " " + f;
      terms.push_back(t + ")");
    }
  }
  if (terms.size() == 1) return terms[0];
  std::string out = "(+";
  for (const auto& t : terms) out += " " + t;
  return out + ")";
}

std::string smt_formula(const Formula& f, const VarOrder& order) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::True: return "true";
    case K::False: return "false";
    case K::Cmp: {
      const std::string l = smt_poly(f.lhs(), order), r = smt_poly(f.rhs(), order);
      if (f.op() == CmpOp::Ne) return "(not (= " + l + " " + r + "))";
      return "(" + std::string(cmp_text(f.op())) + " " + l + " " + r + ")";
    }
    case K::Not: return "(not " + smt_formula(f.left(), order) + ")";
    case K::And:
      return "(and " + smt_formula(f.left(), order) + " " + smt_formula(f.right(), order) + ")";
    case K::Or:
      return "(or " + smt_formula(f.left(), order) + " " + smt_formula(f.right(), order) + ")";
    case K::Implies:
      return "(=> " + smt_formula(f.left(), order) + " " + smt_formula(f.right(), order) + ")";
    case K::Forall:
    case K::Exists:
      return "(" + std::string(f.kind() == K::Forall ? "forall" : "exists") + " ((" + f.var() +
             " Real)) " + smt_formula(f.left(), order) + ")";
    default:
      throw std::invalid_argument("modal formula has no SMT-LIB encoding");
  }
}

uint64_t fnv1a64(const std::string& s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::string emit_smtlib(const ArithObligation& ob) {
  const std::vector<std::string> vars = effective_universals(ob);
  std::ostringstream os;
  os << "(set-logic QF_NRA)\n";
  for (const auto& v : vars) os << "(declare-fun " << v << " () Real)\n";
  for (const auto& c : conjuncts(ob.hypothesis)) {
    if (c.is_true()) continue;
    os << "(assert " << smt_formula(c, vars) << ")\n";
  }
  os << "(assert (not " << smt_formula(ob.conclusion, vars) << "))\n";
  os << "(check-sat)\n(exit)\n";
  return os.str();
}

std::string smtlib_filename(size_t index, const ArithObligation& ob) {
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx",
                static_cast<unsigned long long>(fnv1a64(emit_smtlib(ob))));
  return "ob-" + std::to_string(index) + "-" + hex + ".smt2";
}

}  // namespace dlive
