#include <sstream>

#include "dlive/syntax.h"

namespace dlive {

namespace {

// Binding strength: larger binds tighter.
int prec(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Implies: return 1;
    case Formula::Kind::Or: return 2;
    case Formula::Kind::And: return 3;
    default: return 4;
  }
}

void print(const Formula& f, const VarOrder& order, std::ostream& os);

void print_at(const Formula& f, int min_prec, const VarOrder& order, std::ostream& os) {
  if (prec(f) < min_prec) {
    os << "(";
    print(f, order, os);
    os << ")";
  } else {
    print(f, order, os);
  }
}

void print_ode(const OdeSystem& ode, const VarOrder& order, std::ostream& os) {
  for (size_t i = 0; i < ode.vars.size(); ++i) {
    if (i) os << ", ";
    os << ode.vars[i] << "' = " << ode.rhs[i].to_string(order);
  }
  if (ode.clock) os << (ode.vars.empty() ? "" : ", ") << *ode.clock << "' = 1";
  if (!ode.domain.is_true()) {
    os << " & (";
    print(ode.domain, order, os);
    os << ")";
  }
}

void print(const Formula& f, const VarOrder& order, std::ostream& os) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::True:
      os << "true";
      return;
    case K::False:
      os << "false";
      return;
    case K::Cmp:
      os << f.lhs().to_string(order) << " " << cmp_text(f.op()) << " " << f.rhs().to_string(order);
      return;
    case K::Not:
      os << "!(";
      print(f.left(), order, os);
      os << ")";
      return;
    case K::And:
      print_at(f.left(), 3, order, os);
      os << " & ";
      print_at(f.right(), 4, order, os);
      return;
    case K::Or:
      print_at(f.left(), 2, order, os);
      os << " | ";
      print_at(f.right(), 3, order, os);
      return;
    case K::Implies:
      print_at(f.left(), 2, order, os);
      os << " -> ";
      print_at(f.right(), 1, order, os);
      return;
    case K::Forall:
    case K::Exists:
      os << (f.kind() == K::Forall ? "forall " : "exists ") << f.var() << " (";
      print(f.left(), order, os);
      os << ")";
      return;
    case K::Box:
    case K::Diamond:
      os << (f.kind() == K::Box ? "[" : "<");
      print_ode(f.ode(), order, os);
      os << (f.kind() == K::Box ? "](" : ">(");
      print(f.left(), order, os);
      os << ")";
      return;
  }
}

void print_value(const BindingValue& v, const VarOrder& order, int indent, std::ostream& os) {
  if (const auto* p = std::get_if<Polynomial>(&v)) {
    os << p->to_string(order);
  } else if (const auto* f = std::get_if<Formula>(&v)) {
    print(*f, order, os);
  } else {
    const Hint& h = std::get<Hint>(v);
    if (h.steps.empty()) {
      os << "hint []";
      return;
    }
    os << "hint [\n";
    for (const auto& s : h.steps) os << print_step(s, order, indent + 2) << "\n";
    os << std::string(indent, ' ') << "]";
  }
}

}  // namespace

std::string print_formula(const Formula& f, const VarOrder& order) {
  std::ostringstream os;
  print(f, order, os);
  return os.str();
}

std::string print_polynomial(const Polynomial& p, const VarOrder& order) {
  return p.to_string(order);
}

std::string print_step(const CertStep& step, const VarOrder& order, int indent) {
  std::ostringstream os;
  const std::string pad(indent, ' ');
  os << pad << "rule " << step.rule << " {";
  if (step.bindings.empty()) {
    os << "}";
    return os.str();
  }
  os << "\n";
  for (size_t i = 0; i < step.bindings.size(); ++i) {
    os << pad << "  " << step.bindings[i].key << " = ";
    print_value(step.bindings[i].value, order, indent + 2, os);
    os << (i + 1 < step.bindings.size() ? ";\n" : "\n");
  }
  os << pad << "}";
  return os.str();
}

std::string print_problem(const ProblemFile& problem) {
  const VarOrder order = problem.ode.vars;
  std::ostringstream os;
  for (const auto& p : problem.ode.params) os << "param " << p << ";\n";
  os << "ode {";
  for (size_t i = 0; i < problem.ode.vars.size(); ++i) {
    os << (i ? "; " : " ") << problem.ode.vars[i] << "' = " << problem.ode.rhs[i].to_string(order);
  }
  os << " }\n";
  if (problem.has_domain) os << "domain { " << print_formula(problem.ode.domain, order) << " }\n";
  if (!problem.assumptions.empty()) {
    os << "assume { ";
    for (size_t i = 0; i < problem.assumptions.size(); ++i) {
      if (i) os << ", ";
      os << print_formula(problem.assumptions[i], order);
    }
    os << " }\n";
  }
  os << "goal { " << print_formula(problem.goal, order) << " }\n";
  if (!problem.certificate.empty()) {
    os << "proof {\n";
    for (const auto& s : problem.certificate) os << print_step(s, order, 2) << "\n";
    os << "}\n";
  }
  return os.str();
}

}  // namespace dlive
