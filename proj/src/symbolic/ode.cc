#include "dlive/ode.h"

#include <algorithm>

namespace dlive {

void validate(const OdeSystem& sys) {
  if (sys.vars.size() != sys.rhs.size()) throw InvalidSystem("vars and rhs differ in length");
  std::set<std::string> seen;
  for (const auto& v : sys.vars) {
    if (!seen.insert(v).second) throw InvalidSystem("duplicate ODE variable '" + v + "'");
    if (sys.params.count(v)) throw InvalidSystem("parameter '" + v + "' has an equation");
  }
  if (sys.clock && (seen.count(*sys.clock) || sys.params.count(*sys.clock))) {
    throw InvalidSystem("clock '" + *sys.clock + "' is not fresh");
  }
  std::set<std::string> allowed = sys.state_vars();
  allowed.insert(sys.params.begin(), sys.params.end());
  for (const auto& r : sys.rhs) {
    for (const auto& v : r.variables()) {
      if (!allowed.count(v)) throw InvalidSystem("rhs mentions undeclared '" + v + "'");
    }
  }
  for (const auto& v : free_identifiers(sys.domain)) {
    if (!allowed.count(v)) throw InvalidSystem("domain mentions undeclared '" + v + "'");
  }
}

Polynomial lie_derivative(const Polynomial& p, const OdeSystem& sys) {
  for (const auto& v : p.variables()) {
    const bool known = sys.params.count(v) || (sys.clock && *sys.clock == v) ||
                       std::find(sys.vars.begin(), sys.vars.end(), v) != sys.vars.end();
    if (!known) throw UnknownVariable("'" + v + "' is not declared for this system");
  }
  Polynomial out;
  for (size_t i = 0; i < sys.vars.size(); ++i) {
    Polynomial d = p.partial(sys.vars[i]);
    if (!d.is_zero()) out += d * sys.rhs[i];
  }
  if (sys.clock) out += p.partial(*sys.clock);
  return out;
}

Polynomial higher_lie(const Polynomial& p, const OdeSystem& sys, unsigned k) {
  Polynomial out = p;
  for (unsigned i = 0; i < k; ++i) out = lie_derivative(out, sys);
  return out;
}

OdeSystem with_clock(const OdeSystem& sys, const std::string& clock) {
  if (sys.clock) throw InvalidSystem("system already has clock '" + *sys.clock + "'");
  OdeSystem out = sys;
  out.clock = clock;
  validate(out);
  return out;
}

bool is_affine(const OdeSystem& sys) {
  const std::set<std::string> state = sys.state_vars();
  for (const auto& r : sys.rhs) {
    if (r.degree_in(state) > 1) return false;
  }
  return true;
}

VarOrder var_order(const OdeSystem& sys) {
  VarOrder out = sys.vars;
  if (sys.clock) out.push_back(*sys.clock);
  out.insert(out.end(), sys.params.begin(), sys.params.end());
  return out;
}

}  // namespace dlive
