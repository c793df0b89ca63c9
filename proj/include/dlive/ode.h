#pragma once

#include <stdexcept>
#include <string>

#include "dlive/formula.h"

namespace dlive {

class UnknownVariable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidSystem : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Checks the OdeSystem invariants (aligned rhs, disjoint names, rhs and
/// domain over vars and params). Throws InvalidSystem.
void validate(const OdeSystem& sys);

/// Sum of dp/dx_i * f_i, plus dp/dt for the clock.
Polynomial lie_derivative(const Polynomial& p, const OdeSystem& sys);

/// k-fold Lie derivative; k = 0 returns p.
Polynomial higher_lie(const Polynomial& p, const OdeSystem& sys, unsigned k);

/// Adds a unit-rate clock. Throws InvalidSystem if one is present or the name clashes.
OdeSystem with_clock(const OdeSystem& sys, const std::string& clock);

/// True when every rhs has total degree <= 1 in the state variables.
bool is_affine(const OdeSystem& sys);

/// Declared variable order for printing: vars, clock, then params.
VarOrder var_order(const OdeSystem& sys);

}  // namespace dlive
