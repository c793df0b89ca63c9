#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dlive/rational.h"

namespace dlive {

/// Exponent vector: (identifier, exponent > 0) pairs sorted by identifier.
using Monomial = std::vector<std::pair<std::string, unsigned>>;

/// Variable precedence used for graded-lexicographic ordering. Identifiers
/// absent from the list rank after listed ones, alphabetically.
using VarOrder = std::vector<std::string>;

class PolynomialError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegreeLimitExceeded : public PolynomialError {
 public:
  using PolynomialError::PolynomialError;
};

class MissingBinding : public PolynomialError {
 public:
  using PolynomialError::PolynomialError;
};

/// Sparse multivariate polynomial with exact rational coefficients. The zero
/// polynomial has no terms; stored coefficients are never zero.
class Polynomial {
 public:
  using TermMap = std::map<Monomial, Rational>;

  Polynomial() = default;
  static Polynomial constant(const Rational& c);
  static Polynomial variable(const std::string& name);
  static Polynomial term(const Rational& c, Monomial m);

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Coefficient of the empty monomial.
  Rational constant_term() const;
  Rational coefficient(const Monomial& m) const;
  unsigned total_degree() const;
  unsigned degree_in(const std::string& var) const;
  /// Total degree counting only the listed identifiers.
  unsigned degree_in(const std::set<std::string>& vars) const;
  std::set<std::string> variables() const;
  bool mentions_only(const std::set<std::string>& allowed) const;

  Polynomial operator-() const;
  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(const Rational& c) const;
  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial pow(int k) const;
  Polynomial partial(const std::string& var) const;
  /// Replaces `var` by `value`.
  Polynomial substitute(const std::string& var, const Polynomial& value) const;

  /// Exact evaluation; throws MissingBinding for uncovered identifiers.
  Rational eval(const std::map<std::string, Rational>& point) const;

  bool operator==(const Polynomial& o) const { return terms_ == o.terms_; }
  bool operator!=(const Polynomial& o) const { return !(*this == o); }
  /// Arbitrary but total order, for use as a map key.
  bool operator<(const Polynomial& o) const { return terms_ < o.terms_; }

  /// Terms in descending grlex order.
  std::vector<std::pair<Monomial, Rational>> ordered_terms(const VarOrder& order) const;
  std::pair<Monomial, Rational> leading_term(const VarOrder& order) const;

  /// Canonical infix text, e.g. "2*u^4 + 4*u^2*v^2 - 1/2*u^2".
  std::string to_string(const VarOrder& order = {}) const;

  static unsigned degree_limit();
  static void set_degree_limit(unsigned limit);

 private:
  void add_term(const Monomial& m, const Rational& c);
  TermMap terms_;
};

Polynomial operator*(const Rational& c, const Polynomial& p);

unsigned monomial_degree(const Monomial& m);
Monomial monomial_mul(const Monomial& a, const Monomial& b);
/// True when a divides b; `quotient` receives b / a.
bool monomial_divides(const Monomial& a, const Monomial& b, Monomial* quotient);
/// Strict grlex comparison: true when a > b.
bool grlex_greater(const Monomial& a, const Monomial& b, const VarOrder& order);

/// Multivariate division by a single divisor: p = q*d + r where no term of r
/// is divisible by the leading term of d.
struct DivisionResult {
  Polynomial quotient;
  Polynomial remainder;
};
DivisionResult divide(const Polynomial& p, const Polynomial& d, const VarOrder& order);

}  // namespace dlive
