#include "dlive/rational.h"

#include <cmath>
#include <stdexcept>

namespace dlive {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  bool negative = false;
  if (!text.empty() && text.front() == '-') {
    negative = true;
    text.remove_prefix(1);
  }
  const auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den =
      slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den)) {
    throw std::invalid_argument("malformed rational: " + std::string(text));
  }
  mpz_class n(std::string(num), 10);
  mpz_class d(std::string(den), 10);
  if (d == 0) throw std::invalid_argument("zero denominator");
  Rational r(n, d);
  r.canonicalize();
  return negative ? Rational(-r) : r;
}

std::string to_string(const Rational& r) { return r.get_str(); }

double to_double(const Rational& r) { return r.get_d(); }

Rational floor(const Rational& r) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return Rational(q);
}

Rational ceil(const Rational& r) {
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return Rational(q);
}

Rational floor_dyadic(const Rational& r, unsigned bits) {
  mpz_class scale = 1;
  scale <<= bits;
  return floor(r * Rational(scale)) / Rational(scale);
}

Rational ceil_dyadic(const Rational& r, unsigned bits) {
  mpz_class scale = 1;
  scale <<= bits;
  return ceil(r * Rational(scale)) / Rational(scale);
}

Rational sqrt_upper(const Rational& r, unsigned bits) {
  if (sgn(r) < 0) throw std::domain_error("sqrt of negative rational");
  if (sgn(r) == 0) return Rational(0);
  Rational guess = ceil_dyadic(from_double(std::sqrt(r.get_d())), bits);
  const Rational step = Rational(1) / Rational(mpz_class(1) << bits);
  while (guess * guess < r) guess += step;
  // Prefer an integer bound when it is exact.
  Rational whole = ceil(guess);
  if (whole * whole == r) return whole;
  return guess;
}

Rational from_double(double x) {
  if (!std::isfinite(x)) throw std::domain_error("non-finite double");
  Rational r(x);
  r.canonicalize();
  return r;
}

}  // namespace dlive
