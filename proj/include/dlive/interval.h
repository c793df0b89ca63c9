#pragma once

#include <map>
#include <string>

#include "dlive/polynomial.h"

namespace dlive {

/// A rational or one of +-infinity.
struct ExtRational {
  Rational value;
  int inf = 0;  // -1, 0, +1

  static ExtRational pos_inf() { return {Rational(0), 1}; }
  static ExtRational neg_inf() { return {Rational(0), -1}; }
  bool finite() const { return inf == 0; }
  int sign() const { return inf != 0 ? inf : sgn(value); }
  std::string to_string() const;
};

bool operator<(const ExtRational& a, const ExtRational& b);
bool operator==(const ExtRational& a, const ExtRational& b);
inline bool operator<=(const ExtRational& a, const ExtRational& b) { return !(b < a); }
ExtRational operator+(const ExtRational& a, const ExtRational& b);
/// 0 * inf = 0.
ExtRational operator*(const ExtRational& a, const ExtRational& b);

/// Closed interval [lo, hi] over the extended reals. Infinite endpoints mean
/// the interval is unbounded on that side.
struct Interval {
  ExtRational lo, hi;

  Interval() : lo(ExtRational::neg_inf()), hi(ExtRational::pos_inf()) {}
  Interval(ExtRational l, ExtRational h) : lo(std::move(l)), hi(std::move(h)) {}
  static Interval point(const Rational& r) { return {{r, 0}, {r, 0}}; }
  static Interval of(const Rational& l, const Rational& h) { return {{l, 0}, {h, 0}}; }
  static Interval whole() { return {}; }

  bool bounded() const { return lo.finite() && hi.finite(); }
  bool empty() const { return hi < lo; }
  bool contains(const Rational& r) const;
  bool contains(const Interval& o) const;
  /// hi - lo, or +inf when unbounded.
  ExtRational width() const;
  /// A finite point inside the interval (midpoint when bounded).
  Rational pick() const;
  std::string to_string() const;
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a);
Interval operator*(const Interval& a, const Interval& b);
Interval scale(const Interval& a, const Rational& c);
/// Tight for even exponents (never negative).
Interval ipow(const Interval& a, unsigned k);
Interval intersect(const Interval& a, const Interval& b);
Interval hull(const Interval& a, const Interval& b);

using Box = std::map<std::string, Interval>;

/// Encloses the range of p over the box; identifiers missing from the box
/// range over the whole real line.
Interval eval_interval(const Polynomial& p, const Box& box);

/// Componentwise intersection; identifiers missing on one side take the other's interval.
Box intersect(const Box& a, const Box& b);

}  // namespace dlive
