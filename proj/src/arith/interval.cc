#include "dlive/interval.h"

#include <algorithm>
#include <array>

namespace dlive {

std::string ExtRational::to_string() const {
  if (inf > 0) return "+inf";
  if (inf < 0) return "-inf";
  return dlive::to_string(value);
}

bool operator<(const ExtRational& a, const ExtRational& b) {
  if (a.inf != b.inf) return a.inf < b.inf;
  if (a.inf != 0) return false;
  return a.value < b.value;
}

bool operator==(const ExtRational& a, const ExtRational& b) {
  return a.inf == b.inf && (a.inf != 0 || a.value == b.value);
}

ExtRational operator+(const ExtRational& a, const ExtRational& b) {
  // inf + -inf never arises from well-formed interval endpoints (lo + lo, hi + hi).
  if (a.inf != 0) return a;
  if (b.inf != 0) return b;
  return {a.value + b.value, 0};
}

ExtRational operator*(const ExtRational& a, const ExtRational& b) {
  const int sa = a.sign(), sb = b.sign();
  if (sa == 0 || sb == 0) return {Rational(0), 0};
  if (a.inf != 0 || b.inf != 0) return {Rational(0), sa * sb};
  return {a.value * b.value, 0};
}

bool Interval::contains(const Rational& r) const {
  const ExtRational x{r, 0};
  return lo <= x && x <= hi;
}

bool Interval::contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }

ExtRational Interval::width() const {
  if (!bounded()) return ExtRational::pos_inf();
  return {hi.value - lo.value, 0};
}

Rational Interval::pick() const {
  if (bounded()) return (lo.value + hi.value) / 2;
  if (lo.finite()) return lo.value + 1;
  if (hi.finite()) return hi.value - 1;
  return Rational(0);
}

std::string Interval::to_string() const {
  return "[" + lo.to_string() + ", " + hi.to_string() + "]";
}

Interval operator+(const Interval& a, const Interval& b) { return {a.lo + b.lo, a.hi + b.hi}; }

Interval operator-(const Interval& a) {
  return {{-a.hi.value, -a.hi.inf}, {-a.lo.value, -a.lo.inf}};
}

Interval operator*(const Interval& a, const Interval& b) {
  const std::array<ExtRational, 4> p = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return {*std::min_element(p.begin(), p.end()), *std::max_element(p.begin(), p.end())};
}

Interval scale(const Interval& a, const Rational& c) { return a * Interval::point(c); }

Interval ipow(const Interval& a, unsigned k) {
  if (k == 0) return Interval::point(Rational(1));
  Interval r = a;
  for (unsigned i = 1; i < k; ++i) r = r * a;
  if (k % 2 == 0) {
    // Dependency-free enclosure of x^k for even k.
    const bool straddles = a.lo.sign() < 0 && a.hi.sign() > 0;
    auto pw = [&](const ExtRational& x) {
      ExtRational out{Rational(1), 0};
      for (unsigned i = 0; i < k; ++i) out = out * x;
      return out;
    };
    const ExtRational l = pw(a.lo), h = pw(a.hi);
    const ExtRational top = l < h ? h : l;
    if (straddles) return {{Rational(0), 0}, top};
    return {l < h ? l : h, top};
  }
  return r;
}

Interval intersect(const Interval& a, const Interval& b) {
  return {a.lo < b.lo ? b.lo : a.lo, a.hi < b.hi ? a.hi : b.hi};
}

Interval hull(const Interval& a, const Interval& b) {
  return {a.lo < b.lo ? a.lo : b.lo, a.hi < b.hi ? b.hi : a.hi};
}

Interval eval_interval(const Polynomial& p, const Box& box) {
  Interval sum = Interval::point(Rational(0));
  for (const auto& [m, c] : p.terms()) {
    Interval t = Interval::point(c);
    for (const auto& [v, e] : m) {
      auto it = box.find(v);
      t = t * ipow(it == box.end() ? Interval::whole() : it->second, e);
    }
    sum = sum + t;
  }
  return sum;
}

Box intersect(const Box& a, const Box& b) {
  Box out = a;
  for (const auto& [v, iv] : b) {
    auto it = out.find(v);
    if (it == out.end()) {
      out.emplace(v, iv);
    } else {
      it->second = intersect(it->second, iv);
    }
  }
  return out;
}

}  // namespace dlive
