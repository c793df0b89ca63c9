#include "dlive/polynomial.h"

#include <algorithm>
#include <atomic>
#include <sstream>

namespace dlive {

namespace {

std::atomic<unsigned> g_degree_limit{64};

void check_degree(unsigned degree) {
  if (degree > g_degree_limit.load()) {
    throw DegreeLimitExceeded("polynomial degree " + std::to_string(degree) +
                              " exceeds limit " + std::to_string(g_degree_limit.load()));
  }
}

unsigned exponent_of(const Monomial& m, const std::string& v) {
  for (const auto& [name, e] : m) {
    if (name == v) return e;
  }
  return 0;
}

// Listed identifiers first (in order), then the remaining ones alphabetically.
std::vector<std::string> rank(const Monomial& a, const Monomial& b, const VarOrder& order) {
  std::vector<std::string> out = order;
  std::set<std::string> extra;
  for (const auto& [v, e] : a) extra.insert(v);
  for (const auto& [v, e] : b) extra.insert(v);
  for (const auto& v : order) extra.erase(v);
  out.insert(out.end(), extra.begin(), extra.end());
  return out;
}

}  // namespace

unsigned Polynomial::degree_limit() { return g_degree_limit.load(); }
void Polynomial::set_degree_limit(unsigned limit) { g_degree_limit.store(limit); }

unsigned monomial_degree(const Monomial& m) {
  unsigned d = 0;
  for (const auto& [v, e] : m) d += e;
  return d;
}

Monomial monomial_mul(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.reserve(a.size() + b.size());
  size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.push_back(b[j++]);
    } else {
      out.emplace_back(a[i].first, a[i].second + b[j].second);
      ++i;
      ++j;
    }
  }
  return out;
}

bool monomial_divides(const Monomial& a, const Monomial& b, Monomial* quotient) {
  Monomial q;
  size_t j = 0;
  for (const auto& [v, e] : a) {
    while (j < b.size() && b[j].first < v) q.push_back(b[j++]);
    if (j == b.size() || b[j].first != v || b[j].second < e) return false;
    if (b[j].second > e) q.emplace_back(v, b[j].second - e);
    ++j;
  }
  while (j < b.size()) q.push_back(b[j++]);
  if (quotient) *quotient = std::move(q);
  return true;
}

bool grlex_greater(const Monomial& a, const Monomial& b, const VarOrder& order) {
  const unsigned da = monomial_degree(a), db = monomial_degree(b);
  if (da != db) return da > db;
  for (const auto& v : rank(a, b, order)) {
    const unsigned ea = exponent_of(a, v), eb = exponent_of(b, v);
    if (ea != eb) return ea > eb;
  }
  return false;
}

Polynomial Polynomial::constant(const Rational& c) {
  Polynomial p;
  p.add_term({}, c);
  return p;
}

Polynomial Polynomial::variable(const std::string& name) {
  Polynomial p;
  p.add_term({{name, 1}}, Rational(1));
  return p;
}

Polynomial Polynomial::term(const Rational& c, Monomial m) {
  check_degree(monomial_degree(m));
  Polynomial p;
  p.add_term(m, c);
  return p;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
  if (sgn(c) == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

Rational Polynomial::constant_term() const { return coefficient({}); }

Rational Polynomial::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

unsigned Polynomial::total_degree() const {
  unsigned d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, monomial_degree(m));
  return d;
}

unsigned Polynomial::degree_in(const std::string& var) const {
  unsigned d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, exponent_of(m, var));
  return d;
}

unsigned Polynomial::degree_in(const std::set<std::string>& vars) const {
  unsigned d = 0;
  for (const auto& [m, c] : terms_) {
    unsigned md = 0;
    for (const auto& [v, e] : m) {
      if (vars.count(v)) md += e;
    }
    d = std::max(d, md);
  }
  return d;
}

std::set<std::string> Polynomial::variables() const {
  std::set<std::string> out;
  for (const auto& [m, c] : terms_) {
    for (const auto& [v, e] : m) out.insert(v);
  }
  return out;
}

bool Polynomial::mentions_only(const std::set<std::string>& allowed) const {
  for (const auto& v : variables()) {
    if (!allowed.count(v)) return false;
  }
  return true;
}

Polynomial Polynomial::operator-() const {
  Polynomial out = *this;
  for (auto& [m, c] : out.terms_) c = -c;
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial out = *this;
  out += o;
  return out;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  Polynomial out = *this;
  out -= o;
  return out;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (!is_zero() && !o.is_zero()) check_degree(total_degree() + o.total_degree());
  Polynomial out;
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : o.terms_) out.add_term(monomial_mul(ma, mb), ca * cb);
  }
  return out;
}

Polynomial Polynomial::operator*(const Rational& c) const {
  Polynomial out;
  if (sgn(c) == 0) return out;
  out.terms_ = terms_;
  for (auto& [m, coef] : out.terms_) coef *= c;
  return out;
}

Polynomial operator*(const Rational& c, const Polynomial& p) { return p * c; }

Polynomial Polynomial::pow(int k) const {
  if (k < 0) throw PolynomialError("PowNegativeExponent");
  if (!is_zero()) check_degree(total_degree() * static_cast<unsigned>(k));
  Polynomial result = constant(Rational(1));
  Polynomial base = *this;
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

Polynomial Polynomial::partial(const std::string& var) const {
  Polynomial out;
  for (const auto& [m, c] : terms_) {
    Monomial dm;
    unsigned e = 0;
    for (const auto& [v, ev] : m) {
      if (v == var) {
        e = ev;
        if (ev > 1) dm.emplace_back(v, ev - 1);
      } else {
        dm.emplace_back(v, ev);
      }
    }
    if (e > 0) out.add_term(dm, c * Rational(e));
  }
  return out;
}

Polynomial Polynomial::substitute(const std::string& var, const Polynomial& value) const {
  Polynomial out;
  for (const auto& [m, c] : terms_) {
    Monomial rest;
    unsigned e = 0;
    for (const auto& [v, ev] : m) {
      if (v == var) {
        e = ev;
      } else {
        rest.emplace_back(v, ev);
      }
    }
    Polynomial t = term(c, rest);
    if (e > 0) t = t * value.pow(static_cast<int>(e));
    out += t;
  }
  return out;
}

Rational Polynomial::eval(const std::map<std::string, Rational>& point) const {
  Rational sum = 0;
  for (const auto& [m, c] : terms_) {
    Rational prod = c;
    for (const auto& [v, e] : m) {
      auto it = point.find(v);
      if (it == point.end()) throw MissingBinding("no value for '" + v + "'");
      Rational pw = 1;
      for (unsigned i = 0; i < e; ++i) pw *= it->second;
      prod *= pw;
    }
    sum += prod;
  }
  return sum;
}

std::vector<std::pair<Monomial, Rational>> Polynomial::ordered_terms(
    const VarOrder& order) const {
  std::vector<std::pair<Monomial, Rational>> out(terms_.begin(), terms_.end());
  std::stable_sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
    return grlex_greater(a.first, b.first, order);
  });
  return out;
}

std::pair<Monomial, Rational> Polynomial::leading_term(const VarOrder& order) const {
  if (terms_.empty()) return {{}, Rational(0)};
  auto best = terms_.begin();
  for (auto it = std::next(terms_.begin()); it != terms_.end(); ++it) {
    if (grlex_greater(it->first, best->first, order)) best = it;
  }
  return *best;
}

std::string Polynomial::to_string(const VarOrder& order) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : ordered_terms(order)) {
    Rational mag = abs(c);
    if (first) {
      if (sgn(c) < 0) os << "-";
    } else {
      os << (sgn(c) < 0 ? " - " : " + ");
    }
    first = false;
    // Factors follow the same precedence as the grlex tie-break.
    Monomial sorted = m;
    std::vector<std::string> ranks = rank(m, {}, order);
    std::stable_sort(sorted.begin(), sorted.end(), [&](const auto& a, const auto& b) {
      return std::find(ranks.begin(), ranks.end(), a.first) <
             std::find(ranks.begin(), ranks.end(), b.first);
    });
    bool wrote = false;
    if (mag != 1 || sorted.empty()) {
      os << dlive::to_string(mag);
      wrote = true;
    }
    for (const auto& [v, e] : sorted) {
      if (wrote) os << "*";
      os << v;
      if (e > 1) os << "^" << e;
      wrote = true;
    }
  }
  return os.str();
}

DivisionResult divide(const Polynomial& p, const Polynomial& d, const VarOrder& order) {
  if (d.is_zero()) throw PolynomialError("division by zero polynomial");
  const auto [lm, lc] = d.leading_term(order);
  DivisionResult out;
  Polynomial rest = p;
  while (!rest.is_zero()) {
    const auto [m, c] = rest.leading_term(order);
    Monomial q;
    if (monomial_divides(lm, m, &q)) {
      Polynomial t = Polynomial::term(c / lc, q);
      out.quotient += t;
      rest -= t * d;
    } else {
      Polynomial t = Polynomial::term(c, m);
      out.remainder += t;
      rest -= t;
    }
  }
  return out;
}

}  // namespace dlive
