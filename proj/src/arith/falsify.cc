#include <cmath>
#include <random>

#include "internal.h"

namespace dlive {

using namespace arith_detail;

namespace {

// Polynomial compiled for fast floating-point screening.
struct FastPoly {
  struct Term {
    double coef;
    std::vector<std::pair<size_t, unsigned>> factors;
  };
  std::vector<Term> terms;

  FastPoly(const Polynomial& p, const std::map<std::string, size_t>& index) {
    for (const auto& [m, c] : p.terms()) {
      Term t{to_double(c), {}};
      for (const auto& [v, e] : m) t.factors.emplace_back(index.at(v), e);
      terms.push_back(std::move(t));
    }
  }

  // Value and sum of absolute term values (a scale for the tolerance band).
  std::pair<double, double> eval(const std::vector<double>& x) const {
    double sum = 0, mag = 0;
    for (const auto& t : terms) {
      double v = t.coef;
      for (const auto& [i, e] : t.factors) {
        for (unsigned k = 0; k < e; ++k) v *= x[i];
      }
      sum += v;
      mag += std::fabs(v);
    }
    return {sum, mag};
  }
};

struct FastTree {
  Tree::Kind kind;
  CmpOp rel = CmpOp::Ge;
  std::optional<FastPoly> poly;
  std::vector<FastTree> kids;

  FastTree(const Tree& t, const std::map<std::string, size_t>& index) : kind(t.kind) {
    if (t.kind == Tree::Kind::Atom) {
      rel = t.atom.rel;
      poly.emplace(t.atom.p, index);
    }
    for (const auto& k : t.kids) kids.emplace_back(k, index);
  }

  Tri eval(const std::vector<double>& x) const {
    switch (kind) {
      case Tree::Kind::True: return Tri::True;
      case Tree::Kind::False: return Tri::False;
      case Tree::Kind::Atom: {
        const auto [v, mag] = poly->eval(x);
        if (!std::isfinite(v)) return Tri::Maybe;
        if (std::fabs(v) <= 1e-9 * std::max(1.0, mag)) return Tri::Maybe;
        return cmp_holds(rel, v > 0 ? 1 : -1) ? Tri::True : Tri::False;
      }
      case Tree::Kind::And: {
        Tri out = Tri::True;
        for (const auto& k : kids) {
          const Tri r = k.eval(x);
          if (r == Tri::False) return Tri::False;
          if (r == Tri::Maybe) out = Tri::Maybe;
        }
        return out;
      }
      case Tree::Kind::Or: {
        Tri out = Tri::False;
        for (const auto& k : kids) {
          const Tri r = k.eval(x);
          if (r == Tri::True) return Tri::True;
          if (r == Tri::Maybe) out = Tri::Maybe;
        }
        return out;
      }
    }
    return Tri::Maybe;
  }
};

struct Range {
  double lo, hi;
};

Range sampling_range(const Interval& iv, double spread) {
  double lo, hi;
  if (iv.bounded()) {
    lo = to_double(iv.lo.value);
    hi = to_double(iv.hi.value);
  } else if (iv.lo.finite()) {
    lo = to_double(iv.lo.value);
    hi = std::max(lo, 0.0) + 10;
  } else if (iv.hi.finite()) {
    hi = to_double(iv.hi.value);
    lo = std::min(hi, 0.0) - 10;
  } else {
    lo = -10;
    hi = 10;
  }
  const double mid = (lo + hi) / 2, half = (hi - lo) / 2 * spread;
  return {mid - half, mid + half};
}

}  // namespace

ArithVerdict falsify(const ArithObligation& ob, size_t samples, uint64_t seed,
                     const std::optional<Box>& box, double spread) {
  ArithVerdict out;
  out.reason = "NoCounterexampleFound";
  if (!ob.hypothesis.is_arith() || !ob.conclusion.is_arith()) {
    out.reason = "NotArithmetic";
    return out;
  }
  const std::vector<std::string> vars = effective_universals(ob);
  std::map<std::string, size_t> index;
  for (size_t i = 0; i < vars.size(); ++i) index[vars[i]] = i;
  const FastTree hyp(to_tree(nnf(ob.hypothesis)), index);
  const FastTree concl(to_tree(nnf(ob.conclusion)), index);

  const Box region = box ? *box : implied_box(ob.hypothesis);
  std::vector<Range> ranges;
  for (const auto& v : vars) {
    auto it = region.find(v);
    ranges.push_back(sampling_range(it == region.end() ? Interval::whole() : it->second, spread));
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> bits(0, 20);
  auto draw = [&](const Range& r) {
    const double u = unit(rng);
    if (u < 0.08) return r.lo;
    if (u < 0.16) return r.hi;
    if (u < 0.21 && r.lo <= 0 && 0 <= r.hi) return 0.0;
    // Dyadic rational m / 2^k, exactly representable.
    const int k = bits(rng);
    const double lo = std::ceil(std::ldexp(r.lo, k)), hi = std::floor(std::ldexp(r.hi, k));
    if (hi < lo) return r.lo;
    std::uniform_int_distribution<long long> pick(static_cast<long long>(lo),
                                                  static_cast<long long>(hi));
    return std::ldexp(static_cast<double>(pick(rng)), -k);
  };

  std::vector<double> x(vars.size());
  for (size_t n = 0; n < samples; ++n) {
    for (size_t i = 0; i < vars.size(); ++i) x[i] = draw(ranges[i]);
    ++out.trace.cells;
    if (hyp.eval(x) == Tri::False || concl.eval(x) == Tri::True) continue;
    Point p;
    for (size_t i = 0; i < vars.size(); ++i) p[vars[i]] = from_double(x[i]);
    if (is_counterexample(ob, p)) {
      out.status = ArithStatus::Falsified;
      out.counterexample = std::move(p);
      out.reason.clear();
      return out;
    }
  }
  return out;
}

}  // namespace dlive
