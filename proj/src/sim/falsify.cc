#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "dlive/arith.h"
#include "dlive/sim.h"

namespace dlive {

namespace {

constexpr double kBand = 1e-9;

void flatten(const Formula& f, std::vector<Formula>& out) {
  if (f.kind() == Formula::Kind::And) {
    flatten(f.left(), out);
    flatten(f.right(), out);
  } else if (f.kind() != Formula::Kind::True) {
    out.push_back(f);
  }
}

// a*u^2 + b*v^2 = c with a, b, c > 0
struct Ellipse {
  std::string u, v;
  double ru = 0, rv = 0;
};

std::optional<Ellipse> as_ellipse(const Polynomial& d) {
  std::vector<std::pair<std::string, Rational>> sq;
  Rational c0 = 0;
  for (const auto& [mono, c] : d.terms()) {
    if (mono.empty()) {
      c0 = c;
    } else if (mono.size() == 1 && mono.begin()->second == 2) {
      sq.emplace_back(mono.begin()->first, c);
    } else {
      return std::nullopt;
    }
  }
  if (sq.size() != 2 || c0 == 0) return std::nullopt;
  // a u^2 + b v^2 + c0 = 0
  const int s = sgn(sq[0].second);
  if (sgn(sq[1].second) != s || sgn(c0) != -s) return std::nullopt;
  const double c = -to_double(c0);
  return Ellipse{sq[0].first, sq[1].first, std::sqrt(c / to_double(sq[0].second)),
                 std::sqrt(c / to_double(sq[1].second))};
}

// v = c from a degree-one atom in a single variable
std::optional<std::pair<std::string, double>> as_fixed(const Polynomial& d) {
  const auto vars = d.variables();
  if (vars.size() != 1 || d.total_degree() != 1) return std::nullopt;
  const std::string& v = *vars.begin();
  const Rational a = d.coefficient({{v, 1}});
  return std::make_pair(v, to_double(-d.constant_term() / a));
}

std::vector<std::string> sample_vars(const OdeSystem& sys) {
  std::vector<std::string> names = sys.vars;
  if (sys.clock) names.push_back(*sys.clock);
  names.insert(names.end(), sys.params.begin(), sys.params.end());
  return names;
}

SampleClass class_of(EventKind k) {
  switch (k) {
    case EventKind::GoalEntered: return SampleClass::Witness;
    case EventKind::DomainExited: return SampleClass::RefutedSample;
    case EventKind::BlowUpSuspected: return SampleClass::BlowUp;
    case EventKind::HorizonReached: return SampleClass::Inconclusive;
  }
  return SampleClass::Inconclusive;
}

}  // namespace

std::vector<NumPoint> sample_initial(const ProblemFile& pf, size_t n, uint64_t seed) {
  const std::vector<std::string> names = sample_vars(pf.ode);
  std::vector<Formula> atoms;
  for (const auto& f : pf.assumptions) flatten(f, atoms);

  std::map<std::string, double> fixed;
  std::optional<Ellipse> ellipse;
  for (const auto& a : atoms) {
    if (a.kind() != Formula::Kind::Cmp || a.op() != CmpOp::Eq) continue;
    const Polynomial d = a.lhs() - a.rhs();
    if (auto fx = as_fixed(d)) {
      fixed[fx->first] = fx->second;
    } else if (auto el = as_ellipse(d); el && !ellipse) {
      ellipse = el;
    }
  }
  if (ellipse && (fixed.count(ellipse->u) || fixed.count(ellipse->v))) ellipse.reset();

  const Formula all = mk_and(atoms);
  const NumFormula check(all, names);
  const Box box = implied_box(all);
  auto range = [&](const std::string& v) {
    double lo = -10, hi = 10;
    if (auto it = box.find(v); it != box.end()) {
      if (it->second.lo.finite()) lo = std::max(lo, to_double(it->second.lo.value));
      if (it->second.hi.finite()) hi = std::min(hi, to_double(it->second.hi.value));
    }
    return std::make_pair(lo, hi);
  };

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<NumPoint> out;
  const size_t limit = 10000 * std::max<size_t>(n, 1);
  std::vector<double> x(names.size());
  for (size_t attempt = 0; out.size() < n; ++attempt) {
    if (attempt >= limit) {
      throw UnsamplableInitSet("no initial state found after " + std::to_string(limit) +
                               " attempts");
    }
    NumPoint pt;
    for (const auto& v : names) {
      if (auto it = fixed.find(v); it != fixed.end()) {
        pt[v] = it->second;
      } else {
        const auto [lo, hi] = range(v);
        pt[v] = lo + (hi - lo) * unit(rng);
      }
    }
    if (ellipse) {
      const double th = 2 * std::numbers::pi * unit(rng);
      pt[ellipse->u] = ellipse->ru * std::cos(th);
      pt[ellipse->v] = ellipse->rv * std::sin(th);
    }
    for (size_t i = 0; i < names.size(); ++i) x[i] = pt[names[i]];
    if (check.eval_tol(x.data(), kBand, false)) out.push_back(std::move(pt));
  }
  return out;
}

int FalsifyReport::exit_code() const {
  auto count = [&](SampleClass c) {
    auto it = counts.find(c);
    return it == counts.end() ? size_t(0) : it->second;
  };
  if (count(SampleClass::RefutedSample) + count(SampleClass::BlowUp) > 0) return 1;
  return count(SampleClass::Witness) > 0 ? 0 : 2;
}

std::string FalsifyReport::summary() const {
  std::ostringstream os;
  os << "samples " << samples.size() << "\n";
  for (SampleClass c : {SampleClass::Witness, SampleClass::RefutedSample, SampleClass::BlowUp,
                        SampleClass::Inconclusive}) {
    auto it = counts.find(c);
    os << sample_class_text(c) << " " << (it == counts.end() ? 0 : it->second) << "\n";
  }
  return os.str();
}

FalsifyReport falsify_liveness(const ProblemFile& pf, size_t samples, uint64_t seed,
                               const SimOptions& opt) {
  const std::vector<NumPoint> inits = sample_initial(pf, samples, seed);
  FalsifyReport rep;
  rep.samples.resize(inits.size());
  auto run = [&](size_t i) {
    SampleResult& r = rep.samples[i];
    r.init = inits[i];
    r.traj = simulate(pf.ode, inits[i], pf.goal, opt);
    r.last = r.traj.events.back();
    r.cls = class_of(r.last.kind);
  };
  const size_t workers = std::max(1u, std::thread::hardware_concurrency());
  for (size_t base = 0; base < inits.size(); base += workers) {
    std::vector<std::future<void>> batch;
    for (size_t i = base; i < std::min(inits.size(), base + workers); ++i) {
      batch.push_back(std::async(std::launch::async, run, i));
    }
    for (auto& f : batch) f.get();
  }
  for (const auto& r : rep.samples) ++rep.counts[r.cls];
  return rep;
}

LieReport lie_consistency_check(const Polynomial& p, const OdeSystem& sys, const Trajectory& traj,
                                double h) {
  const size_t n = traj.times.size();
  if (n < 3 || !(h > 0)) throw InsufficientSamples("trajectory too short");
  const double dt = traj.times[1] - traj.times[0];
  for (size_t i = 1; i < n; ++i) {
    if (std::abs(traj.times[i] - traj.times[i - 1] - dt) > 1e-9 * std::max(1.0, dt)) {
      throw InsufficientSamples("samples are not uniformly spaced");
    }
  }
  const double ratio = h / dt;
  const auto m = size_t(std::llround(ratio));
  if (m == 0 || std::abs(ratio - double(m)) > 1e-6) {
    throw InsufficientSamples("sample spacing does not divide h");
  }
  if (n < 2 * m + 1) throw InsufficientSamples("fewer than 2h/dt + 1 samples");

  std::vector<std::string> names = traj.vars;
  for (const auto& [k, v] : traj.params) names.push_back(k);
  const NumPoly P(p, names);
  const NumPoly L(lie_derivative(p, sys), names);
  auto point = [&](size_t i) {
    std::vector<double> x = traj.states[i];
    for (const auto& [k, v] : traj.params) x.push_back(v);
    return x;
  };

  LieReport rep;
  rep.h = h;
  for (size_t i = m; i + m < n; ++i) {
    const double fd = (P(point(i + m).data()) - P(point(i - m).data())) / (2 * h);
    rep.max_error = std::max(rep.max_error, std::abs(fd - L(point(i).data())));
    ++rep.points;
  }
  return rep;
}

std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream os;
  os.precision(17);
  os << "t";
  for (const auto& v : traj.vars) os << "," << v;
  os << ",event\n";
  for (size_t i = 0; i < traj.times.size(); ++i) {
    os << traj.times[i];
    for (double y : traj.states[i]) os << "," << y;
    os << ",";
    for (const auto& e : traj.events) {
      if (e.time == traj.times[i]) {
        os << event_text(e.kind);
        break;
      }
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace dlive
