#include <algorithm>
#include <cmath>

#include "dlive/sim.h"

namespace dlive {

namespace {

// State variables first, parameters after; parameters never move.
struct Flow {
  std::vector<std::string> names;
  size_t n = 0;
  std::vector<NumPoly> rhs;
  std::vector<double> params;

  Flow(const OdeSystem& sys, const NumPoint& init) {
    names = sys.vars;
    if (sys.clock) names.push_back(*sys.clock);
    n = names.size();
    for (const auto& p : sys.params) {
      names.push_back(p);
      params.push_back(value(init, p));
    }
    for (const auto& r : sys.rhs) rhs.emplace_back(r, names);
    if (sys.clock) rhs.emplace_back(Polynomial::constant(1), names);
  }

  static double value(const NumPoint& pt, const std::string& v) {
    auto it = pt.find(v);
    if (it == pt.end()) throw MissingBinding("initial state has no value for '" + v + "'");
    return it->second;
  }

  std::vector<double> start(const NumPoint& init) const {
    std::vector<double> y(n);
    for (size_t i = 0; i < n; ++i) y[i] = value(init, names[i]);
    return y;
  }

  std::vector<double> full(const std::vector<double>& y) const {
    std::vector<double> x(y);
    x.insert(x.end(), params.begin(), params.end());
    return x;
  }

  void deriv(const std::vector<double>& y, std::vector<double>& out) const {
    const std::vector<double> x = full(y);
    out.resize(n);
    for (size_t i = 0; i < n; ++i) out[i] = rhs[i](x.data());
  }

  std::vector<double> rk4(const std::vector<double>& y, double h) const {
    std::vector<double> k1, k2, k3, k4, tmp(n);
    deriv(y, k1);
    for (size_t i = 0; i < n; ++i) tmp[i] = y[i] + h / 2 * k1[i];
    deriv(tmp, k2);
    for (size_t i = 0; i < n; ++i) tmp[i] = y[i] + h / 2 * k2[i];
    deriv(tmp, k3);
    for (size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
    deriv(tmp, k4);
    std::vector<double> out(n);
    for (size_t i = 0; i < n; ++i) out[i] = y[i] + h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    return out;
  }

  std::vector<double> doubled(const std::vector<double>& y, double h) const {
    return rk4(rk4(y, h / 2), h / 2);
  }
};

double max_norm(const std::vector<double>& y) {
  double m = 0;
  for (double v : y) {
    if (!std::isfinite(v)) return INFINITY;
    m = std::max(m, std::abs(v));
  }
  return m;
}

NumPoint param_point(const Flow& fl) {
  NumPoint out;
  for (size_t i = 0; i < fl.params.size(); ++i) out[fl.names[fl.n + i]] = fl.params[i];
  return out;
}

Trajectory empty_trajectory(const Flow& fl) {
  Trajectory tr;
  tr.vars.assign(fl.names.begin(), fl.names.begin() + fl.n);
  tr.params = param_point(fl);
  return tr;
}

}  // namespace

Trajectory simulate(const OdeSystem& sys, const NumPoint& init, const Formula& goal,
                    const SimOptions& opt) {
  const Flow fl(sys, init);
  const NumFormula g(goal, fl.names);
  const NumFormula dom(sys.domain, fl.names);
  Trajectory tr = empty_trajectory(fl);

  // true once the run must stop: goal reached or domain left
  auto decisive = [&](const std::vector<double>& y) {
    const std::vector<double> x = fl.full(y);
    return g.eval_tol(x.data(), opt.eta, false) || !dom.eval_tol(x.data(), opt.eta, true);
  };
  auto classify = [&](const std::vector<double>& y) {
    const std::vector<double> x = fl.full(y);
    return dom.eval_tol(x.data(), opt.eta, true) ? EventKind::GoalEntered : EventKind::DomainExited;
  };
  auto record = [&](double t, const std::vector<double>& y) {
    tr.times.push_back(t);
    tr.states.push_back(y);
  };

  double t = 0;
  std::vector<double> y = fl.start(init);
  record(t, y);
  if (decisive(y)) {
    tr.events.push_back({0.0, classify(y)});
    return tr;
  }

  double h = opt.max_step;
  tr.stats.min_step = h;
  while (true) {
    if (t >= opt.horizon) {
      tr.events.push_back({t, EventKind::HorizonReached});
      return tr;
    }
    const double step = std::min(h, opt.horizon - t);
    const std::vector<double> y1 = fl.rk4(y, step);
    const std::vector<double> y2 = fl.doubled(y, step);
    const double size = std::max(max_norm(y), max_norm(y2));
    double err = 0;
    for (size_t i = 0; i < fl.n; ++i) err = std::max(err, std::abs(y2[i] - y1[i]) / 15);
    if (!std::isfinite(size) || !std::isfinite(err)) {
      ++tr.stats.rejected;
      h = step / 4;
    } else {
      const double scale = opt.tol * (1 + size);
      if (err <= scale) {
        ++tr.stats.accepted;
        tr.stats.min_step = std::min(tr.stats.min_step, step);
        const double t1 = (step == opt.horizon - t) ? opt.horizon : t + step;
        if (max_norm(y2) > opt.blowup) {
          record(t1, y2);
          tr.events.push_back({t1, EventKind::BlowUpSuspected});
          return tr;
        }
        if (decisive(y2)) {
          double lo = 0, hi = t1 - t;
          std::vector<double> yhi = y2;
          while (hi - lo > opt.event_tol) {
            const double mid = (lo + hi) / 2;
            std::vector<double> ym = fl.doubled(y, mid);
            if (decisive(ym)) {
              hi = mid;
              yhi = std::move(ym);
            } else {
              lo = mid;
            }
          }
          record(t + hi, yhi);
          tr.events.push_back({t + hi, classify(yhi)});
          return tr;
        }
        t = t1;
        y = y2;
        record(t, y);
        const double grow = err > 0 ? 0.9 * std::pow(scale / err, 0.2) : 2.0;
        h = std::min(opt.max_step, std::max(h, step) * std::clamp(grow, 0.2, 2.0));
      } else {
        ++tr.stats.rejected;
        h = step * std::max(0.2, 0.9 * std::pow(scale / err, 0.2));
      }
    }
    if (t < opt.horizon && h < 1e-12 * std::max(1.0, std::abs(t))) {
      tr.events.push_back({t, EventKind::BlowUpSuspected});
      return tr;
    }
  }
}

Trajectory integrate_uniform(const OdeSystem& sys, const NumPoint& init, double horizon,
                             double dt, unsigned substeps) {
  if (!(dt > 0) || !(horizon > 0) || substeps == 0) {
    throw std::invalid_argument("integrate_uniform needs positive horizon, dt and substeps");
  }
  const Flow fl(sys, init);
  Trajectory tr = empty_trajectory(fl);
  std::vector<double> y = fl.start(init);
  tr.times.push_back(0);
  tr.states.push_back(y);
  const auto steps = size_t(std::floor(horizon / dt + 1e-9));
  const double h = dt / substeps;
  for (size_t i = 1; i <= steps; ++i) {
    for (unsigned s = 0; s < substeps; ++s) y = fl.rk4(y, h);
    tr.stats.accepted += substeps;
    const double t = double(i) * dt;
    if (max_norm(y) > 1e9) {
      tr.events.push_back({t, EventKind::BlowUpSuspected});
      return tr;
    }
    tr.times.push_back(t);
    tr.states.push_back(y);
  }
  tr.stats.min_step = h;
  tr.events.push_back({tr.times.back(), EventKind::HorizonReached});
  return tr;
}

}  // namespace dlive
