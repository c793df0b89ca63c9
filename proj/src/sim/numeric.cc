#include <algorithm>
#include <cmath>

#include "dlive/sim.h"

namespace dlive {

NumPoly::NumPoly(const Polynomial& p, const std::vector<std::string>& vars) {
  for (const auto& [mono, c] : p.terms()) {
    Term t{to_double(c), {}};
    for (const auto& [v, e] : mono) {
      auto it = std::find(vars.begin(), vars.end(), v);
      if (it == vars.end()) throw MissingBinding("no value for '" + v + "'");
      t.powers.emplace_back(size_t(it - vars.begin()), e);
    }
    terms_.push_back(std::move(t));
  }
}

double NumPoly::operator()(const double* x) const {
  double sum = 0;
  for (const auto& t : terms_) {
    double m = t.coeff;
    for (const auto& [i, e] : t.powers) {
      double b = x[i];
      for (unsigned k = 0; k < e; ++k) m *= b;
    }
    sum += m;
  }
  return sum;
}

namespace {

using K = Formula::Kind;

}  // namespace

NumFormula::NumFormula(const Formula& f, const std::vector<std::string>& vars) {
  struct Builder {
    NumFormula& self;
    const std::vector<std::string>& vars;
    Node build(const Formula& g) {
      switch (g.kind()) {
        case K::True: return {Node::Kind::True};
        case K::False: return {Node::Kind::False};
        case K::Cmp: {
          self.polys_.emplace_back(g.lhs() - g.rhs(), vars);
          self.ops_.push_back(g.op());
          Node n{Node::Kind::Atom};
          n.atom = self.polys_.size() - 1;
          return n;
        }
        case K::Not: {
          Node n{Node::Kind::Not};
          n.kids.push_back(build(g.left()));
          return n;
        }
        case K::And:
        case K::Or: {
          Node n{g.kind() == K::And ? Node::Kind::And : Node::Kind::Or};
          n.kids.push_back(build(g.left()));
          n.kids.push_back(build(g.right()));
          return n;
        }
        case K::Implies: {
          Node n{Node::Kind::Or};
          Node neg{Node::Kind::Not};
          neg.kids.push_back(build(g.left()));
          n.kids.push_back(std::move(neg));
          n.kids.push_back(build(g.right()));
          return n;
        }
        default:
          throw std::invalid_argument("simulation needs an arithmetic formula");
      }
    }
  };
  root_ = Builder{*this, vars}.build(f.is_arith() ? nnf(f) : f);
}

// mode 0: exact; 1: tolerant; 2: pessimistic
bool NumFormula::eval_node(const Node& n, const double* x, double eta, int mode) const {
  switch (n.kind) {
    case Node::Kind::True: return true;
    case Node::Kind::False: return false;
    case Node::Kind::Not: return !eval_node(n.kids[0], x, eta, mode);
    case Node::Kind::And:
      return std::all_of(n.kids.begin(), n.kids.end(),
                         [&](const Node& k) { return eval_node(k, x, eta, mode); });
    case Node::Kind::Or:
      return std::any_of(n.kids.begin(), n.kids.end(),
                         [&](const Node& k) { return eval_node(k, x, eta, mode); });
    case Node::Kind::Atom: {
      const double v = polys_[n.atom](x);
      const double e = mode == 0 ? 0.0 : eta;
      const bool pess = mode == 2;
      switch (ops_[n.atom]) {
        case CmpOp::Eq: return std::abs(v) <= e;
        case CmpOp::Ne: return std::abs(v) > e;
        case CmpOp::Ge: return v >= -e;
        case CmpOp::Le: return v <= e;
        case CmpOp::Gt: return pess ? v > e : v > 0;
        case CmpOp::Lt: return pess ? v < -e : v < 0;
      }
    }
  }
  return false;
}

bool NumFormula::eval(const double* x) const { return eval_node(root_, x, 0, 0); }

bool NumFormula::eval_tol(const double* x, double eta, bool pessimistic) const {
  return eval_node(root_, x, eta, pessimistic ? 2 : 1);
}

std::vector<int> NumFormula::signs(const double* x) const {
  std::vector<int> out;
  out.reserve(polys_.size());
  for (const auto& p : polys_) {
    const double v = p(x);
    out.push_back(v > 0 ? 1 : v < 0 ? -1 : 0);
  }
  return out;
}

const char* event_text(EventKind k) {
  switch (k) {
    case EventKind::GoalEntered: return "GoalEntered";
    case EventKind::DomainExited: return "DomainExited";
    case EventKind::BlowUpSuspected: return "BlowUpSuspected";
    case EventKind::HorizonReached: return "HorizonReached";
  }
  return "?";
}

const char* sample_class_text(SampleClass c) {
  switch (c) {
    case SampleClass::Witness: return "WITNESS";
    case SampleClass::RefutedSample: return "REFUTED-SAMPLE";
    case SampleClass::BlowUp: return "BLOWUP";
    case SampleClass::Inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

}  // namespace dlive
