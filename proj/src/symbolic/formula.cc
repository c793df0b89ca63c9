#include "dlive/formula.h"

#include <stdexcept>

namespace dlive {

struct Formula::Node {
  Kind kind = Kind::True;
  Polynomial lhs, rhs;
  CmpOp op = CmpOp::Eq;
  Formula a, b;
  std::string var;
  std::shared_ptr<const OdeSystem> ode;
};

Formula::Formula() : n_(nullptr) {}

Formula Formula::tru() { return Formula(); }

Formula Formula::fls() {
  static const std::shared_ptr<const Node> node = [] {
    auto n = std::make_shared<Node>();
    n->kind = Kind::False;
    return std::shared_ptr<const Node>(n);
  }();
  return Formula(node);
}

Formula Formula::cmp(Polynomial lhs, CmpOp op, Polynomial rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Cmp;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  n->op = op;
  return Formula(std::move(n));
}

Formula Formula::neg(Formula a) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Not;
  n->a = std::move(a);
  return Formula(std::move(n));
}

Formula Formula::conj(Formula a, Formula b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::And;
  n->a = std::move(a);
  n->b = std::move(b);
  return Formula(std::move(n));
}

Formula Formula::disj(Formula a, Formula b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Or;
  n->a = std::move(a);
  n->b = std::move(b);
  return Formula(std::move(n));
}

Formula Formula::implies(Formula a, Formula b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Implies;
  n->a = std::move(a);
  n->b = std::move(b);
  return Formula(std::move(n));
}

Formula Formula::forall(std::string var, Formula body) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Forall;
  n->var = std::move(var);
  n->a = std::move(body);
  return Formula(std::move(n));
}

Formula Formula::exists(std::string var, Formula body) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Exists;
  n->var = std::move(var);
  n->a = std::move(body);
  return Formula(std::move(n));
}

Formula Formula::box(OdeSystem ode, Formula post) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Box;
  n->ode = std::make_shared<const OdeSystem>(std::move(ode));
  n->a = std::move(post);
  return Formula(std::move(n));
}

Formula Formula::diamond(OdeSystem ode, Formula post) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Diamond;
  n->ode = std::make_shared<const OdeSystem>(std::move(ode));
  n->a = std::move(post);
  return Formula(std::move(n));
}

Formula::Kind Formula::kind() const { return n_ ? n_->kind : Kind::True; }

namespace {
const Polynomial kZero;
}  // namespace

const Polynomial& Formula::lhs() const { return n_ ? n_->lhs : kZero; }
const Polynomial& Formula::rhs() const { return n_ ? n_->rhs : kZero; }
CmpOp Formula::op() const { return n_ ? n_->op : CmpOp::Eq; }

const Formula& Formula::left() const {
  if (!n_) throw std::logic_error("formula has no operand");
  return n_->a;
}

const Formula& Formula::right() const {
  if (!n_) throw std::logic_error("formula has no operand");
  return n_->b;
}

const std::string& Formula::var() const {
  static const std::string empty;
  return n_ ? n_->var : empty;
}

const OdeSystem& Formula::ode() const {
  if (!n_ || !n_->ode) throw std::logic_error("formula is not a modality");
  return *n_->ode;
}

bool Formula::is_arith() const {
  switch (kind()) {
    case Kind::True:
    case Kind::False:
    case Kind::Cmp:
      return true;
    case Kind::Not:
      return left().is_arith();
    case Kind::And:
    case Kind::Or:
    case Kind::Implies:
      return left().is_arith() && right().is_arith();
    default:
      return false;
  }
}

bool Formula::operator==(const Formula& o) const {
  if (n_ == o.n_) return true;
  if (kind() != o.kind()) return false;
  switch (kind()) {
    case Kind::True:
    case Kind::False:
      return true;
    case Kind::Cmp:
      return op() == o.op() && lhs() == o.lhs() && rhs() == o.rhs();
    case Kind::Not:
      return left() == o.left();
    case Kind::And:
    case Kind::Or:
    case Kind::Implies:
      return left() == o.left() && right() == o.right();
    case Kind::Forall:
    case Kind::Exists:
      return var() == o.var() && left() == o.left();
    case Kind::Box:
    case Kind::Diamond:
      return ode() == o.ode() && left() == o.left();
  }
  return false;
}

std::set<std::string> OdeSystem::state_vars() const {
  std::set<std::string> out(vars.begin(), vars.end());
  if (clock) out.insert(*clock);
  return out;
}

OdeSystem OdeSystem::with_domain(Formula q) const {
  OdeSystem out = *this;
  out.domain = std::move(q);
  return out;
}

bool OdeSystem::same_dynamics(const OdeSystem& o) const {
  return vars == o.vars && rhs == o.rhs && clock == o.clock;
}

bool OdeSystem::operator==(const OdeSystem& o) const {
  return same_dynamics(o) && domain == o.domain;
}

const char* cmp_text(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "!=";
    case CmpOp::Ge: return ">=";
    case CmpOp::Gt: return ">";
    case CmpOp::Le: return "<=";
    case CmpOp::Lt: return "<";
  }
  return "?";
}

CmpOp cmp_negate(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return CmpOp::Ne;
    case CmpOp::Ne: return CmpOp::Eq;
    case CmpOp::Ge: return CmpOp::Lt;
    case CmpOp::Gt: return CmpOp::Le;
    case CmpOp::Le: return CmpOp::Gt;
    case CmpOp::Lt: return CmpOp::Ge;
  }
  return op;
}

CmpOp cmp_flip(CmpOp op) {
  switch (op) {
    case CmpOp::Ge: return CmpOp::Le;
    case CmpOp::Gt: return CmpOp::Lt;
    case CmpOp::Le: return CmpOp::Ge;
    case CmpOp::Lt: return CmpOp::Gt;
    default: return op;
  }
}

bool cmp_holds(CmpOp op, int sign) {
  switch (op) {
    case CmpOp::Eq: return sign == 0;
    case CmpOp::Ne: return sign != 0;
    case CmpOp::Ge: return sign >= 0;
    case CmpOp::Gt: return sign > 0;
    case CmpOp::Le: return sign <= 0;
    case CmpOp::Lt: return sign < 0;
  }
  return false;
}

Formula mk_not(const Formula& a) {
  switch (a.kind()) {
    case Formula::Kind::True: return Formula::fls();
    case Formula::Kind::False: return Formula::tru();
    case Formula::Kind::Not: return a.left();
    default: return Formula::neg(a);
  }
}

Formula mk_and(const Formula& a, const Formula& b) {
  if (a.is_true()) return b;
  if (b.is_true()) return a;
  if (a.is_false() || b.is_false()) return Formula::fls();
  if (a == b) return a;
  return Formula::conj(a, b);
}

Formula mk_or(const Formula& a, const Formula& b) {
  if (a.is_false()) return b;
  if (b.is_false()) return a;
  if (a.is_true() || b.is_true()) return Formula::tru();
  if (a == b) return a;
  return Formula::disj(a, b);
}

Formula mk_and(const std::vector<Formula>& fs) {
  Formula out = Formula::tru();
  for (const auto& f : fs) out = mk_and(out, f);
  return out;
}

Formula mk_or(const std::vector<Formula>& fs) {
  Formula out = Formula::fls();
  for (const auto& f : fs) out = mk_or(out, f);
  return out;
}

Formula mk_cmp0(const Polynomial& p, CmpOp op) { return Formula::cmp(p, op, Polynomial()); }

namespace {

void free_ids(const Formula& f, std::set<std::string>& bound, std::set<std::string>* out) {
  auto add_poly = [&](const Polynomial& p) {
    for (const auto& v : p.variables()) {
      if (!bound.count(v)) out->insert(v);
    }
  };
  switch (f.kind()) {
    case Formula::Kind::True:
    case Formula::Kind::False:
      return;
    case Formula::Kind::Cmp:
      add_poly(f.lhs());
      add_poly(f.rhs());
      return;
    case Formula::Kind::Not:
      free_ids(f.left(), bound, out);
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
      free_ids(f.left(), bound, out);
      free_ids(f.right(), bound, out);
      return;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      const bool fresh = bound.insert(f.var()).second;
      free_ids(f.left(), bound, out);
      if (fresh) bound.erase(f.var());
      return;
    }
    case Formula::Kind::Box:
    case Formula::Kind::Diamond: {
      const OdeSystem& ode = f.ode();
      for (const auto& v : ode.state_vars()) {
        if (!bound.count(v)) out->insert(v);
      }
      for (const auto& r : ode.rhs) add_poly(r);
      free_ids(ode.domain, bound, out);
      free_ids(f.left(), bound, out);
      return;
    }
  }
}

Formula nnf_rec(const Formula& f, bool negate) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::True:
      return negate ? Formula::fls() : Formula::tru();
    case K::False:
      return negate ? Formula::tru() : Formula::fls();
    case K::Cmp:
      return negate ? Formula::cmp(f.lhs(), cmp_negate(f.op()), f.rhs()) : f;
    case K::Not:
      return nnf_rec(f.left(), !negate);
    case K::And:
    case K::Or: {
      Formula a = nnf_rec(f.left(), negate);
      Formula b = nnf_rec(f.right(), negate);
      const bool is_and = (f.kind() == K::And) != negate;
      return is_and ? mk_and(a, b) : mk_or(a, b);
    }
    case K::Implies: {
      Formula a = nnf_rec(f.left(), !negate);
      Formula b = nnf_rec(f.right(), negate);
      return negate ? mk_and(a, b) : mk_or(a, b);
    }
    default:
      throw std::invalid_argument("nnf requires an arithmetic formula");
  }
}

}  // namespace

std::set<std::string> free_identifiers(const Formula& f) {
  std::set<std::string> bound, out;
  free_ids(f, bound, &out);
  return out;
}

Formula nnf(const Formula& f) { return nnf_rec(f, false); }

std::vector<Formula> conjuncts(const Formula& f) {
  if (f.kind() != Formula::Kind::And) return {f};
  std::vector<Formula> out = conjuncts(f.left());
  for (auto& g : conjuncts(f.right())) out.push_back(std::move(g));
  return out;
}

void collect_atoms(const Formula& f, std::vector<Formula>* out) {
  switch (f.kind()) {
    case Formula::Kind::Cmp:
      out->push_back(f);
      return;
    case Formula::Kind::Not:
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      collect_atoms(f.left(), out);
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
      collect_atoms(f.left(), out);
      collect_atoms(f.right(), out);
      return;
    default:
      return;
  }
}

bool eval_formula(const Formula& f, const std::map<std::string, Rational>& point) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::True: return true;
    case K::False: return false;
    case K::Cmp: return cmp_holds(f.op(), sgn((f.lhs() - f.rhs()).eval(point)));
    case K::Not: return !eval_formula(f.left(), point);
    case K::And: return eval_formula(f.left(), point) && eval_formula(f.right(), point);
    case K::Or: return eval_formula(f.left(), point) || eval_formula(f.right(), point);
    case K::Implies: return !eval_formula(f.left(), point) || eval_formula(f.right(), point);
    default: throw std::invalid_argument("cannot evaluate quantified or modal formula");
  }
}

Formula substitute(const Formula& f, const std::string& var, const Polynomial& value) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::True:
    case K::False:
      return f;
    case K::Cmp:
      return Formula::cmp(f.lhs().substitute(var, value), f.op(), f.rhs().substitute(var, value));
    case K::Not:
      return Formula::neg(substitute(f.left(), var, value));
    case K::And:
      return Formula::conj(substitute(f.left(), var, value), substitute(f.right(), var, value));
    case K::Or:
      return Formula::disj(substitute(f.left(), var, value), substitute(f.right(), var, value));
    case K::Implies:
      return Formula::implies(substitute(f.left(), var, value),
                              substitute(f.right(), var, value));
    case K::Forall:
    case K::Exists: {
      if (f.var() == var) return f;
      Formula body = substitute(f.left(), var, value);
      return f.kind() == K::Forall ? Formula::forall(f.var(), body)
                                   : Formula::exists(f.var(), body);
    }
    case K::Box:
    case K::Diamond:
      throw std::invalid_argument("substitution into a modality");
  }
  return f;
}

}  // namespace dlive
