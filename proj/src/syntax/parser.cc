#include <algorithm>
#include <optional>
#include <utility>

#include "dlive/syntax.h"
#include "lexer.h"

namespace dlive {

namespace {

std::string describe(const SourcePos& pos, const std::vector<std::string>& expected,
                     const std::string& found) {
  std::string msg = "line " + std::to_string(pos.line) + ", column " +
                    std::to_string(pos.column) + ": expected ";
  for (size_t i = 0; i < expected.size(); ++i) {
    if (i) msg += i + 1 == expected.size() ? " or " : ", ";
    msg += expected[i];
  }
  msg += ", found " + (found.empty() ? std::string("end of input") : "'" + found + "'");
  return msg;
}

}  // namespace

SyntaxError::SyntaxError(SourcePos pos, std::vector<std::string> expected, std::string found)
    : ParseError(describe(pos, expected, found), pos), expected_(std::move(expected)) {}

bool Hint::operator==(const Hint& o) const { return steps == o.steps; }

const Binding* CertStep::find(std::string_view key) const {
  for (const auto& b : bindings) {
    if (b.key == key) return &b;
  }
  return nullptr;
}

bool ProblemFile::operator==(const ProblemFile& o) const {
  return ode == o.ode && ode.params == o.ode.params && has_domain == o.has_domain &&
         assumptions == o.assumptions && goal == o.goal && certificate == o.certificate;
}

const std::set<std::string>& known_rule_names() {
  static const std::set<std::string> names = {
      // derived liveness rules
      "dV_geq", "dV_gt", "dV_geq_star", "dV_eq", "dV_eqM", "dV_k", "SP", "SP_b", "SP_c",
      "SLyap", "dV_geq_dom", "dV_gt_dom", "dV_eq_dom", "dV_eqM_dom", "SLyap_dom", "SP_dom",
      "SP_ck_dom", "E_c_dom",
      // refinement steps
      "M_dia", "K_dia", "DR", "COR", "SAR",
      // invariance hints
      "DI", "DC", "DW", "DX", "BC", "DomainWeaken",
      // duration sub-certificates
      "GEx", "BEx", "Assume"};
  return names;
}

namespace {

using detail::Tok;
using detail::Token;

const std::set<std::string>& keywords() {
  static const std::set<std::string> k = {"param", "ode",  "domain", "assume", "goal",  "proof",
                                          "rule",  "hint", "true",   "false",  "forall", "exists"};
  return k;
}

bool is_cmp(Tok t) {
  return t == Tok::Eq || t == Tok::Ne || t == Tok::Lt || t == Tok::Le || t == Tok::Gt ||
         t == Tok::Ge;
}

CmpOp to_cmp(Tok t) {
  switch (t) {
    case Tok::Eq: return CmpOp::Eq;
    case Tok::Ne: return CmpOp::Ne;
    case Tok::Lt: return CmpOp::Lt;
    case Tok::Le: return CmpOp::Le;
    case Tok::Gt: return CmpOp::Gt;
    default: return CmpOp::Ge;
  }
}

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(detail::tokenize(text)) {}

  ProblemFile problem();
  Formula standalone_formula(const std::set<std::string>* scope) {
    Formula f = formula();
    expect(Tok::End);
    check_uses(scope);
    return f;
  }
  Polynomial standalone_poly(const std::set<std::string>* scope) {
    Polynomial p = poly();
    expect(Tok::End);
    check_uses(scope);
    return p;
  }

 private:
  struct State {
    size_t i;
    size_t uses;
  };

  const Token& peek(size_t k = 0) const { return toks_[std::min(i_ + k, toks_.size() - 1)]; }
  bool at(Tok t) const { return peek().kind == t; }
  bool at_word(std::string_view w) const { return at(Tok::Ident) && peek().text == w; }
  State save() const { return {i_, uses_.size()}; }
  void restore(const State& s) {
    i_ = s.i;
    uses_.resize(s.uses);
  }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    throw SyntaxError(peek().pos, std::move(expected), peek().text);
  }

  const Token& expect(Tok t) {
    if (!at(t)) fail({detail::tok_name(t)});
    return toks_[i_++];
  }

  void expect_word(std::string_view w) {
    if (!at_word(w)) fail({"'" + std::string(w) + "'"});
    ++i_;
  }

  const Token& ident() {
    if (!at(Tok::Ident) || keywords().count(peek().text)) fail({"identifier"});
    return toks_[i_++];
  }

  void use(const Token& t) {
    if (std::find(bound_.begin(), bound_.end(), t.text) == bound_.end()) {
      uses_.emplace_back(t.text, t.pos);
    }
  }

  void check_uses(const std::set<std::string>* scope) const {
    if (!scope) return;
    for (const auto& [name, pos] : uses_) {
      if (!scope->count(name)) {
        throw UnknownIdentifier("line " + std::to_string(pos.line) + ", column " +
                                    std::to_string(pos.column) + ": unknown identifier '" +
                                    name + "'",
                                pos);
      }
    }
  }

  // Runs `a`, and on SyntaxError rewinds and runs `b`; the error reported
  // when both fail is the one that got further.
  template <typename T, typename A, typename B>
  T either(A a, B b) {
    const State s = save();
    try {
      return a();
    } catch (const SyntaxError& ea) {
      restore(s);
      try {
        return b();
      } catch (const SyntaxError& eb) {
        if (ea.pos().offset > eb.pos().offset) throw ea;
        throw;
      }
    }
  }

  Polynomial poly();
  Polynomial term();
  Polynomial unary_poly();
  Polynomial power();
  Polynomial atom_poly();

  Formula formula();
  Formula implication();
  Formula disjunction();
  Formula conjunction();
  Formula unary();
  Formula primary();
  Formula comparison();
  OdeSystem modal_ode(Tok close);

  CertStep step();
  Binding binding();

  std::vector<Token> toks_;
  size_t i_ = 0;
  std::set<std::string> params_;
  std::vector<std::string> bound_;
  std::vector<std::pair<std::string, SourcePos>> uses_;
  bool no_chain_ = false;
};

Polynomial Parser::poly() {
  Polynomial p = term();
  while (at(Tok::Plus) || at(Tok::Minus)) {
    const bool minus = at(Tok::Minus);
    ++i_;
    Polynomial t = term();
    if (minus) {
      p -= t;
    } else {
      p += t;
    }
  }
  return p;
}

Polynomial Parser::term() {
  Polynomial p = unary_poly();
  while (at(Tok::Star) || at(Tok::Slash)) {
    const bool div = at(Tok::Slash);
    ++i_;
    const SourcePos pos = peek().pos;
    const std::string found = peek().text;
    Polynomial f = unary_poly();
    if (div) {
      if (!f.is_constant() || f.is_zero()) {
        throw SyntaxError(pos, {"nonzero constant divisor"}, found);
      }
      p = p * (Rational(1) / f.constant_term());
    } else {
      p = p * f;
    }
  }
  return p;
}

Polynomial Parser::unary_poly() {
  if (at(Tok::Minus)) {
    ++i_;
    return -unary_poly();
  }
  return power();
}

Polynomial Parser::power() {
  Polynomial base = atom_poly();
  if (at(Tok::Caret)) {
    ++i_;
    const Token& e = expect(Tok::Number);
    if (e.text.size() > 6) throw SyntaxError(e.pos, {"small exponent"}, e.text);
    return base.pow(std::stoi(e.text));
  }
  return base;
}

Polynomial Parser::atom_poly() {
  if (at(Tok::Number)) return Polynomial::constant(parse_rational(toks_[i_++].text));
  if (at(Tok::LParen)) {
    ++i_;
    Polynomial p = poly();
    expect(Tok::RParen);
    return p;
  }
  if (at(Tok::Ident) && !keywords().count(peek().text)) {
    const Token& t = toks_[i_++];
    use(t);
    return Polynomial::variable(t.text);
  }
  fail({"number", "identifier", "'('", "'-'"});
}

Formula Parser::formula() { return implication(); }

Formula Parser::implication() {
  Formula a = disjunction();
  if (at(Tok::Arrow)) {
    ++i_;
    return Formula::implies(a, implication());
  }
  return a;
}

Formula Parser::disjunction() {
  Formula a = conjunction();
  while (at(Tok::Bar)) {
    ++i_;
    a = Formula::disj(a, conjunction());
  }
  return a;
}

Formula Parser::conjunction() {
  Formula a = unary();
  while (at(Tok::Amp)) {
    ++i_;
    a = Formula::conj(a, unary());
  }
  return a;
}

Formula Parser::unary() {
  if (at(Tok::Bang)) {
    ++i_;
    return Formula::neg(unary());
  }
  if (at_word("forall") || at_word("exists")) {
    const bool all = at_word("forall");
    ++i_;
    const std::string v = ident().text;
    bound_.push_back(v);
    Formula body = unary();
    bound_.pop_back();
    return all ? Formula::forall(v, body) : Formula::exists(v, body);
  }
  if (at(Tok::Lt)) {
    ++i_;
    OdeSystem ode = modal_ode(Tok::Gt);
    return Formula::diamond(std::move(ode), unary());
  }
  if (at(Tok::LBrack)) {
    ++i_;
    OdeSystem ode = modal_ode(Tok::RBrack);
    return Formula::box(std::move(ode), unary());
  }
  return primary();
}

OdeSystem Parser::modal_ode(Tok close) {
  OdeSystem ode;
  ode.params = params_;
  do {
    if (!ode.vars.empty()) ++i_;
    const Token& v = ident();
    use(v);
    expect(Tok::Prime);
    expect(Tok::Eq);
    ode.vars.push_back(v.text);
    ode.rhs.push_back(poly());
  } while (at(Tok::Comma));
  if (at(Tok::Amp)) {
    ++i_;
    const bool saved = no_chain_;
    no_chain_ = true;
    ode.domain = formula();
    no_chain_ = saved;
  }
  expect(close);
  return ode;
}

Formula Parser::primary() {
  if (at_word("true")) {
    ++i_;
    return Formula::tru();
  }
  if (at_word("false")) {
    ++i_;
    return Formula::fls();
  }
  if (at(Tok::LParen)) {
    return either<Formula>(
        [&] {
          ++i_;
          const bool saved = no_chain_;
          no_chain_ = false;
          Formula f = formula();
          no_chain_ = saved;
          expect(Tok::RParen);
          return f;
        },
        [&] { return comparison(); });
  }
  return comparison();
}

Formula Parser::comparison() {
  Polynomial lhs = poly();
  if (!is_cmp(peek().kind)) fail({"comparison operator"});
  CmpOp op = to_cmp(toks_[i_++].kind);
  Polynomial rhs = poly();
  Formula out = Formula::cmp(lhs, op, rhs);
  while (!no_chain_ && is_cmp(peek().kind)) {
    op = to_cmp(toks_[i_++].kind);
    Polynomial next = poly();
    out = Formula::conj(out, Formula::cmp(rhs, op, next));
    rhs = std::move(next);
  }
  return out;
}

CertStep Parser::step() {
  CertStep s;
  s.pos = peek().pos;
  expect_word("rule");
  if (!at(Tok::Ident) || !known_rule_names().count(peek().text)) fail({"rule name"});
  s.rule = toks_[i_++].text;
  expect(Tok::LBrace);
  while (!at(Tok::RBrace)) {
    s.bindings.push_back(binding());
    for (size_t k = 0; k + 1 < s.bindings.size(); ++k) {
      if (s.bindings[k].key == s.bindings.back().key) {
        throw DuplicateDeclaration("duplicate binding '" + s.bindings.back().key + "'",
                                   s.bindings.back().pos);
      }
    }
    if (!at(Tok::Semi)) break;
    ++i_;
  }
  expect(Tok::RBrace);
  return s;
}

Binding Parser::binding() {
  Binding b;
  b.pos = peek().pos;
  b.key = ident().text;
  expect(Tok::Eq);
  if (at_word("hint")) {
    ++i_;
    expect(Tok::LBrack);
    Hint h;
    while (at_word("rule")) h.steps.push_back(step());
    expect(Tok::RBrack);
    b.value = std::move(h);
    return b;
  }
  b.value = either<BindingValue>(
      [&]() -> BindingValue {
        Polynomial p = poly();
        if (!at(Tok::Semi) && !at(Tok::RBrace)) fail({"';'", "'}'"});
        return p;
      },
      [&]() -> BindingValue { return formula(); });
  return b;
}

ProblemFile Parser::problem() {
  ProblemFile out;
  std::set<std::string> declared;
  while (at_word("param")) {
    ++i_;
    const Token& t = ident();
    if (!params_.insert(t.text).second) {
      throw DuplicateDeclaration("parameter '" + t.text + "' declared twice", t.pos);
    }
    expect(Tok::Semi);
  }
  out.ode.params = params_;
  declared = params_;
  bool seen_ode = false, seen_goal = false;
  SourcePos goal_pos;
  do {
    const Token& kw = peek();
    if (at_word("ode")) {
      if (seen_ode) throw DuplicateDeclaration("second ode block", kw.pos);
      seen_ode = true;
      ++i_;
      expect(Tok::LBrace);
      do {
        if (!out.ode.vars.empty()) ++i_;
        if (at(Tok::RBrace) && !out.ode.vars.empty()) break;
        const Token& v = ident();
        if (params_.count(v.text)) {
          throw DuplicateDeclaration("parameter '" + v.text + "' appears as an ODE left-hand side",
                                     v.pos);
        }
        if (std::find(out.ode.vars.begin(), out.ode.vars.end(), v.text) != out.ode.vars.end()) {
          throw DuplicateDeclaration("ODE variable '" + v.text + "' declared twice", v.pos);
        }
        expect(Tok::Prime);
        expect(Tok::Eq);
        out.ode.vars.push_back(v.text);
        out.ode.rhs.push_back(poly());
        declared.insert(v.text);
      } while (at(Tok::Semi));
      expect(Tok::RBrace);
    } else if (at_word("domain")) {
      if (out.has_domain) throw DuplicateDeclaration("second domain block", kw.pos);
      ++i_;
      expect(Tok::LBrace);
      out.ode.domain = formula();
      out.has_domain = true;
      expect(Tok::RBrace);
    } else if (at_word("assume")) {
      ++i_;
      expect(Tok::LBrace);
      out.assumptions.push_back(formula());
      while (at(Tok::Comma)) {
        ++i_;
        out.assumptions.push_back(formula());
      }
      expect(Tok::RBrace);
    } else if (at_word("goal")) {
      if (seen_goal) throw DuplicateDeclaration("second goal block", kw.pos);
      seen_goal = true;
      ++i_;
      expect(Tok::LBrace);
      out.goal = formula();
      expect(Tok::RBrace);
    } else if (at_word("proof")) {
      ++i_;
      expect(Tok::LBrace);
      while (!at(Tok::RBrace)) out.certificate.push_back(step());
      expect(Tok::RBrace);
    } else {
      std::vector<std::string> exp = {"'ode'", "'domain'", "'assume'", "'goal'", "'proof'"};
      if (!seen_ode && !out.has_domain && !seen_goal && out.assumptions.empty()) {
        exp.insert(exp.begin(), "'param'");
      }
      fail(exp);
    }
  } while (!at(Tok::End));
  if (!seen_ode) fail({"'ode'"});
  if (!seen_goal) fail({"'goal'"});
  check_uses(&declared);
  return out;
}

}  // namespace

ProblemFile parse_problem(std::string_view text) { return Parser(text).problem(); }

Formula parse_formula(std::string_view text, const std::set<std::string>* scope) {
  return Parser(text).standalone_formula(scope);
}

Polynomial parse_polynomial(std::string_view text, const std::set<std::string>* scope) {
  return Parser(text).standalone_poly(scope);
}

}  // namespace dlive
