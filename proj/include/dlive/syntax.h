#pragma once

#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dlive/formula.h"

namespace dlive {

struct SourcePos {
  size_t offset = 0;
  size_t line = 1;
  size_t column = 1;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, SourcePos pos) : std::runtime_error(what), pos_(pos) {}
  const SourcePos& pos() const { return pos_; }

 private:
  SourcePos pos_;
};

class SyntaxError : public ParseError {
 public:
  SyntaxError(SourcePos pos, std::vector<std::string> expected, std::string found);
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::vector<std::string> expected_;
};

class DuplicateDeclaration : public ParseError {
 public:
  using ParseError::ParseError;
};

class UnknownIdentifier : public ParseError {
 public:
  using ParseError::ParseError;
};

struct CertStep;

struct Hint {
  std::vector<CertStep> steps;
  bool operator==(const Hint& o) const;
};

using BindingValue = std::variant<Polynomial, Formula, Hint>;

struct Binding {
  std::string key;
  BindingValue value;
  SourcePos pos;
  bool operator==(const Binding& o) const { return key == o.key && value == o.value; }
};

/// `rule Name { key = value; ... }`
struct CertStep {
  std::string rule;
  std::vector<Binding> bindings;
  SourcePos pos;

  const Binding* find(std::string_view key) const;
  bool operator==(const CertStep& o) const { return rule == o.rule && bindings == o.bindings; }
};

struct ProblemFile {
  OdeSystem ode;  // domain defaults to true, params from `param` declarations
  bool has_domain = false;
  std::vector<Formula> assumptions;
  Formula goal;
  std::vector<CertStep> certificate;

  bool operator==(const ProblemFile& o) const;
};

/// Rule names accepted in `proof` blocks and hint lists.
const std::set<std::string>& known_rule_names();

ProblemFile parse_problem(std::string_view text);

/// Standalone parsers. With a non-null scope, identifiers outside it are
/// rejected with UnknownIdentifier.
Formula parse_formula(std::string_view text, const std::set<std::string>* scope = nullptr);
Polynomial parse_polynomial(std::string_view text, const std::set<std::string>* scope = nullptr);

std::string print_formula(const Formula& f, const VarOrder& order = {});
std::string print_polynomial(const Polynomial& p, const VarOrder& order = {});
std::string print_problem(const ProblemFile& problem);
std::string print_step(const CertStep& step, const VarOrder& order = {}, int indent = 0);

}  // namespace dlive
