#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dlive/syntax.h"

namespace dlive::detail {

enum class Tok {
  Ident, Number, LBrace, RBrace, LParen, RParen, LBrack, RBrack, Lt, Gt, Le, Ge, Eq, Ne,
  Bang, Amp, Bar, Arrow, Plus, Minus, Star, Slash, Caret, Prime, Semi, Comma, End
};

struct Token {
  Tok kind;
  std::string text;
  SourcePos pos;
};

const char* tok_name(Tok t);

/// Splits `text` into tokens ending with Tok::End. Throws SyntaxError on
/// characters outside the language.
std::vector<Token> tokenize(std::string_view text);

}  // namespace dlive::detail
