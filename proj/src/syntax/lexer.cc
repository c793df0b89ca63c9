#include "lexer.h"

#include <cctype>

namespace dlive::detail {

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Number: return "number";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrack: return "'['";
    case Tok::RBrack: return "']'";
    case Tok::Lt: return "'<'";
    case Tok::Gt: return "'>'";
    case Tok::Le: return "'<='";
    case Tok::Ge: return "'>='";
    case Tok::Eq: return "'='";
    case Tok::Ne: return "'!='";
    case Tok::Bang: return "'!'";
    case Tok::Amp: return "'&'";
    case Tok::Bar: return "'|'";
    case Tok::Arrow: return "'->'";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::Caret: return "'^'";
    case Tok::Prime: return "'''";
    case Tok::Semi: return "';'";
    case Tok::Comma: return "','";
    case Tok::End: return "end of input";
  }
  return "?";
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  SourcePos pos;
  size_t i = 0;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n; ++k) {
      if (text[i] == '\n') {
        ++pos.line;
        pos.column = 1;
      } else {
        ++pos.column;
      }
      ++i;
      pos.offset = i;
    }
  };
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    const SourcePos start = pos;
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) {
        ++j;
      }
      out.push_back({Tok::Ident, std::string(text.substr(i, j - i)), start});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      out.push_back({Tok::Number, std::string(text.substr(i, j - i)), start});
      advance(j - i);
      continue;
    }
    auto two = [&](char next) { return i + 1 < text.size() && text[i + 1] == next; };
    Tok kind;
    size_t len = 1;
    switch (c) {
      case '{': kind = Tok::LBrace; break;
      case '}': kind = Tok::RBrace; break;
      case '(': kind = Tok::LParen; break;
      case ')': kind = Tok::RParen; break;
      case '[': kind = Tok::LBrack; break;
      case ']': kind = Tok::RBrack; break;
      case '<':
        if (two('=')) { kind = Tok::Le; len = 2; } else { kind = Tok::Lt; }
        break;
      case '>':
        if (two('=')) { kind = Tok::Ge; len = 2; } else { kind = Tok::Gt; }
        break;
      case '=': kind = Tok::Eq; break;
      case '!':
        if (two('=')) { kind = Tok::Ne; len = 2; } else { kind = Tok::Bang; }
        break;
      case '&': kind = Tok::Amp; break;
      case '|': kind = Tok::Bar; break;
      case '-':
        if (two('>')) { kind = Tok::Arrow; len = 2; } else { kind = Tok::Minus; }
        break;
      case '+': kind = Tok::Plus; break;
      case '*': kind = Tok::Star; break;
      case '/': kind = Tok::Slash; break;
      case '^': kind = Tok::Caret; break;
      case '\'': kind = Tok::Prime; break;
      case ';': kind = Tok::Semi; break;
      case ',': kind = Tok::Comma; break;
      default:
        throw SyntaxError(start, {"token"}, std::string(1, c));
    }
    out.push_back({kind, std::string(text.substr(i, len)), start});
    advance(len);
  }
  out.push_back({Tok::End, "", pos});
  return out;
}

}  // namespace dlive::detail
