#include "nrct/lexer.hpp"

#include <cctype>
#include <sstream>

namespace nrct {

namespace {

bool ident_start(char c, bool allow_reserved) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' ||
         (allow_reserved && c == '%');
}

bool ident_cont(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

}  // namespace

Lexer::Lexer(const std::string& src, bool allow_reserved) {
  int line = 1, col = 1;
  size_t i = 0;
  auto push = [&](Token::Kind k, std::string text, int l, int c) {
    Token t;
    t.kind = k;
    t.text = std::move(text);
    t.line = l;
    t.col = c;
    toks_.push_back(std::move(t));
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++col;
      ++i;
      continue;
    }
    // Line comments.
    if (c == '#' || (c == '-' && i + 1 < src.size() && src[i + 1] == '-')) {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    int tl = line, tc = col;
    auto two = [&](char a, char b) {
      return c == a && i + 1 < src.size() && src[i + 1] == b;
    };
    if (two('<', '-')) {
      push(Token::Kind::Arrow, "<-", tl, tc);
      i += 2;
      col += 2;
      continue;
    }
    if (two('=', '=')) {
      push(Token::Kind::EqEq, "==", tl, tc);
      i += 2;
      col += 2;
      continue;
    }
    if (two('&', '&')) {
      push(Token::Kind::AndAnd, "&&", tl, tc);
      i += 2;
      col += 2;
      continue;
    }
    bool neg = c == '-' && i + 1 < src.size() &&
               std::isdigit(static_cast<unsigned char>(src[i + 1]));
    if (std::isdigit(static_cast<unsigned char>(c)) || neg) {
      size_t j = i + (neg ? 1 : 0);
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
        ++j;
      std::string text = src.substr(i, j - i);
      Token t;
      t.kind = Token::Kind::Int;
      t.text = text;
      t.ival = BigInt(text);
      t.line = tl;
      t.col = tc;
      toks_.push_back(std::move(t));
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    if (ident_start(c, allow_reserved)) {
      size_t j = i + 1;
      while (j < src.size() && ident_cont(src[j])) ++j;
      push(Token::Kind::Ident, src.substr(i, j - i), tl, tc);
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    Token::Kind k;
    switch (c) {
      case '{': k = Token::Kind::LBrace; break;
      case '}': k = Token::Kind::RBrace; break;
      case '(': k = Token::Kind::LParen; break;
      case ')': k = Token::Kind::RParen; break;
      case '[': k = Token::Kind::LBracket; break;
      case ']': k = Token::Kind::RBracket; break;
      case ':': k = Token::Kind::Colon; break;
      case ',': k = Token::Kind::Comma; break;
      case '.': k = Token::Kind::Dot; break;
      case ';': k = Token::Kind::Semi; break;
      case '|': k = Token::Kind::Pipe; break;
      case '@': k = Token::Kind::At; break;
      case '+': k = Token::Kind::Plus; break;
      case '!': k = Token::Kind::Bang; break;
      case '=': k = Token::Kind::Eq; break;
      default: {
        std::ostringstream os;
        os << "unexpected character '" << c << "' at line " << line << ", col "
           << col;
        syntax_error(os.str());
      }
    }
    push(k, std::string(1, c), tl, tc);
    ++col;
    ++i;
  }
  Token eof;
  eof.kind = Token::Kind::Eof;
  eof.line = line;
  eof.col = col;
  toks_.push_back(std::move(eof));
}

Token TokenStream::expect(Token::Kind k, const std::string& what) {
  if (!at(k)) fail("expected " + what);
  return next();
}

std::string TokenStream::expect_ident(const std::string& what) {
  if (!at(Token::Kind::Ident)) fail("expected " + what);
  return next().text;
}

void TokenStream::fail(const std::string& msg) const {
  const Token& t = peek();
  std::ostringstream os;
  os << msg << " at line " << t.line << ", col " << t.col;
  if (t.kind != Token::Kind::Eof) os << " (got '" << t.text << "')";
  syntax_error(os.str());
}

}  // namespace nrct
