#pragma once

#include <string>
#include <vector>

#include "nrct/error.hpp"
#include "nrct/ints.hpp"

namespace nrct {

// Shared lexer for the expression grammar, the type grammar, and the trace
// text format. Identifiers may contain primes (l1') and, when
// `allow_reserved` is set, a leading '%' (generated labels in trace files).
struct Token {
  enum class Kind {
    Ident,
    Int,
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Colon,
    Comma,
    Dot,
    Semi,
    Pipe,
    At,
    Arrow,   // <-
    EqEq,    // ==
    AndAnd,  // &&
    Plus,
    Bang,
    Eq,  // =
    Eof,
  };

  Kind kind = Kind::Eof;
  std::string text;
  BigInt ival;
  int line = 1;
  int col = 1;
};

class Lexer {
 public:
  Lexer(const std::string& src, bool allow_reserved);
  const std::vector<Token>& tokens() const { return toks_; }

 private:
  std::vector<Token> toks_;
};

class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token& peek(size_t ahead = 0) const {
    size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  const Token& next() {
    const Token& t = peek();
    if (t.kind != Token::Kind::Eof) ++pos_;
    return t;
  }
  bool at(Token::Kind k) const { return peek().kind == k; }
  bool at_ident(const std::string& s) const {
    return peek().kind == Token::Kind::Ident && peek().text == s;
  }
  bool accept(Token::Kind k) {
    if (!at(k)) return false;
    next();
    return true;
  }
  bool accept_ident(const std::string& s) {
    if (!at_ident(s)) return false;
    next();
    return true;
  }
  Token expect(Token::Kind k, const std::string& what);
  std::string expect_ident(const std::string& what);
  [[noreturn]] void fail(const std::string& msg) const;

 private:
  std::vector<Token> toks_;
  size_t pos_ = 0;
};

}  // namespace nrct
