#include "nrct/parser.hpp"

#include <set>
#include <sstream>

#include "nrct/error.hpp"
#include "nrct/lexer.hpp"

namespace nrct {

namespace {

const std::set<std::string> kKeywords = {"let",  "in",    "if",  "then",
                                         "else", "true",  "false", "union",
                                         "for",  "sum",   "empty", "int",
                                         "bool"};

class ExprParser {
 public:
  ExprParser(TokenStream& ts, bool allow_reserved_labels,
             std::set<std::string> scope = {})
      : ts_(ts), allow_reserved_(allow_reserved_labels),
        scope_(std::move(scope)) {}

  SExprPtr expr() {
    if (ts_.at_ident("let")) return let_expr();
    if (ts_.at_ident("if")) return if_expr();
    if (ts_.at_ident("for")) return iter_expr(true);
    if (ts_.at_ident("sum")) return iter_expr(false);
    return union_expr();
  }

  TypePtr type() {
    if (ts_.accept_ident("int")) return Type::intty();
    if (ts_.accept_ident("bool")) return Type::boolty();
    if (ts_.accept(Token::Kind::LBrace)) {
      TypePtr elem = type();
      ts_.expect(Token::Kind::RBrace, "'}'");
      return Type::coll(std::move(elem));
    }
    if (ts_.accept(Token::Kind::LParen)) {
      std::vector<std::pair<std::string, TypePtr>> fields;
      if (!ts_.at(Token::Kind::RParen)) {
        do {
          std::string name = field_name();
          ts_.expect(Token::Kind::Colon, "':'");
          fields.emplace_back(name, type());
        } while (ts_.accept(Token::Kind::Comma));
      }
      ts_.expect(Token::Kind::RParen, "')'");
      return Type::record(std::move(fields));
    }
    ts_.fail("expected a type");
  }

 private:
  TokenStream& ts_;
  bool allow_reserved_;
  std::set<std::string> scope_;

  std::string field_name() {
    if (ts_.at(Token::Kind::Int)) return ts_.next().text;
    return ts_.expect_ident("a field name");
  }

  std::string binder() {
    std::string x = ts_.expect_ident("a variable name");
    if (kKeywords.count(x)) ts_.fail("keyword '" + x + "' cannot bind");
    return x;
  }

  SExprPtr let_expr() {
    ts_.next();  // let
    std::string x = binder();
    ts_.expect(Token::Kind::Eq, "'='");
    SExprPtr rhs = expr();
    if (!ts_.accept_ident("in")) ts_.fail("expected 'in'");
    bool shadowed = scope_.count(x) != 0;
    scope_.insert(x);
    SExprPtr body = expr();
    if (!shadowed) scope_.erase(x);
    return sx::let(x, std::move(rhs), std::move(body));
  }

  SExprPtr if_expr() {
    ts_.next();  // if
    SExprPtr c = expr();
    if (!ts_.accept_ident("then")) ts_.fail("expected 'then'");
    SExprPtr t = expr();
    if (!ts_.accept_ident("else")) ts_.fail("expected 'else'");
    SExprPtr f = expr();
    return sx::ife(std::move(c), std::move(t), std::move(f));
  }

  SExprPtr iter_expr(bool is_for) {
    ts_.next();  // for | sum
    ts_.expect(Token::Kind::LParen, "'('");
    std::string x = binder();
    if (!ts_.accept_ident("in")) ts_.fail("expected 'in'");
    SExprPtr src = expr();
    ts_.expect(Token::Kind::RParen, "')'");
    bool shadowed = scope_.count(x) != 0;
    scope_.insert(x);
    SExprPtr body = expr();
    if (!shadowed) scope_.erase(x);
    return is_for ? sx::forin(x, std::move(src), std::move(body))
                  : sx::sum(x, std::move(src), std::move(body));
  }

  SExprPtr union_expr() {
    SExprPtr e = and_expr();
    while (ts_.accept_ident("union")) e = sx::unione(e, and_expr());
    return e;
  }

  SExprPtr and_expr() {
    SExprPtr e = cmp_expr();
    while (ts_.accept(Token::Kind::AndAnd)) e = sx::land(e, cmp_expr());
    return e;
  }

  SExprPtr cmp_expr() {
    SExprPtr e = add_expr();
    if (ts_.accept(Token::Kind::EqEq)) e = sx::eq(e, add_expr());
    return e;
  }

  SExprPtr add_expr() {
    SExprPtr e = unary_expr();
    while (ts_.accept(Token::Kind::Plus)) e = sx::plus(e, unary_expr());
    return e;
  }

  SExprPtr unary_expr() {
    if (ts_.accept(Token::Kind::Bang)) return sx::lnot(unary_expr());
    return postfix_expr();
  }

  SExprPtr postfix_expr() {
    SExprPtr e = atom();
    while (ts_.accept(Token::Kind::Dot)) e = sx::proj(e, field_name());
    return e;
  }

  SExprPtr atom() {
    const Token& t = ts_.peek();
    switch (t.kind) {
      case Token::Kind::Int:
        return sx::intlit(ts_.next().ival);
      case Token::Kind::Ident: {
        if (ts_.accept_ident("true")) return sx::boollit(true);
        if (ts_.accept_ident("false")) return sx::boollit(false);
        if (ts_.at_ident("empty")) {
          ts_.next();
          ts_.expect(Token::Kind::LParen, "'('");
          SExprPtr e = expr();
          ts_.expect(Token::Kind::RParen, "')'");
          return sx::isempty(std::move(e));
        }
        if (ts_.at_ident("let") || ts_.at_ident("if") || ts_.at_ident("for") ||
            ts_.at_ident("sum"))
          return expr();
        std::string name = ts_.next().text;
        if (kKeywords.count(name)) ts_.fail("unexpected keyword '" + name + "'");
        if (!allow_reserved_ && !name.empty() && name[0] == '%')
          ts_.fail("label '" + name + "' uses the reserved '%' prefix");
        if (scope_.count(name)) return sx::var(name);
        return sx::lab(Label(name));
      }
      case Token::Kind::LParen: {
        ts_.next();
        SExprPtr e = expr();
        if (ts_.at(Token::Kind::Colon)) {
          if (e->kind != SurfaceExpr::Kind::Empty || e->ann)
            ts_.fail("':' annotation only applies to '{}'");
          ts_.next();
          TypePtr ct = type();
          if (!ct->is_coll())
            ts_.fail("'{}' annotation must be a collection type");
          e = sx::empty(ct->elem());
        }
        ts_.expect(Token::Kind::RParen, "')'");
        return e;
      }
      case Token::Kind::LBrace: {
        ts_.next();
        if (ts_.accept(Token::Kind::RBrace)) return sx::empty(nullptr);
        // Record literal when we see `name :`.
        bool record = (ts_.peek().kind == Token::Kind::Ident ||
                       ts_.peek().kind == Token::Kind::Int) &&
                      ts_.peek(1).kind == Token::Kind::Colon;
        if (record) {
          std::vector<std::pair<std::string, SExprPtr>> fields;
          do {
            std::string name = field_name();
            ts_.expect(Token::Kind::Colon, "':'");
            fields.emplace_back(name, expr());
          } while (ts_.accept(Token::Kind::Comma));
          ts_.expect(Token::Kind::RBrace, "'}'");
          return sx::record(std::move(fields));
        }
        SExprPtr e = expr();
        ts_.expect(Token::Kind::RBrace, "'}'");
        return sx::singleton(std::move(e));
      }
      default:
        ts_.fail("expected an expression");
    }
  }
};

}  // namespace

SExprPtr parse_expr(const std::string& text) {
  Lexer lex(text, /*allow_reserved=*/false);
  TokenStream ts(lex.tokens());
  ExprParser p(ts, /*allow_reserved_labels=*/false);
  SExprPtr e = p.expr();
  if (!ts.at(Token::Kind::Eof)) ts.fail("trailing input");
  return e;
}

TypePtr parse_type(const std::string& text) {
  Lexer lex(text, /*allow_reserved=*/false);
  TokenStream ts(lex.tokens());
  ExprParser p(ts, false);
  TypePtr t = p.type();
  if (!ts.at(Token::Kind::Eof)) ts.fail("trailing input");
  return t;
}

std::string print_type(const TypePtr& t) { return to_string(t); }

SExprPtr parse_expr_at(TokenStream& ts, const std::set<std::string>& scope) {
  ExprParser p(ts, /*allow_reserved_labels=*/true, scope);
  return p.expr();
}

TypePtr parse_type_at(TokenStream& ts) {
  ExprParser p(ts, true);
  return p.type();
}

namespace {

// Precedence levels, loosest first. A child rendered in a slot that
// requires level `n` gets parentheses when its own level is lower.
enum Level {
  kLevelExpr = 0,   // let / if / for / sum
  kLevelUnion = 1,
  kLevelAnd = 2,
  kLevelCmp = 3,
  kLevelAdd = 4,
  kLevelUnary = 5,
  kLevelPostfix = 6,
  kLevelAtom = 7,
};

struct SPrinter {
  std::ostringstream os;

  void print(const SExprPtr& e, int min_level) {
    int lvl = level(e);
    bool parens = lvl < min_level;
    if (parens) os << "(";
    emit(e);
    if (parens) os << ")";
  }

  static int level(const SExprPtr& e) {
    using K = SurfaceExpr::Kind;
    switch (e->kind) {
      case K::Let:
      case K::If:
      case K::For:
      case K::MapComp:
      case K::Sum:
        return kLevelExpr;
      case K::Union:
        return kLevelUnion;
      case K::And:
        return kLevelAnd;
      case K::Eq:
        return kLevelCmp;
      case K::Plus:
        return kLevelAdd;
      case K::Not:
        return kLevelUnary;
      case K::Proj:
        return kLevelPostfix;
      case K::Empty:
        return e->ann ? kLevelExpr : kLevelAtom;  // printed as ({} : {ty})
      default:
        return kLevelAtom;
    }
  }

  void emit(const SExprPtr& e) {
    using K = SurfaceExpr::Kind;
    switch (e->kind) {
      case K::Var:
        os << e->var;
        break;
      case K::Lab:
        os << e->lab.name;
        break;
      case K::Let:
        os << "let " << e->var << " = ";
        print(e->e0, kLevelExpr);
        os << " in ";
        print(e->e1, kLevelExpr);
        break;
      case K::RecordLit: {
        os << "{";
        bool first = true;
        for (const auto& [f, fe] : e->fields) {
          if (!first) os << ", ";
          first = false;
          os << f << ": ";
          print(fe, kLevelExpr);
        }
        os << "}";
        break;
      }
      case K::Proj:
        print(e->e0, kLevelPostfix);
        os << "." << e->field;
        break;
      case K::IntLit:
        os << e->i;
        break;
      case K::BoolLit:
        os << (e->b ? "true" : "false");
        break;
      case K::Not:
        os << "!";
        print(e->e0, kLevelUnary);
        break;
      case K::And:
        print(e->e0, kLevelAnd);
        os << " && ";
        print(e->e1, kLevelCmp);
        break;
      case K::Plus:
        print(e->e0, kLevelAdd);
        os << " + ";
        print(e->e1, kLevelUnary);
        break;
      case K::Eq:
        print(e->e0, kLevelAdd);
        os << " == ";
        print(e->e1, kLevelAdd);
        break;
      case K::If:
        os << "if ";
        print(e->e0, kLevelExpr);
        os << " then ";
        print(e->e1, kLevelExpr);
        os << " else ";
        print(e->e2, kLevelExpr);
        break;
      case K::Empty:
        if (e->ann)
          os << "({} : {" << to_string(e->ann) << "})";
        else
          os << "{}";
        break;
      case K::Singleton:
        os << "{";
        print(e->e0, kLevelExpr);
        os << "}";
        break;
      case K::Union:
        print(e->e0, kLevelUnion);
        os << " union ";
        print(e->e1, kLevelAnd);
        break;
      case K::For:
      case K::Sum:
        os << (e->kind == K::For ? "for (" : "sum (") << e->var << " in ";
        print(e->e0, kLevelExpr);
        os << ") ";
        print(e->e1, kLevelExpr);
        break;
      case K::MapComp:
        // No concrete syntax; shown in the desugarer's input form.
        os << "{";
        print(e->e1, kLevelExpr);
        os << " | " << e->var << " in ";
        print(e->e0, kLevelExpr);
        os << "}";
        break;
      case K::IsEmpty:
        os << "empty(";
        print(e->e0, kLevelExpr);
        os << ")";
        break;
    }
  }
};

SExprPtr surface_of_w(const W& w) {
  return w.is_var() ? sx::var(w.var) : sx::lab(w.lab);
}

SExprPtr surface_of_term(const Term& t) {
  using K = Term::Kind;
  switch (t.kind) {
    case K::IntLit:
      return sx::intlit(t.i);
    case K::BoolLit:
      return sx::boollit(t.b);
    case K::Plus:
      return sx::plus(surface_of_w(t.a0), surface_of_w(t.a1));
    case K::Eq:
      return sx::eq(surface_of_w(t.a0), surface_of_w(t.a1));
    case K::And:
      return sx::land(surface_of_w(t.a0), surface_of_w(t.a1));
    case K::Not:
      return sx::lnot(surface_of_w(t.a0));
    case K::Record: {
      std::vector<std::pair<std::string, SExprPtr>> fs;
      for (const auto& [f, w] : t.fields) fs.emplace_back(f, surface_of_w(w));
      return sx::record(std::move(fs));
    }
    case K::Copy:
      return surface_of_w(t.a0);
    case K::Empty:
      return sx::empty(t.elem);
    case K::Singleton:
      return sx::singleton(surface_of_w(t.a0));
    case K::Union:
      return sx::unione(surface_of_w(t.a0), surface_of_w(t.a1));
    case K::IsEmpty:
      return sx::isempty(surface_of_w(t.a0));
  }
  internal_error("unhandled term kind");
}

SExprPtr surface_of_core(const CExprPtr& e) {
  switch (e->kind) {
    case CoreExpr::Kind::TermE:
      return surface_of_term(e->term);
    case CoreExpr::Kind::Let:
      return sx::let(e->var, surface_of_core(e->e1), surface_of_core(e->e2));
    case CoreExpr::Kind::If:
      return sx::ife(surface_of_w(e->w), surface_of_core(e->e1),
                     surface_of_core(e->e2));
    case CoreExpr::Kind::Proj:
      return sx::proj(surface_of_w(e->w), e->field);
    case CoreExpr::Kind::Comp:
      return sx::forin(e->var, surface_of_w(e->w), surface_of_core(e->e1));
    case CoreExpr::Kind::Sum:
      return sx::sum(e->var, surface_of_w(e->w), surface_of_core(e->e1));
  }
  internal_error("unhandled core kind");
}

}  // namespace

std::string print_surface(const SExprPtr& e) {
  SPrinter p;
  p.print(e, kLevelExpr);
  return p.os.str();
}

std::string print_core(const CExprPtr& e) {
  return print_surface(surface_of_core(e));
}

}  // namespace nrct
