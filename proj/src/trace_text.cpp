#include <sstream>

#include "nrct/error.hpp"
#include "nrct/lang.hpp"
#include "nrct/lexer.hpp"
#include "nrct/parser.hpp"
#include "nrct/trace.hpp"

namespace nrct {

namespace {

std::string term_text(const Term& t) {
  using K = Term::Kind;
  std::ostringstream os;
  switch (t.kind) {
    case K::IntLit:
      os << t.i;
      break;
    case K::BoolLit:
      os << (t.b ? "true" : "false");
      break;
    case K::Plus:
      os << t.a0.lab.name << " + " << t.a1.lab.name;
      break;
    case K::Eq:
      os << t.a0.lab.name << " = " << t.a1.lab.name;
      break;
    case K::And:
      os << t.a0.lab.name << " && " << t.a1.lab.name;
      break;
    case K::Not:
      os << "!" << t.a0.lab.name;
      break;
    case K::Record: {
      os << "(";
      bool first = true;
      for (const auto& [f, w] : t.fields) {
        if (!first) os << ", ";
        first = false;
        os << f << ": " << w.lab.name;
      }
      os << ")";
      break;
    }
    case K::Copy:
      os << t.a0.lab.name;
      break;
    case K::Empty:
      if (t.elem)
        os << "({} : {" << to_string(t.elem) << "})";
      else
        os << "{}";
      break;
    case K::Singleton:
      os << "{" << t.a0.lab.name << "}";
      break;
    case K::Union:
      os << t.a0.lab.name << " U " << t.a1.lab.name;
      break;
    case K::IsEmpty:
      os << "empty(" << t.a0.lab.name << ")";
      break;
  }
  return os.str();
}

struct TracePrinter {
  std::ostringstream os;

  void indent(int n) {
    for (int i = 0; i < n; ++i) os << "  ";
  }

  void print(const TracePtr& t, int depth) {
    switch (t->kind) {
      case Trace::Kind::Assign:
        os << t->dest.name << " <- " << term_text(t->term);
        break;
      case Trace::Kind::Proj:
        os << t->dest.name << " <- proj_" << t->field << "(" << t->rec.name
           << ", " << t->rec_field.name << ")";
        break;
      case Trace::Kind::Seq:
        print(t->t1, depth);
        os << ";\n";
        indent(depth);
        print(t->t2, depth);
        break;
      case Trace::Kind::Cond:
        os << "cond(" << t->test.name << ", " << (t->flag ? "t" : "f") << ", ";
        print(t->sub, depth + 1);
        if (t->e_then && t->e_else) {
          os << " | " << print_core(t->e_then) << " | "
             << print_core(t->e_else);
        }
        os << ") @ " << trace_out(t->sub).name;
        break;
      case Trace::Kind::Comp:
      case Trace::Kind::Sum: {
        os << t->dest.name << " <- "
           << (t->kind == Trace::Kind::Comp ? "comp(" : "sum(")
           << t->src.name << ", {";
        bool first = true;
        for (const auto& e : t->theta) {
          if (!first) os << ",";
          first = false;
          os << "\n";
          indent(depth + 1);
          os << "[" << e.in.name << "] ";
          print(e.tr, depth + 1);
          if (e.mult != 1) os << " : " << e.mult;
        }
        if (!t->theta.empty()) {
          os << "\n";
          indent(depth);
        }
        os << "}";
        if (t->body) os << ", " << t->var << ". " << print_core(t->body);
        os << ")";
        break;
      }
    }
  }
};

struct TraceParser {
  TokenStream& ts;

  TracePtr trace() {
    TracePtr t = step();
    while (ts.accept(Token::Kind::Semi)) t = Trace::seq(t, step());
    return t;
  }

  Label label() {
    return Label(ts.expect_ident("a label"));
  }

  CExprPtr embedded_expr(const std::set<std::string>& scope) {
    SExprPtr s = parse_expr_at(ts, scope);
    return core_of_surface_strict(s);
  }

  TracePtr step() {
    if (ts.at_ident("cond")) {
      ts.next();
      ts.expect(Token::Kind::LParen, "'('");
      Label test = label();
      ts.expect(Token::Kind::Comma, "','");
      std::string flag = ts.expect_ident("a boolean flag");
      bool b;
      if (flag == "t" || flag == "true")
        b = true;
      else if (flag == "f" || flag == "false")
        b = false;
      else
        ts.fail("expected t or f");
      ts.expect(Token::Kind::Comma, "','");
      TracePtr sub = trace();
      CExprPtr et, ef;
      if (ts.accept(Token::Kind::Pipe)) {
        et = embedded_expr({});
        ts.expect(Token::Kind::Pipe, "'|'");
        ef = embedded_expr({});
      }
      ts.expect(Token::Kind::RParen, "')'");
      if (ts.accept(Token::Kind::At)) {
        Label dest = label();
        if (dest != trace_out(sub))
          ts.fail("cond destination differs from its subtrace output");
      }
      return Trace::cond(test, b, std::move(sub), std::move(et), std::move(ef));
    }
    Label dest = label();
    ts.expect(Token::Kind::Arrow, "'<-'");
    return rhs(std::move(dest));
  }

  TracePtr rhs(Label dest) {
    if (ts.at(Token::Kind::Ident)) {
      const std::string& name = ts.peek().text;
      if (name.rfind("proj_", 0) == 0) {
        std::string field = name.substr(5);
        ts.next();
        ts.expect(Token::Kind::LParen, "'('");
        Label rec = label();
        ts.expect(Token::Kind::Comma, "','");
        Label rec_field = label();
        ts.expect(Token::Kind::RParen, "')'");
        return Trace::proj(std::move(dest), std::move(field), std::move(rec),
                           std::move(rec_field));
      }
      if (name == "comp" || name == "sum") {
        bool is_comp = name == "comp";
        ts.next();
        ts.expect(Token::Kind::LParen, "'('");
        Label src = label();
        ts.expect(Token::Kind::Comma, "','");
        Theta theta = theta_set();
        std::string var;
        CExprPtr body;
        if (ts.accept(Token::Kind::Comma)) {
          var = ts.expect_ident("a bound variable");
          ts.expect(Token::Kind::Dot, "'.'");
          body = embedded_expr({var});
        }
        ts.expect(Token::Kind::RParen, "')'");
        return is_comp ? Trace::comp(std::move(dest), std::move(src),
                                     std::move(theta), std::move(var),
                                     std::move(body))
                       : Trace::sum(std::move(dest), std::move(src),
                                    std::move(theta), std::move(var),
                                    std::move(body));
      }
    }
    return Trace::assign(std::move(dest), term());
  }

  Theta theta_set() {
    ts.expect(Token::Kind::LBrace, "'{'");
    Theta theta;
    if (!ts.at(Token::Kind::RBrace)) {
      do {
        ts.expect(Token::Kind::LBracket, "'['");
        Label in = label();
        ts.expect(Token::Kind::RBracket, "']'");
        TracePtr tr = trace();
        BigInt mult = 1;
        if (ts.accept(Token::Kind::Colon))
          mult = ts.expect(Token::Kind::Int, "a multiplicity").ival;
        theta.push_back({std::move(in), std::move(tr), std::move(mult)});
      } while (ts.accept(Token::Kind::Comma));
    }
    ts.expect(Token::Kind::RBrace, "'}'");
    return theta;
  }

  Term term() {
    if (ts.at(Token::Kind::Int)) return Term::int_lit(ts.next().ival);
    if (ts.accept(Token::Kind::Bang))
      return Term::logical_not(W::mklab(label()));
    if (ts.accept(Token::Kind::LBrace)) {
      if (ts.accept(Token::Kind::RBrace)) return Term::empty(nullptr);
      Label l = label();
      ts.expect(Token::Kind::RBrace, "'}'");
      return Term::singleton(W::mklab(l));
    }
    if (ts.accept(Token::Kind::LParen)) {
      // ({} : {ty}) or a record of labels.
      if (ts.accept(Token::Kind::LBrace)) {
        ts.expect(Token::Kind::RBrace, "'}'");
        ts.expect(Token::Kind::Colon, "':'");
        TypePtr ct = parse_type_at(ts);
        if (!ct->is_coll()) ts.fail("'{}' annotation must be a collection type");
        ts.expect(Token::Kind::RParen, "')'");
        return Term::empty(ct->elem());
      }
      std::vector<std::pair<std::string, W>> fields;
      if (!ts.at(Token::Kind::RParen)) {
        do {
          std::string f = ts.at(Token::Kind::Int)
                              ? ts.next().text
                              : ts.expect_ident("a field name");
          ts.expect(Token::Kind::Colon, "':'");
          fields.emplace_back(f, W::mklab(label()));
        } while (ts.accept(Token::Kind::Comma));
      }
      ts.expect(Token::Kind::RParen, "')'");
      return Term::record(std::move(fields));
    }
    if (ts.at_ident("true")) {
      ts.next();
      return Term::bool_lit(true);
    }
    if (ts.at_ident("false")) {
      ts.next();
      return Term::bool_lit(false);
    }
    if (ts.at_ident("empty")) {
      ts.next();
      ts.expect(Token::Kind::LParen, "'('");
      Label l = label();
      ts.expect(Token::Kind::RParen, "')'");
      return Term::is_empty(W::mklab(l));
    }
    Label a = label();
    if (ts.accept(Token::Kind::Plus))
      return Term::plus(W::mklab(a), W::mklab(label()));
    if (ts.accept(Token::Kind::Eq))
      return Term::eq(W::mklab(a), W::mklab(label()));
    if (ts.accept(Token::Kind::AndAnd))
      return Term::logical_and(W::mklab(a), W::mklab(label()));
    if (ts.at_ident("U")) {
      ts.next();
      return Term::set_union(W::mklab(a), W::mklab(label()));
    }
    return Term::copy(W::mklab(a));
  }
};

}  // namespace

std::string trace_to_text(const TracePtr& t) {
  TracePrinter p;
  p.print(t, 0);
  p.os << "\n";
  return p.os.str();
}

TracePtr parse_trace(const std::string& text) {
  Lexer lex(text, /*allow_reserved=*/true);
  TokenStream ts(lex.tokens());
  TraceParser p{ts};
  TracePtr t = p.trace();
  if (!ts.at(Token::Kind::Eof)) ts.fail("trailing input in trace");
  return t;
}

namespace {

struct DotBuilder {
  std::ostringstream os;
  int cluster = 0;

  static std::string quote(const Label& l) { return "\"" + l.name + "\""; }

  void edge(const Label& from, const Label& to) {
    os << "  " << quote(from) << " -> " << quote(to) << ";\n";
  }

  void walk(const TracePtr& t) {
    switch (t->kind) {
      case Trace::Kind::Assign:
        for (const Label& l : t->term.arg_labels()) edge(l, t->dest);
        break;
      case Trace::Kind::Proj:
        edge(t->rec, t->dest);
        edge(t->rec_field, t->dest);
        break;
      case Trace::Kind::Seq:
        walk(t->t1);
        walk(t->t2);
        break;
      case Trace::Kind::Cond: {
        os << "  subgraph cluster_" << cluster++ << " {\n"
           << "    label=\"cond(" << t->test.name << ", "
           << (t->flag ? "t" : "f") << ")\";\n";
        walk(t->sub);
        os << "  }\n";
        edge(t->test, trace_out(t->sub));
        break;
      }
      case Trace::Kind::Comp:
      case Trace::Kind::Sum: {
        for (const auto& e : t->theta) {
          os << "  subgraph cluster_" << cluster++ << " {\n"
             << "    label=\"[" << e.in.name << "]\";\n";
          walk(e.tr);
          os << "  }\n";
          edge(trace_out(e.tr), t->dest);
        }
        edge(t->src, t->dest);
        break;
      }
    }
  }
};

}  // namespace

std::string trace_to_dot(const TracePtr& t) {
  DotBuilder b;
  b.os << "digraph trace {\n  node [shape=box];\n";
  b.walk(t);
  b.os << "}\n";
  return b.os.str();
}

}  // namespace nrct
