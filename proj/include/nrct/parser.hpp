#pragma once

#include <set>
#include <string>

#include "nrct/ast.hpp"
#include "nrct/type.hpp"

namespace nrct {

// Parses the concrete expression grammar:
//   e ::= x | l | let x = e in e | {A: e, ..} | e.A | true | false | !e
//       | e && e | if e then e else e | ({} : {ty}) | {} | {e} | e union e
//       | for (x in e) e | empty(e) | n | e + e | e == e | sum (x in e) e
// Identifiers bound by let/for/sum are variables; all others are labels.
SExprPtr parse_expr(const std::string& text);

// ty ::= int | bool | {ty} | (A: ty, ...)
TypePtr parse_type(const std::string& text);

std::string print_surface(const SExprPtr& e);
std::string print_core(const CExprPtr& e);
std::string print_type(const TypePtr& t);

class TokenStream;

// Parses one expression from an existing token stream, with `scope` naming
// the identifiers that are variables. Used for expressions embedded in
// trace files, where generated '%' labels may appear.
SExprPtr parse_expr_at(TokenStream& ts, const std::set<std::string>& scope);
TypePtr parse_type_at(TokenStream& ts);

}  // namespace nrct
