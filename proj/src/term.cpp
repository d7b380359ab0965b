#include "nrct/term.hpp"

#include "nrct/error.hpp"

namespace nrct {

Term Term::int_lit(BigInt v) {
  Term t;
  t.kind = Kind::IntLit;
  t.i = std::move(v);
  return t;
}

Term Term::bool_lit(bool v) {
  Term t;
  t.kind = Kind::BoolLit;
  t.b = v;
  return t;
}

static Term binary(Term::Kind k, W x, W y) {
  Term t;
  t.kind = k;
  t.a0 = std::move(x);
  t.a1 = std::move(y);
  return t;
}

static Term unary(Term::Kind k, W x) {
  Term t;
  t.kind = k;
  t.a0 = std::move(x);
  return t;
}

Term Term::plus(W x, W y) { return binary(Kind::Plus, std::move(x), std::move(y)); }
Term Term::eq(W x, W y) { return binary(Kind::Eq, std::move(x), std::move(y)); }
Term Term::logical_and(W x, W y) { return binary(Kind::And, std::move(x), std::move(y)); }
Term Term::logical_not(W x) { return unary(Kind::Not, std::move(x)); }
Term Term::copy(W x) { return unary(Kind::Copy, std::move(x)); }
Term Term::singleton(W x) { return unary(Kind::Singleton, std::move(x)); }
Term Term::set_union(W x, W y) { return binary(Kind::Union, std::move(x), std::move(y)); }
Term Term::is_empty(W x) { return unary(Kind::IsEmpty, std::move(x)); }

Term Term::record(std::vector<std::pair<std::string, W>> fs) {
  Term t;
  t.kind = Kind::Record;
  t.fields = std::move(fs);
  return t;
}

Term Term::empty(TypePtr elem_type) {
  Term t;
  t.kind = Kind::Empty;
  t.elem = std::move(elem_type);
  return t;
}

std::vector<W> Term::atoms() const {
  switch (kind) {
    case Kind::IntLit:
    case Kind::BoolLit:
    case Kind::Empty:
      return {};
    case Kind::Not:
    case Kind::Copy:
    case Kind::Singleton:
    case Kind::IsEmpty:
      return {a0};
    case Kind::Plus:
    case Kind::Eq:
    case Kind::And:
    case Kind::Union:
      return {a0, a1};
    case Kind::Record: {
      std::vector<W> out;
      out.reserve(fields.size());
      for (const auto& [f, w] : fields) out.push_back(w);
      return out;
    }
  }
  return {};
}

std::vector<Label> Term::arg_labels() const {
  std::vector<Label> out;
  for (const W& w : atoms()) {
    if (!w.is_lab())
      internal_error("term argument is an unsubstituted variable: " + w.var);
    out.push_back(w.lab);
  }
  return out;
}

bool Term::all_labels() const {
  for (const W& w : atoms())
    if (!w.is_lab()) return false;
  return true;
}

bool term_equal(const Term& a, const Term& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Term::Kind::IntLit:
      return a.i == b.i;
    case Term::Kind::BoolLit:
      return a.b == b.b;
    case Term::Kind::Empty:
      return true;  // element annotations are not part of term identity
    case Term::Kind::Record: {
      if (a.fields.size() != b.fields.size()) return false;
      for (size_t i = 0; i < a.fields.size(); ++i) {
        if (a.fields[i].first != b.fields[i].first) return false;
        if (!(a.fields[i].second == b.fields[i].second)) return false;
      }
      return true;
    }
    default: {
      auto aa = a.atoms();
      auto bb = b.atoms();
      return aa == bb;
    }
  }
}

static W w_subst(const W& w, const std::string& x, const Label& l) {
  if (w.is_var() && w.var == x) return W::mklab(l);
  return w;
}

Term term_subst(const Term& t, const std::string& x, const Label& l) {
  Term out = t;
  out.a0 = w_subst(out.a0, x, l);
  out.a1 = w_subst(out.a1, x, l);
  for (auto& [f, w] : out.fields) w = w_subst(w, x, l);
  return out;
}

}  // namespace nrct
