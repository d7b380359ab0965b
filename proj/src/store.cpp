#include "nrct/store.hpp"

#include <functional>
#include <sstream>

#include "nrct/error.hpp"

namespace nrct {

void LabelMultiset::add(const Label& l, BigInt m) {
  if (m <= 0) internal_error("multiset multiplicity must be positive");
  auto [it, inserted] = m_.emplace(l, std::move(m));
  if (!inserted) it->second += m;
}

BigInt LabelMultiset::multiplicity(const Label& l) const {
  auto it = m_.find(l);
  return it == m_.end() ? BigInt(0) : it->second;
}

LabelMultiset multiset_union(const LabelMultiset& m, const LabelMultiset& n) {
  LabelMultiset out = m;
  for (const auto& [l, k] : n.entries()) out.add(l, k);
  return out;
}

LabelMultiset disjoint_union(const LabelMultiset& m, const LabelMultiset& n) {
  for (const auto& [l, k] : n.entries())
    if (m.contains(l))
      internal_error("domain overlap in disjoint multiset union at " + l.name);
  return multiset_union(m, n);
}

LabelMultiset multiset_scale(const BigInt& m, const LabelMultiset& l) {
  LabelMultiset out;
  for (const auto& [lab, k] : l.entries()) out.add(lab, m * k);
  return out;
}

std::string to_string(const LabelMultiset& m) {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (const auto& [l, k] : m.entries()) {
    if (!first) os << ", ";
    first = false;
    os << l.name;
    if (k != 1) os << ":" << k;
  }
  os << "}";
  return os.str();
}

Constructor Constructor::of_int(BigInt v) {
  Constructor k;
  k.kind = Kind::Int;
  k.i = std::move(v);
  return k;
}

Constructor Constructor::of_bool(bool v) {
  Constructor k;
  k.kind = Kind::Bool;
  k.b = v;
  return k;
}

Constructor Constructor::of_record(
    std::vector<std::pair<std::string, Label>> fs) {
  Constructor k;
  k.kind = Kind::Record;
  k.fields = std::move(fs);
  return k;
}

Constructor Constructor::of_coll(LabelMultiset ls) {
  Constructor k;
  k.kind = Kind::Coll;
  k.coll = std::move(ls);
  return k;
}

std::optional<Label> Constructor::field(const std::string& name) const {
  for (const auto& [f, l] : fields)
    if (f == name) return l;
  return std::nullopt;
}

std::vector<Label> Constructor::mentioned_labels() const {
  std::vector<Label> out;
  if (kind == Kind::Record)
    for (const auto& [f, l] : fields) out.push_back(l);
  if (kind == Kind::Coll)
    for (const auto& [l, m] : coll.entries()) out.push_back(l);
  return out;
}

std::string to_string(const Constructor& k) {
  switch (k.kind) {
    case Constructor::Kind::Int: {
      std::ostringstream os;
      os << k.i;
      return os.str();
    }
    case Constructor::Kind::Bool:
      return k.b ? "true" : "false";
    case Constructor::Kind::Record: {
      std::ostringstream os;
      os << "(";
      bool first = true;
      for (const auto& [f, l] : k.fields) {
        if (!first) os << ", ";
        first = false;
        os << f << ": " << l.name;
      }
      os << ")";
      return os.str();
    }
    case Constructor::Kind::Coll:
      return to_string(k.coll);
  }
  return "?";
}

const Constructor& Store::at(const Label& l) const {
  auto it = m_.find(l);
  if (it == m_.end()) internal_error("unbound label " + l.name);
  return it->second;
}

void Store::bind(const Label& l, Constructor k) {
  auto [it, inserted] = m_.emplace(l, std::move(k));
  if (!inserted)
    internal_error("write-once violation: label " + l.name + " rebound");
}

void Store::rebind(const Label& l, Constructor k) { m_[l] = std::move(k); }

bool Store::extends(const Store& base) const {
  for (const auto& [l, k] : base.cells()) {
    auto it = m_.find(l);
    if (it == m_.end() || !(it->second == k)) return false;
  }
  return true;
}

Store orthogonal_merge(const Store& s1, const Store& s2, const Store& base) {
  if (!s1.extends(base) || !s2.extends(base))
    internal_error("orthogonal merge: stores do not extend the base");
  Store out = s1;
  for (const auto& [l, k] : s2.cells()) {
    if (base.contains(l)) continue;
    if (s1.contains(l))
      internal_error("orthogonal merge: extensions overlap at " + l.name);
    out.bind(l, k);
  }
  return out;
}

namespace {

const BigInt& expect_int(const Store& s, const Label& l) {
  const Constructor& k = s.at(l);
  if (k.kind != Constructor::Kind::Int)
    internal_error("operand kind mismatch: " + l.name + " is not an int");
  return k.i;
}

bool expect_bool(const Store& s, const Label& l) {
  const Constructor& k = s.at(l);
  if (k.kind != Constructor::Kind::Bool)
    internal_error("operand kind mismatch: " + l.name + " is not a bool");
  return k.b;
}

const LabelMultiset& expect_coll(const Store& s, const Label& l) {
  const Constructor& k = s.at(l);
  if (k.kind != Constructor::Kind::Coll)
    internal_error("operand kind mismatch: " + l.name + " is not a collection");
  return k.coll;
}

}  // namespace

Constructor op_eval(const Term& t, const Store& sigma) {
  switch (t.kind) {
    case Term::Kind::IntLit:
      return Constructor::of_int(t.i);
    case Term::Kind::BoolLit:
      return Constructor::of_bool(t.b);
    case Term::Kind::Copy:
      return sigma.at(t.a0.lab);
    case Term::Kind::Plus:
      return Constructor::of_int(expect_int(sigma, t.a0.lab) +
                                 expect_int(sigma, t.a1.lab));
    case Term::Kind::Eq:
      return Constructor::of_bool(expect_int(sigma, t.a0.lab) ==
                                  expect_int(sigma, t.a1.lab));
    case Term::Kind::And:
      return Constructor::of_bool(expect_bool(sigma, t.a0.lab) &&
                                  expect_bool(sigma, t.a1.lab));
    case Term::Kind::Not:
      return Constructor::of_bool(!expect_bool(sigma, t.a0.lab));
    case Term::Kind::Record: {
      std::vector<std::pair<std::string, Label>> fs;
      fs.reserve(t.fields.size());
      for (const auto& [f, w] : t.fields) fs.emplace_back(f, w.lab);
      return Constructor::of_record(std::move(fs));
    }
    case Term::Kind::Empty:
      return Constructor::of_coll(LabelMultiset{});
    case Term::Kind::Singleton: {
      LabelMultiset m;
      m.add(t.a0.lab, 1);
      return Constructor::of_coll(std::move(m));
    }
    case Term::Kind::Union:
      return Constructor::of_coll(multiset_union(expect_coll(sigma, t.a0.lab),
                                                 expect_coll(sigma, t.a1.lab)));
    case Term::Kind::IsEmpty:
      return Constructor::of_bool(expect_coll(sigma, t.a0.lab).empty());
  }
  internal_error("unhandled term kind");
}

namespace {

// Bottom-up type inference with cycle detection.
struct StoreInfer {
  const Store& sigma;
  const StoreType& hints;
  StoreType done;
  std::map<Label, int> state;  // 0 untouched, 1 in progress, 2 done
  std::string diag;

  TypePtr visit(const Label& l) {
    auto it = done.find(l);
    if (it != done.end()) return it->second;
    if (!sigma.contains(l)) {
      diag = "dangling label " + l.name;
      return nullptr;
    }
    int& st = state[l];
    if (st == 1) {
      diag = "cycle through label " + l.name;
      return nullptr;
    }
    st = 1;
    const Constructor& k = sigma.at(l);
    TypePtr t;
    switch (k.kind) {
      case Constructor::Kind::Int:
        t = Type::intty();
        break;
      case Constructor::Kind::Bool:
        t = Type::boolty();
        break;
      case Constructor::Kind::Record: {
        std::vector<std::pair<std::string, TypePtr>> fs;
        for (const auto& [f, fl] : k.fields) {
          TypePtr ft = visit(fl);
          if (!ft) return nullptr;
          fs.emplace_back(f, ft);
        }
        t = Type::record(std::move(fs));
        break;
      }
      case Constructor::Kind::Coll: {
        TypePtr elem;
        for (const auto& [el, m] : k.coll.entries()) {
          TypePtr et = visit(el);
          if (!et) return nullptr;
          if (!elem)
            elem = et;
          else if (!type_equal(elem, et)) {
            diag = "heterogeneous collection at " + l.name;
            return nullptr;
          }
        }
        if (!elem) {
          auto h = hints.find(l);
          if (h != hints.end() && h->second->is_coll())
            elem = h->second->elem();
          else
            elem = Type::intty();
        }
        t = Type::coll(elem);
        break;
      }
    }
    st = 2;
    done[l] = t;
    return t;
  }
};

}  // namespace

std::optional<StoreType> infer_store_type(const Store& sigma,
                                          const StoreType& hints,
                                          std::string* diag) {
  StoreInfer inf{sigma, hints, {}, {}, {}};
  for (const auto& [l, k] : sigma.cells()) {
    if (!inf.visit(l)) {
      if (diag) *diag = inf.diag;
      return std::nullopt;
    }
  }
  return inf.done;
}

bool store_typecheck(const StoreType& psi, const Store& sigma,
                     std::string* diag) {
  std::string d;
  auto inferred = infer_store_type(sigma, psi, &d);
  if (!inferred) {
    if (diag) *diag = d;
    return false;
  }
  if (inferred->size() != psi.size()) {
    if (diag) *diag = "store and store type have different domains";
    return false;
  }
  for (const auto& [l, t] : psi) {
    auto it = inferred->find(l);
    if (it == inferred->end()) {
      if (diag) *diag = "label " + l.name + " missing from store";
      return false;
    }
    if (!type_equal(it->second, t)) {
      if (diag)
        *diag = "label " + l.name + " has type " + to_string(it->second) +
                ", expected " + to_string(t);
      return false;
    }
  }
  return true;
}

ValuePtr readback(const Store& sigma, const TypePtr& tau, const Label& l) {
  const Constructor& k = sigma.at(l);
  switch (tau->kind()) {
    case Type::Kind::Int:
      if (k.kind != Constructor::Kind::Int)
        store_error("readback: " + l.name + " is not an int");
      return Value::of_int(k.i);
    case Type::Kind::Bool:
      if (k.kind != Constructor::Kind::Bool)
        store_error("readback: " + l.name + " is not a bool");
      return Value::of_bool(k.b);
    case Type::Kind::Record: {
      if (k.kind != Constructor::Kind::Record)
        store_error("readback: " + l.name + " is not a record");
      std::vector<std::pair<std::string, ValuePtr>> fs;
      for (const auto& [f, ft] : tau->fields()) {
        auto fl = k.field(f);
        if (!fl) store_error("readback: missing field " + f + " at " + l.name);
        fs.emplace_back(f, readback(sigma, ft, *fl));
      }
      return Value::record(std::move(fs));
    }
    case Type::Kind::Coll: {
      if (k.kind != Constructor::Kind::Coll)
        store_error("readback: " + l.name + " is not a collection");
      std::vector<std::pair<ValuePtr, BigInt>> elems;
      for (const auto& [el, m] : k.coll.entries())
        elems.emplace_back(readback(sigma, tau->elem(), el), m);
      return Value::bag_of(std::move(elems));
    }
  }
  internal_error("unhandled type kind in readback");
}

ValuePtr readback_infer(const Store& sigma, const Label& l) {
  std::string diag;
  auto psi = infer_store_type(sigma, {}, &diag);
  if (!psi) store_error("ill-typed store: " + diag);
  auto it = psi->find(l);
  if (it == psi->end()) store_error("unbound label " + l.name);
  return readback(sigma, it->second, l);
}

std::vector<std::pair<Constructor, BigInt>> store_slice(
    const Store& sigma, const LabelMultiset& l) {
  std::vector<std::pair<Constructor, BigInt>> out;
  for (const auto& [lab, m] : l.entries()) out.emplace_back(sigma.at(lab), m);
  return out;
}

LabelMultiset flatten(const Store& sigma, const LabelMultiset& l) {
  LabelMultiset out;
  for (const auto& [lab, m] : l.entries()) {
    const Constructor& k = sigma.at(lab);
    if (k.kind != Constructor::Kind::Coll)
      internal_error("flatten: " + lab.name + " is not a collection");
    out = multiset_union(out, multiset_scale(m, k.coll));
  }
  return out;
}

BigInt sum_ints(const Store& sigma, const LabelMultiset& l) {
  BigInt total = 0;
  for (const auto& [lab, m] : l.entries()) {
    const Constructor& k = sigma.at(lab);
    if (k.kind != Constructor::Kind::Int)
      internal_error("sum: " + lab.name + " is not an int");
    total += k.i * m;
  }
  return total;
}

}  // namespace nrct
