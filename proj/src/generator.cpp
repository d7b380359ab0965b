#include "nrct/generator.hpp"

#include <algorithm>

#include "nrct/error.hpp"

namespace nrct {

int Gen::pick(int n) {
  if (n <= 1) return 0;
  return static_cast<int>(rng_() % static_cast<unsigned long long>(n));
}

bool Gen::coin(double p) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < p;
}

BigInt Gen::small_int() { return BigInt(pick(13) - 6); }

TypePtr Gen::random_type(int depth) {
  int choices = depth > 0 ? 4 : 2;
  switch (pick(choices)) {
    case 0:
      return Type::intty();
    case 1:
      return Type::boolty();
    case 2: {
      int n = 1 + pick(3);
      std::vector<std::pair<std::string, TypePtr>> fields;
      for (int i = 0; i < n; ++i)
        fields.emplace_back(std::string(1, static_cast<char>('A' + i)),
                            random_type(depth - 1));
      return Type::record(std::move(fields));
    }
    default:
      return Type::coll(random_type(depth - 1));
  }
}

std::vector<Label> Gen::labels_of_type(const Store& s, const StoreType& psi,
                                       const TypePtr& t) {
  std::vector<Label> out;
  for (const auto& [l, lt] : psi)
    if (s.contains(l) && type_equal(lt, t)) out.push_back(l);
  return out;
}

std::pair<Store, StoreType> Gen::random_store(int max_labels) {
  Store s;
  StoreType psi;
  int n = 2 + pick(std::max(1, max_labels - 1));
  for (int i = 0; i < n; ++i) {
    Label l = fresh_input_label();
    switch (pick(5)) {
      case 0:
        s.bind(l, Constructor::of_bool(coin()));
        psi[l] = Type::boolty();
        break;
      case 1:
      case 2:
        s.bind(l, Constructor::of_int(small_int()));
        psi[l] = Type::intty();
        break;
      case 3: {
        // Record over existing labels, when any exist.
        std::vector<Label> pool;
        for (const auto& [pl, pk] : s.cells()) pool.push_back(pl);
        if (pool.empty()) {
          s.bind(l, Constructor::of_int(small_int()));
          psi[l] = Type::intty();
          break;
        }
        int fields = 1 + pick(3);
        std::vector<std::pair<std::string, Label>> fs;
        std::vector<std::pair<std::string, TypePtr>> fts;
        for (int f = 0; f < fields; ++f) {
          Label fl = pool[pick(static_cast<int>(pool.size()))];
          std::string name(1, static_cast<char>('A' + f));
          fs.emplace_back(name, fl);
          fts.emplace_back(name, psi.at(fl));
        }
        s.bind(l, Constructor::of_record(std::move(fs)));
        psi[l] = Type::record(std::move(fts));
        break;
      }
      default: {
        // Collection of same-typed existing labels; may be empty.
        std::vector<Label> pool;
        for (const auto& [pl, pk] : s.cells()) pool.push_back(pl);
        TypePtr elem;
        LabelMultiset ms;
        if (!pool.empty() && coin(0.9)) {
          Label seed = pool[pick(static_cast<int>(pool.size()))];
          elem = psi.at(seed);
          std::vector<Label> candidates = labels_of_type(s, psi, elem);
          int count = 1 + pick(3);
          for (int c = 0; c < count; ++c) {
            Label el = candidates[pick(static_cast<int>(candidates.size()))];
            if (!ms.contains(el)) ms.add(el, coin(0.85) ? 1 : 2);
          }
        } else {
          elem = Type::intty();
        }
        s.bind(l, Constructor::of_coll(std::move(ms)));
        psi[l] = Type::coll(elem);
        break;
      }
    }
  }
  return {std::move(s), std::move(psi)};
}

SExprPtr Gen::random_expr(const Context& ctx, const TypePtr& want, int depth) {
  // Atoms first: in-scope variables and store labels of the wanted type.
  auto atom_choices = [&]() {
    std::vector<SExprPtr> out;
    for (const auto& [x, t] : ctx.vars)
      if (type_equal(t, want)) out.push_back(sx::var(x));
    for (const auto& [l, t] : ctx.store)
      if (type_equal(t, want)) out.push_back(sx::lab(l));
    return out;
  };

  if (depth <= 0) {
    std::vector<SExprPtr> atoms = atom_choices();
    if (!atoms.empty() && coin(0.7))
      return atoms[pick(static_cast<int>(atoms.size()))];
    switch (want->kind()) {
      case Type::Kind::Int:
        return sx::intlit(small_int());
      case Type::Kind::Bool:
        return sx::boollit(coin());
      case Type::Kind::Coll:
        return sx::empty(want->elem());
      case Type::Kind::Record: {
        std::vector<std::pair<std::string, SExprPtr>> fs;
        for (const auto& [f, ft] : want->fields())
          fs.emplace_back(f, random_expr(ctx, ft, 0));
        return sx::record(std::move(fs));
      }
    }
  }

  // Generic producers available at any type.
  enum GenericForm { kAtom, kIf, kLet, kProj, kSpecific };
  int roll = pick(10);
  if (roll == 0) {
    std::vector<SExprPtr> atoms = atom_choices();
    if (!atoms.empty())
      return atoms[pick(static_cast<int>(atoms.size()))];
  }
  if (roll == 1) {
    return sx::ife(random_expr(ctx, Type::boolty(), depth - 1),
                   random_expr(ctx, want, depth - 1),
                   random_expr(ctx, want, depth - 1));
  }
  if (roll == 2) {
    std::string x = "u" + std::to_string(pick(7));
    TypePtr xt = random_type(1);
    SExprPtr rhs = random_expr(ctx, xt, depth - 1);
    return sx::let(x, rhs, random_expr(ctx.extend(x, xt), want, depth - 1));
  }
  if (roll == 3) {
    // Project the wanted type out of a record built around it.
    std::vector<std::pair<std::string, TypePtr>> fields = {{"A", want}};
    if (coin()) fields.emplace_back("B", random_type(0));
    TypePtr rt = Type::record(fields);
    return sx::proj(random_expr(ctx, rt, depth - 1), "A");
  }

  switch (want->kind()) {
    case Type::Kind::Int: {
      if (coin(0.3)) {
        TypePtr elem = random_type(1);
        std::string x = "s" + std::to_string(pick(7));
        SExprPtr src = random_expr(ctx, Type::coll(elem), depth - 1);
        return sx::sum(x, src,
                       random_expr(ctx.extend(x, elem), Type::intty(),
                                   depth - 1));
      }
      return sx::plus(random_expr(ctx, Type::intty(), depth - 1),
                      random_expr(ctx, Type::intty(), depth - 1));
    }
    case Type::Kind::Bool: {
      switch (pick(4)) {
        case 0:
          return sx::lnot(random_expr(ctx, Type::boolty(), depth - 1));
        case 1:
          return sx::land(random_expr(ctx, Type::boolty(), depth - 1),
                          random_expr(ctx, Type::boolty(), depth - 1));
        case 2:
          return sx::isempty(
              random_expr(ctx, Type::coll(random_type(1)), depth - 1));
        default:
          return sx::eq(random_expr(ctx, Type::intty(), depth - 1),
                        random_expr(ctx, Type::intty(), depth - 1));
      }
    }
    case Type::Kind::Record: {
      std::vector<std::pair<std::string, SExprPtr>> fs;
      for (const auto& [f, ft] : want->fields())
        fs.emplace_back(f, random_expr(ctx, ft, depth - 1));
      return sx::record(std::move(fs));
    }
    case Type::Kind::Coll: {
      switch (pick(5)) {
        case 0:
          return sx::empty(want->elem());
        case 1:
          return sx::singleton(random_expr(ctx, want->elem(), depth - 1));
        case 2:
          return sx::unione(random_expr(ctx, want, depth - 1),
                            random_expr(ctx, want, depth - 1));
        default: {
          TypePtr elem = random_type(1);
          std::string x = "c" + std::to_string(pick(7));
          SExprPtr src = random_expr(ctx, Type::coll(elem), depth - 1);
          SExprPtr body =
              coin(0.7)
                  ? random_expr(ctx.extend(x, elem), want, depth - 1)
                  : sx::singleton(random_expr(ctx.extend(x, elem),
                                              want->elem(), depth - 1));
          if (body->kind == SurfaceExpr::Kind::Singleton && coin(0.4))
            return sx::mapcomp(x, src, body->e0);
          return sx::forin(x, src, body);
        }
      }
    }
  }
  internal_error("unreachable");
}

Constructor Gen::random_constructor_of_type(const Store& s,
                                            const StoreType& psi,
                                            const TypePtr& t, bool& ok) {
  ok = true;
  switch (t->kind()) {
    case Type::Kind::Int:
      return Constructor::of_int(small_int());
    case Type::Kind::Bool:
      return Constructor::of_bool(coin());
    case Type::Kind::Record: {
      std::vector<std::pair<std::string, Label>> fs;
      for (const auto& [f, ft] : t->fields()) {
        std::vector<Label> pool = labels_of_type(s, psi, ft);
        if (pool.empty()) {
          ok = false;
          return Constructor::of_int(0);
        }
        fs.emplace_back(f, pool[pick(static_cast<int>(pool.size()))]);
      }
      return Constructor::of_record(std::move(fs));
    }
    case Type::Kind::Coll: {
      std::vector<Label> pool = labels_of_type(s, psi, t->elem());
      LabelMultiset ms;
      if (!pool.empty()) {
        int count = pick(3);
        for (int c = 0; c < count; ++c) {
          Label el = pool[pick(static_cast<int>(pool.size()))];
          if (!ms.contains(el)) ms.add(el, 1);
        }
      }
      return Constructor::of_coll(std::move(ms));
    }
  }
  ok = false;
  return Constructor::of_int(0);
}

EditScript Gen::random_edits(const Store& sigma, const StoreType& psi,
                             const LabelSet& forbidden) {
  std::vector<Label> editable;
  for (const auto& [l, k] : sigma.cells())
    if (!forbidden.count(l)) editable.push_back(l);
  if (editable.empty()) return {};

  Label target = editable[pick(static_cast<int>(editable.size()))];
  TypePtr t = psi.at(target);

  // Row insertion: pre-load a fresh leaf and splice it into a collection.
  if (t->is_coll() && (t->elem()->is_int() || t->elem()->is_bool()) &&
      coin(0.35)) {
    Label fresh("new" + std::to_string(pick(1000)));
    while (sigma.contains(fresh) || forbidden.count(fresh))
      fresh = Label(fresh.name + "x");
    Constructor leaf = t->elem()->is_int() ? Constructor::of_int(small_int())
                                           : Constructor::of_bool(coin());
    LabelMultiset ms = sigma.at(target).coll;
    ms.add(fresh, 1);
    return {{fresh, leaf}, {target, Constructor::of_coll(std::move(ms))}};
  }

  bool ok = false;
  Constructor k = random_constructor_of_type(sigma, psi, t, ok);
  if (!ok) return {};
  return {{target, std::move(k)}};
}

}  // namespace nrct
