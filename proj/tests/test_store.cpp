#include <doctest.h>

#include "fixtures.hpp"
#include "nrct/error.hpp"
#include "nrct/store.hpp"

using namespace nrct;

namespace {
Label L(const std::string& s) { return Label(s); }
}

TEST_CASE("multiset union adds multiplicities pointwise") {
  LabelMultiset m, n;
  m.add(L("l"), 1);
  n.add(L("l"), 2);
  CHECK(multiset_union(m, n).multiplicity(L("l")) == 3);

  CHECK(multiset_union({}, n) == n);

  LabelMultiset a, b;
  a.add(L("l1"), 2);
  b.add(L("l2"), 1);
  LabelMultiset u = multiset_union(a, b);
  CHECK(u.multiplicity(L("l1")) == 2);
  CHECK(u.multiplicity(L("l2")) == 1);
}

TEST_CASE("disjoint union rejects overlap") {
  LabelMultiset m, n;
  m.add(L("l1"), 1);
  n.add(L("l2"), 1);
  LabelMultiset u = disjoint_union(m, n);
  CHECK(u.entries().size() == 2);

  LabelMultiset o;
  o.add(L("l1"), 1);
  CHECK_THROWS_AS(disjoint_union(m, o), Error);

  CHECK(disjoint_union({}, m) == m);
}

TEST_CASE("orthogonal merge combines disjoint extensions") {
  Store base;
  base.bind(L("x"), Constructor::of_int(1));

  SUBCASE("identical stores merge to themselves") {
    CHECK(orthogonal_merge(base, base, base) == base);
  }
  SUBCASE("disjoint extensions combine") {
    Store s1 = base, s2 = base;
    s1.bind(L("a"), Constructor::of_int(1));
    s2.bind(L("b"), Constructor::of_int(2));
    Store merged = orthogonal_merge(s1, s2, base);
    CHECK(merged.at(L("a")).i == 1);
    CHECK(merged.at(L("b")).i == 2);
  }
  SUBCASE("overlapping extensions are rejected") {
    Store s1 = base, s2 = base;
    s1.bind(L("a"), Constructor::of_int(1));
    s2.bind(L("a"), Constructor::of_int(2));
    CHECK_THROWS_AS(orthogonal_merge(s1, s2, base), Error);
  }
}

TEST_CASE("op table") {
  Store s;
  s.bind(L("l1"), Constructor::of_int(5));
  s.bind(L("l2"), Constructor::of_int(42));
  s.bind(L("e"), Constructor::of_coll({}));

  Constructor sum = op_eval(Term::plus(W::mklab(L("l1")), W::mklab(L("l2"))), s);
  CHECK(sum.i == 47);

  Constructor empt = op_eval(Term::is_empty(W::mklab(L("e"))), s);
  CHECK(empt.b == true);

  Constructor single = op_eval(Term::singleton(W::mklab(L("l1"))), s);
  CHECK(single.coll.multiplicity(L("l1")) == 1);

  CHECK(op_eval(Term::eq(W::mklab(L("l1")), W::mklab(L("l2"))), s).b == false);
  CHECK_THROWS_AS(op_eval(Term::plus(W::mklab(L("l1")), W::mklab(L("e"))), s),
                  Error);
  CHECK_THROWS_AS(op_eval(Term::copy(W::mklab(L("nope"))), s), Error);
}

TEST_CASE("store typing accepts the example fixture") {
  Store rs = fixtures::rs_store();
  auto psi = infer_store_type(rs);
  REQUIRE(psi.has_value());
  CHECK(store_typecheck(*psi, rs));
  CHECK(to_string((*psi)[L("r")]) == "{(A: int, B: int, C: int)}");
  CHECK(to_string((*psi)[L("s")]) == "{(C: int, D: int)}");
}

TEST_CASE("store typing rejects cycles and mismatches") {
  Store s;
  LabelMultiset self;
  self.add(L("l"), 1);
  s.bind(L("l"), Constructor::of_coll(self));
  std::string diag;
  CHECK(!infer_store_type(s, {}, &diag).has_value());
  CHECK(diag.find("cycle") != std::string::npos);

  Store t;
  t.bind(L("l"), Constructor::of_int(3));
  StoreType psi;
  psi[L("l")] = Type::coll(Type::intty());
  CHECK(!store_typecheck(psi, t, &diag));
}

TEST_CASE("readback of the fixture") {
  Store rs = fixtures::rs_store();
  auto psi = infer_store_type(rs);

  ValuePtr five = readback(rs, Type::intty(), L("r31"));
  CHECK(five->intval() == 7);

  ValuePtr table = readback(rs, (*psi)[L("s")], L("s"));
  REQUIRE(table->kind() == Value::Kind::Bag);
  CHECK(table->bag().size() == 3);
  CHECK(to_string(table) == "{(C: 2, D: 3), (C: 2, D: 4), (C: 3, D: 7)}");
}

TEST_CASE("flatten and sum") {
  Store s;
  s.bind(L("i1"), Constructor::of_int(3));
  s.bind(L("i2"), Constructor::of_int(4));
  s.bind(L("i3"), Constructor::of_int(0));
  LabelMultiset inner;
  inner.add(L("i1"), 1);
  s.bind(L("c1"), Constructor::of_coll(inner));

  LabelMultiset sums;
  sums.add(L("i1"), 1);
  sums.add(L("i2"), 1);
  sums.add(L("i3"), 1);
  CHECK(sum_ints(s, sums) == 7);
  CHECK(sum_ints(s, {}) == 0);

  LabelMultiset colls;
  colls.add(L("c1"), 2);
  LabelMultiset flat = flatten(s, colls);
  CHECK(flat.multiplicity(L("i1")) == 2);

  CHECK_THROWS_AS(flatten(s, sums), Error);
}

TEST_CASE("write-once discipline") {
  Store s;
  s.bind(L("l"), Constructor::of_int(1));
  CHECK_THROWS_AS(s.bind(L("l"), Constructor::of_int(2)), Error);
}

TEST_CASE("fresh supply avoids loaded labels and user names") {
  FreshSupply f;
  Label a = f.fresh();
  CHECK(a.name == "%0");
  f.avoid(L("%17"));
  CHECK(f.fresh().name == "%18");
  f.avoid(L("user"));  // non-reserved names are ignored
  CHECK(f.fresh().name == "%19");
  CHECK(FreshSupply::is_reserved(a));
  CHECK(!FreshSupply::is_reserved(L("r1")));
}
