#include "toposforge/smallmap.hpp"

#include "doctest.h"

using namespace tf;

namespace {

CatRef sier() { return std::make_shared<FinCategory>(sierpinski_category()); }

Site u_site(CatRef c) {
  Site s;
  s.base = c;
  s.covers.push_back({"1", {"u"}});
  return s;
}

FinFunction fold2(const std::string& a0, const std::string& a1, const std::string& b) {
  return FinFunction::from_map(FinSet::of({a0, a1}), FinSet::of({b}),
                               {{a0, b}, {a1, b}});
}

}  // namespace

TEST_CASE("class membership") {
  FinFunction f = fold2("x0", "x1", "y");
  FinFunction g = fold2("p", "q", "r");
  FinFunction id1 = FinFunction::identity(FinSet::of({"y"}));
  SUBCASE("fiber bounds") {
    CHECK(MapClass::fiber_bound_class(2).contains(f));
    CHECK_FALSE(MapClass::fiber_bound_class(1).contains(f));
    CHECK(MapClass::all_maps().contains(f));
  }
  SUBCASE("explicit classes match by fiber shape by default") {
    MapClass iso = MapClass::explicit_class({f});
    CHECK(iso.contains(f));
    CHECK(iso.contains(g));
    CHECK_FALSE(iso.contains(id1));
  }
  SUBCASE("literal explicit classes match nothing else") {
    MapClass lit = MapClass::explicit_class({f}, false);
    CHECK(lit.contains(f));
    CHECK_FALSE(lit.contains(g));
    CHECK(lit.predicate()(f));
    CHECK_FALSE(lit.predicate()(g));
  }
}

TEST_CASE("probe universe") {
  ProbeUniverse p(2);
  CHECK(p.sets.size() == 4);
  // (1+m)^2 functions into each codomain of size m
  CHECK(p.maps.size() == 18);
  ProbeUniverse q(3);
  CHECK(q.sets.size() == 8);
  CHECK(q.maps.size() == 170);
}

TEST_CASE("stability under pullback, descent and sums") {
  ProbeUniverse p(3);
  SUBCASE("all maps") {
    StableVerdict v = check_stable(MapClass::all_maps(), p);
    CHECK(v.ok());
  }
  SUBCASE("bounded fibers") {
    StableVerdict v = check_stable(MapClass::fiber_bound_class(2), p);
    CHECK(v.ok());
    CHECK(check_stable(MapClass::fiber_bound_class(1), p).ok());
  }
  SUBCASE("a literal singleton class is not stable") {
    FinFunction f = fold2("x0", "x1", "x0");
    StableVerdict v = check_stable(MapClass::explicit_class({f}, false), p);
    CHECK_FALSE(v.pullback_stability.ok);
    CHECK(!v.pullback_stability.violations.empty());
  }
}

TEST_CASE("local fullness") {
  ProbeUniverse p(3);
  SUBCASE("bounded fibers fail the triangle axiom through composition") {
    LocallyFullVerdict v = check_locally_full(MapClass::fiber_bound_class(2), p);
    CHECK_FALSE(v.triangle.ok);
    CHECK_FALSE(v.composition.ok);  // fibers multiply along composites
    CHECK(v.diagonal.ok);           // diagonals are monic
    CHECK(v.remark_applies);
    CHECK(v.remark_agrees);
  }
  SUBCASE("monos and all maps satisfy every clause") {
    for (MapClass s : {MapClass::all_maps(), MapClass::fiber_bound_class(1)}) {
      LocallyFullVerdict v = check_locally_full(s, p);
      CHECK(v.ok());
      CHECK(v.composition.ok);
      CHECK(v.diagonal.ok);
      CHECK(v.remark_applies);
      CHECK(v.remark_agrees);
    }
  }
}

TEST_CASE("closure under sums, quotients, dependent products and branching types") {
  SUBCASE("full probes at carrier 3") {
    ProbeUniverse p(3);
    CHECK(check_pi_w_closure(MapClass::all_maps(), p).ok());
    CHECK(check_pi_w_closure(MapClass::fiber_bound_class(1), p).ok());
    // fiber products stay below the bound while the probe carrier does
    CHECK(check_pi_w_closure(MapClass::fiber_bound_class(2), p).ok());
  }
  SUBCASE("dependent products escape a fiber bound once sections multiply") {
    // curated probe: a 2-fiber over a 2-fiber gives 2 x 2 sections
    ProbeUniverse p(0);
    FinSet a = FinSet::of({"a"});
    FinSet b = FinSet::of({"b0", "b1"});
    FinSet x = FinSet::of({"c0", "c1", "c2", "c3"});
    FinFunction f = FinFunction::constant(b, a, "a");
    FinFunction g = FinFunction::from_map(
        x, b, {{"c0", "b0"}, {"c1", "b0"}, {"c2", "b1"}, {"c3", "b1"}});
    p.sets = {a, b, x};
    p.maps = {f, g};
    ClosureVerdict v = check_pi_w_closure(MapClass::fiber_bound_class(2), p);
    CHECK(v.sums.ok);
    CHECK(v.quotients.ok);
    CHECK_FALSE(v.pi.ok);
    REQUIRE(!v.pi.violations.empty());
    CHECK(v.pi.violations[0].find("dependent product") != std::string::npos);
    CHECK(check_pi_w_closure(MapClass::all_maps(), p).ok());
  }
}

TEST_CASE("representability") {
  SUBCASE("one universal fiber per occurring size") {
    ProbeUniverse p(3);
    Representation r2 = find_representation(MapClass::fiber_bound_class(2), p);
    CHECK(r2.ok);
    CHECK(r2.universal.pi.cod.size() == 3);  // sizes 0, 1, 2
    CHECK(r2.universal.pi.dom.size() == 3);
    Representation rall = find_representation(MapClass::all_maps(), p);
    CHECK(rall.ok);
    CHECK(rall.universal.pi.cod.size() == 4);  // sizes 0, 1, 2, 3
    CHECK(rall.universal.pi.dom.size() == 6);
  }
  SUBCASE("a literal class cannot contain its own universal map") {
    ProbeUniverse p(2);
    FinFunction f = fold2("x0", "x1", "x0");
    Representation r = find_representation(MapClass::explicit_class({f}, false), p);
    CHECK_FALSE(r.ok);
    REQUIRE(!r.failures.empty());
    CHECK(r.failures[0].find("universal map") != std::string::npos);
  }
}

TEST_CASE("collection axiom") {
  SUBCASE("solvable by sections for the standard classes") {
    ProbeUniverse p(3);
    CHECK(check_collection_axiom(MapClass::all_maps(), p).ok());
    CHECK(check_collection_axiom(MapClass::fiber_bound_class(2), p).ok());
  }
  SUBCASE("a rigid class fails once sections are ruled out") {
    FinSet a = FinSet::of({"a"});
    FinSet b = FinSet::of({"b0", "b1"});
    FinSet c = FinSet::of({"c0", "c1", "c2"});
    FinFunction f = FinFunction::constant(b, a, "a");
    FinFunction e = FinFunction::from_map(c, b, {{"c0", "b0"}, {"c1", "b0"}, {"c2", "b1"}});
    ProbeUniverse p(0);
    p.sets = {a, b, c};
    p.maps = {f, e, FinFunction::identity(a)};
    MapClass lit = MapClass::explicit_class({f}, false);
    CHECK(check_collection_axiom(lit, p).quasi_pullbacks.ok);
    CollectionAxiomVerdict v = check_collection_axiom(lit, p, true);
    CHECK_FALSE(v.quasi_pullbacks.ok);
    REQUIRE(!v.quasi_pullbacks.violations.empty());
    CHECK(v.quasi_pullbacks.violations[0].find("no small refinement") != std::string::npos);
  }
  SUBCASE("the universal map of a fiber bound is a collection map") {
    ProbeUniverse p(2);
    Representation r = find_representation(MapClass::fiber_bound_class(2), p);
    CHECK(is_collection_map(r.universal.pi).holds);
  }
}

TEST_CASE("collection span construction") {
  ProbeUniverse p(2);
  MapClass s = MapClass::fiber_bound_class(2);
  UniversalMap pi = find_representation(s, p).universal;
  SUBCASE("a singleton fiber is covered once per nonempty universal fiber") {
    FinFunction f = FinFunction::constant(FinSet::of({"b0"}), FinSet::of({"a"}), "a");
    CollectionSpanConstruction cc = collsp_construct(f, s, pi);
    CHECK(cc.c.size() == 2);  // one surjection each from the 1- and 2-point fibers
    CHECK(cc.d.size() == 3);
    CHECK(cc.quasi_pullback);
    CHECK(cc.g_small);
    CHECK(cc.span.holds);
  }
  SUBCASE("an empty fiber is covered by the empty universal fiber") {
    FinFunction f{FinSet::empty(), FinSet::of({"a"}), {}};
    CollectionSpanConstruction cc = collsp_construct(f, s, pi);
    CHECK(cc.c.size() == 1);
    CHECK(cc.d.size() == 0);
    CHECK(cc.quasi_pullback);
    CHECK(cc.span.holds);
  }
  SUBCASE("maps outside the class are rejected") {
    FinFunction f = FinFunction::constant(FinSet::of({"b0", "b1", "b2"}),
                                          FinSet::of({"a"}), "a");
    CHECK_THROWS_AS(collsp_construct(f, s, pi), InputError);
  }
  SUBCASE("every small probe map yields a verified span") {
    for (const auto& f : p.maps) {
      if (!s.contains(f)) continue;
      CollectionSpanConstruction cc = collsp_construct(f, s, pi);
      CHECK(cc.quasi_pullback);
      CHECK(cc.g_small);
      CHECK(cc.span.holds);
    }
  }
}

TEST_CASE("equivalent collection site") {
  CatRef c = sier();
  MapClass s = MapClass::fiber_bound_class(2);
  UniversalMap pi = find_representation(s, ProbeUniverse(2)).universal;
  SUBCASE("the reindexed site is a collection site with the same sheaves") {
    Site base = u_site(c);
    Site out = equiv_collection_site(base, s, pi);
    CHECK(out.covers.size() == 2);
    CHECK(validate_site(out).ok);
    CHECK(is_collection_site(out).holds);
    CHECK(has_small_covers(out, s.predicate()));
    CHECK(same_sheaves(base, out, 2).equal);
  }
  SUBCASE("empty coverage stays empty") {
    Site base;
    base.base = c;
    Site out = equiv_collection_site(base, s, pi);
    CHECK(out.covers.empty());
    CHECK(same_sheaves(base, out, 2).equal);
  }
  SUBCASE("sites with large covers are rejected") {
    Site base;
    base.base = c;
    base.covers.push_back({"1", {"u", "u", "u"}});
    CHECK_THROWS_AS(equiv_collection_site(base, s, pi), InputError);
  }
}

TEST_CASE("induced classes on presheaves") {
  CatRef c = sier();
  SUBCASE("the hypothesis on the codomain map is checked") {
    // arrows into 1 are id_1 and u, so the cod map has a 2-point fiber
    PresheafMapClass ok = induce_presheaf_class(MapClass::fiber_bound_class(2), c);
    CHECK(ok.cod_small);
    CHECK(ok.warning.empty());
    PresheafMapClass bad = induce_presheaf_class(MapClass::fiber_bound_class(1), c);
    CHECK_FALSE(bad.cod_small);
    CHECK(!bad.warning.empty());
  }
  SUBCASE("membership is smallness of the underlying map") {
    PresheafProbe probe = presheaf_probe(c, 2);
    REQUIRE(probe.presheaves.size() > 3);
    REQUIRE(!probe.maps.empty());
    PresheafMapClass all = induce_presheaf_class(MapClass::all_maps(), c);
    for (const auto& f : probe.maps) CHECK(all.contains(f));
    PresheafMapClass monos = induce_presheaf_class(MapClass::fiber_bound_class(1), c);
    bool excluded = false;
    for (const auto& f : probe.maps)
      if (!monos.contains(f)) excluded = true;
    CHECK(excluded);
  }
  SUBCASE("stability and local fullness transfer pointwise") {
    PresheafProbe probe = presheaf_probe(c, 2);
    PresheafMapClass all = induce_presheaf_class(MapClass::all_maps(), c);
    StableVerdict st = check_stable_presheaf(all, probe);
    CHECK(st.ok());
    LocallyFullVerdict lf = check_locally_full_presheaf(all, probe);
    CHECK(lf.ok());
    CHECK(lf.remark_applies);
    CHECK(lf.remark_agrees);
  }
  SUBCASE("sheaf probes restrict to sheaves") {
    Site site = u_site(c);
    PresheafProbe probe = sheaf_probe(site, 2);
    REQUIRE(probe.presheaves.size() > 2);
    for (const auto& q : probe.presheaves) CHECK(is_sheaf_for(q, site).sheaf);
    SheafMapClass cls = induce_sheaf_class(MapClass::all_maps(), site);
    for (const auto& f : probe.maps) CHECK(cls.contains(f));
    CHECK(check_stable_presheaf(cls.pointwise, probe).ok());
  }
}
