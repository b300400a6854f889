#include "toposforge/site.hpp"

#include <set>

#include "doctest.h"

using namespace tf;

namespace {

CatRef sier() { return std::make_shared<FinCategory>(sierpinski_category()); }

Site identity_site(CatRef c) {
  Site s;
  s.base = c;
  for (const auto& obj : c->objects.elems) s.covers.push_back({obj, {c->id(obj)}});
  return s;
}

// Cover {u} of 1, nothing else.
Site u_site(CatRef c) {
  Site s;
  s.base = c;
  s.covers.push_back({"1", {"u"}});
  return s;
}

Site repaired_u_site(CatRef c) {
  Site s = u_site(c);
  s.covers.push_back({"0", {"id_0"}});
  return s;
}

CatRef chain3() {
  CatPresentation p;
  p.objects = {"0", "1", "X"};
  p.generators = {{"v", "X", "0"}, {"u", "0", "1"}};
  return std::make_shared<FinCategory>(compile_presentation(p, 16));
}

}  // namespace

TEST_CASE("site validation") {
  CatRef c = sier();
  Site s = identity_site(c);
  CHECK(validate_site(s).ok);
  s.covers.push_back({"1", {"id_0"}});
  CHECK_FALSE(validate_site(s).ok);
}

TEST_CASE("the site square commutes") {
  CatRef c = sier();
  Site s = repaired_u_site(c);
  SiteSquare sq = site_square(s);
  CHECK(compose(c->cod_function(), sq.m) == compose(sq.target, sq.phi));
  CHECK(sq.cov.size() == 2);
  CHECK(sq.cov_u.size() == 2);
}

TEST_CASE("axiom of stability") {
  CatRef c = sier();
  SUBCASE("identity singletons satisfy it with identity choices") {
    Site s = identity_site(c);
    CHECK(check_C(s).ok);
    StrongChoice sc = check_strong_C(s);
    CHECK(sc.ok);
    for (const auto& [k, v] : sc.choice) CHECK(v.find("id_") != std::string::npos);
  }
  SUBCASE("a single cover of 1 with nothing over 0 fails along u") {
    Site s = u_site(c);
    SiteVerdict v = check_C(s);
    CHECK_FALSE(v.ok);
    CHECK(v.violations.size() == 1);
    CHECK(v.violations[0].find("along u") != std::string::npos);
    CHECK_FALSE(check_strong_C(s).ok);
  }
  SUBCASE("adding the identity cover of 0 repairs it") {
    CHECK(check_C(repaired_u_site(c)).ok);
    CHECK(check_strong_C(repaired_u_site(c)).ok);
  }
}

TEST_CASE("identity and composition axioms") {
  CatRef c = sier();
  SUBCASE("identity singletons") {
    Site s = identity_site(c);
    CHECK(check_M(s).ok);
    CHECK(check_L(s).ok);
  }
  SUBCASE("the bare u-cover fails the identity axiom at both objects") {
    CHECK(check_M(u_site(c)).violations.size() == 2);
  }
  SUBCASE("missing composite family fails the composition axiom") {
    CatRef c3 = chain3();
    Site s;
    s.base = c3;
    s.covers.push_back({"1", {"u"}});
    s.covers.push_back({"0", {"v"}});
    SiteVerdict v = check_L(s);
    CHECK_FALSE(v.ok);
    CHECK(!v.violations.empty());
    // adding the composite cover repairs it
    s.covers.push_back({"1", {"u.v"}});
    CHECK(check_L(s).ok);
  }
}

TEST_CASE("collection spans") {
  FinSet d = FinSet::of({"d0", "d1"});
  FinSet cset = FinSet::of({"c"});
  FinSet b = FinSet::of({"b0", "b1"});
  FinSet a = FinSet::of({"a"});
  FinFunction g = FinFunction::constant(d, cset, "c");
  FinFunction h = FinFunction::from_map(d, b, {{"d0", "b0"}, {"d1", "b1"}});
  FinFunction over = FinFunction::constant(cset, a, "a");
  SUBCASE("the identity self-cover always factors") {
    CHECK(is_collection_span(g, h, over).holds);
  }
  SUBCASE("without it, a lone two-element fiber has no refining fiber") {
    CollectionSpanVerdict v = is_collection_span(g, h, over, -1, true);
    CHECK_FALSE(v.holds);
    CHECK(!v.counterexample.empty());
  }
  SUBCASE("singleton fibers and sites pass") {
    CatRef c = sier();
    CHECK(is_collection_site(identity_site(c)).holds);
    CHECK(is_collection_site(u_site(c)).holds);
    CHECK(is_collection_site(repaired_u_site(c)).holds);
  }
}

TEST_CASE("small covers means a small indexing map") {
  CatRef c = sier();
  Site s = repaired_u_site(c);
  auto bound1 = [](const FinFunction& f) {
    for (std::size_t n : f.fiber_sizes())
      if (n > 1) return false;
    return true;
  };
  CHECK(has_small_covers(s, bound1));
  s.covers.push_back({"1", {"u", "id_1"}});
  CHECK_FALSE(has_small_covers(s, bound1));
}

TEST_CASE("generated covering trees") {
  CatRef c = sier();
  SUBCASE("empty coverage yields identity singletons") {
    Site s;
    s.base = c;
    GeneratedSite gen = generate_grothendieck(s, 3);
    CHECK(gen.site.covers.size() == 2);
    for (const auto& u : gen.site.covers) {
      CHECK(u.arrows.size() == 1);
      CHECK(u.arrows[0] == c->id(u.target));
    }
  }
  SUBCASE("u-site at depth 2 gives identities plus the u family once") {
    GeneratedSite gen = generate_grothendieck(u_site(c), 2);
    std::set<std::string> canon;
    for (const auto& u : gen.site.covers) canon.insert(u.canonical());
    CHECK(canon == std::set<std::string>{"0<={id_0}", "1<={id_1}", "1<={u}"});
  }
  SUBCASE("deeper unfolding repeats families and the registry keeps the trees") {
    Site src = repaired_u_site(c);
    GeneratedSite gen = generate_grothendieck(src, 3);
    CHECK(gen.registry.at("1<={u}").size() > 1);
    for (const auto& [key, trees] : gen.registry)
      for (const auto& t : trees) CHECK(flatten_tree(src, t).canonical() == key);
  }
  SUBCASE("depth monotonicity") {
    for (int d = 1; d <= 3; ++d) {
      GeneratedSite lo = generate_grothendieck(repaired_u_site(c), d);
      GeneratedSite hi = generate_grothendieck(repaired_u_site(c), d + 1);
      std::set<std::string> lo_set, hi_set;
      for (const auto& u : lo.site.covers) lo_set.insert(u.canonical());
      for (const auto& u : hi.site.covers) hi_set.insert(u.canonical());
      CHECK(std::includes(hi_set.begin(), hi_set.end(), lo_set.begin(), lo_set.end()));
    }
  }
  SUBCASE("generation repairs the axioms") {
    for (const Site& s : {u_site(c), repaired_u_site(c), identity_site(c)}) {
      GeneratedSite gen = generate_grothendieck(s, 3);
      CHECK(check_M(gen.site).ok);
      CHECK(check_L(gen.site).ok);
      CHECK(check_strong_C(gen.site).ok);
    }
  }
  SUBCASE("embedded covers flatten to the original families") {
    Site s = repaired_u_site(c);
    CovTree t;
    t.root = "1";
    t.leaf = false;
    t.cover = 0;  // the {u} cover
    CovTree leaf;
    leaf.root = "0";
    t.children.push_back(leaf);
    CHECK(flatten_tree(s, t).canonical() == s.covers[0].canonical());
  }
}

TEST_CASE("covering sieve fixpoint") {
  CatRef c = sier();
  SUBCASE("empty coverage gives only maximal sieves") {
    Site s;
    s.base = c;
    auto top = sieve_topology_fixpoint(s);
    CHECK(top.at("0") == std::vector<Sieve>{maximal_sieve(*c, "0")});
    CHECK(top.at("1") == std::vector<Sieve>{maximal_sieve(*c, "1")});
  }
  SUBCASE("the u cover adds exactly the u sieve at 1") {
    auto top = sieve_topology_fixpoint(u_site(c));
    CHECK(top.at("1").size() == 2);
    CHECK(top.at("0").size() == 1);
    Sieve usv = generated_sieve(*c, {"1", {"u"}});
    CHECK(usv == Sieve{"u"});
    CHECK(std::find(top.at("1").begin(), top.at("1").end(), usv) != top.at("1").end());
  }
  SUBCASE("generated families are sound for the sieve topology") {
    auto top = sieve_topology_fixpoint(u_site(c));
    GeneratedSite gen = generate_grothendieck(u_site(c), 3);
    for (const auto& u : gen.site.covers) {
      Sieve sv = generated_sieve(*c, u);
      const auto& at = top.at(u.target);
      CHECK(std::find(at.begin(), at.end(), sv) != at.end());
    }
  }
  SUBCASE("the closure is idempotent") {
    auto top = sieve_topology_fixpoint(u_site(c));
    Site again;
    again.base = c;
    for (const auto& [obj, sieves] : top)
      for (const auto& sv : sieves) again.covers.push_back({obj, sv});
    auto top2 = sieve_topology_fixpoint(again);
    CHECK(top2 == top);
  }
}
