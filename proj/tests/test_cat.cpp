#include "toposforge/cat.hpp"

#include "doctest.h"

using namespace tf;

TEST_CASE("one-object one-arrow category is valid") {
  FinCategory c = terminal_category();
  CHECK(c.objects.size() == 1);
  CHECK(c.arrows.size() == 1);
  CHECK(validate_category(c).ok);
}

TEST_CASE("free category on the poset 0 -> 1") {
  FinCategory c = sierpinski_category();
  CHECK(c.arrows.size() == 3);  // id_0, id_1, u
  CHECK(c.dom("u") == "0");
  CHECK(c.cod("u") == "1");
  CHECK(c.compose("u", "id_0") == "u");
  CHECK(validate_category(c).ok);
}

TEST_CASE("broken composition table is reported") {
  FinCategory c = sierpinski_category();
  // give u . id_0 a wrong value by adding a bogus endpoint assignment
  c.cod_["u"] = "0";
  CatVerdict v = validate_category(c);
  CHECK_FALSE(v.ok);
  CHECK(!v.violations.empty());
}

TEST_CASE("idempotent monoid presentation compiles to 2 arrows") {
  CatPresentation p;
  p.objects = {"*"};
  p.generators = {{"e", "*", "*"}};
  p.relations = {{{"e", "e"}, {"e"}}};
  FinCategory c = compile_presentation(p, 10);
  CHECK(c.arrows.size() == 2);
  CHECK(c.compose("e", "e") == "e");
  CHECK(validate_category(c).ok);
}

TEST_CASE("free loop exhausts the budget") {
  CatPresentation p;
  p.objects = {"*"};
  p.generators = {{"a", "*", "*"}};
  CHECK_THROWS_WITH_AS(compile_presentation(p, 20), doctest::Contains("not finite"),
                       InputError);
}

TEST_CASE("commutative square presentation") {
  CatPresentation p;
  p.objects = {"00", "01", "10", "11"};
  p.generators = {{"a", "00", "01"}, {"b", "01", "11"}, {"c", "00", "10"}, {"d", "10", "11"}};
  p.relations = {{{"b", "a"}, {"d", "c"}}};
  FinCategory c = compile_presentation(p, 20);
  CHECK(c.arrows.size() == 9);  // 4 ids + 4 generators + 1 diagonal
  CHECK(c.compose("b", "a") == c.compose("d", "c"));
  CHECK(validate_category(c).ok);
}

TEST_CASE("compiled categories always validate") {
  for (const FinCategory& c : {terminal_category(), sierpinski_category()})
    CHECK(validate_category(c).ok);
}

TEST_CASE("opposite is an involution") {
  FinCategory c = sierpinski_category();
  CHECK(c.op().op() == c);
  CHECK(validate_category(c.op()).ok);
  CHECK(c.op().dom("u") == "1");
}
