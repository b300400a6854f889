#include "toposforge/engine.hpp"

#include "doctest.h"

using namespace tf;

namespace {

const char* kCorpus = R"JSON(
{
  "kind": "corpus",
  "name": "sierpinski",
  "documents": [
    {"kind": "category", "name": "sier", "objects": ["0", "1"],
     "arrows": [{"name": "u", "dom": "0", "cod": "1"}], "compose": []},
    {"kind": "presheaf", "name": "collapsing", "category": "sier",
     "values": {"0": ["r"], "1": ["p", "q"]},
     "restrict": {"u": {"p": "r", "q": "r"}}},
    {"kind": "presheaf", "name": "two_constants", "category": "sier",
     "values": {"0": ["s", "z"], "1": ["s", "z"]},
     "restrict": {"u": {"s": "s", "z": "z"}}},
    {"kind": "presheaf", "name": "one_constant", "category": "sier",
     "values": {"0": ["k"], "1": ["k"]},
     "restrict": {"u": {"k": "k"}}},
    {"kind": "presheaf_morphism", "name": "succ",
     "dom": "one_constant", "cod": "two_constants",
     "components": {"0": {"k": "s"}, "1": {"k": "s"}}},
    {"kind": "site", "name": "u_site", "category": "sier",
     "covers": [{"name": "U0", "target": "1",
                 "family": [{"index": 0, "arrow": "u"}]}]},
    {"kind": "site", "name": "trivial", "category": "sier", "covers": []},
    {"kind": "map", "name": "nno", "dom": ["k"], "cod": ["s", "z"],
     "map": {"k": "s"}},
    {"kind": "map_class", "name": "bounded2",
     "spec": {"kind": "fiber_bound", "bound": 2}}
  ]
}
)JSON";

Bundle corpus() { return parse_bundle(kCorpus); }

}  // namespace

TEST_CASE("parsing and canonical serialization") {
  Bundle b = corpus();
  CHECK(b.documents.size() == 9);
  CHECK(b.need("category").name == "sier");
  CHECK(b.need("site", "trivial").body.at("covers").empty());
  CHECK(b.find("map_class", "missing") == nullptr);
  SUBCASE("canonical documents round-trip byte for byte") {
    std::string canonical = serialize_bundle(b);
    Bundle again = parse_bundle(canonical);
    CHECK(serialize_bundle(again) == canonical);
  }
  SUBCASE("hashes are stable and content-sensitive") {
    CHECK(content_hash(b.need("map", "nno").body) == content_hash(b.need("map").body));
    CHECK(content_hash(b.need("map").body) != content_hash(b.need("site").body));
    CHECK(content_hash(b.need("map").body).size() == 16);
  }
  SUBCASE("malformed input is rejected with a location hint") {
    CHECK_THROWS_AS(parse_bundle("{"), InputError);
    CHECK_THROWS_AS(parse_bundle("{\"kind\":\"nonsense\",\"name\":\"x\"}"), InputError);
    CHECK_THROWS_AS(parse_bundle("[1,2]"), InputError);
  }
}

TEST_CASE("document resolution") {
  Bundle b = corpus();
  SUBCASE("categories get implicit identities") {
    CatRef c = doc_category(b.need("category"));
    CHECK(c->arrows.size() == 3);
    CHECK(c->compose("id_1", "u") == "u");
  }
  SUBCASE("presheaves, sites, maps and classes resolve") {
    Presheaf p = doc_presheaf(b, b.need("presheaf", "collapsing"));
    CHECK(p.at("1").size() == 2);
    CHECK(p.restrict("q", "u") == "r");
    Site s = doc_site(b, b.need("site", "u_site"));
    CHECK(s.covers.size() == 1);
    CHECK(s.covers[0].arrows == std::vector<std::string>{"u"});
    FinFunction f = doc_map(b.need("map").body);
    CHECK(f("k") == "s");
    CHECK(doc_map_class(b.need("map_class")).contains(f));
    PresheafMorphism m = doc_morphism(b, b.need("presheaf_morphism"));
    CHECK(m.apply("0", "k") == "s");
  }
  SUBCASE("dangling references are input errors") {
    Bundle bad = parse_bundle(R"({"kind":"site","name":"s","category":"nope","covers":[]})");
    CHECK_THROWS_AS(doc_site(bad, bad.need("site")), InputError);
    Bundle bad2 = parse_bundle(
        R"({"kind":"corpus","name":"c","documents":[
             {"kind":"category","name":"k","objects":["0"],"arrows":[],"compose":[]},
             {"kind":"site","name":"s","category":"k",
              "covers":[{"name":"U0","target":"0",
                         "family":[{"index":0,"arrow":"ghost"}]}]}]})");
    CHECK_THROWS_AS(doc_site(bad2, bad2.need("site")), InputError);
  }
  SUBCASE("emitted documents parse back to the same structure") {
    Site s = doc_site(b, b.need("site", "u_site"));
    Json j = site_to_json(s, "sier", "emitted");
    Bundle round = corpus();
    round.documents.push_back(Document{"site", "emitted", j});
    Site s2 = doc_site(round, round.need("site", "emitted"));
    CHECK(s2.covers.size() == s.covers.size());
    CHECK(s2.covers[0].canonical() == s.covers[0].canonical());
    Presheaf p = doc_presheaf(b, b.need("presheaf", "collapsing"));
    Json pj = presheaf_to_json(p, "sier", "emitted_p");
    round.documents.push_back(Document{"presheaf", "emitted_p", pj});
    CHECK(doc_presheaf(round, round.need("presheaf", "emitted_p")) == p);
  }
}

TEST_CASE("command dispatch") {
  Bundle b = corpus();
  RunOptions opt;
  SUBCASE("validate accepts the corpus") {
    RunResult r = run_command("validate", b, opt);
    CHECK(r.exit_code == 0);
    CHECK(r.report.body.at("verdicts").at("u_site") == true);
    CHECK(r.report.body.at("inputs").size() == 9);
  }
  SUBCASE("validate flags semantic breakage") {
    Bundle bad = parse_bundle(
        R"({"kind":"corpus","name":"c","documents":[
             {"kind":"category","name":"k","objects":["0"],"arrows":[],"compose":[]},
             {"kind":"presheaf","name":"p","category":"k",
              "values":{"0":["x","x"]},"restrict":{}}]})");
    RunResult r = run_command("validate", bad, opt);
    CHECK(r.exit_code == 2);
    CHECK(r.report.body.at("verdicts").at("p") == false);
  }
  SUBCASE("check-sheaf reports the amalgamation witness") {
    RunResult r = run_command("check-sheaf", b, opt);
    CHECK(r.exit_code == 1);
    CHECK(r.report.body.at("verdicts").at("sheaf") == false);
    std::string w = r.report.body.at("witnesses")[0].get<std::string>();
    CHECK(w.find("2 amalgamations") != std::string::npos);
  }
  SUBCASE("gen-site closes the axioms and keeps the sheaves") {
    RunResult r = run_command("gen-site", b, opt);
    CHECK(r.exit_code == 0);
    CHECK(r.report.body.at("verdicts").at("axiom_M") == true);
    CHECK(r.report.body.at("verdicts").at("axiom_L") == true);
    CHECK(r.report.body.at("verdicts").at("strong_C") == true);
    CHECK(r.report.body.at("verdicts").at("same_sheaves") == true);
    CHECK(!r.report.body.at("site").at("covers").empty());
  }
  SUBCASE("sheafify contracts the collapsing presheaf") {
    RunResult r = run_command("sheafify", b, opt);
    CHECK(r.exit_code == 0);
    CHECK(r.report.body.at("sizes").at("0") == 1);
    CHECK(r.report.body.at("sizes").at("1") == 1);
  }
  SUBCASE("same-sheaves separates the two corpus sites") {
    RunResult r = run_command("same-sheaves", b, opt);
    CHECK(r.exit_code == 1);
    CHECK(!r.report.body.at("witnesses").empty());
  }
  SUBCASE("wtype counts the numerals") {
    RunOptions o;
    o.depth = 3;
    RunResult r = run_command("wtype", b, o);
    CHECK(r.exit_code == 0);
    CHECK(r.report.body.at("counts") == Json({1, 2, 3}));
    CHECK(r.report.body.at("verdicts").at("kleene_match") == true);
  }
  SUBCASE("wtype-presheaf matches the iterate pointwise") {
    RunOptions o;
    o.depth = 3;
    RunResult r = run_command("wtype-presheaf", b, o);
    CHECK(r.exit_code == 0);
    CHECK(r.report.body.at("sizes").at("0") == 3);
    CHECK(r.report.body.at("sizes").at("1") == 3);
    CHECK(r.report.body.at("verdicts").at("structure_bijective") == true);
  }
  SUBCASE("check-class passes the bounded class") {
    RunResult r = run_command("check-class", b, opt);
    CHECK(r.exit_code == 0);
    CHECK(r.report.body.at("verdicts").at("representable") == true);
    CHECK(r.report.body.at("verdicts").at("triangle_split_agrees") == true);
  }
  SUBCASE("check-class fails a literal class with witnesses") {
    Bundle lit = parse_bundle(
        R"({"kind":"map_class","name":"rigid",
            "spec":{"kind":"explicit","up_to_iso":false,
                    "maps":[{"dom":["x0","x1"],"cod":["x0"],
                             "map":{"x0":"x0","x1":"x0"}}]}})");
    RunResult r = run_command("check-class", lit, opt);
    CHECK(r.exit_code == 1);
    CHECK(r.report.body.at("verdicts").at("pullback_stability") == false);
    CHECK(!r.report.body.at("witnesses").empty());
  }
  SUBCASE("collsp verifies all three clauses") {
    RunResult r = run_command("collsp", b, opt);
    CHECK(r.exit_code == 0);
    CHECK(r.report.body.at("verdicts").at("quasi_pullback") == true);
    CHECK(r.report.body.at("verdicts").at("g_small") == true);
    CHECK(r.report.body.at("verdicts").at("collection_span") == true);
    CHECK(r.report.body.at("sizes").at("c").get<int>() > 0);
  }
  SUBCASE("equiv-coll-site keeps the sheaves") {
    RunResult r = run_command("equiv-coll-site", b, opt);
    CHECK(r.exit_code == 0);
    CHECK(r.report.body.at("verdicts").at("collection_site") == true);
    CHECK(r.report.body.at("verdicts").at("same_sheaves") == true);
  }
  SUBCASE("unknown commands and missing documents exit 2") {
    CHECK(run_command("frobnicate", b, opt).exit_code == 2);
    Bundle empty = parse_bundle(
        R"({"kind":"category","name":"k","objects":[],"arrows":[],"compose":[]})");
    RunResult r = run_command("check-sheaf", empty, opt);
    CHECK(r.exit_code == 2);
    CHECK(r.report.body.contains("error"));
  }
}

TEST_CASE("report determinism and formats") {
  Bundle b = corpus();
  RunOptions opt;
  RunResult a = run_command("check-sheaf", b, opt);
  RunResult c = run_command("check-sheaf", b, opt);
  CHECK(a.report.body.dump() == c.report.body.dump());
  Json j = a.report.to_json();
  CHECK(j.contains("timing"));
  CHECK(j.at("command") == "check-sheaf");
  std::string text = a.report.to_text();
  CHECK(text.find("verdict sheaf: fail") != std::string::npos);
  CHECK(text.find("witness:") != std::string::npos);
}
