#include <cstring>
#include <string>

#include "doctest.h"
#include "toposforge.h"

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
    {"kind": "site", "name": "u_site", "category": "sier",
     "covers": [{"name": "U0", "target": "1",
                 "family": [{"index": 0, "arrow": "u"}]}]},
    {"kind": "map", "name": "nno", "dom": ["k"], "cod": ["s", "z"],
     "map": {"k": "s"}},
    {"kind": "map_class", "name": "bounded2",
     "spec": {"kind": "fiber_bound", "bound": 2}}
  ]
}
)JSON";

}  // namespace

TEST_CASE("session lifecycle and reports") {
  CHECK(std::strlen(tf_version()) > 0);
  tf_session* s = tf_session_new();
  REQUIRE(s != nullptr);
  CHECK(tf_report_json(s) == nullptr);
  CHECK(std::string(tf_last_error(s)).empty());
  REQUIRE(tf_load_string(s, kCorpus) == 0);

  SUBCASE("a failing check returns 1 with a JSON report") {
    CHECK(tf_run(s, "check-sheaf", -1, -1, -1) == 1);
    std::string json = tf_report_json(s);
    CHECK(json.find("\"sheaf\": false") != std::string::npos);
    CHECK(json.find("2 amalgamations") != std::string::npos);
    std::string text = tf_report_text(s);
    CHECK(text.find("verdict sheaf: fail") != std::string::npos);
  }
  SUBCASE("a passing check returns 0") {
    CHECK(tf_run(s, "gen-site", 3, 2, -1) == 0);
    std::string json = tf_report_json(s);
    CHECK(json.find("\"same_sheaves\": true") != std::string::npos);
    CHECK(tf_run(s, "wtype", 4, -1, -1) == 0);
    CHECK(tf_run(s, "check-class", -1, -1, 2) == 0);
  }
  SUBCASE("invalid input returns 2 and sets the error") {
    tf_session* bad = tf_session_new();
    CHECK(tf_load_string(bad, "{ not json") == 2);
    CHECK(!std::string(tf_last_error(bad)).empty());
    CHECK(tf_load_file(bad, "/nonexistent/file.json") == 2);
    CHECK(tf_run(s, "frobnicate", -1, -1, -1) == 2);
    CHECK(!std::string(tf_last_error(s)).empty());
    tf_session_free(bad);
  }
  SUBCASE("loads accumulate documents across calls") {
    tf_session* two = tf_session_new();
    REQUIRE(tf_load_string(two, R"({"kind": "category", "name": "sier",
      "objects": ["0", "1"],
      "arrows": [{"name": "u", "dom": "0", "cod": "1"}], "compose": []})") == 0);
    REQUIRE(tf_load_string(two, R"({"kind": "site", "name": "u_site",
      "category": "sier",
      "covers": [{"name": "U0", "target": "1",
                  "family": [{"index": 0, "arrow": "u"}]}]})") == 0);
    CHECK(tf_run(two, "validate", -1, -1, -1) == 0);
    tf_session_free(two);
  }
  tf_session_free(s);
}
