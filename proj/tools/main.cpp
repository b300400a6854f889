#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "toposforge.h"

int main(int argc, char** argv) {
  CLI::App app{"finite category, site and sheaf computations over JSON documents"};
  app.set_version_flag("--version", tf_version());

  std::string command;
  std::vector<std::string> files;
  int depth = -1;
  int max_size = -1;
  int probe = -1;
  std::string format = "text";

  app.add_option("command", command,
                 "validate | gen-site | check-sheaf | sheafify | same-sheaves | wtype | "
                 "wtype-presheaf | check-class | collsp | equiv-coll-site")
      ->required();
  app.add_option("files", files, "JSON document or corpus files")->required();
  app.add_option("--depth", depth, "tree or term depth (gen-site, wtype, wtype-presheaf)");
  app.add_option("--max-size", max_size, "presheaf value bound for sheaf comparisons");
  app.add_option("--probe", probe, "probe universe carrier for class checks");
  app.add_option("--format", format, "report format: json | text")
      ->check(CLI::IsMember({"json", "text"}));

  CLI11_PARSE(app, argc, argv);

  tf_session* session = tf_session_new();
  for (const auto& f : files) {
    if (tf_load_file(session, f.c_str()) != 0) {
      std::fprintf(stderr, "error: %s\n", tf_last_error(session));
      tf_session_free(session);
      return 2;
    }
  }

  int code = tf_run(session, command.c_str(), depth, max_size, probe);
  const char* out = format == "json" ? tf_report_json(session) : tf_report_text(session);
  if (out) {
    std::fputs(out, stdout);
  } else if (code == 2) {
    std::fprintf(stderr, "error: %s\n", tf_last_error(session));
  }
  tf_session_free(session);
  return code;
}
