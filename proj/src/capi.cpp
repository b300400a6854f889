#include "toposforge.h"

#include "toposforge/engine.hpp"

struct tf_session {
  tf::Bundle bundle;
  std::string report_json;
  std::string report_text;
  std::string error;
  bool has_report = false;
};

extern "C" {

const char* tf_version(void) { return "0.1.0"; }

tf_session* tf_session_new(void) { return new tf_session(); }

void tf_session_free(tf_session* s) { delete s; }

static int append_bundle(tf_session* s, tf::Bundle parsed) {
  for (auto& d : parsed.documents) s->bundle.documents.push_back(std::move(d));
  s->error.clear();
  return 0;
}

int tf_load_string(tf_session* s, const char* text) {
  if (!s || !text) return 2;
  try {
    return append_bundle(s, tf::parse_bundle(text));
  } catch (const std::exception& e) {
    s->error = e.what();
    return 2;
  }
}

int tf_load_file(tf_session* s, const char* path) {
  if (!s || !path) return 2;
  try {
    return append_bundle(s, tf::parse_bundle_file(path));
  } catch (const std::exception& e) {
    s->error = e.what();
    return 2;
  }
}

int tf_run(tf_session* s, const char* command, int depth, int max_size, int probe) {
  if (!s || !command) return 2;
  tf::RunOptions opt;
  if (depth >= 0) opt.depth = depth;
  if (max_size >= 0) opt.max_size = static_cast<std::size_t>(max_size);
  if (probe >= 0) opt.probe = static_cast<std::size_t>(probe);
  try {
    tf::RunResult res = tf::run_command(command, s->bundle, opt);
    s->report_json = tf::canonical_dump(res.report.to_json());
    s->report_text = res.report.to_text();
    s->has_report = true;
    s->error = res.exit_code == 2 && res.report.body.contains("error")
                   ? res.report.body.at("error").get<std::string>()
                   : "";
    return res.exit_code;
  } catch (const std::exception& e) {
    s->error = e.what();
    return 2;
  }
}

const char* tf_report_json(const tf_session* s) {
  return s && s->has_report ? s->report_json.c_str() : nullptr;
}

const char* tf_report_text(const tf_session* s) {
  return s && s->has_report ? s->report_text.c_str() : nullptr;
}

const char* tf_last_error(const tf_session* s) { return s ? s->error.c_str() : ""; }

}  // extern "C"
