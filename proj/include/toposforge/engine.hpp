#pragma once

// Command dispatch over document bundles, producing deterministic reports.
// Timing is kept out of the stable report body so structured output can be
// compared byte-for-byte across runs.

#include <string>

#include "toposforge/docs.hpp"

namespace tf {

struct Report {
  std::string command;
  Json body;  // inputs, bounds, verdicts, witnesses; deterministic
  double seconds = 0.0;

  Json to_json() const;       // body plus a segregated "timing" section
  std::string to_text() const;
};

struct RunOptions {
  int depth = 3;             // gen-site, wtype, wtype-presheaf
  std::size_t max_size = 2;  // same-sheaves and sheaf comparisons
  std::size_t probe = 2;     // probe universe carrier for class checks
};

struct RunResult {
  int exit_code = 0;  // 0 pass, 1 a check failed, 2 invalid input
  Report report;
};

// Commands: validate, gen-site, check-sheaf, sheafify, same-sheaves, wtype,
// wtype-presheaf, check-class, collsp, equiv-coll-site.
RunResult run_command(const std::string& command, const Bundle& b, const RunOptions& opt);

}  // namespace tf
