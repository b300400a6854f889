#include "toposforge/common.hpp"

#include <cstdlib>

namespace tf {

std::uint64_t enumeration_budget() {
  static std::uint64_t budget = [] {
    if (const char* env = std::getenv("TOPOSFORGE_BUDGET")) {
      char* end = nullptr;
      unsigned long long v = std::strtoull(env, &end, 10);
      if (end && *end == '\0' && v > 0) return static_cast<std::uint64_t>(v);
    }
    return static_cast<std::uint64_t>(5'000'000);
  }();
  return budget;
}

void guard_budget(std::uint64_t n, const std::string& where) {
  if (n > enumeration_budget())
    throw BudgetError("enumeration budget exceeded in " + where + " (" + std::to_string(n) +
                      " > " + std::to_string(enumeration_budget()) + ")");
}

}  // namespace tf
