#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace tf {

// Raised on malformed inputs (exit code 2 at the CLI boundary).
struct InputError : std::runtime_error {
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when an enumeration exceeds the global budget.
struct BudgetError : std::runtime_error {
  explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

// Global cap on enumeration sizes, settable via TOPOSFORGE_BUDGET.
std::uint64_t enumeration_budget();

// Throws BudgetError when n exceeds the budget.
void guard_budget(std::uint64_t n, const std::string& where);

}  // namespace tf
