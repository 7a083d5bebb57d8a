#pragma once

// Property suites over gallery items, with deterministic line reports:
//
//   PASS|FAIL|UNKNOWN <suite> <witness...>
//
// Exit codes: 0 all pass, 1 some suite failed, 2 no failure but some suite
// undecided within the budget, 3 usage or parse error.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "effint/gallery.hpp"
#include "effint/transforms.hpp"

namespace effint {

struct BudgetProfile {
  std::string name;
  std::uint64_t fuel = std::uint64_t{1} << 22;
  /// Exhaustive point set: tuples within the bound times indices below max_index.
  TupleBound points{3, 4};
  Elem max_index = 5;
  std::size_t embed_prefix = 20;
  std::size_t transport_classes = 6;
  std::size_t law_prefix = 20;
  /// Law samples permute {0..law_span-1} and move at most three points.
  std::size_t law_span = 4;
  std::size_t copies = 3;
  std::size_t square_prefix = 12;
  std::size_t square_morphisms = 10;
  std::size_t bi_prefix = 10;
  std::size_t char_alphas = 5;
  std::size_t uniform_prefix = 15;
};

BudgetProfile quick_profile();
BudgetProfile default_profile();
BudgetProfile deep_profile();
/// "quick", "default" or "deep".
std::optional<BudgetProfile> budget_profile(std::string_view name);

enum class SuiteStatus { Pass, Fail, Unknown };
std::string to_string(SuiteStatus s);

struct SuiteResult {
  std::string suite;
  SuiteStatus status = SuiteStatus::Unknown;
  std::string witness;

  std::string line() const;
};

struct SuiteRun {
  int exit_code = 0;
  std::vector<SuiteResult> results;
  /// Set for usage errors (exit code 3).
  std::string message;

  /// One line per result, newline terminated.
  std::string report() const;
  /// The first FAIL line, else the first UNKNOWN line, else nullopt.
  std::optional<SuiteResult> first_problem() const;
};

int exit_code_for(const std::vector<SuiteResult>& results);

/// Runs the item's expected suites in order.
SuiteRun run_suite(const GalleryItem& item, const BudgetProfile& profile);
/// As above; an unknown name gives exit code 3 and "unknown item: <name>".
SuiteRun run_suite(const std::string& item, const BudgetProfile& profile);

/// Every suite identifier run_suite understands.
std::vector<std::string> known_suites();

}  // namespace effint
