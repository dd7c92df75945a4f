#pragma once

// The acceptance battery shared by `cqblab suite` and the acceptance test.

#include <nlohmann/json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cqblab {

struct CriterionResult {
  std::string id;  // "1a", "1b", ...
  std::string description;
  bool pass = false;
  double measured = 0;
  double tolerance = 0;
  std::string detail;
};

struct AcceptanceOptions {
  // Tightens every pinned tolerance: the criterion uses min(pinned, override).
  std::optional<double> tolerance;
  std::uint64_t seed = 0;
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt = {});

bool all_pass(const std::vector<CriterionResult>& results);
void print_table(std::ostream& os, const std::vector<CriterionResult>& results);
nlohmann::json to_json(const std::vector<CriterionResult>& results);

}  // namespace cqblab
