#pragma once

// One CLI job: build a space or load a tensor, compute, and emit reports.

#include "cqblab/flow.hpp"
#include "cqblab/positivity.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cqblab {

enum class ExitCode : int { Ok = 0, Error = 1, VerdictFailed = 2 };

struct JobConfig {
  std::string command;  // space | curvature | check | flow | suite

  // Space selector.
  std::string family;
  int rank = 0;
  std::string phi;            // "2,4"
  std::string metric = "ke";  // "ke" or "c=1,3/2"
  std::string path = "auto";  // auto | general | typeA

  // Tensor input instead of a space (tensor dump JSON).
  std::string tensor_in;

  // check
  std::string what = "cqb";  // cqb | dcqb | q | rank1 | rankk
  std::string mode = "cqb";  // form used by rank1 / rankk
  int rank_limit = 0;
  std::string sign;  // pos | nonneg | neg | nonpos; empty = no requirement
  int starts = 64;
  int max_iterations = 500;

  // flow
  int n = 0;
  std::optional<double> k0;
  std::optional<double> t_max;
  std::optional<double> dt;
  std::optional<double> e1;

  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;

  std::string json_out;
  std::string csv_out;
  std::string tensor_out;
};

// Fields of the JSON config file match JobConfig member names, with t_max etc.
// spelled as in C++. Unknown keys are rejected.
JobConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const JobConfig& c);
// Fields set in `overrides` replace those in `base`; `set` lists which ones.
JobConfig merge_config(JobConfig base, const JobConfig& overrides, const std::vector<std::string>& set);

std::vector<int> parse_phi(const std::string& s);
Rational parse_rational(const std::string& s);
// "ke" yields nullopt.
std::optional<std::vector<Rational>> parse_metric(const std::string& s);

// Effective seed: explicit config, else CQBLAB_SEED, else 0.
std::uint64_t effective_seed(const JobConfig& c);

struct JobResult {
  ExitCode code = ExitCode::Ok;
  nlohmann::json report;
  std::string csv;
  std::string error;
};

// Never throws; failures map to ExitCode::Error with `error` filled.
JobResult run(const JobConfig& config);

bool sign_holds(const std::string& sign, Verdict v);

// Sorted keys, shortest round-trip floats.
std::string dump_report(const nlohmann::json& j);

}  // namespace cqblab
