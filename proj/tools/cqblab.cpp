#include "cqblab/acceptance.hpp"
#include "cqblab/job.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <utility>
#include <vector>

using namespace cqblab;

namespace {

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) return false;
  out << text;
  return static_cast<bool>(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Curvature positivity checks on Kaehler C-spaces and the Kaehler-Ricci reaction flow"};
  app.require_subcommand(1);
  app.fallthrough();

  JobConfig flags;
  std::string config_path;
  double k0 = 0, t_max = 0, dt = 0, e1 = 0, tolerance = 0;
  std::uint64_t seed = 0;

  // option -> JobConfig field, used to let explicit flags override a config file
  std::vector<std::pair<CLI::Option*, std::string>> fields;
  auto field = [&](CLI::Option* o, const char* name) { fields.emplace_back(o, name); };

  app.add_option("--config", config_path, "JSON file with JobConfig fields; flags override it");
  field(app.add_option("--family", flags.family, "A, B, C or D"), "family");
  field(app.add_option("--rank", flags.rank, "rank of the Lie algebra"), "rank");
  field(app.add_option("--phi", flags.phi, "comma-separated 1-based fundamental roots, e.g. 2,4"), "phi");
  field(app.add_option("--metric", flags.metric, "ke or c=v1,v2,... with rationals p/q"), "metric");
  field(app.add_option("--path", flags.path, "curvature assembly: auto, general, typeA"), "path");
  field(app.add_option("--tensor", flags.tensor_in, "tensor dump JSON to use instead of a space"), "tensor_in");
  field(app.add_option("--what", flags.what, "cqb, dcqb, q, rank1 or rankk"), "what");
  field(app.add_option("--mode", flags.mode, "form for rank1/rankk: cqb or dcqb"), "mode");
  field(app.add_option("--rank-limit", flags.rank_limit, "k for rankk (default n)"), "rank_limit");
  field(app.add_option("--sign", flags.sign, "required verdict: pos, nonneg, neg, nonpos"), "sign");
  field(app.add_option("--starts", flags.starts, "multistarts for rank-restricted minimization"), "starts");
  field(app.add_option("--max-iterations", flags.max_iterations, "alternation cap per start"), "max_iterations");
  field(app.add_option("--n", flags.n, "flow: dimension of a random initial tensor in C(0)"), "n");
  field(app.add_option("--k0", k0, "flow: initial R_{11-bar 11-bar} when n = 1"), "k0");
  field(app.add_option("--t-max", t_max, "flow: final time (default epsilon)"), "t_max");
  field(app.add_option("--dt", dt, "flow: RK4 step (default 1e-3 / (1 + |R0|))"), "dt");
  field(app.add_option("--e1", e1, "flow: override E1; epsilon becomes 1/E1"), "e1");
  field(app.add_option("--seed", seed, "seed (default: CQBLAB_SEED or 0)"), "seed");
  field(app.add_option("--tolerance", tolerance, "verdict tolerance (suite: tightens every criterion)"), "tolerance");
  field(app.add_option("--json", flags.json_out, "write the JSON report here instead of stdout"), "json_out");
  field(app.add_option("--csv", flags.csv_out, "flow: write the trajectory CSV here"), "csv_out");
  field(app.add_option("--tensor-out", flags.tensor_out, "curvature: write the tensor dump here"), "tensor_out");

  for (const char* name : {"space", "curvature", "check", "flow", "suite"}) app.add_subcommand(name);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ExitCode::Error);
  }

  flags.command = app.get_subcommands().front()->get_name();
  auto count = [&](const char* name) { return app.get_option(name)->count() > 0; };
  if (count("--k0")) flags.k0 = k0;
  if (count("--t-max")) flags.t_max = t_max;
  if (count("--dt")) flags.dt = dt;
  if (count("--e1")) flags.e1 = e1;
  if (count("--seed")) flags.seed = seed;
  if (count("--tolerance")) flags.tolerance = tolerance;

  JobConfig config = flags;
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw std::runtime_error("cannot open config " + config_path);
      JobConfig base = config_from_json(nlohmann::json::parse(in));
      std::vector<std::string> set{"command"};
      for (const auto& [opt, name] : fields)
        if (opt->count() > 0) set.push_back(name);
      config = merge_config(std::move(base), flags, set);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::Error);
  }

  const JobResult res = run(config);
  if (res.code == ExitCode::Error) {
    std::cerr << "error: " << res.error << '\n';
    return static_cast<int>(ExitCode::Error);
  }

  if (config.command == "suite") std::cout << res.report.at("table").get<std::string>();
  const std::string text = dump_report(res.report) + "\n";
  if (!config.json_out.empty()) {
    if (!write_file(config.json_out, text)) {
      std::cerr << "error: cannot write " << config.json_out << '\n';
      return static_cast<int>(ExitCode::Error);
    }
  } else if (config.command != "suite") {
    std::cout << text;
  }
  if (!config.csv_out.empty() && !res.csv.empty() && !write_file(config.csv_out, res.csv)) {
    std::cerr << "error: cannot write " << config.csv_out << '\n';
    return static_cast<int>(ExitCode::Error);
  }
  if (res.code == ExitCode::VerdictFailed && config.command == "check")
    std::cerr << "requested sign '" << config.sign << "' does not hold: verdict " << res.report.at("verdict").get<std::string>()
              << '\n';
  return static_cast<int>(res.code);
}
