#include "cqblab/job.hpp"

#include "cqblab/acceptance.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cqblab {

namespace {

const char* kVersion = "0.1.0";

template <class T>
nlohmann::json opt_json(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

template <class T>
void read_opt(const nlohmann::json& j, const char* key, std::optional<T>& out) {
  if (!j.contains(key)) return;
  if (j.at(key).is_null())
    out.reset();
  else
    out = j.at(key).get<T>();
}

std::int64_t parse_int(const std::string& s, const std::string& what) {
  std::int64_t v = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (s.empty() || ec != std::errc() || ptr != last) throw std::invalid_argument("malformed " + what + ": '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (ch != ' ') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

struct Source {
  CurvatureTensor tensor;
  nlohmann::json provenance;
  std::optional<CSpace> space;
};

AssemblyPath parse_path(const std::string& s) {
  if (s == "auto") return AssemblyPath::Auto;
  if (s == "general") return AssemblyPath::General;
  if (s == "typeA" || s == "typea") return AssemblyPath::TypeA;
  throw std::invalid_argument("unknown assembly path '" + s + "' (auto, general, typeA)");
}

std::vector<std::string> rational_strings(const std::vector<Rational>& v) {
  std::vector<std::string> out;
  for (const auto& q : v) out.push_back(to_string(q));
  return out;
}

CSpace space_from(const JobConfig& c) {
  if (c.family.empty()) throw std::invalid_argument("no space given: pass --family, --rank and --phi");
  const AlgebraPtr alg = build_algebra(parse_family(c.family), c.rank);
  return build_cspace(alg, parse_phi(c.phi));
}

InvariantMetric metric_from(const JobConfig& c, const CSpace& space) {
  const auto coeffs = parse_metric(c.metric);
  return coeffs ? invariant_metric(space, *coeffs) : kahler_einstein_coefficients(space);
}

CurvatureTensor read_tensor(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open tensor file " + path);
  return tensor_from_json(nlohmann::json::parse(in));
}

Source load_source(const JobConfig& c) {
  Source src;
  src.provenance["tensor_file"] = nullptr;
  if (!c.tensor_in.empty()) {
    src.tensor = read_tensor(c.tensor_in);
    src.provenance["tensor_file"] = c.tensor_in;
    src.provenance["space"] = nullptr;
    src.provenance["metric"] = nullptr;
    return src;
  }
  CSpace space = space_from(c);
  const InvariantMetric metric = metric_from(c, space);
  src.tensor = assemble(space, metric, parse_path(c.path));
  src.provenance["space"] = space.descriptor();
  src.provenance["metric"] = {{"input", c.metric}, {"c", rational_strings(metric.c)}, {"g", rational_strings(metric.g)}};
  src.provenance["assembly_path"] = c.path;
  src.space = std::move(space);
  return src;
}

nlohmann::json base_provenance(const JobConfig& c) {
  nlohmann::json p;
  p["command"] = c.command;
  p["seed"] = effective_seed(c);
  p["tolerance"] = c.tolerance.value_or(kDefaultTolerance);
  p["version"] = kVersion;
  return p;
}

PositivityReport q_report(const CurvatureTensor& r, double tol) {
  const QuadraticFormMatrix q = q_operator(r);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(q.entries);
  PositivityReport rep;
  rep.what = "q";
  rep.rank_limit = r.n();
  rep.min_value = es.eigenvalues()(0);
  rep.max_value = es.eigenvalues()(q.dim - 1);
  rep.normalization = q.scale();
  rep.tolerance = tol;
  rep.method = Method::Eigen;
  rep.verdict = classify(rep.min_value / rep.normalization, rep.max_value / rep.normalization, tol);
  const Eigen::VectorXcd v = es.eigenvectors().col(0);
  LinearMap s = LinearMap::Zero(r.n(), r.n());
  for (int k = 0; k < q.dim; ++k) {
    const auto [a, c] = q.basis_labels[k];
    if (a == c)
      s(a, a) = v(k);
    else
      s(a, c) = s(c, a) = v(k) / std::sqrt(2.0);
  }
  rep.witness = s;
  rep.lambda1 = rep.min_value;
  rep.lambda_n = rep.max_value;
  if (auto mu = einstein_constant(r)) rep.mu = *mu;
  return rep;
}

JobResult run_space(const JobConfig& c) {
  const CSpace space = space_from(c);
  const InvariantMetric metric = metric_from(c, space);
  JobResult res;
  nlohmann::json& j = res.report;
  j["provenance"] = base_provenance(c);
  j["space"] = space.descriptor();
  j["n"] = space.n;
  j["b2"] = space.b2;
  nlohmann::json frame = nlohmann::json::array();
  for (std::size_t a = 0; a < space.delta_phi.size(); ++a)
    frame.push_back({{"root", space.delta_phi[a].label()}, {"coeffs", space.delta_phi[a].coeffs}, {"g", to_string(metric.g[a])}});
  j["frame"] = frame;
  j["metric"] = {{"input", c.metric}, {"c", rational_strings(metric.c)}};
  j["ke_c"] = rational_strings(kahler_einstein_coefficients(space).c);
  return res;
}

JobResult run_curvature(const JobConfig& c) {
  const Source src = load_source(c);
  const CurvatureTensor& r = src.tensor;
  JobResult res;
  nlohmann::json& j = res.report;
  j["provenance"] = base_provenance(c);
  j["provenance"].update(src.provenance);
  j["tensor"] = to_json(r);
  const HermitianTensor2 ric = ricci(r);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(ric, Eigen::EigenvaluesOnly);
  j["ricci_eigenvalues"] = std::vector<double>(es.eigenvalues().data(), es.eigenvalues().data() + r.n());
  j["scalar"] = scalar(r);
  j["einstein_constant"] = opt_json(einstein_constant(r));
  if (!c.tensor_out.empty()) {
    std::ofstream out(c.tensor_out);
    if (!out) throw std::runtime_error("cannot write " + c.tensor_out);
    out << dump_report(to_json(r)) << '\n';
  }
  return res;
}

JobResult run_check(const JobConfig& c) {
  const Source src = load_source(c);
  const CurvatureTensor& r = src.tensor;
  const double tol = c.tolerance.value_or(kDefaultTolerance);
  MinimizerOptions mo;
  mo.starts = c.starts;
  mo.max_iterations = c.max_iterations;
  mo.seed = effective_seed(c);
  mo.tolerance = tol;

  PositivityReport rep;
  if (c.what == "cqb" || c.what == "dcqb") {
    rep = form_check(r, parse_form_kind(c.what), tol);
  } else if (c.what == "q") {
    rep = q_report(r, tol);
  } else if (c.what == "rank1") {
    rep = rank1_check(r, parse_form_kind(c.mode), mo);
  } else if (c.what == "rankk") {
    const int k = c.rank_limit > 0 ? c.rank_limit : r.n();
    rep = rank_k_check(r, k, parse_form_kind(c.mode), mo);
  } else {
    throw std::invalid_argument("unknown --what '" + c.what + "' (cqb, dcqb, q, rank1, rankk)");
  }

  JobResult res;
  res.report = to_json(rep);
  res.report["provenance"] = base_provenance(c);
  res.report["provenance"].update(src.provenance);
  res.report["provenance"]["method"] = to_string(rep.method);
  if (c.what == "rank1" || c.what == "rankk") {
    res.report["provenance"]["starts"] = c.starts;
    res.report["provenance"]["max_iterations"] = c.max_iterations;
  }
  res.report["sign"] = c.sign.empty() ? nlohmann::json(nullptr) : nlohmann::json(c.sign);
  if (!c.sign.empty()) {
    const bool ok = sign_holds(c.sign, rep.verdict);
    res.report["sign_holds"] = ok;
    if (!ok) res.code = ExitCode::VerdictFailed;
  }
  return res;
}

JobResult run_flow(const JobConfig& c) {
  CurvatureTensor r0;
  nlohmann::json prov = base_provenance(c);
  if (!c.tensor_in.empty() || !c.family.empty()) {
    const Source src = load_source(c);
    r0 = src.tensor;
    prov.update(src.provenance);
  } else if (c.n == 1 && c.k0) {
    r0 = CurvatureTensor(1);
    r0.set(0, 0, 0, 0, Complex(*c.k0, 0.0));
    prov["initial"] = "single component k0";
  } else if (c.n >= 1) {
    if (c.k0) throw std::invalid_argument("--k0 applies to --n 1 only");
    r0 = random_tensor_in_c0(c.n, effective_seed(c));
    prov["initial"] = "random tensor in C(0)";
  } else {
    throw std::invalid_argument("flow needs a space, --tensor, or --n");
  }

  FlowConstants k = FlowConstants::defaults(r0);
  if (c.e1) {
    k.e1 = *c.e1;
    k.epsilon = k.e1 > 0 ? 1.0 / k.e1 : 1.0;
  }
  const double t_max = c.t_max.value_or(k.epsilon);
  const double dt = c.dt.value_or(default_step(r0));
  IntegrateOptions io;
  io.membership.seed = effective_seed(c);
  io.membership.tolerance = c.tolerance.value_or(kDefaultTolerance);
  const Trajectory tr = integrate(r0, k, t_max, dt, io);

  JobResult res;
  nlohmann::json& j = res.report;
  prov["dt"] = dt;
  prov["t_max"] = t_max;
  prov["method32"] = to_string(Method::Alternating);
  j["provenance"] = prov;
  j["constants"] = {{"D1", k.d1}, {"E1", k.e1}, {"D2", k.d2}, {"E2", k.e2}, {"epsilon", k.epsilon}};
  j["n"] = r0.n();
  j["samples"] = tr.states.size();
  j["truncated"] = tr.truncated;
  j["notice"] = tr.notice;
  j["max_trace_residue"] = tr.max_trace_residue;
  const FlowState& last = tr.states.back();
  j["t_final"] = last.t;
  j["final_norm"] = last.norm;
  j["final_min_ricci_eig"] = last.min_ricci_eigenvalue;
  j["final_tensor"] = to_json(last.r);
  if (r0.n() == 1) j["final_k"] = last.r(0, 0, 0, 0).real();
  int failures = 0;
  nlohmann::json first_failure = nullptr;
  for (const auto& st : tr.states)
    if (!st.membership.all()) {
      if (failures == 0) first_failure = st.t;
      ++failures;
    }
  j["membership_failures"] = failures;
  j["first_membership_failure_t"] = first_failure;

  std::ostringstream csv;
  write_csv(csv, tr);
  res.csv = csv.str();
  return res;
}

JobResult run_suite(const JobConfig& c) {
  AcceptanceOptions opt;
  opt.tolerance = c.tolerance;
  opt.seed = effective_seed(c);
  const auto results = run_acceptance(opt);
  JobResult res;
  res.report["provenance"] = base_provenance(c);
  res.report["criteria"] = to_json(results);
  res.report["all_pass"] = all_pass(results);
  std::ostringstream table;
  print_table(table, results);
  res.report["table"] = table.str();
  if (!all_pass(results)) res.code = ExitCode::VerdictFailed;
  return res;
}

}  // namespace

std::vector<int> parse_phi(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("malformed phi list: empty");
  std::vector<int> out;
  for (const auto& tok : split(s, ',')) out.push_back(static_cast<int>(parse_int(tok, "phi list entry")));
  return out;
}

Rational parse_rational(const std::string& s) {
  const auto parts = split(s, '/');
  if (parts.size() == 1) return Rational(parse_int(parts[0], "rational"));
  if (parts.size() != 2) throw std::invalid_argument("malformed rational: '" + s + "'");
  const auto den = parse_int(parts[1], "rational denominator");
  if (den == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
  return Rational(parse_int(parts[0], "rational numerator"), den);
}

std::optional<std::vector<Rational>> parse_metric(const std::string& s) {
  if (s == "ke") return std::nullopt;
  if (s.rfind("c=", 0) != 0) throw std::invalid_argument("metric must be 'ke' or 'c=v1,v2,...', got '" + s + "'");
  std::vector<Rational> out;
  for (const auto& tok : split(s.substr(2), ',')) out.push_back(parse_rational(tok));
  return out;
}

std::uint64_t effective_seed(const JobConfig& c) {
  if (c.seed) return *c.seed;
  if (const char* env = std::getenv("CQBLAB_SEED")) {
    const auto v = parse_int(env, "CQBLAB_SEED");
    if (v < 0) throw std::invalid_argument("CQBLAB_SEED must be nonnegative");
    return static_cast<std::uint64_t>(v);
  }
  return 0;
}

bool sign_holds(const std::string& sign, Verdict v) {
  if (sign == "pos") return v == Verdict::Positive;
  if (sign == "nonneg") return v == Verdict::Positive || v == Verdict::NonnegativeWithKernel;
  if (sign == "neg") return v == Verdict::Negative;
  if (sign == "nonpos") return v == Verdict::Negative || v == Verdict::NonpositiveWithKernel;
  throw std::invalid_argument("unknown sign '" + sign + "' (pos, nonneg, neg, nonpos)");
}

nlohmann::json to_json(const JobConfig& c) {
  return {{"command", c.command},   {"family", c.family},         {"rank", c.rank},
          {"phi", c.phi},           {"metric", c.metric},         {"path", c.path},
          {"tensor_in", c.tensor_in}, {"what", c.what},           {"mode", c.mode},
          {"rank_limit", c.rank_limit}, {"sign", c.sign},         {"starts", c.starts},
          {"max_iterations", c.max_iterations}, {"n", c.n},       {"k0", opt_json(c.k0)},
          {"t_max", opt_json(c.t_max)}, {"dt", opt_json(c.dt)},   {"e1", opt_json(c.e1)},
          {"seed", opt_json(c.seed)}, {"tolerance", opt_json(c.tolerance)}, {"json_out", c.json_out},
          {"csv_out", c.csv_out},   {"tensor_out", c.tensor_out}};
}

JobConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  const nlohmann::json known = to_json(JobConfig{});
  for (const auto& [key, _] : j.items())
    if (!known.contains(key)) throw std::invalid_argument("unknown config key '" + key + "'");
  JobConfig c;
  auto str = [&](const char* key, std::string& out) {
    if (j.contains(key)) out = j.at(key).get<std::string>();
  };
  auto integer = [&](const char* key, int& out) {
    if (j.contains(key)) out = j.at(key).get<int>();
  };
  str("command", c.command);
  str("family", c.family);
  integer("rank", c.rank);
  if (j.contains("phi")) {
    // Accept either "2,4" or [2, 4].
    const auto& p = j.at("phi");
    if (p.is_array()) {
      std::string s;
      for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p[i].get<int>());
      c.phi = s;
    } else {
      c.phi = p.get<std::string>();
    }
  }
  str("metric", c.metric);
  str("path", c.path);
  str("tensor_in", c.tensor_in);
  str("what", c.what);
  str("mode", c.mode);
  integer("rank_limit", c.rank_limit);
  str("sign", c.sign);
  integer("starts", c.starts);
  integer("max_iterations", c.max_iterations);
  integer("n", c.n);
  read_opt(j, "k0", c.k0);
  read_opt(j, "t_max", c.t_max);
  read_opt(j, "dt", c.dt);
  read_opt(j, "e1", c.e1);
  read_opt(j, "seed", c.seed);
  read_opt(j, "tolerance", c.tolerance);
  str("json_out", c.json_out);
  str("csv_out", c.csv_out);
  str("tensor_out", c.tensor_out);
  return c;
}

JobConfig merge_config(JobConfig base, const JobConfig& overrides, const std::vector<std::string>& set) {
  nlohmann::json b = to_json(base);
  const nlohmann::json o = to_json(overrides);
  for (const auto& key : set) {
    if (!o.contains(key)) throw std::invalid_argument("unknown config field '" + key + "'");
    b[key] = o.at(key);
  }
  return config_from_json(b);
}

std::string dump_report(const nlohmann::json& j) { return j.dump(2); }

JobResult run(const JobConfig& config) {
  try {
    if (config.command == "space") return run_space(config);
    if (config.command == "curvature") return run_curvature(config);
    if (config.command == "check") return run_check(config);
    if (config.command == "flow") return run_flow(config);
    if (config.command == "suite") return run_suite(config);
    throw std::invalid_argument("unknown command '" + config.command + "'");
  } catch (const std::exception& e) {
    JobResult res;
    res.code = ExitCode::Error;
    res.error = e.what();
    return res;
  }
}

}  // namespace cqblab
