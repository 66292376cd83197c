// Copyright 2026 The otsg Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// otsg - exact 1D optimal-transport objectives, subgradient oracles,
// projected subgradient optimization and convergence diagnostics.
//
// Subcommands: ot1d, eval, optimize, diag graph-excess, diag crit,
// experiment relu|spurious|sweep. Every randomized run takes a --seed
// (falling back to $OTSG_SEED, then 0) and echoes it in the summary, so
// outputs are reproducible byte for byte.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "otsg/otsg.hpp"

namespace {

using namespace otsg;

// ---------------------------------------------------------------------------
// Shared option plumbing.

std::uint64_t env_default_seed() {
  if (const char* env = std::getenv("OTSG_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0') return static_cast<std::uint64_t>(v);
    throw ParseError("OTSG_SEED is not an integer");
  }
  return 0;
}

struct DataSpec {
  std::string csv_path;
  std::string column;  // name or 0-based index; empty = single column
  std::string dist;
  std::size_t n = 0;
  std::size_t dims = 1;

  void add_options(CLI::App* cmd, const std::string& prefix,
                   const std::string& what) {
    cmd->add_option("--" + prefix, csv_path, "CSV file with " + what);
    cmd->add_option("--" + prefix + "-column", column,
                    "column name or 0-based index in the CSV");
    cmd->add_option("--" + prefix + "-dist", dist,
                    "distribution spec, e.g. unif(0,1) or "
                    "mix(0.75*unif(0,1)+0.25*dirac(6))");
    cmd->add_option("--" + prefix + "-n", n,
                    "sample count when drawing from a distribution");
    cmd->add_option("--" + prefix + "-dims", dims,
                    "point dimension when loading a multi-column CSV");
  }
};

std::size_t resolve_column(const CsvTable& table, const std::string& spec) {
  if (spec.empty()) return 0;
  char* end = nullptr;
  const unsigned long idx = std::strtoul(spec.c_str(), &end, 10);
  if (end != spec.c_str() && *end == '\0') return idx;
  return table.column_index(spec);
}

EmpiricalMeasure1D load_samples_1d(const std::string& path,
                                   const std::string& column) {
  const CsvTable table = read_csv(path);
  if (table.rows.empty()) throw DataError("csv: no data rows in " + path);
  const std::size_t col = resolve_column(table, column);
  if (col >= table.rows.front().size())
    throw DataError("csv: column out of range in " + path);
  std::vector<double> values;
  values.reserve(table.rows.size());
  for (const auto& row : table.rows) values.push_back(row[col]);
  return EmpiricalMeasure1D(std::move(values));
}

EmpiricalMeasureD load_samples_nd(const std::string& path, std::size_t dims) {
  const CsvTable table = read_csv(path);
  if (table.rows.empty()) throw DataError("csv: no data rows in " + path);
  if (table.rows.front().size() < dims)
    throw DataError("csv: fewer columns than --dims in " + path);
  std::vector<Vec> points;
  points.reserve(table.rows.size());
  for (const auto& row : table.rows)
    points.emplace_back(row.begin(),
                        row.begin() + static_cast<std::ptrdiff_t>(dims));
  return EmpiricalMeasureD(std::move(points), dims);
}

EmpiricalMeasure1D materialize_1d(const DataSpec& spec, std::uint64_t seed,
                                  std::uint64_t stream) {
  if (!spec.csv_path.empty()) return load_samples_1d(spec.csv_path, spec.column);
  if (spec.dist.empty() || spec.n == 0)
    throw CLI::ValidationError(
        "data", "provide either a CSV file or --*-dist together with --*-n");
  return sample_1d(parse_distribution(spec.dist), spec.n,
                   substream_key(seed, stream));
}

EmpiricalMeasureD materialize_nd(const DataSpec& spec, std::uint64_t seed,
                                 std::uint64_t stream) {
  if (!spec.csv_path.empty()) return load_samples_nd(spec.csv_path, spec.dims);
  if (spec.dist.empty() || spec.n == 0)
    throw CLI::ValidationError(
        "data", "provide either a CSV file or --*-dist together with --*-n");
  return sample_nd(parse_distribution(spec.dist), spec.n,
                   substream_key(seed, stream));
}

std::vector<Vec> to_points(const EmpiricalMeasure1D& m) {
  std::vector<Vec> out;
  out.reserve(m.size());
  for (double v : m.values()) out.push_back(Vec{v});
  return out;
}

SpectralWeight parse_weight(const std::string& text) {
  const auto open = text.find('(');
  const auto close = text.rfind(')');
  if (open == std::string::npos || close == std::string::npos || close < open)
    throw ParseError("weight: expected kind(args), got '" + text + "'");
  const std::string kind = text.substr(0, open);
  const std::string inner = text.substr(open + 1, close - open - 1);
  if (kind == "superquantile")
    return SpectralWeight::superquantile(std::stod(inner));
  if (kind == "extremile") return SpectralWeight::extremile(std::stod(inner));
  if (kind == "table") {
    // table(0.5:1,1:2) -> steps (s_i : w_i)
    std::vector<std::pair<double, double>> steps;
    std::size_t pos = 0;
    while (pos < inner.size()) {
      std::size_t comma = inner.find(',', pos);
      if (comma == std::string::npos) comma = inner.size();
      const std::string tok = inner.substr(pos, comma - pos);
      const auto colon = tok.find(':');
      if (colon == std::string::npos)
        throw ParseError("weight table: expected s:w pairs");
      steps.emplace_back(std::stod(tok.substr(0, colon)),
                         std::stod(tok.substr(colon + 1)));
      pos = comma + 1;
    }
    return SpectralWeight::table(std::move(steps));
  }
  throw ParseError("weight: unknown kind '" + kind + "'");
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string tok = text.substr(pos, comma - pos);
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str())
      throw ParseError("expected a comma-separated number list, got '" + text +
                       "'");
    out.push_back(v);
    pos = comma + 1;
  }
  if (out.empty()) throw ParseError("empty number list");
  return out;
}

/// "lo:hi:count" -> linspace grid.
std::vector<double> parse_grid(const std::string& text) {
  const auto c1 = text.find(':');
  const auto c2 = text.find(':', c1 == std::string::npos ? 0 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw ParseError("grid: expected lo:hi:count, got '" + text + "'");
  const double lo = std::stod(text.substr(0, c1));
  const double hi = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
  const long count = std::stol(text.substr(c2 + 1));
  if (count < 2 || !(lo < hi)) throw ParseError("grid: need lo < hi, count >= 2");
  return linspace(lo, hi, static_cast<std::size_t>(count));
}

FeasibleSet parse_feasible_set(const std::string& box_spec,
                               const std::string& ball_spec, std::size_t dim) {
  if (!box_spec.empty()) {
    const auto vals = parse_double_list(box_spec);
    if (vals.size() == 2 && dim >= 1) {
      // lo,hi replicated across dimensions
      return FeasibleSet::box(Vec(dim, vals[0]), Vec(dim, vals[1]));
    }
    if (vals.size() != 2 * dim)
      throw ParseError("box: expected lo,hi or lo...,hi... of length 2*dim");
    return FeasibleSet::box(Vec(vals.begin(), vals.begin() + dim),
                            Vec(vals.begin() + dim, vals.end()));
  }
  if (!ball_spec.empty()) {
    const auto vals = parse_double_list(ball_spec);
    if (vals.size() != dim + 1)
      throw ParseError("ball: expected center...,radius");
    return FeasibleSet::ball(Vec(vals.begin(), vals.end() - 1), vals.back());
  }
  return FeasibleSet::box(Vec(dim, -1.0), Vec(dim, 1.0));
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir);
}

std::string json_number_list(const std::vector<double>& xs) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += fmt_double(xs[i]);
  }
  return out + "]";
}

// ---------------------------------------------------------------------------
// Objective assembly shared by eval and optimize.

struct ObjectiveOptions {
  std::string objective;  // sr | fr | sw | erm | transport | translate-quadratic
  std::string model = "translate";
  std::string model_g;   // second model for transport
  std::string weight = "superquantile(0.5)";
  double lambda = 1.0;
  double q = 2.0;
  std::string mode = "sorted-1d";
  std::size_t k = 10;  // sliced directions
  DataSpec x, y, x0, x1;

  void add_options(CLI::App* cmd) {
    cmd->add_option("--objective", objective,
                    "sr | fr | sw | erm | transport | translate-quadratic")
        ->required();
    cmd->add_option("--model", model,
                    "model spec: translate, relu-shift, chi(M=6), "
                    "affine(dIn,dOut), linear(d)");
    cmd->add_option("--model-g", model_g, "target-side model for transport");
    cmd->add_option("--weight", weight,
                    "spectral weight: superquantile(a), extremile(r), "
                    "table(s:w,...)");
    cmd->add_option("--lambda", lambda, "fairness penalty strength (erm)");
    cmd->add_option("--q", q, "cost exponent, q >= 1")
        ->check(CLI::Range(1.0, 1e9));
    cmd->add_option("--mode", mode, "transport mode: sorted-1d | brute-force");
    cmd->add_option("--k", k, "number of sliced directions");
    x.add_options(cmd, "x", "source samples");
    y.add_options(cmd, "y", "target samples");
    x0.add_options(cmd, "x0", "group-0 samples");
    x1.add_options(cmd, "x1", "group-1 samples");
  }
};

struct BuiltObjective {
  Objective objective;
  // Keep the ingredients alive for the lambdas inside `objective`.
  std::shared_ptr<void> keepalive;
};

BuiltObjective build_objective(const ObjectiveOptions& opt, std::uint64_t seed,
                               unsigned threads) {
  struct Parts {
    std::unique_ptr<ParamModel> model;
    std::unique_ptr<ParamModel> model_g;
    std::optional<SpectralWeight> weight;
    std::vector<Vec> xs, ys, xs0, xs1;
    std::vector<Vec> phis;
  };
  auto parts = std::make_shared<Parts>();
  BuiltObjective built;
  built.keepalive = parts;
  Objective& obj = built.objective;

  if (opt.objective == "translate-quadratic") {
    auto xs = materialize_1d(opt.x, seed, 0);
    auto ys = materialize_1d(opt.y, seed, 1);
    built.objective = translate_quadratic_empirical(std::move(xs),
                                                    std::move(ys));
    return built;
  }

  parts->model = parse_model(opt.model);
  const ParamModel& model = *parts->model;

  if (opt.objective == "sr") {
    parts->weight = parse_weight(opt.weight);
    parts->xs = to_points(materialize_1d(opt.x, seed, 0));
    obj.name = "spectral_risk";
    obj.dim = model.param_dim();
    obj.value = [parts](const Vec& theta) {
      return sr_value(*parts->weight, *parts->model, theta, parts->xs);
    };
    obj.oracle = [parts](const Vec& theta) {
      return spectral_risk_oracle(*parts->weight, *parts->model, theta,
                                  parts->xs);
    };
  } else if (opt.objective == "fr") {
    parts->xs0 = to_points(materialize_1d(opt.x0, seed, 2));
    parts->xs1 = to_points(materialize_1d(opt.x1, seed, 3));
    obj.name = "fairness";
    obj.dim = model.param_dim();
    obj.value = [parts](const Vec& theta) {
      return fr_value(*parts->model, theta, parts->xs0, parts->xs1);
    };
    obj.oracle = [parts](const Vec& theta) {
      return fairness_oracle(*parts->model, theta, parts->xs0, parts->xs1);
    };
  } else if (opt.objective == "sw") {
    const auto xs_nd = materialize_nd(opt.x, seed, 0);
    const auto ys_nd = materialize_nd(opt.y, seed, 1);
    parts->xs = xs_nd.points();
    parts->ys = ys_nd.points();
    const auto sphere = SourceDistribution::unit_sphere(model.output_dim());
    for (std::size_t j = 0; j < opt.k; ++j) {
      CounterRng rng(substream_key(seed, 1000), j);
      parts->phis.push_back(sphere.drawv(rng));
    }
    obj.name = "sliced_wasserstein";
    obj.dim = model.param_dim();
    obj.value = [parts](const Vec& theta) {
      return sw_value(*parts->model, theta, parts->xs, parts->ys, parts->phis);
    };
    obj.oracle = [parts, threads](const Vec& theta) {
      return sliced_oracle(*parts->model, theta, parts->xs, parts->ys,
                           parts->phis, threads);
    };
  } else if (opt.objective == "erm") {
    parts->model_g = parse_model(opt.model_g.empty() ? opt.model : opt.model_g);
    parts->xs = to_points(materialize_1d(opt.x, seed, 0));
    parts->xs0 = to_points(materialize_1d(opt.x0, seed, 2));
    parts->xs1 = to_points(materialize_1d(opt.x1, seed, 3));
    const double lambda = opt.lambda;
    obj.name = "regularized_erm";
    obj.dim = model.param_dim();
    obj.value = [parts, lambda](const Vec& theta) {
      return erm_value(*parts->model, *parts->model_g, lambda, theta,
                       parts->xs, parts->xs0, parts->xs1);
    };
  } else if (opt.objective == "transport") {
    parts->model_g = parse_model(opt.model_g.empty() ? opt.model : opt.model_g);
    parts->xs = to_points(materialize_1d(opt.x, seed, 0));
    parts->ys = to_points(materialize_1d(opt.y, seed, 1));
    const PlanMode mode = opt.mode == "brute-force" ? PlanMode::kBruteForce
                                                    : PlanMode::kSorted1D;
    const double q = opt.q;
    obj.name = "transport";
    obj.dim = model.param_dim();
    obj.value = [parts, mode, q](const Vec& theta) {
      const auto cost = TransportCost::power(*parts->model, *parts->model_g, q);
      return transport_value(cost, theta, parts->xs, parts->ys, mode);
    };
  } else {
    throw CLI::ValidationError("--objective",
                               "unknown objective '" + opt.objective + "'");
  }
  return built;
}

// ---------------------------------------------------------------------------
// Subcommand runners.

int run_ot1d(const std::string& u_path, const std::string& u_col,
             const std::string& v_path, const std::string& v_col, double q,
             const std::string& plan_path) {
  const auto u = load_samples_1d(u_path, u_col);
  const auto v = load_samples_1d(v_path, v_col);
  const double value = w_unequal(u, v, q);
  if (!plan_path.empty()) {
    const auto plan = monotone_plan(u, v);
    std::string csv = "i,j,mass\n";
    for (const auto& e : plan.entries)
      csv += std::to_string(e.i) + "," + std::to_string(e.j) + "," +
             fmt_double(e.mass) + "\n";
    write_text_file(plan_path, csv);
  }
  std::cout << "{\"w_q^q\":" << fmt_double(value) << "}\n";
  return 0;
}

int run_eval(const ObjectiveOptions& opt, const std::string& theta_spec,
             std::uint64_t seed, unsigned threads) {
  const auto built = build_objective(opt, seed, threads);
  const Vec theta = parse_double_list(theta_spec);
  if (theta.size() != built.objective.dim)
    throw CLI::ValidationError("--theta", "expected " +
                                              std::to_string(
                                                  built.objective.dim) +
                                              " components");
  const double value = built.objective.value(theta);
  std::cout << "{\"theta\":" << json_number_list(theta)
            << ",\"value\":" << fmt_double(value);
  if (built.objective.has_oracle())
    std::cout << ",\"grad\":" << json_number_list(built.objective.oracle(theta));
  std::cout << "}\n";
  return 0;
}

int run_optimize(const ObjectiveOptions& opt, const std::string& theta_spec,
                 const std::string& box_spec, const std::string& ball_spec,
                 const std::string& schedule_spec, std::size_t iters,
                 std::uint64_t seed, unsigned threads,
                 const std::string& out_dir) {
  const auto built = build_objective(opt, seed, threads);
  if (!built.objective.has_oracle())
    throw CLI::ValidationError("--objective",
                               "objective has no subgradient oracle");
  const Vec theta0 = parse_double_list(theta_spec);
  const auto set = parse_feasible_set(box_spec, ball_spec, theta0.size());

  StepSchedule sched = StepSchedule::inverse_sqrt(1.0);
  {
    const auto colon = schedule_spec.find(':');
    const std::string kind = schedule_spec.substr(0, colon);
    const double eta =
        colon == std::string::npos ? 1.0 : std::stod(schedule_spec.substr(colon + 1));
    if (kind == "const")
      sched = StepSchedule::constant(eta);
    else if (kind == "invsqrt")
      sched = StepSchedule::inverse_sqrt(eta);
    else
      throw CLI::ValidationError("--schedule",
                                 "expected const:eta or invsqrt:eta0");
  }

  const RunTrace trace = run(built.objective, set, sched, theta0, iters);

  std::string csv = "k";
  for (std::size_t c = 0; c < theta0.size(); ++c)
    csv += ",theta" + std::to_string(c);
  csv += ",value,residual\n";
  for (const auto& row : trace.rows) {
    csv += std::to_string(row.k);
    for (double t : row.theta) csv += "," + fmt_double(t);
    csv += "," + fmt_double(row.value) + "," + fmt_double(row.residual) + "\n";
  }

  JsonWriter w;
  w.begin_object();
  w.key("objective").value(built.objective.name);
  w.key("seed").value_raw(std::to_string(seed));
  w.key("iters").value_raw(std::to_string(iters));
  w.key("kink_retries").value_raw(std::to_string(trace.kink_retries));
  w.key("final_theta").array(trace.rows.back().theta);
  w.key("final_value").value(trace.rows.back().value);
  w.key("final_residual").value(trace.rows.back().residual);
  w.end_object();

  if (!out_dir.empty()) {
    ensure_out_dir(out_dir);
    write_text_file(out_dir + "/trace.csv", csv);
    write_text_file(out_dir + "/summary.json", w.str() + "\n");
  } else {
    std::cout << csv;
  }
  std::cout << w.str() << "\n";
  return 0;
}

int run_diag_graph_excess(const std::string& case_name, std::size_t n,
                          std::uint64_t seed, const std::string& grid_spec,
                          double pad, unsigned threads,
                          const std::string& out_dir,
                          const std::string& format) {
  const auto ts = parse_grid(grid_spec);
  PopulationGrad population;
  Objective empirical;
  if (case_name == "translate_quadratic") {
    population = population_grad(PopulationCase::translate_quadratic());
    auto xs = sample_1d(SourceDistribution::uniform(0.0, 1.0), n,
                        substream_key(seed, 0));
    auto ys = sample_1d(SourceDistribution::uniform(0.0, 1.0), n,
                        substream_key(seed, 1));
    empirical = translate_quadratic_empirical(std::move(xs), std::move(ys));
  } else if (case_name == "fairness_linear") {
    population = fairness_linear_reference(1000000, substream_key(seed, 99));
    auto xs0 = sample_1d(SourceDistribution::uniform(0.0, 1.0), n,
                         substream_key(seed, 0));
    auto xs1 = sample_1d(SourceDistribution::uniform(0.5, 1.5), n,
                         substream_key(seed, 1));
    empirical = fairness_linear_empirical(std::move(xs0), std::move(xs1));
  } else {
    throw CLI::ValidationError(
        "--case", "expected translate_quadratic or fairness_linear");
  }

  const auto result =
      graph_excess_detail(empirical, population, scalar_grid(ts), pad, threads);

  std::vector<double> grid_out, values_out;
  for (const auto& [theta, g] : result.empirical.entries) {
    grid_out.push_back(theta[0]);
    values_out.push_back(g[0]);
  }
  JsonWriter w;
  w.begin_object();
  w.key("case").value(case_name);
  w.key("n").value_raw(std::to_string(n));
  w.key("seed").value_raw(std::to_string(seed));
  w.key("grid").array(grid_out);
  w.key("values").array(values_out);
  w.key("excess").value(result.excess);
  w.end_object();

  std::string csv = "theta,grad\n";
  for (std::size_t i = 0; i < grid_out.size(); ++i)
    csv += fmt_double(grid_out[i]) + "," + fmt_double(values_out[i]) + "\n";

  std::cout << (format == "csv" ? csv : w.str() + "\n");
  if (!out_dir.empty()) {
    ensure_out_dir(out_dir);
    write_text_file(out_dir + "/graph.csv", csv);
    write_text_file(out_dir + "/summary.json", w.str() + "\n");
  }
  return 0;
}

int run_diag_crit(const std::string& case_name, const std::string& grid_spec,
                  double tol, const std::string& box_spec,
                  const std::string& ball_spec, std::size_t n,
                  std::uint64_t seed, const std::string& format) {
  const auto ts = parse_grid(grid_spec);
  Objective obj;
  if (case_name == "relu_unif") {
    obj = population_objective(PopulationCase::relu_unif());
  } else if (case_name.rfind("spurious", 0) == 0) {
    double w = 0.75, m_loc = 6.0;
    const auto open = case_name.find('(');
    if (open != std::string::npos) {
      const auto args = parse_double_list(
          case_name.substr(open + 1, case_name.rfind(')') - open - 1));
      if (!args.empty()) w = args[0];
      if (args.size() > 1) m_loc = args[1];
    }
    obj = population_objective(PopulationCase::spurious(w, m_loc));
  } else if (case_name == "translate_quadratic") {
    obj = population_objective(PopulationCase::translate_quadratic());
  } else if (case_name == "translate_quadratic_empirical") {
    auto xs = sample_1d(SourceDistribution::uniform(0.0, 1.0), n,
                        substream_key(seed, 0));
    auto ys = sample_1d(SourceDistribution::uniform(0.0, 1.0), n,
                        substream_key(seed, 1));
    obj = translate_quadratic_empirical(std::move(xs), std::move(ys));
  } else {
    throw CLI::ValidationError("--case", "unknown case '" + case_name + "'");
  }
  const auto set = parse_feasible_set(box_spec, ball_spec, 1);
  const auto crit = critical_set(obj, set, scalar_grid(ts), tol);
  std::vector<double> points;
  for (const auto& theta : crit) points.push_back(theta[0]);
  if (format == "csv") {
    std::string csv = "theta\n";
    for (double t : points) csv += fmt_double(t) + "\n";
    std::cout << csv;
    return 0;
  }
  JsonWriter w;
  w.begin_object();
  w.key("case").value(case_name);
  w.key("tol").value(tol);
  w.key("grid_lo").value(ts.front());
  w.key("grid_hi").value(ts.back());
  w.key("grid_points").value_raw(std::to_string(ts.size()));
  w.key("critical").array(points);
  w.end_object();
  std::cout << w.str() << "\n";
  return 0;
}

int run_experiment(const std::string& kind, const ExperimentReport& report,
                   const std::string& out_dir) {
  ensure_out_dir(out_dir);
  write_text_file(out_dir + "/trials.csv", report.trials_csv());
  write_text_file(out_dir + "/summary.json", report.summary_json());
  if (report.has_curves())
    write_text_file(out_dir + "/curves.csv", report.curves_csv());
  std::cout << "wrote " << out_dir << "/trials.csv, summary.json"
            << (report.has_curves() ? ", curves.csv" : "") << " (" << kind
            << ")\n";
  return 0;
}

/// `key = value` lines; '#' starts a comment. Returns flag-style tokens
/// understood by the experiment subcommands.
std::vector<std::string> config_file_args(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("config: cannot open '" + path + "'");
  std::vector<std::string> args;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.erase(s.begin());
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.pop_back();
      return s;
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ParseError("config: malformed line '" + line + "'");
    args.push_back("--" + key);
    args.push_back(value);
  }
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "otsg: one-dimensional optimal-transport objectives, subgradient "
      "oracles and convergence diagnostics"};
  app.require_subcommand(1);
  app.fallthrough();

  unsigned threads = default_threads();
  app.add_option("--threads", threads, "worker-thread cap (default: hardware)")
      ->capture_default_str();

  std::uint64_t seed = 0;
  try {
    seed = env_default_seed();
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  auto add_seed = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "RNG seed (fallback: $OTSG_SEED, then 0)");
  };

  // --- ot1d ---------------------------------------------------------------
  auto* ot1d_cmd = app.add_subcommand(
      "ot1d", "exact 1D transport cost between two CSV sample columns");
  std::string u_path, v_path, u_col, v_col, plan_path;
  double q = 2.0;
  ot1d_cmd->add_option("--u", u_path, "source sample CSV")->required();
  ot1d_cmd->add_option("--v", v_path, "target sample CSV")->required();
  ot1d_cmd->add_option("--u-column", u_col, "column name or index");
  ot1d_cmd->add_option("--v-column", v_col, "column name or index");
  ot1d_cmd->add_option("--q", q, "cost exponent, q >= 1")
      ->check(CLI::Range(1.0, 1e9));
  ot1d_cmd->add_option("--plan", plan_path,
                       "write the monotone plan as CSV (i,j,mass)");

  // --- eval ---------------------------------------------------------------
  auto* eval_cmd =
      app.add_subcommand("eval", "objective value and oracle at a point");
  ObjectiveOptions eval_opt;
  eval_opt.add_options(eval_cmd);
  std::string eval_theta = "0";
  eval_cmd->add_option("--theta", eval_theta, "comma-separated parameter");
  add_seed(eval_cmd);

  // --- optimize -----------------------------------------------------------
  auto* opt_cmd =
      app.add_subcommand("optimize", "projected subgradient method");
  ObjectiveOptions opt_opt;
  opt_opt.add_options(opt_cmd);
  std::string opt_theta = "0", opt_box, opt_ball, opt_schedule = "invsqrt:1";
  std::size_t opt_iters = 500;
  std::string opt_out;
  opt_cmd->add_option("--theta0", opt_theta, "initial point");
  opt_cmd->add_option("--box", opt_box, "box feasible set lo,hi");
  opt_cmd->add_option("--ball", opt_ball, "ball feasible set center...,radius");
  opt_cmd->add_option("--schedule", opt_schedule, "const:eta or invsqrt:eta0");
  opt_cmd->add_option("--iters", opt_iters, "iteration count");
  opt_cmd->add_option("--out", opt_out, "output directory for trace.csv");
  add_seed(opt_cmd);

  // --- diag ---------------------------------------------------------------
  auto* diag_cmd = app.add_subcommand("diag", "set-valued diagnostics");
  diag_cmd->require_subcommand(1);
  auto* ge_cmd = diag_cmd->add_subcommand(
      "graph-excess", "graphical excess of an empirical oracle");
  std::string ge_case = "translate_quadratic", ge_grid = "-1:1:201";
  std::size_t ge_n = 10000;
  double ge_pad = 0.0;
  std::string ge_out;
  ge_cmd->add_option("--case", ge_case,
                     "translate_quadratic | fairness_linear");
  ge_cmd->add_option("--n", ge_n, "empirical sample size");
  ge_cmd->add_option("--grid", ge_grid, "theta grid lo:hi:count");
  ge_cmd->add_option("--pad", ge_pad, "population range extension");
  ge_cmd->add_option("--out", ge_out, "output directory for graph.csv");
  std::string ge_format = "json";
  ge_cmd->add_option("--format", ge_format, "stdout format: json | csv")
      ->check(CLI::IsMember({"json", "csv"}));
  add_seed(ge_cmd);

  auto* crit_cmd =
      diag_cmd->add_subcommand("crit", "critical points on a grid");
  std::string crit_case = "translate_quadratic", crit_grid = "-1:1:201";
  std::string crit_box, crit_ball;
  double crit_tol = 0.02;
  std::size_t crit_n = 10000;
  crit_cmd->add_option("--case", crit_case,
                       "relu_unif | spurious(w,M) | translate_quadratic | "
                       "translate_quadratic_empirical");
  crit_cmd->add_option("--grid", crit_grid, "theta grid lo:hi:count");
  crit_cmd->add_option("--tol", crit_tol, "criticality tolerance");
  crit_cmd->add_option("--box", crit_box, "box feasible set lo,hi");
  crit_cmd->add_option("--ball", crit_ball, "ball feasible set c,r");
  crit_cmd->add_option("--n", crit_n, "sample size for empirical cases");
  std::string crit_format = "json";
  crit_cmd->add_option("--format", crit_format, "stdout format: json | csv")
      ->check(CLI::IsMember({"json", "csv"}));
  add_seed(crit_cmd);

  // --- experiment ---------------------------------------------------------
  auto* exp_cmd = app.add_subcommand("experiment", "Monte Carlo experiments");
  exp_cmd->require_subcommand(1);

  std::string exp_out = "out";
  std::string exp_config;

  auto* relu_cmd = exp_cmd->add_subcommand(
      "relu", "distribution of one-sided derivatives for the relu shift");
  ReluExperimentConfig relu_cfg;
  relu_cmd->add_option("--config", exp_config, "key = value config file");
  relu_cmd->add_option("--n", relu_cfg.n, "samples per trial");
  relu_cmd->add_option("--trials", relu_cfg.trials, "number of trials");
  relu_cmd->add_option("--out", exp_out, "output directory");
  add_seed(relu_cmd);

  auto* spur_cmd = exp_cmd->add_subcommand(
      "spurious", "spurious criticality frequency for the mixture model");
  SpuriousExperimentConfig spur_cfg;
  std::string spur_grid;
  spur_cmd->add_option("--config", exp_config, "key = value config file");
  spur_cmd->add_option("--w", spur_cfg.w, "continuous-component weight");
  spur_cmd->add_option("--M", spur_cfg.m_location, "atom location");
  spur_cmd->add_option("--n", spur_cfg.n, "samples per trial");
  spur_cmd->add_option("--trials", spur_cfg.trials, "number of trials");
  spur_cmd->add_option("--curve-grid", spur_grid,
                       "optional lo:hi:count grid for objective curves");
  spur_cmd->add_option("--out", exp_out, "output directory");
  add_seed(spur_cmd);

  auto* sweep_cmd = exp_cmd->add_subcommand(
      "sweep", "graphical-convergence sweep over sample sizes");
  std::string sweep_case = "translate_quadratic";
  std::string sweep_ns = "100,1000,10000";
  std::size_t sweep_seeds = 20;
  std::string sweep_grid = "-1:1:201";
  std::size_t sweep_ref_n = 1000000;
  sweep_cmd->add_option("--config", exp_config, "key = value config file");
  sweep_cmd->add_option("--case", sweep_case,
                        "translate_quadratic | fairness_linear");
  sweep_cmd->add_option("--ns", sweep_ns, "comma-separated sample sizes");
  sweep_cmd->add_option("--seeds", sweep_seeds, "number of seeds per size");
  sweep_cmd->add_option("--grid", sweep_grid, "theta grid lo:hi:count");
  sweep_cmd->add_option("--reference-n", sweep_ref_n,
                        "reference sample size (fairness case)");
  sweep_cmd->add_option("--out", exp_out, "output directory");
  add_seed(sweep_cmd);

  // Expand --config files into argv before the real parse.
  std::vector<std::string> args(argv + 1, argv + argc);
  for (std::size_t i = 0; i + 1 < args.size(); ++i) {
    if (args[i] == "--config") {
      std::vector<std::string> extra;
      try {
        extra = config_file_args(args[i + 1]);
      } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
      }
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                 args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      args.insert(args.begin() + static_cast<std::ptrdiff_t>(i),
                  extra.begin(), extra.end());
      break;
    }
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << app.help() << "\n";
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*ot1d_cmd)
      return run_ot1d(u_path, u_col, v_path, v_col, q, plan_path);
    if (*eval_cmd) return run_eval(eval_opt, eval_theta, seed, threads);
    if (*opt_cmd)
      return run_optimize(opt_opt, opt_theta, opt_box, opt_ball, opt_schedule,
                          opt_iters, seed, threads, opt_out);
    if (*ge_cmd)
      return run_diag_graph_excess(ge_case, ge_n, seed, ge_grid, ge_pad,
                                   threads, ge_out, ge_format);
    if (*crit_cmd)
      return run_diag_crit(crit_case, crit_grid, crit_tol, crit_box, crit_ball,
                           crit_n, seed, crit_format);
    if (*relu_cmd) {
      relu_cfg.seed = seed;
      return run_experiment("relu", run_relu(relu_cfg, threads), exp_out);
    }
    if (*spur_cmd) {
      spur_cfg.seed = seed;
      if (!spur_grid.empty()) spur_cfg.theta_grid = parse_grid(spur_grid);
      return run_experiment("spurious", run_spurious(spur_cfg, threads),
                            exp_out);
    }
    if (*sweep_cmd) {
      SweepConfig cfg;
      cfg.sweep_case = sweep_case == "fairness_linear"
                           ? SweepConfig::Case::kFairnessLinear
                           : SweepConfig::Case::kTranslateQuadratic;
      if (sweep_case != "translate_quadratic" &&
          sweep_case != "fairness_linear")
        throw CLI::ValidationError("--case", "unknown sweep case");
      for (double n : parse_double_list(sweep_ns))
        cfg.ns.push_back(static_cast<std::size_t>(n));
      for (std::size_t s = 0; s < sweep_seeds; ++s)
        cfg.seeds.push_back(substream_key(seed, s));
      cfg.grid = parse_grid(sweep_grid);
      cfg.reference_n = sweep_ref_n;
      cfg.reference_seed = substream_key(seed, 0xEEF);
      return run_experiment("sweep", run_convergence_sweep(cfg, threads),
                            exp_out);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
