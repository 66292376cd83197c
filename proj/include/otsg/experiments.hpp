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

#ifndef OTSG_EXPERIMENTS_HPP
#define OTSG_EXPERIMENTS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "otsg/diagnostics.hpp"
#include "otsg/io.hpp"
#include "otsg/measures.hpp"
#include "otsg/models.hpp"
#include "otsg/objectives.hpp"
#include "otsg/oracles.hpp"
#include "otsg/ot1d.hpp"
#include "otsg/parallel.hpp"
#include "otsg/rng.hpp"

namespace otsg {

/// Tabular result of a Monte Carlo experiment, with byte-deterministic
/// serializers (fixed row order, fixed number formatting).
struct ExperimentReport {
  std::vector<std::pair<std::string, std::string>> config;  // value = raw JSON
  std::vector<std::string> trial_columns;
  std::vector<std::vector<double>> trial_rows;
  std::vector<std::pair<std::string, double>> summary;
  std::vector<std::string> curve_columns;
  std::vector<std::vector<double>> curve_rows;

  bool has_curves() const { return !curve_columns.empty(); }

  std::string trials_csv() const { return csv(trial_columns, trial_rows); }
  std::string curves_csv() const { return csv(curve_columns, curve_rows); }

  std::string summary_json() const {
    JsonWriter w;
    w.begin_object();
    w.key("config").begin_object();
    for (const auto& [k, v] : config) w.key(k).value_raw(v);
    w.end_object();
    w.key("summary").begin_object();
    for (const auto& [k, v] : summary) w.key(k).value(v);
    w.end_object();
    w.end_object();
    return w.str() + "\n";
  }

 private:
  static std::string csv(const std::vector<std::string>& cols,
                         const std::vector<std::vector<double>>& rows) {
    std::string out;
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (c) out += ',';
      out += cols[c];
    }
    out += '\n';
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) out += ',';
        out += fmt_double(row[c]);
      }
      out += '\n';
    }
    return out;
  }
};

/// (1/n) sum_i sgn(x_(i) - y_(i)) over rank-paired order statistics,
/// accumulated in integers: the exact right derivative at 0 of
/// theta -> (1/n) sum |x_(i) + relu(theta) - y_(i)|.
inline double rank_paired_sign_mean(const EmpiricalMeasure1D& xs,
                                    const EmpiricalMeasure1D& ys) {
  if (xs.size() != ys.size())
    throw ShapeError("rank_paired_sign_mean: sizes differ");
  std::int64_t acc = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double d = xs.order_stat(i) - ys.order_stat(i);
    acc += d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
  }
  return static_cast<double>(acc) / static_cast<double>(xs.size());
}

/// One-sample Kolmogorov-Smirnov statistic against Unif(a, b).
inline double ks_statistic_uniform(std::vector<double> sample, double a,
                                   double b) {
  if (sample.empty())
    throw std::invalid_argument("ks_statistic_uniform: empty sample");
  std::sort(sample.begin(), sample.end());
  const double t = static_cast<double>(sample.size());
  double ks = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double cdf =
        std::min(1.0, std::max(0.0, (sample[i] - a) / (b - a)));
    const double up = (static_cast<double>(i) + 1.0) / t - cdf;
    const double down = cdf - static_cast<double>(i) / t;
    ks = std::max(ks, std::max(up, down));
  }
  return ks;
}

// ---------------------------------------------------------------------------
// ReLU-shift experiment: empirical W1 between x + relu(theta) and y with
// x, y ~ Unif(0,1). The left derivative at 0 vanishes for every sample;
// the right derivative follows the arcsine-type uniform limit law.

struct ReluExperimentConfig {
  std::size_t n = 10000;
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
};

struct ReluTrialStats {
  double left = 0.0;
  double right = 0.0;
};

inline ReluTrialStats relu_trial(const EmpiricalMeasure1D& xs,
                                 const EmpiricalMeasure1D& ys) {
  return ReluTrialStats{0.0, rank_paired_sign_mean(xs, ys)};
}

inline ExperimentReport run_relu(const ReluExperimentConfig& cfg,
                                 unsigned threads = 1) {
  if (cfg.n < 2 || cfg.trials < 1)
    throw std::invalid_argument("run_relu: need n >= 2 and trials >= 1");
  const SourceDistribution unif01 = SourceDistribution::uniform(0.0, 1.0);

  std::vector<ReluTrialStats> stats(cfg.trials);
  parallel_for(cfg.trials, threads, [&](std::size_t t) {
    const auto xs = sample_1d(unif01, cfg.n, substream_key(cfg.seed, 2 * t));
    const auto ys =
        sample_1d(unif01, cfg.n, substream_key(cfg.seed, 2 * t + 1));
    stats[t] = relu_trial(xs, ys);
  });

  ExperimentReport report;
  report.config = {{"experiment", "\"relu\""},
                   {"n", std::to_string(cfg.n)},
                   {"trials", std::to_string(cfg.trials)},
                   {"seed", std::to_string(cfg.seed)}};
  report.trial_columns = {"trial", "left_derivative", "right_derivative"};
  std::vector<double> rights(cfg.trials);
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    rights[t] = stats[t].right;
    report.trial_rows.push_back(
        {static_cast<double>(t), stats[t].left, stats[t].right});
  }
  const double ks = ks_statistic_uniform(rights, -1.0, 1.0);
  report.summary = {
      {"ks_statistic_vs_unif", ks},
      {"mean_right", pairwise_sum(rights) / static_cast<double>(cfg.trials)},
      {"min_right", *std::min_element(rights.begin(), rights.end())},
      {"max_right", *std::max_element(rights.begin(), rights.end())}};
  return report;
}

// ---------------------------------------------------------------------------
// Spurious-criticality experiment: mixtures with a far atom and the
// chi-interpolated shift model. One-sided derivatives at 0 are computed
// analytically (differencing across the kink would drown in the 1/sqrt(n)
// scale being measured).

struct SpuriousExperimentConfig {
  double w = 0.75;
  double m_location = 6.0;
  std::size_t n = 10000;
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  std::vector<double> theta_grid;  // optional objective curves
};

struct SpuriousTrialStats {
  double left = 0.0;
  double right = 0.0;
  bool zero_in_hull = false;
};

/// Exact one-sided derivatives at theta = 0.
///  - left: only the atoms move (at unit rate), so the derivative is the
///    atom fraction of the x sample.
///  - right: every x moves at unit rate, so the derivative is the
///    rank-paired sign mean.
inline SpuriousTrialStats spurious_trial(const EmpiricalMeasure1D& xs,
                                         const EmpiricalMeasure1D& ys) {
  SpuriousTrialStats s;
  std::int64_t atoms = 0;
  for (double x : xs.values())
    if (x > 1.5) ++atoms;
  s.left = static_cast<double>(atoms) / static_cast<double>(xs.size());
  s.right = rank_paired_sign_mean(xs, ys);
  const double lo = std::min(s.left, s.right);
  const double hi = std::max(s.left, s.right);
  s.zero_in_hull = lo <= 0.0 && 0.0 <= hi;
  return s;
}

/// Objective value T_n(theta) for the spurious construction, through the
/// sorted matching on model outputs. Valid because the model is monotone
/// in x over the swept range; this is asserted at runtime.
inline double spurious_objective_value(const ChiInterpolatedModel& model,
                                       double theta,
                                       const EmpiricalMeasure1D& xs,
                                       const EmpiricalMeasure1D& ys) {
  const Vec theta_v{theta};
  std::vector<double> out(xs.size());
  double prev = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    out[i] = model.eval1(theta_v, xs.order_stat(i));
    if (out[i] < prev)
      throw std::logic_error(
          "spurious_objective_value: model is not monotone on this range");
    prev = out[i];
  }
  return w_equal(EmpiricalMeasure1D(std::move(out)), ys, 1.0);
}

inline ExperimentReport run_spurious(const SpuriousExperimentConfig& cfg,
                                     unsigned threads = 1) {
  if (!(cfg.w > 0.5 && cfg.w < 1.0))
    throw std::invalid_argument("run_spurious: w in (1/2, 1)");
  if (!(cfg.m_location > 4.0))
    throw std::invalid_argument("run_spurious: M > 4");
  if (cfg.n < 2 || cfg.trials < 1)
    throw std::invalid_argument("run_spurious: need n >= 2 and trials >= 1");

  const SourceDistribution mu = SourceDistribution::mixture(
      {{cfg.w, SourceDistribution::uniform(0.0, 1.0)},
       {1.0 - cfg.w, SourceDistribution::dirac(cfg.m_location)}});
  const SourceDistribution nu = SourceDistribution::mixture(
      {{cfg.w, SourceDistribution::uniform(0.0, 1.0)},
       {1.0 - cfg.w, SourceDistribution::dirac(cfg.m_location - 2.0)}});
  const ChiInterpolatedModel model(cfg.m_location);

  std::vector<SpuriousTrialStats> stats(cfg.trials);
  std::vector<std::vector<double>> curves(cfg.trials);
  parallel_for(cfg.trials, threads, [&](std::size_t t) {
    const auto xs = sample_1d(mu, cfg.n, substream_key(cfg.seed, 2 * t));
    const auto ys = sample_1d(nu, cfg.n, substream_key(cfg.seed, 2 * t + 1));
    stats[t] = spurious_trial(xs, ys);
    if (!cfg.theta_grid.empty()) {
      curves[t].reserve(cfg.theta_grid.size());
      for (double theta : cfg.theta_grid)
        curves[t].push_back(spurious_objective_value(model, theta, xs, ys));
    }
  });

  ExperimentReport report;
  report.config = {{"experiment", "\"spurious\""},
                   {"w", fmt_double(cfg.w)},
                   {"M", fmt_double(cfg.m_location)},
                   {"n", std::to_string(cfg.n)},
                   {"trials", std::to_string(cfg.trials)},
                   {"seed", std::to_string(cfg.seed)}};
  report.trial_columns = {"trial", "left_derivative", "right_derivative",
                          "zero_in_hull"};
  std::vector<double> lefts(cfg.trials), rights(cfg.trials);
  double hull_hits = 0.0;
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    lefts[t] = stats[t].left;
    rights[t] = stats[t].right;
    hull_hits += stats[t].zero_in_hull ? 1.0 : 0.0;
    report.trial_rows.push_back({static_cast<double>(t), stats[t].left,
                                 stats[t].right,
                                 stats[t].zero_in_hull ? 1.0 : 0.0});
  }
  const double trials = static_cast<double>(cfg.trials);
  const double freq = hull_hits / trials;
  report.summary = {
      {"freq_zero_in_hull", freq},
      {"freq_half_width", 1.96 * std::sqrt(freq * (1.0 - freq) / trials)},
      {"limit_probability", 1.0 - 1.0 / (2.0 * cfg.w)},
      {"mean_left", pairwise_sum(lefts) / trials},
      {"mean_right", pairwise_sum(rights) / trials},
      {"min_right", *std::min_element(rights.begin(), rights.end())},
      {"max_right", *std::max_element(rights.begin(), rights.end())}};
  if (!cfg.theta_grid.empty()) {
    report.curve_columns = {"trial", "theta", "value"};
    for (std::size_t t = 0; t < cfg.trials; ++t)
      for (std::size_t gi = 0; gi < cfg.theta_grid.size(); ++gi)
        report.curve_rows.push_back(
            {static_cast<double>(t), cfg.theta_grid[gi], curves[t][gi]});
  }
  return report;
}

// ---------------------------------------------------------------------------
// Graphical-convergence sweep: per (n, seed), the graph excess of the
// empirical oracle against the population subdifferential.

struct SweepConfig {
  enum class Case { kTranslateQuadratic, kFairnessLinear };
  Case sweep_case = Case::kTranslateQuadratic;
  std::vector<std::size_t> ns;
  std::vector<std::uint64_t> seeds;
  std::vector<double> grid;  // scalar theta grid
  double pad = 0.0;
  // Reference run standing in for the population gradient in the
  // fairness case.
  std::size_t reference_n = 1000000;
  std::uint64_t reference_seed = 0x5eed;
};

/// Empirical fairness objective for the linear score s(theta, x) =
/// theta * x with two sample groups.
inline Objective fairness_linear_empirical(EmpiricalMeasure1D xs0,
                                           EmpiricalMeasure1D xs1) {
  auto score = std::make_shared<AffineModel>(1, 1, false);
  auto points0 = std::make_shared<std::vector<Vec>>();
  auto points1 = std::make_shared<std::vector<Vec>>();
  for (double x : xs0.values()) points0->push_back(Vec{x});
  for (double x : xs1.values()) points1->push_back(Vec{x});
  Objective obj;
  obj.name = "fairness_linear_empirical";
  obj.dim = 1;
  obj.value = [=](const Vec& theta) {
    return fr_value(*score, theta, *points0, *points1);
  };
  obj.oracle = [=](const Vec& theta) {
    return fairness_oracle(*score, theta, *points0, *points1);
  };
  return obj;
}

/// High-n reference gradient for the fairness_linear case. The score is
/// linear, so rank pairing is invariant in theta and the reference
/// gradient is theta times a constant computed once from the sorted
/// reference samples.
inline PopulationGrad fairness_linear_reference(std::size_t reference_n,
                                                std::uint64_t reference_seed) {
  const auto x0 = sample_1d(SourceDistribution::uniform(0.0, 1.0), reference_n,
                            substream_key(reference_seed, 0));
  const auto x1 = sample_1d(SourceDistribution::uniform(0.5, 1.5), reference_n,
                            substream_key(reference_seed, 1));
  std::vector<double> sq(reference_n);
  for (std::size_t i = 0; i < reference_n; ++i) {
    const double d = x0.order_stat(i) - x1.order_stat(i);
    sq[i] = d * d;
  }
  const double c = pairwise_sum(sq) / static_cast<double>(reference_n);
  return [c](const Vec& theta) -> std::vector<Vec> {
    return {Vec{theta.at(0) * c}};
  };
}

inline ExperimentReport run_convergence_sweep(const SweepConfig& cfg,
                                              unsigned threads = 1) {
  if (cfg.ns.empty() || cfg.seeds.empty() || cfg.grid.empty())
    throw std::invalid_argument("sweep: ns, seeds and grid must be non-empty");

  PopulationGrad population;
  if (cfg.sweep_case == SweepConfig::Case::kTranslateQuadratic) {
    population = population_grad(PopulationCase::translate_quadratic());
  } else {
    population =
        fairness_linear_reference(cfg.reference_n, cfg.reference_seed);
  }
  const auto grid = scalar_grid(cfg.grid);

  const std::size_t runs = cfg.ns.size() * cfg.seeds.size();
  std::vector<double> excesses(runs);
  parallel_for(runs, threads, [&](std::size_t r) {
    const std::size_t n = cfg.ns[r / cfg.seeds.size()];
    const std::uint64_t seed = cfg.seeds[r % cfg.seeds.size()];
    Objective obj;
    if (cfg.sweep_case == SweepConfig::Case::kTranslateQuadratic) {
      auto xs = sample_1d(SourceDistribution::uniform(0.0, 1.0), n,
                          substream_key(seed, 0));
      auto ys = sample_1d(SourceDistribution::uniform(0.0, 1.0), n,
                          substream_key(seed, 1));
      obj = translate_quadratic_empirical(std::move(xs), std::move(ys));
    } else {
      auto xs0 = sample_1d(SourceDistribution::uniform(0.0, 1.0), n,
                           substream_key(seed, 0));
      auto xs1 = sample_1d(SourceDistribution::uniform(0.5, 1.5), n,
                           substream_key(seed, 1));
      obj = fairness_linear_empirical(std::move(xs0), std::move(xs1));
    }
    excesses[r] = graph_excess(obj, population, grid, cfg.pad, 1);
  });

  ExperimentReport report;
  report.config = {
      {"experiment", "\"sweep\""},
      {"case", cfg.sweep_case == SweepConfig::Case::kTranslateQuadratic
                   ? "\"translate_quadratic\""
                   : "\"fairness_linear\""},
      {"grid_points", std::to_string(cfg.grid.size())},
      {"seeds", std::to_string(cfg.seeds.size())}};
  if (cfg.sweep_case == SweepConfig::Case::kFairnessLinear) {
    report.config.emplace_back("reference_n", std::to_string(cfg.reference_n));
    report.config.emplace_back("reference_seed",
                               std::to_string(cfg.reference_seed));
  }
  report.trial_columns = {"n", "seed", "graph_excess"};
  for (std::size_t r = 0; r < runs; ++r) {
    const std::size_t n = cfg.ns[r / cfg.seeds.size()];
    const std::uint64_t seed = cfg.seeds[r % cfg.seeds.size()];
    report.trial_rows.push_back({static_cast<double>(n),
                                 static_cast<double>(seed), excesses[r]});
  }
  for (std::size_t ni = 0; ni < cfg.ns.size(); ++ni) {
    std::vector<double> per_n(
        excesses.begin() + static_cast<std::ptrdiff_t>(ni * cfg.seeds.size()),
        excesses.begin() +
            static_cast<std::ptrdiff_t>((ni + 1) * cfg.seeds.size()));
    std::sort(per_n.begin(), per_n.end());
    const std::size_t s = per_n.size();
    const double median = s % 2 == 1
                              ? per_n[s / 2]
                              : 0.5 * (per_n[s / 2 - 1] + per_n[s / 2]);
    report.summary.emplace_back(
        "median_excess_n" + std::to_string(cfg.ns[ni]), median);
  }
  return report;
}

}  // namespace otsg

#endif  // OTSG_EXPERIMENTS_HPP
