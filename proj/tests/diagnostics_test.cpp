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

#include "otsg/diagnostics.hpp"

#include <cmath>

#include "gtest/gtest.h"
#include "otsg/experiments.hpp"
#include "otsg/measures.hpp"
#include "test_util.hpp"

namespace {
using namespace otsg;

std::vector<Vec> random_cloud(CounterRng& rng, std::size_t count,
                              std::size_t dim) {
  std::vector<Vec> out(count);
  for (auto& p : out) p = testutil::random_vec(rng, dim, -3.0, 3.0);
  return out;
}

TEST(ExcessDistance, SpecExamples) {
  const std::vector<Vec> a{{0.0, 0.0}};
  const std::vector<Vec> b{{3.0, 4.0}};
  EXPECT_DOUBLE_EQ(excess_distance(a, a), 0.0);
  EXPECT_DOUBLE_EQ(excess_distance(a, b), 5.0);

  // One-sided by definition.
  const std::vector<Vec> wide{{0.0}, {10.0}};
  const std::vector<Vec> narrow{{0.0}};
  EXPECT_DOUBLE_EQ(excess_distance(wide, narrow), 10.0);
  EXPECT_DOUBLE_EQ(excess_distance(narrow, wide), 0.0);

  EXPECT_THROW(excess_distance(a, {}), std::domain_error);
}

TEST(ExcessDistance, ChainingBound) {
  // excess(a, c) <= excess(a, b) + hausdorff(b, c) on random triples.
  CounterRng rng(9);
  for (int rep = 0; rep < 50; ++rep) {
    const auto a = random_cloud(rng, 5, 2);
    const auto b = random_cloud(rng, 4, 2);
    const auto c = random_cloud(rng, 6, 2);
    EXPECT_LE(excess_distance(a, c),
              excess_distance(a, b) + hausdorff_distance(b, c) + 1e-12);
  }
}

TEST(OneSided, SpecExamples) {
  const auto abs_hull =
      one_sided([](double t) { return std::fabs(t); }, 0.0, 1e-6);
  EXPECT_DOUBLE_EQ(abs_hull.left, -1.0);
  EXPECT_DOUBLE_EQ(abs_hull.right, 1.0);

  const auto relu_hull =
      one_sided([](double t) { return std::max(t, 0.0); }, 0.0, 1e-6);
  EXPECT_DOUBLE_EQ(relu_hull.left, 0.0);
  EXPECT_DOUBLE_EQ(relu_hull.right, 1.0);
  EXPECT_DOUBLE_EQ(relu_hull.lo(), 0.0);
  EXPECT_DOUBLE_EQ(relu_hull.hi(), 1.0);

  // Smooth function: the two sides agree to FD accuracy.
  const auto smooth =
      one_sided([](double t) { return std::sin(t); }, 0.4, 1e-7);
  EXPECT_NEAR(smooth.left, smooth.right, 1e-4 * (1.0 + std::fabs(smooth.left)));
}

TEST(OneSided, EmpiricalReluLeftDerivativeIsExactlyZero) {
  // T_n(theta) = (1/n) sum |x_(i) + relu(theta) - y_(i)|. The left
  // difference quotient at 0 is exactly 0 because relu vanishes there.
  const auto xs = sample_1d(SourceDistribution::uniform(0.0, 1.0), 200, 5);
  const auto ys = sample_1d(SourceDistribution::uniform(0.0, 1.0), 200, 6);
  const ReluShiftModel model;
  auto objective = [&](double theta) {
    std::vector<double> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
      out[i] = model.eval1(Vec{theta}, xs.values()[i]);
    return w_equal(EmpiricalMeasure1D(std::move(out)), ys, 1.0);
  };
  const auto hull = one_sided(objective, 0.0, 1e-7);
  EXPECT_EQ(hull.left, 0.0);
  EXPECT_NEAR(hull.right, rank_paired_sign_mean(xs, ys), 1e-6);
}

TEST(GraphExcess, SelfIsZero) {
  const auto obj = population_objective(PopulationCase::translate_quadratic());
  const PopulationGrad pop = [&](const Vec& theta) -> std::vector<Vec> {
    return {obj.oracle(theta)};
  };
  const auto grid = scalar_grid(linspace(-1.0, 1.0, 41));
  EXPECT_DOUBLE_EQ(graph_excess(obj, pop, grid), 0.0);
}

TEST(GraphExcess, TranslateQuadraticLargeSample) {
  const auto xs =
      sample_1d(SourceDistribution::uniform(0.0, 1.0), 10000, 1001);
  const auto ys =
      sample_1d(SourceDistribution::uniform(0.0, 1.0), 10000, 1002);
  const auto obj = translate_quadratic_empirical(xs, ys);
  const auto pop = population_grad(PopulationCase::translate_quadratic());
  const auto grid = scalar_grid(linspace(-1.0, 1.0, 201));
  EXPECT_LE(graph_excess(obj, pop, grid), 0.05);
}

TEST(GraphExcess, ShrinksWithSampleSize) {
  // Larger samples give smaller excess for most seed pairs.
  const auto pop = population_grad(PopulationCase::translate_quadratic());
  const auto grid = scalar_grid(linspace(-1.0, 1.0, 51));
  int wins = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    auto run_at = [&](std::size_t n, std::uint64_t salt) {
      auto xs = sample_1d(SourceDistribution::uniform(0.0, 1.0), n,
                          substream_key(s, salt));
      auto ys = sample_1d(SourceDistribution::uniform(0.0, 1.0), n,
                          substream_key(s, salt + 1));
      return graph_excess(
          translate_quadratic_empirical(std::move(xs), std::move(ys)), pop,
          grid);
    };
    if (run_at(10000, 2) <= run_at(100, 12)) ++wins;
  }
  EXPECT_GE(wins, 18);
}

TEST(GraphExcess, KinkPointUsesHullEndpoints) {
  // relu population objective sampled on a grid containing exactly 0:
  // the kink contributes its (0, 0) and (0, 1) hull points, which lie in
  // the population graph, so the excess stays 0.
  const auto obj = population_objective(PopulationCase::relu_unif());
  const auto pop = population_grad(PopulationCase::relu_unif());
  const auto ts = linspace(-1.0, 1.0, 21);
  ASSERT_EQ(ts[10], 0.0);  // symmetric linspace hits the kink exactly
  const auto result = graph_excess_detail(obj, pop, scalar_grid(ts));
  EXPECT_LE(result.excess, 1e-9);
  EXPECT_TRUE(result.warnings.empty());
  // Two hull entries recorded at theta = 0.
  int at_zero = 0;
  for (const auto& [theta, g] : result.empirical.entries)
    if (theta[0] == 0.0) ++at_zero;
  EXPECT_EQ(at_zero, 2);
}

TEST(GraphExcess, MultidimensionalKinkIsSkippedWithWarning) {
  Objective obj;
  obj.name = "kinky2d";
  obj.dim = 2;
  obj.value = [](const Vec& t) { return 0.5 * (t[0] * t[0] + t[1] * t[1]); };
  obj.oracle = [](const Vec& t) -> Subgradient {
    if (t[0] == 0.0 && t[1] == 0.0) throw KinkError("origin");
    return t;
  };
  const PopulationGrad pop = [](const Vec& theta) -> std::vector<Vec> {
    return {theta};
  };
  const std::vector<Vec> grid{{-1.0, -1.0}, {0.0, 0.0}, {1.0, 1.0}};
  const auto result = graph_excess_detail(obj, pop, grid);
  ASSERT_EQ(result.warnings.size(), 1u);
  EXPECT_EQ(result.empirical.entries.size(), 2u);
  EXPECT_LE(result.excess, 1e-12);
}

TEST(GraphExcess, PadExtendsPopulationRange) {
  // An oracle shifted in theta needs the pad to reach the population
  // graph at the range edge.
  Objective shifted;
  shifted.name = "shifted";
  shifted.dim = 1;
  shifted.value = [](const Vec& t) { return 0.5 * t[0] * t[0]; };
  shifted.oracle = [](const Vec& t) { return Vec{t[0] + 0.2}; };
  const auto pop = population_grad(PopulationCase::translate_quadratic());
  const auto grid = scalar_grid(linspace(-1.0, 1.0, 41));
  const double no_pad = graph_excess(shifted, pop, grid, 0.0);
  const double with_pad = graph_excess(shifted, pop, grid, 0.3);
  EXPECT_LE(with_pad, no_pad + 1e-12);
}

TEST(CriticalSet, QuadraticHasOnlyTheOrigin) {
  const auto obj = population_objective(PopulationCase::translate_quadratic());
  const auto set = FeasibleSet::box({-1.0}, {1.0});
  const auto grid = scalar_grid(linspace(-1.0, 1.0, 201));  // step 0.01
  const auto crit = critical_set(obj, set, grid, 0.02);
  ASSERT_FALSE(crit.empty());
  for (const auto& theta : crit) EXPECT_LE(std::fabs(theta[0]), 0.021);
}

TEST(CriticalSet, SteepPopulationObjectiveHasNoInteriorCriticalPoint) {
  // relu(theta) + 0.25 |2 + theta| on a grid interior to a large box:
  // subgradients stay in [0.25, 1.25], so nothing is near-critical.
  Objective obj;
  obj.name = "steep";
  obj.dim = 1;
  obj.value = [](const Vec& t) {
    return std::max(t[0], 0.0) + 0.25 * std::fabs(2.0 + t[0]);
  };
  obj.oracle = [](const Vec& t) -> Subgradient {
    if (t[0] == 0.0) throw KinkError("kink at 0");
    return Vec{(t[0] > 0.0 ? 1.0 : 0.0) + 0.25};
  };
  const auto set = FeasibleSet::box({-5.0}, {5.0});
  const auto grid = scalar_grid(linspace(-1.0, 1.0, 201));
  EXPECT_TRUE(critical_set(obj, set, grid, 0.02).empty());
}

TEST(CriticalSet, MonotoneObjectiveIsCriticalAtLeftBoundary) {
  Objective obj;
  obj.name = "monotone";
  obj.dim = 1;
  obj.value = [](const Vec& t) { return t[0]; };
  obj.oracle = [](const Vec&) { return Vec{1.0}; };
  const auto set = FeasibleSet::box({-1.0}, {1.0});
  const auto grid = scalar_grid(linspace(-1.0, 1.0, 21));
  const auto crit = critical_set(obj, set, grid, 0.02);
  ASSERT_EQ(crit.size(), 1u);
  EXPECT_DOUBLE_EQ(crit[0][0], -1.0);
}

TEST(CriticalSet, SpuriousPopulationOnlyAtLeftBoundary) {
  // The population spurious objective on Theta = [-1, 1]: interior
  // subgradients are bounded away from zero and the kink hull at 0 is
  // [0.25, 1], so only the left boundary is critical.
  const auto obj = population_objective(PopulationCase::spurious(0.75));
  const auto set = FeasibleSet::box({-1.0}, {1.0});
  const auto grid = scalar_grid(linspace(-1.0, 1.0, 201));
  const auto crit = critical_set(obj, set, grid, 0.02);
  ASSERT_EQ(crit.size(), 1u);
  EXPECT_DOUBLE_EQ(crit[0][0], -1.0);
}

TEST(CriticalSet, InfeasibleGridRejected) {
  const auto obj = population_objective(PopulationCase::translate_quadratic());
  const auto set = FeasibleSet::box({-0.5}, {0.5});
  const auto grid = scalar_grid(linspace(-1.0, 1.0, 5));
  EXPECT_THROW(critical_set(obj, set, grid, 0.02), std::invalid_argument);
}

TEST(Linspace, ExactEndpointsAndMidpoint) {
  const auto ts = linspace(-1.0, 1.0, 201);
  EXPECT_EQ(ts.front(), -1.0);
  EXPECT_EQ(ts.back(), 1.0);
  EXPECT_EQ(ts[100], 0.0);
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) EXPECT_LT(ts[i], ts[i + 1]);
}

}  // namespace
