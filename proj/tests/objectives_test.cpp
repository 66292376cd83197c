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

#include "otsg/objectives.hpp"

#include <algorithm>

#include "gtest/gtest.h"
#include "otsg/measures.hpp"
#include "test_util.hpp"

namespace {
using namespace otsg;
using testutil::random_points;
using testutil::random_vec;

TEST(SrValue, SpecExamples) {
  const AffineModel loss(1, 1, false);  // l = theta * x
  // n = 1: value is w(1) * l(theta, x1).
  EXPECT_DOUBLE_EQ(
      sr_value(SpectralWeight::extremile(1.0), loss, {2.0}, {{1.5}}), 3.0);
  // w == 1: mean loss.
  const std::vector<Vec> xs{{1.0}, {2.0}, {3.0}};
  EXPECT_NEAR(sr_value(SpectralWeight::extremile(1.0), loss, {1.0}, xs), 2.0,
              1e-12);
  // Superquantile 0.75 on losses [1,2,3,4]: only the top loss is
  // weighted, with weight 4.
  const std::vector<Vec> four{{1.0}, {2.0}, {3.0}, {4.0}};
  EXPECT_NEAR(
      sr_value(SpectralWeight::superquantile(0.75), loss, {1.0}, four), 4.0,
      1e-12);
}

TEST(SrValue, SortInvarianceSanity) {
  const AffineModel loss(1, 1, true);
  CounterRng rng(1);
  const Vec theta = random_vec(rng, 2, -1.0, 1.0);
  auto xs = random_points(rng, 11, 1, -2.0, 2.0);
  const double a = sr_value(SpectralWeight::extremile(1.0), loss, theta, xs);
  double mean = 0.0;
  for (const auto& x : xs) mean += loss.eval(theta, x)[0];
  mean /= static_cast<double>(xs.size());
  EXPECT_NEAR(a, mean, 1e-12 * (1.0 + std::fabs(mean)));
}

TEST(FrValue, SpecExamples) {
  const AffineModel score(1, 1, false);  // s = theta * x
  CounterRng rng(2);
  const auto xs = random_points(rng, 6, 1, -1.0, 1.0);
  EXPECT_DOUBLE_EQ(fr_value(score, {0.8}, xs, xs), 0.0);

  // Singletons: (a - b)^2 / 2 with scores a = theta x0, b = theta x1.
  EXPECT_DOUBLE_EQ(fr_value(score, {1.0}, {{3.0}}, {{1.0}}), 2.0);

  // scores0 = [0, 2], scores1 = [1] -> 1/2 ((0-1)^2 1/2 + (2-1)^2 1/2).
  EXPECT_DOUBLE_EQ(fr_value(score, {1.0}, {{0.0}, {2.0}}, {{1.0}}), 0.5);
}

TEST(FrValue, NonNegativeAndZeroIffQuantilesMatch) {
  const AffineModel score(1, 1, false);
  CounterRng rng(3);
  for (int rep = 0; rep < 40; ++rep) {
    const std::size_t n0 = 1 + static_cast<std::size_t>(rng.next_unit() * 10);
    const std::size_t n1 = 1 + static_cast<std::size_t>(rng.next_unit() * 10);
    const auto xs0 = random_points(rng, n0, 1, -2.0, 2.0);
    const auto xs1 = random_points(rng, n1, 1, -2.0, 2.0);
    const Vec theta{rng.next_uniform(0.5, 1.5)};
    const double v = fr_value(score, theta, xs0, xs1);
    EXPECT_GE(v, 0.0);
    if (v == 0.0) {
      // Quantile functions coincide on the merged grid.
      std::vector<double> s0, s1;
      for (const auto& x : xs0) s0.push_back(score.eval(theta, x)[0]);
      for (const auto& x : xs1) s1.push_back(score.eval(theta, x)[0]);
      const EmpiricalMeasure1D m0(s0), m1(s1);
      for (int i = 0; i <= 20; ++i) {
        const double s = static_cast<double>(i) / 20.0;
        EXPECT_DOUBLE_EQ(m0.quantile(s), m1.quantile(s));
      }
    }
  }
  // A permutation of the same values is indistinguishable.
  EXPECT_DOUBLE_EQ(
      fr_value(score, {1.0}, {{1.0}, {2.0}}, {{2.0}, {1.0}}), 0.0);
}

TEST(SwValue, SpecExamples) {
  // Generator output multiset equals the target multiset: value 0.
  const TranslationModel gen(2);
  const std::vector<Vec> xs{{0.0, 1.0}, {1.0, 0.0}};
  const std::vector<Vec> ys{{1.0, 0.0}, {0.0, 1.0}};
  const Vec zero2{0.0, 0.0};
  std::vector<Vec> phis{Vec{1.0, 0.0}, Vec{0.0, 1.0}};
  EXPECT_DOUBLE_EQ(sw_value(gen, zero2, xs, ys, phis), 0.0);

  // n = 1, k = 1: half the squared projected residual.
  const std::vector<Vec> x1{{0.5, 0.5}};
  const std::vector<Vec> y1{{1.5, 2.5}};
  const Vec theta{0.25, 0.0};
  const double proj = 0.5 + 0.25 - 1.5;
  EXPECT_DOUBLE_EQ(sw_value(gen, theta, x1, y1, {Vec{1.0, 0.0}}),
                   0.5 * proj * proj);
}

TEST(SwValue, CompositionalIdentityWithOt1d) {
  // SW equals the average over directions of half the quadratic
  // 1D transport cost between the projected samples.
  const AffineModel gen(2, 2, true);
  CounterRng rng(4);
  const Vec theta = random_vec(rng, 6, -1.0, 1.0);
  const auto xs = random_points(rng, 3, 2, -2.0, 2.0);
  const auto ys = random_points(rng, 3, 2, -2.0, 2.0);
  const auto sphere = SourceDistribution::unit_sphere(2);
  std::vector<Vec> phis;
  for (std::size_t j = 0; j < 2; ++j) {
    CounterRng prng(55, j);
    phis.push_back(sphere.drawv(prng));
  }
  const double sw = sw_value(gen, theta, xs, ys, phis);
  double expected = 0.0;
  for (const auto& phi : phis) {
    std::vector<double> pf, py;
    for (const auto& x : xs) pf.push_back(dot(phi, gen.eval(theta, x)));
    for (const auto& y : ys) py.push_back(dot(phi, y));
    expected += 0.5 * w_equal(EmpiricalMeasure1D(pf), EmpiricalMeasure1D(py),
                              2.0);
  }
  expected /= static_cast<double>(phis.size());
  EXPECT_NEAR(sw, expected, 1e-12 * (1.0 + expected));
}

TEST(SwValue, PermutationInvariance) {
  const AffineModel gen(2, 2, true);
  CounterRng rng(5);
  const Vec theta = random_vec(rng, 6, -1.0, 1.0);
  auto xs = random_points(rng, 8, 2, -2.0, 2.0);
  auto ys = random_points(rng, 8, 2, -2.0, 2.0);
  const auto sphere = SourceDistribution::unit_sphere(2);
  std::vector<Vec> phis;
  for (std::size_t j = 0; j < 3; ++j) {
    CounterRng prng(66, j);
    phis.push_back(sphere.drawv(prng));
  }
  const double before = sw_value(gen, theta, xs, ys, phis);
  std::reverse(xs.begin(), xs.end());
  std::rotate(ys.begin(), ys.begin() + 3, ys.end());
  const double after = sw_value(gen, theta, xs, ys, phis);
  EXPECT_DOUBLE_EQ(before, after);
}

TEST(ErmValue, SpecExamples) {
  const AffineModel loss(1, 1, false);
  const AffineModel score(1, 1, false);
  const std::vector<Vec> xs{{1.0}, {3.0}};
  const std::vector<Vec> xs0{{0.0}, {2.0}};
  const std::vector<Vec> xs1{{1.0}};
  const Vec theta{1.0};

  // lambda = 0: mean loss.
  EXPECT_DOUBLE_EQ(erm_value(loss, score, 0.0, theta, xs, xs0, xs1), 2.0);
  // Additivity.
  const double l = erm_value(loss, score, 0.0, theta, xs, xs0, xs1);
  const double fr = fr_value(score, theta, xs0, xs1);
  EXPECT_DOUBLE_EQ(erm_value(loss, score, 2.5, theta, xs, xs0, xs1),
                   l + 2.5 * fr);
  EXPECT_THROW(erm_value(loss, score, -1.0, theta, xs, xs0, xs1),
               std::invalid_argument);
}

TEST(TransportValue, ModesAndExamples) {
  const TranslationModel f(1);
  const AffineModel identity_like(1, 1, false);  // g(theta,y)=theta*y; use scale below

  // cost == 0 via a generic zero cost.
  TransportCost zero;
  zero.generic = [](const Vec&, const Vec&, const Vec&) { return 0.0; };
  EXPECT_DOUBLE_EQ(transport_value(zero, {0.0}, {{1.0}, {2.0}},
                                   {{0.0}, {5.0}}, PlanMode::kBruteForce),
                   0.0);

  // Half-quadratic cost, translation vs identity, u=[0], y=[1], theta=0.
  class Identity final : public ParamModel {
   public:
    std::size_t param_dim() const override { return 1; }
    std::size_t input_dim() const override { return 1; }
    std::size_t output_dim() const override { return 1; }

   protected:
    Vec eval_impl(const Vec&, const Vec& x) const override { return x; }
    Mat jac_impl(const Vec&, const Vec&) const override { return Mat(1, 1); }
  };
  static const Identity g;
  const auto cost = TransportCost::power(f, g, 2.0, 0.5);
  EXPECT_DOUBLE_EQ(
      transport_value(cost, {0.0}, {{0.0}}, {{1.0}}, PlanMode::kSorted1D),
      0.5);
  EXPECT_DOUBLE_EQ(
      transport_value(cost, {0.0}, {{0.0}}, {{1.0}}, PlanMode::kBruteForce),
      0.5);
}

TEST(TransportValue, SortedMatchesBruteForce) {
  const TranslationModel f(1);
  const TranslationModel g(1);
  CounterRng rng(6);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng.next_unit() * 7);
    const auto xs = random_points(rng, n, 1, -3.0, 3.0);
    const auto ys = random_points(rng, n, 1, -3.0, 3.0);
    const Vec theta{rng.next_uniform(-1.0, 1.0)};
    for (double q : {1.0, 2.0}) {
      const auto cost = TransportCost::power(f, g, q);
      const double sorted =
          transport_value(cost, theta, xs, ys, PlanMode::kSorted1D);
      const double brute =
          transport_value(cost, theta, xs, ys, PlanMode::kBruteForce);
      EXPECT_NEAR(sorted, brute, 1e-12 * (1.0 + std::fabs(brute)));
    }
  }
}

TEST(TransportValue, CapabilityErrors) {
  const TranslationModel f(1);
  TransportCost generic_only;
  generic_only.generic = [](const Vec&, const Vec& x, const Vec& y) {
    return std::fabs(x[0] - y[0]);
  };
  EXPECT_THROW(transport_value(generic_only, {0.0}, {{0.0}}, {{1.0}},
                               PlanMode::kSorted1D),
               CapabilityError);
  std::vector<Vec> nine(9, Vec{0.0});
  EXPECT_THROW(transport_value(generic_only, {0.0}, nine, nine,
                               PlanMode::kBruteForce),
               CapabilityError);
}

TEST(PopulationValue, NamedCases) {
  EXPECT_DOUBLE_EQ(population_value(PopulationCase::relu_unif(), -1.0), 0.0);
  EXPECT_DOUBLE_EQ(population_value(PopulationCase::relu_unif(), 0.3), 0.3);
  // spurious(3/4) at 0: (1/4) * 2 = 1/2.
  EXPECT_DOUBLE_EQ(population_value(PopulationCase::spurious(0.75), 0.0), 0.5);
  EXPECT_DOUBLE_EQ(
      population_value(PopulationCase::translate_quadratic(), 0.4), 0.08);
  EXPECT_THROW(PopulationCase::spurious(0.4), std::invalid_argument);
}

TEST(PopulationObjective, OraclesAndKinks) {
  const auto relu = population_objective(PopulationCase::relu_unif());
  EXPECT_DOUBLE_EQ(relu.oracle({-0.5})[0], 0.0);
  EXPECT_DOUBLE_EQ(relu.oracle({0.5})[0], 1.0);
  EXPECT_THROW(relu.oracle({0.0}), KinkError);

  const auto spurious = population_objective(PopulationCase::spurious(0.75));
  EXPECT_DOUBLE_EQ(spurious.oracle({-0.5})[0], 0.25);
  EXPECT_DOUBLE_EQ(spurious.oracle({0.5})[0], 1.0);
  EXPECT_THROW(spurious.oracle({0.0}), KinkError);

  const auto grad = population_grad(PopulationCase::spurious(0.75));
  const auto hull = grad({0.0});
  ASSERT_EQ(hull.size(), 2u);
  EXPECT_DOUBLE_EQ(hull[0][0], 0.25);
  EXPECT_DOUBLE_EQ(hull[1][0], 1.0);
}

TEST(TranslateQuadraticEmpirical, ValueAndOracle) {
  // Small instance: value is the half-quadratic sorted cost; the oracle
  // agrees with the generic plan-weighted gradient.
  const auto xs = sample_1d(SourceDistribution::uniform(0.0, 1.0), 50, 123);
  const auto ys = sample_1d(SourceDistribution::uniform(0.0, 1.0), 50, 321);
  const auto obj = translate_quadratic_empirical(xs, ys);
  const Vec theta{0.3};

  std::vector<double> shifted(xs.values());
  for (double& v : shifted) v += theta[0];
  const EmpiricalMeasure1D u(shifted);
  EXPECT_DOUBLE_EQ(obj.value(theta), 0.5 * w_equal(u, ys, 2.0));

  std::vector<Vec> xpts, ypts;
  for (double x : xs.values()) xpts.push_back(Vec{x});
  for (double y : ys.values()) ypts.push_back(Vec{y});
  const CostGrad grad = [](const Vec& th, const Vec& x, const Vec& y) {
    return Vec{x[0] + th[0] - y[0]};
  };
  const auto generic =
      plan_weighted_grad(grad, monotone_plan(u, ys), theta, xpts, ypts);
  EXPECT_NEAR(obj.oracle(theta)[0], generic[0], 1e-12);

  // The oracle is theta + mean(x) - mean(y) for the translation model.
  double mx = 0.0, my = 0.0;
  for (double x : xs.values()) mx += x;
  for (double y : ys.values()) my += y;
  EXPECT_NEAR(obj.oracle(theta)[0], theta[0] + (mx - my) / 50.0, 1e-12);
}

}  // namespace
