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

#include "otsg/models.hpp"

#include "gtest/gtest.h"
#include "test_util.hpp"

namespace {
using namespace otsg;
using testutil::central_diff_gradient;

TEST(Translation, EvalAndJacobian) {
  TranslationModel m;
  EXPECT_DOUBLE_EQ(m.eval1({0.3}, 0.5), 0.8);
  const Mat j = m.jac_theta({0.3}, {0.5});
  ASSERT_EQ(j.rows, 1u);
  ASSERT_EQ(j.cols, 1u);
  EXPECT_DOUBLE_EQ(j(0, 0), 1.0);
}

TEST(ReluShift, EvalJacobianAndKink) {
  ReluShiftModel m;
  EXPECT_DOUBLE_EQ(m.eval1({-1.0}, 0.5), 0.5);  // theta <= 0 leaves x alone
  EXPECT_DOUBLE_EQ(m.eval1({2.0}, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(m.jac_theta({2.0}, {0.0})(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(m.jac_theta({-2.0}, {0.0})(0, 0), 0.0);
  EXPECT_THROW(m.jac_theta({0.0}, {0.5}), KinkError);
  EXPECT_TRUE(m.kink_at({0.0}, {0.5}));
}

TEST(ChiInterpolated, RampAndEval) {
  ChiInterpolatedModel m(6.0);
  EXPECT_DOUBLE_EQ(m.chi(-0.5), 1.0);
  EXPECT_DOUBLE_EQ(m.chi(1.5), 1.0);
  EXPECT_DOUBLE_EQ(m.chi(5.0), 0.0);
  EXPECT_DOUBLE_EQ(m.chi(6.0), 0.0);
  EXPECT_DOUBLE_EQ(m.chi(0.5 * (1.5 + 5.0)), 0.5);  // midpoint of the ramp

  EXPECT_DOUBLE_EQ(m.eval1({0.1}, 6.0), 6.1);   // atom moves linearly
  EXPECT_DOUBLE_EQ(m.eval1({-0.3}, 0.5), 0.5);  // continuous block, theta<0
  EXPECT_DOUBLE_EQ(m.eval1({0.3}, 0.5), 0.8);
}

TEST(ChiInterpolated, JacobianAndKinks) {
  ChiInterpolatedModel m(6.0);
  EXPECT_DOUBLE_EQ(m.jac_theta({2.0}, {6.0})(0, 0), 1.0);  // chi = 0 branch
  EXPECT_DOUBLE_EQ(m.jac_theta({2.0}, {0.5})(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(m.jac_theta({-2.0}, {0.5})(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(m.jac_theta({-2.0}, {6.0})(0, 0), 1.0);
  EXPECT_THROW(m.jac_theta({0.0}, {0.5}), KinkError);
  EXPECT_NO_THROW(m.jac_theta({0.0}, {6.0}));  // linear in theta at the atom
}

TEST(Affine, EvalAndJacobian) {
  // theta packs A (2x2 row-major) then b.
  AffineModel m(2, 2, true);
  ASSERT_EQ(m.param_dim(), 6u);
  const Vec theta{1.0, 2.0, 3.0, 4.0, 0.5, -0.5};
  const Vec x{1.0, -1.0};
  const Vec out = m.eval(theta, x);
  EXPECT_DOUBLE_EQ(out[0], 1.0 - 2.0 + 0.5);
  EXPECT_DOUBLE_EQ(out[1], 3.0 - 4.0 - 0.5);
}

TEST(Models, ShapeErrors) {
  TranslationModel m(2);
  EXPECT_THROW(m.eval({1.0}, {1.0, 2.0}), ShapeError);
  EXPECT_THROW(m.eval({1.0, 2.0}, {1.0}), ShapeError);
}

TEST(Models, FiniteDifferenceAgreement) {
  // Jacobians agree with central differences at 50 random smooth points
  // per builtin.
  struct Case {
    std::unique_ptr<ParamModel> model;
    double x_lo, x_hi;
  };
  std::vector<Case> cases;
  cases.push_back({std::make_unique<TranslationModel>(1), -2.0, 2.0});
  cases.push_back({std::make_unique<AffineModel>(2, 2, true), -2.0, 2.0});
  cases.push_back({std::make_unique<ReluShiftModel>(), -2.0, 2.0});
  cases.push_back({std::make_unique<ChiInterpolatedModel>(6.0), -0.5, 7.0});

  CounterRng rng(99);
  for (const auto& c : cases) {
    const ParamModel& m = *c.model;
    int checked = 0;
    while (checked < 50) {
      const Vec theta = testutil::random_vec(rng, m.param_dim(), -1.5, 1.5);
      const Vec x = testutil::random_vec(rng, m.input_dim(), c.x_lo, c.x_hi);
      if (m.kink_at(theta, x)) continue;
      // Keep finite differences inside the smooth piece for the
      // relu-type models (their only theta kink is at 0).
      bool near_kink = false;
      for (double t : theta) near_kink = near_kink || std::fabs(t) < 1e-4;
      if (near_kink) continue;
      const Mat jac = m.jac_theta(theta, x);
      for (std::size_t r = 0; r < m.output_dim(); ++r) {
        const Vec fd = central_diff_gradient(
            [&](const Vec& th) { return m.eval(th, x)[r]; }, theta);
        EXPECT_TRUE(testutil::close_rel(jac.row(r), fd, 1e-4))
            << "model output row " << r;
      }
      ++checked;
    }
  }
}

TEST(ModelParser, Syntax) {
  EXPECT_EQ(parse_model("translate")->param_dim(), 1u);
  EXPECT_EQ(parse_model("translate(3)")->param_dim(), 3u);
  EXPECT_EQ(parse_model("relu-shift")->param_dim(), 1u);
  EXPECT_EQ(parse_model("chi(M=6)")->param_dim(), 1u);
  EXPECT_EQ(parse_model("affine(2,2)")->param_dim(), 6u);
  EXPECT_EQ(parse_model("linear(2)")->param_dim(), 2u);
  EXPECT_THROW(parse_model("perceptron"), ParseError);
  EXPECT_THROW(parse_model("chi(M=six)"), ParseError);
}

}  // namespace
