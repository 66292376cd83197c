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

#ifndef OTSG_OBJECTIVES_HPP
#define OTSG_OBJECTIVES_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "otsg/errors.hpp"
#include "otsg/linalg.hpp"
#include "otsg/measures.hpp"
#include "otsg/models.hpp"
#include "otsg/oracles.hpp"
#include "otsg/ot1d.hpp"

namespace otsg {

/// A parameterized objective: value plus (optionally) a subgradient
/// selection. The oracle must satisfy the finite-difference property at
/// smooth points.
struct Objective {
  std::string name;
  std::size_t dim = 1;
  std::function<double(const Vec&)> value;
  std::function<Subgradient(const Vec&)> oracle;  // may be empty

  bool has_oracle() const { return static_cast<bool>(oracle); }
};

/// Empirical spectral risk SR_n = (1/n) sum_i w(i/n) loss_(i)(theta).
inline double sr_value(const SpectralWeight& weight, const ParamModel& loss,
                       const Vec& theta, const std::vector<Vec>& xs) {
  const auto scored = detail::score_samples(loss, theta, xs);
  const std::size_t n = xs.size();
  const double inv_n = 1.0 / static_cast<double>(n);
  double acc = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    const double w =
        weight(static_cast<double>(r + 1) / static_cast<double>(n));
    acc += (w * scored.scores[scored.ranks[r]]) * inv_n;
  }
  return acc;
}

/// Empirical fairness regularizer: half the squared quadratic transport
/// cost between the two score samples (any group sizes).
inline double fr_value(const ParamModel& score, const Vec& theta,
                       const std::vector<Vec>& xs0,
                       const std::vector<Vec>& xs1) {
  if (score.output_dim() != 1)
    throw ShapeError("fr_value: score must have scalar output");
  std::vector<double> s0(xs0.size()), s1(xs1.size());
  for (std::size_t i = 0; i < xs0.size(); ++i)
    s0[i] = score.eval(theta, xs0[i])[0];
  for (std::size_t i = 0; i < xs1.size(); ++i)
    s1[i] = score.eval(theta, xs1[i])[0];
  return 0.5 * w_unequal(EmpiricalMeasure1D(std::move(s0)),
                         EmpiricalMeasure1D(std::move(s1)), 2.0);
}

/// Empirical sliced Wasserstein objective
///   SW_{n,k} = 1/(2nk) sum_j sum_i <phi_j, f_(i|j)(theta) - y_(i|j)>^2.
inline double sw_value(const ParamModel& gen, const Vec& theta,
                       const std::vector<Vec>& xs, const std::vector<Vec>& ys,
                       const std::vector<Vec>& phis) {
  if (xs.size() != ys.size()) throw ShapeError("sw_value: |xs| != |ys|");
  if (xs.empty()) throw ShapeError("sw_value: empty sample set");
  if (phis.empty())
    throw std::invalid_argument("sw_value: need at least one direction");
  const std::size_t n = xs.size();
  std::vector<Vec> outs(n);
  for (std::size_t i = 0; i < n; ++i) outs[i] = gen.eval(theta, xs[i]);
  double acc = 0.0;
  for (const auto& phi : phis) {
    if (phi.size() != gen.output_dim())
      throw ShapeError("sw_value: direction dimension mismatch");
    if (std::fabs(norm(phi) - 1.0) > 1e-12)
      throw std::invalid_argument("sw_value: phi must be a unit vector");
    std::vector<double> pf(n), py(n);
    for (std::size_t i = 0; i < n; ++i) {
      pf[i] = dot(phi, outs[i]);
      py[i] = dot(phi, ys[i]);
    }
    const auto rf = detail::stable_ranks(pf);
    const auto ry = detail::stable_ranks(py);
    for (std::size_t r = 0; r < n; ++r) {
      const double diff = pf[rf[r]] - py[ry[r]];
      acc += diff * diff;
    }
  }
  return acc / (2.0 * static_cast<double>(n) * static_cast<double>(phis.size()));
}

/// Regularized ERM: mean loss over xs plus lambda times the fairness
/// regularizer on the two group samples.
inline double erm_value(const ParamModel& loss, const ParamModel& score,
                        double lambda, const Vec& theta,
                        const std::vector<Vec>& xs,
                        const std::vector<Vec>& xs0,
                        const std::vector<Vec>& xs1) {
  if (lambda < 0.0) throw std::invalid_argument("erm_value: lambda >= 0");
  if (loss.output_dim() != 1)
    throw ShapeError("erm_value: loss must have scalar output");
  if (xs.empty()) throw ShapeError("erm_value: empty sample set");
  double mean = 0.0;
  for (const auto& x : xs) mean += loss.eval(theta, x)[0];
  mean /= static_cast<double>(xs.size());
  return mean + lambda * fr_value(score, theta, xs0, xs1);
}

// ---------------------------------------------------------------------------
// Generic empirical transport objective.

enum class PlanMode { kSorted1D, kBruteForce };

/// Cost description for transport_value. The structured form
/// scale * |f(theta,x) - g(theta,y)|^q enables the sorted 1D fast path;
/// a generic cost is only usable at brute-force scale.
struct TransportCost {
  // structured form (used when f != nullptr)
  const ParamModel* f = nullptr;
  const ParamModel* g = nullptr;
  double q = 2.0;
  double scale = 1.0;
  // generic form
  std::function<double(const Vec& theta, const Vec& x, const Vec& y)> generic;

  static TransportCost power(const ParamModel& f, const ParamModel& g,
                             double q, double scale = 1.0) {
    TransportCost c;
    c.f = &f;
    c.g = &g;
    c.q = q;
    c.scale = scale;
    return c;
  }
};

/// Minimal coupling cost between the pushforward samples. Sorted-1D mode
/// evaluates the quantile formula on model outputs; brute force
/// enumerates all matchings (n = m <= 8).
inline double transport_value(const TransportCost& cost, const Vec& theta,
                              const std::vector<Vec>& xs,
                              const std::vector<Vec>& ys, PlanMode mode) {
  if (mode == PlanMode::kSorted1D) {
    if (cost.f == nullptr || cost.g == nullptr)
      throw CapabilityError(
          "transport_value: sorted-1d needs the structured |u-v|^q cost");
    if (cost.f->output_dim() != 1 || cost.g->output_dim() != 1)
      throw CapabilityError(
          "transport_value: sorted-1d needs scalar model outputs");
    std::vector<double> us(xs.size()), vs(ys.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
      us[i] = cost.f->eval(theta, xs[i])[0];
    for (std::size_t j = 0; j < ys.size(); ++j)
      vs[j] = cost.g->eval(theta, ys[j])[0];
    return cost.scale * w_unequal(EmpiricalMeasure1D(std::move(us)),
                                  EmpiricalMeasure1D(std::move(vs)), cost.q);
  }

  // Brute force.
  if (xs.size() != ys.size())
    throw CapabilityError("transport_value: brute force requires n == m");
  const std::size_t n = xs.size();
  if (n < 1) throw ShapeError("transport_value: empty sample set");
  if (n > 8) throw CapabilityError("transport_value: brute force needs n <= 8");
  auto cost_at = [&](const Vec& x, const Vec& y) -> double {
    if (cost.generic) return cost.generic(theta, x, y);
    if (cost.f == nullptr || cost.g == nullptr)
      throw CapabilityError("transport_value: no usable cost provided");
    return cost.scale * abs_pow(cost.f->eval(theta, x)[0] -
                                    cost.g->eval(theta, y)[0],
                                cost.q);
  };
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  const double inv_n = 1.0 / static_cast<double>(n);
  double best = std::numeric_limits<double>::infinity();
  do {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      acc += cost_at(xs[i], ys[perm[i]]) * inv_n;
    best = std::min(best, acc);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// ---------------------------------------------------------------------------
// Closed-form population objectives used by the diagnostics.

/// The three scalar cases with known population values:
///  - relu_unif:           T(theta) = relu(theta)
///  - spurious(w, M):      T(theta) = w relu(theta) + (1-w)|2+theta|
///  - translate_quadratic: T(theta) = theta^2 / 2
struct PopulationCase {
  enum class Kind { kReluUnif, kSpurious, kTranslateQuadratic };
  Kind kind = Kind::kTranslateQuadratic;
  double w = 0.75;
  double m_location = 6.0;

  static PopulationCase relu_unif() { return {Kind::kReluUnif, 0, 0}; }
  static PopulationCase spurious(double w, double m_location = 6.0) {
    if (!(w > 0.5 && w < 1.0))
      throw std::invalid_argument("spurious: w in (1/2, 1)");
    if (!(m_location > 4.0))
      throw std::invalid_argument("spurious: M > 4");
    return {Kind::kSpurious, w, m_location};
  }
  static PopulationCase translate_quadratic() {
    return {Kind::kTranslateQuadratic, 0, 0};
  }
};

inline double population_value(const PopulationCase& c, double theta) {
  switch (c.kind) {
    case PopulationCase::Kind::kReluUnif:
      return std::max(theta, 0.0);
    case PopulationCase::Kind::kSpurious:
      return c.w * std::max(theta, 0.0) + (1.0 - c.w) * std::fabs(2.0 + theta);
    case PopulationCase::Kind::kTranslateQuadratic:
      return 0.5 * theta * theta;
  }
  throw std::invalid_argument("population_value: unknown case");
}

/// Scalar population objective with a kink-refusing gradient oracle.
inline Objective population_objective(const PopulationCase& c) {
  Objective obj;
  obj.dim = 1;
  obj.value = [c](const Vec& theta) {
    return population_value(c, theta.at(0));
  };
  switch (c.kind) {
    case PopulationCase::Kind::kReluUnif:
      obj.name = "relu_unif";
      obj.oracle = [](const Vec& theta) -> Subgradient {
        const double t = theta.at(0);
        if (t == 0.0)
          throw KinkError("relu_unif population objective: kink at 0");
        return Subgradient{t > 0.0 ? 1.0 : 0.0};
      };
      break;
    case PopulationCase::Kind::kSpurious:
      obj.name = "spurious";
      obj.oracle = [c](const Vec& theta) -> Subgradient {
        const double t = theta.at(0);
        if (t == 0.0 || t == -2.0)
          throw KinkError("spurious population objective: kink");
        const double relu_slope = t > 0.0 ? c.w : 0.0;
        const double abs_slope = (1.0 - c.w) * (t > -2.0 ? 1.0 : -1.0);
        return Subgradient{relu_slope + abs_slope};
      };
      break;
    case PopulationCase::Kind::kTranslateQuadratic:
      obj.name = "translate_quadratic";
      obj.oracle = [](const Vec& theta) -> Subgradient {
        return Subgradient{theta.at(0)};
      };
      break;
  }
  return obj;
}

/// Population subdifferential as a vertex list (interval endpoints at
/// kinks, a singleton elsewhere): the representation the graph-excess
/// diagnostic consumes.
inline std::function<std::vector<Vec>(const Vec&)> population_grad(
    const PopulationCase& c) {
  return [c](const Vec& theta) -> std::vector<Vec> {
    const double t = theta.at(0);
    switch (c.kind) {
      case PopulationCase::Kind::kReluUnif:
        if (t == 0.0) return {Vec{0.0}, Vec{1.0}};
        return {Vec{t > 0.0 ? 1.0 : 0.0}};
      case PopulationCase::Kind::kSpurious: {
        const double base = (1.0 - c.w) * (t > -2.0 ? 1.0 : -1.0);
        if (t == 0.0) return {Vec{base}, Vec{base + c.w}};
        if (t == -2.0) return {Vec{-(1.0 - c.w)}, Vec{1.0 - c.w}};
        return {Vec{base + (t > 0.0 ? c.w : 0.0)}};
      }
      case PopulationCase::Kind::kTranslateQuadratic:
        return {Vec{t}};
    }
    throw std::invalid_argument("population_grad: unknown case");
  };
}

/// Empirical counterpart of the translate_quadratic case: the transport
/// objective between x + theta and y under the half-quadratic cost, with
/// the plan-weighted gradient as its oracle.
inline Objective translate_quadratic_empirical(EmpiricalMeasure1D xs,
                                               EmpiricalMeasure1D ys) {
  auto xs_shared = std::make_shared<EmpiricalMeasure1D>(std::move(xs));
  auto ys_shared = std::make_shared<EmpiricalMeasure1D>(std::move(ys));
  Objective obj;
  obj.name = "translate_quadratic_empirical";
  obj.dim = 1;
  obj.value = [xs_shared, ys_shared](const Vec& theta) {
    std::vector<double> shifted(xs_shared->values());
    for (double& v : shifted) v += theta.at(0);
    return 0.5 * w_unequal(EmpiricalMeasure1D(std::move(shifted)), *ys_shared,
                           2.0);
  };
  obj.oracle = [xs_shared, ys_shared](const Vec& theta) -> Subgradient {
    std::vector<double> shifted(xs_shared->values());
    for (double& v : shifted) v += theta.at(0);
    const EmpiricalMeasure1D u(std::move(shifted));
    const TransportPlan plan = monotone_plan(u, *ys_shared);
    // Plan-weighted gradient of the half-quadratic cost, specialized to
    // the scalar translation model: grad C = (x + theta - y).
    double g = 0.0;
    for (const auto& e : plan.entries)
      g += e.mass * (u.values()[e.i - 1] - ys_shared->values()[e.j - 1]);
    return Subgradient{g};
  };
  return obj;
}

}  // namespace otsg

#endif  // OTSG_OBJECTIVES_HPP
