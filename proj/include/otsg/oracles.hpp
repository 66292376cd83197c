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

#ifndef OTSG_ORACLES_HPP
#define OTSG_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

#include "otsg/errors.hpp"
#include "otsg/linalg.hpp"
#include "otsg/models.hpp"
#include "otsg/ot1d.hpp"
#include "otsg/parallel.hpp"

namespace otsg {

/// One selected element of a subdifferential. Set-valued information
/// (derivative hulls at scalar kinks) lives in the diagnostics module.
using Subgradient = Vec;

/// Non-decreasing bounded weighting of quantile levels. The evaluation
/// convention at step boundaries is right-open: superquantile weights
/// s in (alpha, 1], tables weight (s_{i-1}, s_i].
class SpectralWeight {
 public:
  static SpectralWeight superquantile(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
      throw std::invalid_argument("superquantile: alpha in (0,1)");
    SpectralWeight w;
    w.fn_ = [alpha](double s) {
      return s > alpha ? 1.0 / (1.0 - alpha) : 0.0;
    };
    w.validate();
    return w;
  }

  static SpectralWeight extremile(double r) {
    if (!(r >= 1.0 && r < 2.0))
      throw std::invalid_argument("extremile: r in [1,2)");
    SpectralWeight w;
    w.fn_ = [r](double s) { return r * std::pow(s, r - 1.0); };
    w.validate();
    return w;
  }

  /// Step weights: w(s) = w_i on (s_{i-1}, s_i] with s_0 = 0 and the
  /// last threshold equal to 1. w(0) is taken as w_1.
  static SpectralWeight table(std::vector<std::pair<double, double>> steps) {
    if (steps.empty()) throw std::invalid_argument("table: empty step list");
    double prev = 0.0;
    for (const auto& [s, wv] : steps) {
      if (!(s > prev && s <= 1.0))
        throw std::invalid_argument("table: thresholds must increase in (0,1]");
      if (wv < 0.0) throw std::invalid_argument("table: negative weight");
      prev = s;
    }
    if (steps.back().first != 1.0)
      throw std::invalid_argument("table: last threshold must be 1");
    SpectralWeight w;
    w.fn_ = [steps](double s) {
      for (const auto& [thr, wv] : steps)
        if (s <= thr) return wv;
      return steps.back().second;
    };
    w.validate();
    return w;
  }

  double operator()(double s) const { return fn_(s); }

 private:
  /// Monotonicity/boundedness check on a 1e4-point grid.
  void validate() const {
    const int kGrid = 10000;
    double prev = fn_(0.0);
    for (int i = 1; i <= kGrid; ++i) {
      const double s = static_cast<double>(i) / kGrid;
      const double v = fn_(s);
      if (!(std::isfinite(v)) || v < 0.0)
        throw std::invalid_argument("spectral weight: must be finite, >= 0");
      if (v + 1e-12 < prev)
        throw std::invalid_argument("spectral weight: must be non-decreasing");
      prev = v;
    }
  }

  std::function<double(double)> fn_;
};

namespace detail {

/// Stable argsort of scalar values: ties keep original index order,
/// making every sorted-objective oracle a fixed measurable selection.
inline std::vector<std::uint32_t> stable_ranks(const std::vector<double>& v) {
  std::vector<std::uint32_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), std::uint32_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) {
    return v[a] < v[b];
  });
  return idx;
}

/// Scores and parameter gradients of a scalar-output model on a sample
/// set, evaluated once.
struct ScoredSamples {
  std::vector<double> scores;
  std::vector<Vec> grads;
  std::vector<std::uint32_t> ranks;
};

inline ScoredSamples score_samples(const ParamModel& model, const Vec& theta,
                                   const std::vector<Vec>& xs) {
  if (model.output_dim() != 1)
    throw ShapeError("oracle: model must have scalar output");
  if (xs.empty()) throw ShapeError("oracle: empty sample set");
  ScoredSamples out;
  out.scores.resize(xs.size());
  out.grads.resize(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    out.scores[i] = model.eval(theta, xs[i])[0];
    out.grads[i] = model.jac_theta(theta, xs[i]).row(0);
  }
  out.ranks = stable_ranks(out.scores);
  return out;
}

}  // namespace detail

/// Gradient contract for a sample-level cost C(theta, x, y); should
/// raise KinkError where C is not differentiable in theta.
using CostGrad =
    std::function<Vec(const Vec& theta, const Vec& x, const Vec& y)>;

/// Plan-weighted gradient sum_{(i,j,m)} m * grad C(theta, x_i, y_j): a
/// subgradient of the parameterized transport cost at any optimal plan.
inline Subgradient plan_weighted_grad(const CostGrad& costgrad,
                                      const TransportPlan& plan,
                                      const Vec& theta,
                                      const std::vector<Vec>& xs,
                                      const std::vector<Vec>& ys) {
  if (plan.n != static_cast<std::int64_t>(xs.size()) ||
      plan.m != static_cast<std::int64_t>(ys.size()))
    throw ShapeError("plan_weighted_grad: plan marginals do not match samples");
  Subgradient g(theta.size(), 0.0);
  for (const auto& e : plan.entries) {
    Vec term;
    try {
      term = costgrad(theta, xs[e.i - 1], ys[e.j - 1]);
    } catch (const KinkError& k) {
      throw KinkError(std::string(k.what()) + " [plan entry i=" +
                          std::to_string(e.i) + ", j=" + std::to_string(e.j) +
                          "]",
                      e.i, e.j);
    }
    if (term.size() != theta.size())
      throw ShapeError("plan_weighted_grad: cost gradient dimension mismatch");
    axpy(e.mass, term, g);
  }
  return g;
}

/// G(theta) = (1/n) sum_i w(i/n) grad loss_(i)(theta), losses sorted with
/// stable ties. Input order of xs does not affect the result.
inline Subgradient spectral_risk_oracle(const SpectralWeight& weight,
                                        const ParamModel& loss,
                                        const Vec& theta,
                                        const std::vector<Vec>& xs) {
  const auto scored = detail::score_samples(loss, theta, xs);
  const std::size_t n = xs.size();
  const double inv_n = 1.0 / static_cast<double>(n);
  Subgradient g(theta.size(), 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    const double w =
        weight(static_cast<double>(r + 1) / static_cast<double>(n));
    const Vec& grad = scored.grads[scored.ranks[r]];
    for (std::size_t c = 0; c < g.size(); ++c)
      g[c] += (w * grad[c]) * inv_n;
  }
  return g;
}

namespace detail {

/// Balanced formula (1/m) sum (s0_(i) - s1_(i)) (grad s0_(i) - grad s1_(i)).
inline Subgradient fairness_grad_balanced(const ScoredSamples& s0,
                                          const ScoredSamples& s1,
                                          std::size_t p) {
  const std::size_t m = s0.scores.size();
  const double inv_m = 1.0 / static_cast<double>(m);
  Subgradient g(p, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    const std::uint32_t a = s0.ranks[r];
    const std::uint32_t b = s1.ranks[r];
    const double sdiff = s0.scores[a] - s1.scores[b];
    for (std::size_t c = 0; c < p; ++c)
      g[c] += (sdiff * (s0.grads[a][c] - s1.grads[b][c])) * inv_m;
  }
  return g;
}

/// Refinement-grid formula sum_k (...) Delta_k for arbitrary sizes.
inline Subgradient fairness_grad_grid(const ScoredSamples& s0,
                                      const ScoredSamples& s1, std::size_t p) {
  const RefinementGrid grid =
      refinement_grid(static_cast<std::int64_t>(s0.scores.size()),
                      static_cast<std::int64_t>(s1.scores.size()));
  Subgradient g(p, 0.0);
  for (std::size_t k = 0; k < grid.segment_count(); ++k) {
    const double delta = grid.increments[k];
    if (delta == 0.0) continue;
    const auto& h = grid.breakpoints[k + 1];
    const std::uint32_t a = s0.ranks[RefinementGrid::ceil_rank(grid.n, h) - 1];
    const std::uint32_t b = s1.ranks[RefinementGrid::ceil_rank(grid.m, h) - 1];
    const double sdiff = s0.scores[a] - s1.scores[b];
    for (std::size_t c = 0; c < p; ++c)
      g[c] += (sdiff * (s0.grads[a][c] - s1.grads[b][c])) * delta;
  }
  return g;
}

}  // namespace detail

/// Fairness oracle. Equal group sizes use the rank-paired balanced
/// formula; unequal sizes use the refinement grid of the sample sizes.
/// The two branches agree bit-for-bit when n0 = n1, since the grid
/// degenerates to uniform 1/m increments interleaved with zero-width
/// segments (both branches keep the same term order and products).
inline Subgradient fairness_oracle(const ParamModel& score, const Vec& theta,
                                   const std::vector<Vec>& xs0,
                                   const std::vector<Vec>& xs1) {
  const auto s0 = detail::score_samples(score, theta, xs0);
  const auto s1 = detail::score_samples(score, theta, xs1);
  if (xs0.size() == xs1.size())
    return detail::fairness_grad_balanced(s0, s1, theta.size());
  return detail::fairness_grad_grid(s0, s1, theta.size());
}

/// Grid-branch evaluation regardless of sizes; exposed so the balanced
/// reduction identity can be checked directly.
inline Subgradient fairness_oracle_via_grid(const ParamModel& score,
                                            const Vec& theta,
                                            const std::vector<Vec>& xs0,
                                            const std::vector<Vec>& xs1) {
  const auto s0 = detail::score_samples(score, theta, xs0);
  const auto s1 = detail::score_samples(score, theta, xs1);
  return detail::fairness_grad_grid(s0, s1, theta.size());
}

/// Sliced Wasserstein oracle
///   G = (1/(nk)) sum_j sum_i <phi_j, f_(i|j) - y_(i|j)> Jac^T phi_j,
/// with per-direction independent stable sorting of the projections.
/// Directions are processed in parallel into per-j slots and reduced
/// pairwise in index order, so the result is thread-count independent.
inline Subgradient sliced_oracle(const ParamModel& gen, const Vec& theta,
                                 const std::vector<Vec>& xs,
                                 const std::vector<Vec>& ys,
                                 const std::vector<Vec>& phis,
                                 unsigned threads = 1) {
  if (xs.size() != ys.size())
    throw ShapeError("sliced_oracle: |xs| != |ys|");
  if (xs.empty()) throw ShapeError("sliced_oracle: empty sample set");
  if (phis.empty())
    throw std::invalid_argument("sliced_oracle: need at least one direction");
  for (const auto& phi : phis) {
    if (phi.size() != gen.output_dim())
      throw ShapeError("sliced_oracle: direction dimension mismatch");
    if (std::fabs(norm(phi) - 1.0) > 1e-12)
      throw std::invalid_argument("sliced_oracle: phi must be a unit vector");
  }
  const std::size_t n = xs.size();
  const std::size_t k = phis.size();

  // Generator outputs and Jacobians do not depend on phi; evaluate once.
  std::vector<Vec> outs(n);
  std::vector<Mat> jacs(n);
  for (std::size_t i = 0; i < n; ++i) {
    outs[i] = gen.eval(theta, xs[i]);
    jacs[i] = gen.jac_theta(theta, xs[i]);
  }

  std::vector<Vec> per_direction(k);
  parallel_for(k, threads, [&](std::size_t j) {
    const Vec& phi = phis[j];
    std::vector<double> pf(n), py(n);
    for (std::size_t i = 0; i < n; ++i) {
      pf[i] = dot(phi, outs[i]);
      py[i] = dot(phi, ys[i]);
    }
    const auto rf = detail::stable_ranks(pf);
    const auto ry = detail::stable_ranks(py);
    Vec gj(theta.size(), 0.0);
    for (std::size_t r = 0; r < n; ++r) {
      const std::uint32_t a = rf[r];
      const double diff = pf[a] - py[ry[r]];
      const Vec jt_phi = transpose_times(jacs[a], phi);
      axpy(diff, jt_phi, gj);
    }
    per_direction[j] = std::move(gj);
  });

  Subgradient g = pairwise_sum(per_direction);
  const double scale = 1.0 / (static_cast<double>(n) * static_cast<double>(k));
  for (double& v : g) v *= scale;
  return g;
}

}  // namespace otsg

#endif  // OTSG_ORACLES_HPP
