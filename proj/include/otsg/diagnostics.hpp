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

#ifndef OTSG_DIAGNOSTICS_HPP
#define OTSG_DIAGNOSTICS_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "otsg/errors.hpp"
#include "otsg/linalg.hpp"
#include "otsg/objectives.hpp"
#include "otsg/optimize.hpp"
#include "otsg/parallel.hpp"

namespace otsg {

/// Finite sample of a subdifferential graph: (theta, subgradient) pairs.
struct GraphCloud {
  std::vector<std::pair<Vec, Vec>> entries;
};

/// One-sided derivative pair at a scalar kink; the hull is the interval
/// between them.
struct DerivativeHull {
  double theta = 0.0;
  double left = 0.0;
  double right = 0.0;
  double lo() const { return std::min(left, right); }
  double hi() const { return std::max(left, right); }
};

/// Evenly spaced grid with exact endpoints; the symmetric formula also
/// lands exactly on 0 for grids symmetric about the origin.
inline std::vector<double> linspace(double lo, double hi, std::size_t count) {
  if (count < 2) return {lo};
  std::vector<double> out(count);
  const double denom = static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = (lo * (denom - static_cast<double>(i)) +
              hi * static_cast<double>(i)) /
             denom;
  return out;
}

inline std::vector<Vec> scalar_grid(const std::vector<double>& ts) {
  std::vector<Vec> out;
  out.reserve(ts.size());
  for (double t : ts) out.push_back(Vec{t});
  return out;
}

/// One-sided excess D(A, B) = sup_{a in A} dist(a, B). Not symmetric.
inline double excess_distance(const std::vector<Vec>& a,
                              const std::vector<Vec>& b) {
  if (b.empty())
    throw std::domain_error("excess_distance: reference set is empty");
  double worst = 0.0;
  for (const auto& p : a) {
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& q : b) nearest = std::min(nearest, distance(p, q));
    worst = std::max(worst, nearest);
  }
  return worst;
}

/// Symmetric companion used by property tests.
inline double hausdorff_distance(const std::vector<Vec>& a,
                                 const std::vector<Vec>& b) {
  return std::max(excess_distance(a, b), excess_distance(b, a));
}

/// Forward/backward difference quotients around a scalar point; exact
/// for piecewise-affine objectives once h sits inside the smooth pieces.
inline DerivativeHull one_sided(const std::function<double(double)>& objfun,
                                double theta, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("one_sided: h > 0");
  DerivativeHull hull;
  hull.theta = theta;
  const double f0 = objfun(theta);
  hull.left = (f0 - objfun(theta - h)) / h;
  hull.right = (objfun(theta + h) - f0) / h;
  return hull;
}

/// Map from theta to the vertex list of the population subdifferential
/// (interval endpoints for scalar kinks).
using PopulationGrad = std::function<std::vector<Vec>(const Vec&)>;

namespace detail {

inline double default_fd_step(double t) { return 1e-7 * (1.0 + std::fabs(t)); }

inline Vec stack(const Vec& theta, const Vec& g) {
  Vec out(theta);
  out.insert(out.end(), g.begin(), g.end());
  return out;
}

}  // namespace detail

struct GraphExcessResult {
  double excess = 0.0;
  GraphCloud empirical;  // the sampled oracle graph, for reporting
  std::vector<std::string> warnings;
};

/// Estimates the graphical excess of the sampled oracle graph over the
/// population subdifferential graph. The population graph is densified
/// on a 10x finer grid (plus a `pad` extension of the range); the
/// estimate is an upper-biased grid proxy of the underlying
/// set-convergence quantity. A kink at a scalar grid point contributes
/// its derivative-hull endpoints; for p > 1 the point is skipped with a
/// warning.
inline GraphExcessResult graph_excess_detail(const Objective& empirical,
                                             const PopulationGrad& population,
                                             const std::vector<Vec>& grid,
                                             double pad = 0.0,
                                             unsigned threads = 1) {
  if (grid.empty()) throw std::invalid_argument("graph_excess: empty grid");
  if (!empirical.has_oracle())
    throw std::invalid_argument("graph_excess: objective has no oracle");

  GraphExcessResult result;

  // Oracle side, evaluated in parallel into per-point slots.
  std::vector<std::vector<std::pair<Vec, Vec>>> slots(grid.size());
  parallel_for(grid.size(), threads, [&](std::size_t i) {
    const Vec& theta = grid[i];
    try {
      slots[i].emplace_back(theta, empirical.oracle(theta));
    } catch (const KinkError&) {
      if (theta.size() == 1) {
        const double t = theta[0];
        const DerivativeHull hull = one_sided(
            [&](double u) { return empirical.value(Vec{u}); }, t,
            detail::default_fd_step(t));
        slots[i].emplace_back(theta, Vec{hull.left});
        slots[i].emplace_back(theta, Vec{hull.right});
      } else {
        slots[i].clear();  // recorded below
      }
    }
  });
  std::vector<Vec> oracle_points;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (slots[i].empty()) {
      result.warnings.push_back("kink skipped at grid index " +
                                std::to_string(i));
      continue;
    }
    for (auto& entry : slots[i]) {
      oracle_points.push_back(detail::stack(entry.first, entry.second));
      result.empirical.entries.push_back(std::move(entry));
    }
  }

  // Population side on the refined grid.
  std::vector<Vec> nodes(grid);
  if (pad > 0.0 && nodes.size() >= 1 && nodes.front().size() == 1) {
    nodes.insert(nodes.begin(), Vec{nodes.front()[0] - pad});
    nodes.push_back(Vec{nodes.back()[0] + pad});
  }
  const int kRefine = 10;
  std::vector<Vec> fine;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    for (int j = 0; j < kRefine; ++j) {
      const double t = static_cast<double>(j) / kRefine;
      Vec p(nodes[i]);
      for (std::size_t c = 0; c < p.size(); ++c)
        p[c] += t * (nodes[i + 1][c] - nodes[i][c]);
      fine.push_back(std::move(p));
    }
  }
  fine.push_back(nodes.back());

  std::vector<Vec> population_points;
  for (const auto& theta : fine)
    for (const auto& v : population(theta))
      population_points.push_back(detail::stack(theta, v));

  result.excess = excess_distance(oracle_points, population_points);
  return result;
}

inline double graph_excess(const Objective& empirical,
                           const PopulationGrad& population,
                           const std::vector<Vec>& grid, double pad = 0.0,
                           unsigned threads = 1) {
  return graph_excess_detail(empirical, population, grid, pad, threads).excess;
}

/// Grid points where 0 lies within tol of oracle(theta) + N(theta); at a
/// scalar kink the oracle selection is replaced by the derivative hull,
/// so the point is critical when 0 is in hull + N(theta) (up to tol).
inline std::vector<Vec> critical_set(const Objective& obj,
                                     const FeasibleSet& set,
                                     const std::vector<Vec>& grid,
                                     double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("critical_set: tol > 0");
  if (!obj.has_oracle())
    throw std::invalid_argument("critical_set: objective has no oracle");
  std::vector<Vec> critical;
  for (const Vec& theta : grid) {
    if (!set.contains(theta, 1e-9))
      throw std::invalid_argument("critical_set: grid point is infeasible");
    try {
      const Subgradient g = obj.oracle(theta);
      if (normal_cone_distance(g, set, theta) <= tol)
        critical.push_back(theta);
    } catch (const KinkError&) {
      if (theta.size() != 1) continue;  // no hull representation for p > 1
      const double t = theta[0];
      const DerivativeHull hull = one_sided(
          [&](double u) { return obj.value(Vec{u}); }, t,
          detail::default_fd_step(t));
      // Interval bounds of the feasible set around t.
      double lo_bound, hi_bound;
      if (set.kind == FeasibleSet::Kind::kBox) {
        lo_bound = set.lo[0];
        hi_bound = set.hi[0];
      } else {
        lo_bound = set.center[0] - set.radius;
        hi_bound = set.center[0] + set.radius;
      }
      double dist_to_zero;
      if (std::fabs(t - lo_bound) <= 1e-12) {
        // N = (-inf, 0]: hull + N = (-inf, hi(hull)]
        dist_to_zero = std::max(0.0, -hull.hi());
      } else if (std::fabs(t - hi_bound) <= 1e-12) {
        // N = [0, inf): hull + N = [lo(hull), inf)
        dist_to_zero = std::max(0.0, hull.lo());
      } else {
        dist_to_zero = (hull.lo() <= 0.0 && 0.0 <= hull.hi())
                           ? 0.0
                           : std::min(std::fabs(hull.lo()), std::fabs(hull.hi()));
      }
      if (dist_to_zero <= tol) critical.push_back(theta);
    }
  }
  return critical;
}

}  // namespace otsg

#endif  // OTSG_DIAGNOSTICS_HPP
