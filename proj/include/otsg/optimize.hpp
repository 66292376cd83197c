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

#ifndef OTSG_OPTIMIZE_HPP
#define OTSG_OPTIMIZE_HPP

#include <cmath>
#include <string>
#include <vector>

#include "otsg/errors.hpp"
#include "otsg/linalg.hpp"
#include "otsg/objectives.hpp"
#include "otsg/rng.hpp"

namespace otsg {

/// Convex compact feasible sets with closed-form Euclidean projection.
struct FeasibleSet {
  enum class Kind { kBox, kBall };
  Kind kind = Kind::kBox;
  Vec lo, hi;      // box bounds
  Vec center;      // ball center
  double radius = 1.0;

  static FeasibleSet box(Vec lo, Vec hi) {
    if (lo.size() != hi.size()) throw ShapeError("box: bound size mismatch");
    for (std::size_t i = 0; i < lo.size(); ++i)
      if (!(lo[i] <= hi[i]))
        throw std::invalid_argument("box: requires lo <= hi componentwise");
    FeasibleSet s;
    s.kind = Kind::kBox;
    s.lo = std::move(lo);
    s.hi = std::move(hi);
    return s;
  }

  static FeasibleSet ball(Vec center, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("ball: radius > 0");
    FeasibleSet s;
    s.kind = Kind::kBall;
    s.center = std::move(center);
    s.radius = radius;
    return s;
  }

  std::size_t dim() const {
    return kind == Kind::kBox ? lo.size() : center.size();
  }

  bool contains(const Vec& w, double tol = 0.0) const {
    if (w.size() != dim()) throw ShapeError("contains: dimension mismatch");
    if (kind == Kind::kBox) {
      for (std::size_t i = 0; i < w.size(); ++i)
        if (w[i] < lo[i] - tol || w[i] > hi[i] + tol) return false;
      return true;
    }
    return distance(w, center) <= radius + tol;
  }
};

/// Euclidean projection; idempotent and nonexpansive.
inline Vec project(const FeasibleSet& set, const Vec& w) {
  if (w.size() != set.dim()) throw ShapeError("project: dimension mismatch");
  if (set.kind == FeasibleSet::Kind::kBox) {
    Vec out(w);
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] = std::min(std::max(out[i], set.lo[i]), set.hi[i]);
    return out;
  }
  const double d = distance(w, set.center);
  if (d <= set.radius) return w;
  Vec out(set.center);
  const double t = set.radius / d;
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] += t * (w[i] - out[i]);
  return out;
}

/// Step sizes for the projected subgradient iteration.
struct StepSchedule {
  enum class Kind { kConstant, kInverseSqrt };
  Kind kind = Kind::kConstant;
  double eta0 = 1.0;

  static StepSchedule constant(double eta) {
    if (!(eta > 0.0)) throw std::invalid_argument("schedule: eta > 0");
    return {Kind::kConstant, eta};
  }
  static StepSchedule inverse_sqrt(double eta0) {
    if (!(eta0 > 0.0)) throw std::invalid_argument("schedule: eta0 > 0");
    return {Kind::kInverseSqrt, eta0};
  }

  double at(std::size_t k) const {
    return kind == Kind::kConstant
               ? eta0
               : eta0 / std::sqrt(static_cast<double>(k + 1));
  }
};

/// Projected-gradient residual ||theta - proj(theta - g)|| with unit
/// step; zero exactly when -g lies in the normal cone at theta.
inline double stationarity_residual(const Subgradient& g,
                                    const FeasibleSet& set, const Vec& theta) {
  Vec step(theta);
  for (std::size_t i = 0; i < step.size(); ++i) step[i] -= g[i];
  return distance(theta, project(set, step));
}

/// Distance from 0 to g + N(theta), i.e. dist(-g, N(theta)). Unlike the
/// unit-step projected residual, this does not shrink at near-boundary
/// points, so tolerance thresholds mean the same thing everywhere.
inline double normal_cone_distance(const Subgradient& g,
                                   const FeasibleSet& set, const Vec& theta,
                                   double boundary_tol = 1e-12) {
  if (g.size() != theta.size() || theta.size() != set.dim())
    throw ShapeError("normal_cone_distance: dimension mismatch");
  if (set.kind == FeasibleSet::Kind::kBox) {
    double sq = 0.0;
    for (std::size_t c = 0; c < theta.size(); ++c) {
      const bool at_lo = std::fabs(theta[c] - set.lo[c]) <= boundary_tol;
      const bool at_hi = std::fabs(theta[c] - set.hi[c]) <= boundary_tol;
      double d;
      const double mg = -g[c];
      if (at_lo && at_hi)
        d = 0.0;  // degenerate coordinate, cone is all of R
      else if (at_lo)
        d = std::max(0.0, mg);  // N_c = (-inf, 0]
      else if (at_hi)
        d = std::max(0.0, -mg);  // N_c = [0, inf)
      else
        d = g[c];
      sq += d * d;
    }
    return std::sqrt(sq);
  }
  // Ball: the normal cone at a boundary point is the outward ray.
  const double r = distance(theta, set.center);
  if (r < set.radius - boundary_tol) return norm(g);
  Vec u(theta);
  for (std::size_t c = 0; c < u.size(); ++c)
    u[c] = (theta[c] - set.center[c]) / r;
  double along = 0.0;
  for (std::size_t c = 0; c < u.size(); ++c) along += -g[c] * u[c];
  along = std::max(0.0, along);
  double sq = 0.0;
  for (std::size_t c = 0; c < u.size(); ++c) {
    const double d = -g[c] - along * u[c];
    sq += d * d;
  }
  return std::sqrt(sq);
}

struct RunTrace {
  struct Row {
    std::size_t k;
    Vec theta;
    double value;
    double residual;
  };
  std::vector<Row> rows;
  std::size_t kink_retries = 0;
  std::vector<std::string> log;
  std::string status = "ok";
};

/// Projected subgradient iteration theta <- proj(theta - eta_k g_k).
/// Oracle kinks at isolated iterates are retried with a 1e-12
/// deterministic random perturbation (at most 10 times per iterate).
inline RunTrace run(const Objective& obj, const FeasibleSet& set,
                    const StepSchedule& sched, const Vec& theta0,
                    std::size_t iters) {
  if (!obj.has_oracle())
    throw std::invalid_argument("run: objective has no oracle");
  if (theta0.size() != obj.dim || set.dim() != obj.dim)
    throw ShapeError("run: dimension mismatch");
  if (!set.contains(theta0, 1e-12))
    throw std::invalid_argument("run: theta0 must be feasible");

  RunTrace trace;
  Vec theta(theta0);
  for (std::size_t k = 0; k <= iters; ++k) {
    Subgradient g;
    bool have_grad = false;
    Vec probe(theta);
    for (int attempt = 0; attempt <= 10; ++attempt) {
      try {
        g = obj.oracle(probe);
        have_grad = true;
        break;
      } catch (const KinkError&) {
        if (attempt == 10) break;
        ++trace.kink_retries;
        trace.log.push_back("kink at iterate " + std::to_string(k) +
                            ", retry " + std::to_string(attempt + 1));
        // Deterministic unit-vector perturbation of size 1e-12.
        CounterRng rng(0x6b696e6bULL + k, static_cast<std::uint64_t>(attempt));
        Vec dir(theta.size());
        double nrm = 0.0;
        do {
          for (double& d : dir) d = 2.0 * rng.next_unit() - 1.0;
          nrm = norm(dir);
        } while (nrm == 0.0);
        probe = theta;
        for (std::size_t i = 0; i < probe.size(); ++i)
          probe[i] += 1e-12 * dir[i] / nrm;
      }
    }
    if (!have_grad) {
      trace.status = "kink_failure";
      throw OptimizationError("run: persistent kink at iterate " +
                              std::to_string(k));
    }
    trace.rows.push_back(
        {k, theta, obj.value(theta), stationarity_residual(g, set, theta)});
    if (k < iters) {
      const double eta = sched.at(k);
      Vec next(theta);
      for (std::size_t i = 0; i < next.size(); ++i) next[i] -= eta * g[i];
      theta = project(set, next);
    }
  }
  return trace;
}

}  // namespace otsg

#endif  // OTSG_OPTIMIZE_HPP
