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

#ifndef OTSG_OT1D_HPP
#define OTSG_OT1D_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "otsg/errors.hpp"
#include "otsg/measures.hpp"

namespace otsg {

/// |d|^q with exact fast paths for the common exponents. All cost
/// evaluations in this module go through here so that alternate routes
/// to the same value stay bit-identical.
inline double abs_pow(double d, double q) {
  const double a = std::fabs(d);
  if (q == 1.0) return a;
  if (q == 2.0) return a * a;
  if (q == 3.0) return a * a * a;
  return std::pow(a, q);
}

/// Merged breakpoints of {k/n} and {l/m} over [0,1]. Breakpoints are
/// kept as exact fractions (denominator n or m) so that rank lookups
/// ceil(n*h) never misround; interior duplicates are retained with zero
/// increments, while the shared endpoints 0 and 1 appear once each.
struct RefinementGrid {
  struct Fraction {
    std::int64_t num;
    std::int64_t den;
    double value() const {
      return static_cast<double>(num) / static_cast<double>(den);
    }
  };

  std::vector<Fraction> breakpoints;  // h_0 = 0 <= ... <= h_last = 1
  std::vector<double> increments;     // increments[k] = h_{k+1} - h_k
  std::int64_t n = 0;
  std::int64_t m = 0;

  std::size_t segment_count() const { return increments.size(); }

  /// ceil(count * h_k) as exact integer arithmetic.
  static std::int64_t ceil_rank(std::int64_t count, const Fraction& h) {
    return (count * h.num + h.den - 1) / h.den;
  }
};

inline RefinementGrid refinement_grid(std::int64_t n, std::int64_t m) {
  if (n < 1 || m < 1)
    throw std::invalid_argument("refinement_grid: n, m >= 1");
  RefinementGrid grid;
  grid.n = n;
  grid.m = m;
  grid.breakpoints.reserve(static_cast<std::size_t>(n + m));
  // Merge {k/n, k=0..n} with {l/m, l=1..m-1}: dropping the second
  // list's endpoints removes the duplicate 0 and 1 exactly once each.
  std::int64_t k = 0, l = 1;
  while (k <= n || l <= m - 1) {
    bool take_n;
    if (k > n)
      take_n = false;
    else if (l > m - 1)
      take_n = true;
    else
      take_n = k * m <= l * n;  // k/n <= l/m, exact comparison
    if (take_n) {
      grid.breakpoints.push_back({k, n});
      ++k;
    } else {
      grid.breakpoints.push_back({l, m});
      ++l;
    }
  }
  grid.increments.resize(grid.breakpoints.size() - 1);
  for (std::size_t i = 0; i + 1 < grid.breakpoints.size(); ++i) {
    const auto& lo = grid.breakpoints[i];
    const auto& hi = grid.breakpoints[i + 1];
    if (lo.den == hi.den) {
      grid.increments[i] = static_cast<double>(hi.num - lo.num) /
                           static_cast<double>(lo.den);
    } else {
      // Exact cross difference; one correctly rounded division.
      const std::int64_t dn = hi.num * lo.den - lo.num * hi.den;
      const std::int64_t dd = hi.den * lo.den;
      grid.increments[i] = static_cast<double>(dn) / static_cast<double>(dd);
    }
  }
  return grid;
}

namespace detail {
inline void check_q(double q) {
  if (!(q >= 1.0)) throw std::invalid_argument("transport: requires q >= 1");
}
}  // namespace detail

/// Sorted-matching cost (1/n) sum |u_(i) - v_(i)|^q for equal sizes.
/// Returns the q-th power of the q-Wasserstein cost.
inline double w_equal(const EmpiricalMeasure1D& u, const EmpiricalMeasure1D& v,
                      double q) {
  detail::check_q(q);
  if (u.size() != v.size()) throw ShapeError("w_equal: sizes differ");
  const std::size_t n = u.size();
  const double inv_n = 1.0 / static_cast<double>(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    acc += abs_pow(u.order_stat(i) - v.order_stat(i), q) * inv_n;
  return acc;
}

/// Refinement-grid cost sum_k |u_(ceil(n h_k)) - v_(ceil(m h_k))|^q Delta_k
/// for arbitrary sizes; equals w_equal bit-for-bit when n = m.
inline double w_unequal(const EmpiricalMeasure1D& u,
                        const EmpiricalMeasure1D& v, double q) {
  detail::check_q(q);
  const std::int64_t n = static_cast<std::int64_t>(u.size());
  const std::int64_t m = static_cast<std::int64_t>(v.size());
  const RefinementGrid grid = refinement_grid(n, m);
  double acc = 0.0;
  for (std::size_t k = 0; k < grid.segment_count(); ++k) {
    const double delta = grid.increments[k];
    if (delta == 0.0) continue;
    const auto& h = grid.breakpoints[k + 1];
    const std::int64_t i = RefinementGrid::ceil_rank(n, h);
    const std::int64_t j = RefinementGrid::ceil_rank(m, h);
    acc += abs_pow(u.order_stat(static_cast<std::size_t>(i - 1)) -
                       v.order_stat(static_cast<std::size_t>(j - 1)),
                   q) *
           delta;
  }
  return acc;
}

/// Sparse coupling between two sample sets; indices are 1-based and
/// refer to the original (unsorted) sample order.
struct TransportPlan {
  struct Entry {
    std::int64_t i;
    std::int64_t j;
    double mass;
  };
  std::vector<Entry> entries;
  std::int64_t n = 0;
  std::int64_t m = 0;
};

/// Monotone (rank-pairing) optimal plan from the refinement grid:
/// segment k assigns mass Delta_k to the pair of ranks it covers.
inline TransportPlan monotone_plan(const EmpiricalMeasure1D& u,
                                   const EmpiricalMeasure1D& v) {
  const std::int64_t n = static_cast<std::int64_t>(u.size());
  const std::int64_t m = static_cast<std::int64_t>(v.size());
  const RefinementGrid grid = refinement_grid(n, m);
  TransportPlan plan;
  plan.n = n;
  plan.m = m;
  plan.entries.reserve(grid.segment_count());
  for (std::size_t k = 0; k < grid.segment_count(); ++k) {
    const double delta = grid.increments[k];
    if (delta == 0.0) continue;
    const auto& h = grid.breakpoints[k + 1];
    const std::int64_t ri = RefinementGrid::ceil_rank(n, h);
    const std::int64_t rj = RefinementGrid::ceil_rank(m, h);
    plan.entries.push_back(
        {static_cast<std::int64_t>(u.sort_perm()[ri - 1]) + 1,
         static_cast<std::int64_t>(v.sort_perm()[rj - 1]) + 1, delta});
  }
  return plan;
}

/// Coupling cost sum gamma_ij |u_i - v_j|^q in plan entry order.
inline double plan_cost(const TransportPlan& plan, const EmpiricalMeasure1D& u,
                        const EmpiricalMeasure1D& v, double q) {
  detail::check_q(q);
  double acc = 0.0;
  for (const auto& e : plan.entries)
    acc += abs_pow(u.values()[e.i - 1] - v.values()[e.j - 1], q) * e.mass;
  return acc;
}

/// Test oracle: evaluates int_0^1 |F_U^{-1} - F_V^{-1}|^q ds directly by
/// walking the piecewise-constant segments of both step quantile
/// functions (midpoint evaluation). Shares no code with the
/// refinement-grid route above.
inline double oracle_quantile_integral(const EmpiricalMeasure1D& u,
                                       const EmpiricalMeasure1D& v, double q) {
  detail::check_q(q);
  const double n = static_cast<double>(u.size());
  const double m = static_cast<double>(v.size());
  std::vector<double> cuts;
  cuts.reserve(u.size() + v.size() + 1);
  for (std::size_t k = 0; k <= u.size(); ++k)
    cuts.push_back(static_cast<double>(k) / n);
  for (std::size_t l = 1; l < v.size(); ++l)
    cuts.push_back(static_cast<double>(l) / m);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double acc = 0.0;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double width = cuts[s + 1] - cuts[s];
    if (width <= 0.0) continue;
    const double mid = 0.5 * (cuts[s] + cuts[s + 1]);
    acc += abs_pow(u.quantile(mid) - v.quantile(mid), q) * width;
  }
  return acc;
}

/// Test oracle: exhaustive assignment over all n! matchings, n = m <= 8.
inline double oracle_assignment(const EmpiricalMeasure1D& u,
                                const EmpiricalMeasure1D& v, double q) {
  detail::check_q(q);
  if (u.size() != v.size())
    throw CapabilityError("oracle_assignment: requires n == m");
  const std::size_t n = u.size();
  if (n > 8)
    throw CapabilityError("oracle_assignment: n <= 8 (enumeration bound)");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  const double inv_n = 1.0 / static_cast<double>(n);
  double best = std::numeric_limits<double>::infinity();
  do {
    double cost = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      cost += abs_pow(u.values()[i] - v.values()[perm[i]], q) * inv_n;
    best = std::min(best, cost);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace otsg

#endif  // OTSG_OT1D_HPP
