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

#ifndef OTSG_MEASURES_HPP
#define OTSG_MEASURES_HPP

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "otsg/errors.hpp"
#include "otsg/linalg.hpp"
#include "otsg/rng.hpp"

namespace otsg {

/// Uniformly weighted point cloud on the real line with a cached stable
/// ordering. Immutable after construction; safe to share across threads.
class EmpiricalMeasure1D {
 public:
  explicit EmpiricalMeasure1D(std::vector<double> values)
      : values_(std::move(values)), sort_perm_(values_.size()) {
    if (values_.empty())
      throw std::invalid_argument("EmpiricalMeasure1D: need at least 1 point");
    std::iota(sort_perm_.begin(), sort_perm_.end(), std::uint32_t{0});
    // Stable: ties keep original index order.
    std::stable_sort(sort_perm_.begin(), sort_perm_.end(),
                     [&](std::uint32_t a, std::uint32_t b) {
                       return values_[a] < values_[b];
                     });
  }

  std::size_t size() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }

  /// sort_perm[rank] = original index of the rank-th smallest value
  /// (ranks are 0-based here).
  const std::vector<std::uint32_t>& sort_perm() const { return sort_perm_; }

  /// k-th order statistic, 0-based: order_stat(0) is the minimum.
  double order_stat(std::size_t k) const { return values_[sort_perm_[k]]; }

  std::vector<double> sorted_values() const {
    std::vector<double> out(values_.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = order_stat(k);
    return out;
  }

  /// Step quantile function: F^{-1}(s) = value of rank ceil(n*s), with
  /// s = 0 mapped to the minimum.
  double quantile(double s) const {
    if (!(s >= 0.0 && s <= 1.0))
      throw std::domain_error("quantile: s must lie in [0,1]");
    const std::size_t n = values_.size();
    std::size_t k = 1;
    if (s > 0.0) {
      k = static_cast<std::size_t>(std::ceil(static_cast<double>(n) * s));
      if (k < 1) k = 1;
      if (k > n) k = n;
    }
    return order_stat(k - 1);
  }

 private:
  std::vector<double> values_;
  std::vector<std::uint32_t> sort_perm_;
};

/// Point cloud in R^d, uniform weights, original order preserved.
class EmpiricalMeasureD {
 public:
  EmpiricalMeasureD(std::vector<Vec> points, std::size_t dim)
      : points_(std::move(points)), dim_(dim) {
    if (points_.empty())
      throw std::invalid_argument("EmpiricalMeasureD: need at least 1 point");
    if (dim_ < 1) throw std::invalid_argument("EmpiricalMeasureD: dim >= 1");
    for (const auto& p : points_)
      if (p.size() != dim_)
        throw ShapeError("EmpiricalMeasureD: point dimension mismatch");
  }

  std::size_t size() const { return points_.size(); }
  std::size_t dim() const { return dim_; }
  const std::vector<Vec>& points() const { return points_; }

 private:
  std::vector<Vec> points_;
  std::size_t dim_;
};

/// 1D projection along a unit vector; index order of the points is kept.
inline EmpiricalMeasure1D project(const EmpiricalMeasureD& m, const Vec& phi) {
  if (phi.size() != m.dim())
    throw ShapeError("project: direction dimension mismatch");
  if (std::fabs(norm(phi) - 1.0) > 1e-12)
    throw std::invalid_argument("project: phi must be a unit vector");
  std::vector<double> vals(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) vals[i] = dot(phi, m.points()[i]);
  return EmpiricalMeasure1D(std::move(vals));
}

/// Reference distributions the experiments sample from. Values are
/// immutable; draw* take the generator explicitly so sampling holds no
/// global state.
class SourceDistribution {
 public:
  enum class Kind { kUniform, kDirac, kMixture, kUniformSphere, kCustom };

  static SourceDistribution uniform(double a, double b) {
    if (!(a < b)) throw std::invalid_argument("uniform: requires a < b");
    SourceDistribution d(Kind::kUniform);
    d.a_ = a;
    d.b_ = b;
    return d;
  }

  static SourceDistribution dirac(double m) {
    SourceDistribution d(Kind::kDirac);
    d.a_ = m;
    return d;
  }

  static SourceDistribution mixture(
      std::vector<std::pair<double, SourceDistribution>> components) {
    if (components.empty())
      throw std::invalid_argument("mixture: needs at least one component");
    double total = 0.0;
    for (const auto& [w, comp] : components) {
      if (w < 0.0) throw std::invalid_argument("mixture: negative weight");
      if (comp.dim() != 1)
        throw std::invalid_argument("mixture: components must be scalar");
      total += w;
    }
    if (std::fabs(total - 1.0) > 1e-12)
      throw std::invalid_argument("mixture: weights must sum to 1");
    SourceDistribution d(Kind::kMixture);
    d.components_ =
        std::make_shared<std::vector<std::pair<double, SourceDistribution>>>(
            std::move(components));
    return d;
  }

  static SourceDistribution unit_sphere(std::size_t dim) {
    if (dim < 1) throw std::invalid_argument("sphere: dim >= 1");
    SourceDistribution d(Kind::kUniformSphere);
    d.dim_ = dim;
    return d;
  }

  static SourceDistribution custom(std::vector<double> samples) {
    if (samples.empty()) throw std::invalid_argument("custom: empty support");
    SourceDistribution d(Kind::kCustom);
    d.samples_ = std::make_shared<std::vector<double>>(std::move(samples));
    return d;
  }

  Kind kind() const { return kind_; }

  /// Output dimension: 1 for scalar kinds, d for the sphere.
  std::size_t dim() const {
    return kind_ == Kind::kUniformSphere ? dim_ : std::size_t{1};
  }

  double draw1(CounterRng& rng) const {
    switch (kind_) {
      case Kind::kUniform:
        return rng.next_uniform(a_, b_);
      case Kind::kDirac:
        return a_;
      case Kind::kMixture: {
        const double u = rng.next_unit();
        double acc = 0.0;
        const auto& comps = *components_;
        for (std::size_t c = 0; c < comps.size(); ++c) {
          acc += comps[c].first;
          if (u < acc || c + 1 == comps.size())
            return comps[c].second.draw1(rng);
        }
        return comps.back().second.draw1(rng);
      }
      case Kind::kCustom: {
        const auto& s = *samples_;
        std::size_t idx =
            static_cast<std::size_t>(rng.next_unit() * s.size());
        if (idx >= s.size()) idx = s.size() - 1;
        return s[idx];
      }
      case Kind::kUniformSphere:
        throw ShapeError("draw1: sphere distribution is multivariate");
    }
    throw std::invalid_argument("draw1: unknown distribution kind");
  }

  Vec drawv(CounterRng& rng) const {
    if (kind_ != Kind::kUniformSphere) return Vec{draw1(rng)};
    Vec p(dim_);
    double nrm = 0.0;
    do {
      for (auto& x : p) x = rng.next_normal();
      nrm = norm(p);
    } while (nrm == 0.0);
    for (auto& x : p) x /= nrm;
    return p;
  }

 private:
  explicit SourceDistribution(Kind k) : kind_(k) {}

  Kind kind_;
  double a_ = 0.0, b_ = 0.0;  // uniform bounds / dirac location
  std::size_t dim_ = 1;
  std::shared_ptr<std::vector<std::pair<double, SourceDistribution>>>
      components_;
  std::shared_ptr<std::vector<double>> samples_;
};

/// n i.i.d. scalar draws. Draw i uses substream (seed, i), so the output
/// is bit-identical regardless of evaluation order or thread count.
inline EmpiricalMeasure1D sample_1d(const SourceDistribution& dist,
                                    std::size_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_1d: n >= 1");
  if (dist.dim() != 1)
    throw ShapeError("sample_1d: distribution is multivariate");
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) {
    CounterRng rng(seed, i);
    values[i] = dist.draw1(rng);
  }
  return EmpiricalMeasure1D(std::move(values));
}

inline EmpiricalMeasureD sample_nd(const SourceDistribution& dist,
                                   std::size_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_nd: n >= 1");
  std::vector<Vec> points(n);
  for (std::size_t i = 0; i < n; ++i) {
    CounterRng rng(seed, i);
    points[i] = dist.drawv(rng);
  }
  return EmpiricalMeasureD(std::move(points), dist.dim());
}

// ---------------------------------------------------------------------------
// Compact text syntax: unif(0,1), dirac(6), sphere(3), custom(1,2,3),
// mix(0.75*unif(0,1)+0.25*dirac(6)).

namespace detail {

class DistParser {
 public:
  explicit DistParser(std::string_view text) : text_(text) {}

  SourceDistribution parse() {
    SourceDistribution d = parse_dist();
    skip_ws();
    if (pos_ != text_.size())
      throw ParseError("distribution: trailing input at '" + rest() + "'");
    return d;
  }

 private:
  SourceDistribution parse_dist() {
    skip_ws();
    const std::string name = parse_ident();
    expect('(');
    if (name == "unif" || name == "uniform") {
      const double a = parse_number();
      expect(',');
      const double b = parse_number();
      expect(')');
      return SourceDistribution::uniform(a, b);
    }
    if (name == "dirac") {
      const double m = parse_number();
      expect(')');
      return SourceDistribution::dirac(m);
    }
    if (name == "sphere") {
      const double d = parse_number();
      expect(')');
      if (d < 1 || d != std::floor(d))
        throw ParseError("sphere: dimension must be a positive integer");
      return SourceDistribution::unit_sphere(static_cast<std::size_t>(d));
    }
    if (name == "custom") {
      std::vector<double> samples{parse_number()};
      skip_ws();
      while (peek() == ',') {
        ++pos_;
        samples.push_back(parse_number());
        skip_ws();
      }
      expect(')');
      return SourceDistribution::custom(std::move(samples));
    }
    if (name == "mix") {
      std::vector<std::pair<double, SourceDistribution>> comps;
      for (;;) {
        const double w = parse_number();
        expect('*');
        comps.emplace_back(w, parse_dist());
        skip_ws();
        if (peek() == '+') {
          ++pos_;
          continue;
        }
        break;
      }
      expect(')');
      return SourceDistribution::mixture(std::move(comps));
    }
    throw ParseError("distribution: unknown kind '" + name + "'");
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void expect(char c) {
    skip_ws();
    if (peek() != c)
      throw ParseError(std::string("distribution: expected '") + c +
                       "' at '" + rest() + "'");
    ++pos_;
  }

  std::string parse_ident() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalpha(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_'))
      ++pos_;
    if (pos_ == start)
      throw ParseError("distribution: expected a name at '" + rest() + "'");
    return std::string(text_.substr(start, pos_ - start));
  }

  double parse_number() {
    skip_ws();
    const std::string tail(text_.substr(pos_));
    const char* start = tail.c_str();
    char* end = nullptr;
    const double v = std::strtod(start, &end);
    if (end == start)
      throw ParseError("distribution: expected a number at '" + rest() + "'");
    pos_ += static_cast<std::size_t>(end - start);
    return v;
  }

  std::string rest() const {
    return std::string(text_.substr(std::min(pos_, text_.size())));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline SourceDistribution parse_distribution(std::string_view text) {
  return detail::DistParser(text).parse();
}

}  // namespace otsg

#endif  // OTSG_MEASURES_HPP
