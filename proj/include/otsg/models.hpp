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

#ifndef OTSG_MODELS_HPP
#define OTSG_MODELS_HPP

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "otsg/errors.hpp"
#include "otsg/linalg.hpp"

namespace otsg {

/// Contract for a parameterized map (theta, x) -> value in R^{d'} with a
/// parameter Jacobian. Models are immutable value objects; evaluation is
/// pure. jac_theta refuses at declared kinks instead of silently picking
/// a branch; callers that need one-sided information handle the KinkError.
class ParamModel {
 public:
  virtual ~ParamModel() = default;

  virtual std::size_t param_dim() const = 0;   // p
  virtual std::size_t input_dim() const = 0;   // d
  virtual std::size_t output_dim() const = 0;  // d'

  Vec eval(const Vec& theta, const Vec& x) const {
    check_shapes(theta, x);
    return eval_impl(theta, x);
  }

  /// d' x p matrix of partial derivatives in theta.
  Mat jac_theta(const Vec& theta, const Vec& x) const {
    check_shapes(theta, x);
    if (kink_at(theta, x))
      throw KinkError("jac_theta: model has a kink at this (theta, x)");
    return jac_impl(theta, x);
  }

  virtual bool kink_at(const Vec& theta, const Vec& x) const {
    (void)theta;
    (void)x;
    return false;
  }

  /// Scalar convenience for d = d' = 1 models.
  double eval1(const Vec& theta, double x) const {
    return eval(theta, Vec{x})[0];
  }
  Vec grad1(const Vec& theta, double x) const {
    return jac_theta(theta, Vec{x}).row(0);
  }

 protected:
  virtual Vec eval_impl(const Vec& theta, const Vec& x) const = 0;
  virtual Mat jac_impl(const Vec& theta, const Vec& x) const = 0;

  void check_shapes(const Vec& theta, const Vec& x) const {
    if (theta.size() != param_dim())
      throw ShapeError("model: theta dimension mismatch");
    if (x.size() != input_dim())
      throw ShapeError("model: input dimension mismatch");
  }
};

/// f(theta, x) = x + theta on R^dim (p = d = d' = dim). Smooth.
class TranslationModel final : public ParamModel {
 public:
  explicit TranslationModel(std::size_t dim = 1) : dim_(dim) {}
  std::size_t param_dim() const override { return dim_; }
  std::size_t input_dim() const override { return dim_; }
  std::size_t output_dim() const override { return dim_; }

 protected:
  Vec eval_impl(const Vec& theta, const Vec& x) const override {
    Vec out(x);
    for (std::size_t i = 0; i < dim_; ++i) out[i] += theta[i];
    return out;
  }
  Mat jac_impl(const Vec&, const Vec&) const override {
    Mat j(dim_, dim_);
    for (std::size_t i = 0; i < dim_; ++i) j(i, i) = 1.0;
    return j;
  }

 private:
  std::size_t dim_;
};

/// f(theta, x) = A x (+ b), with theta packing A row-major and then b.
/// Smooth; p = d_out * d_in (+ d_out with bias).
class AffineModel final : public ParamModel {
 public:
  AffineModel(std::size_t d_in, std::size_t d_out, bool with_bias)
      : d_in_(d_in), d_out_(d_out), with_bias_(with_bias) {
    if (d_in < 1 || d_out < 1)
      throw std::invalid_argument("affine: dimensions >= 1");
  }
  std::size_t param_dim() const override {
    return d_out_ * d_in_ + (with_bias_ ? d_out_ : 0);
  }
  std::size_t input_dim() const override { return d_in_; }
  std::size_t output_dim() const override { return d_out_; }

 protected:
  Vec eval_impl(const Vec& theta, const Vec& x) const override {
    Vec out(d_out_, 0.0);
    for (std::size_t r = 0; r < d_out_; ++r) {
      double acc = 0.0;
      for (std::size_t c = 0; c < d_in_; ++c) acc += theta[r * d_in_ + c] * x[c];
      if (with_bias_) acc += theta[d_out_ * d_in_ + r];
      out[r] = acc;
    }
    return out;
  }
  Mat jac_impl(const Vec&, const Vec& x) const override {
    Mat j(d_out_, param_dim());
    for (std::size_t r = 0; r < d_out_; ++r) {
      for (std::size_t c = 0; c < d_in_; ++c) j(r, r * d_in_ + c) = x[c];
      if (with_bias_) j(r, d_out_ * d_in_ + r) = 1.0;
    }
    return j;
  }

 private:
  std::size_t d_in_;
  std::size_t d_out_;
  bool with_bias_;
};

/// f(theta, x) = x + relu(theta), scalar. Declared kink set: theta = 0.
class ReluShiftModel final : public ParamModel {
 public:
  std::size_t param_dim() const override { return 1; }
  std::size_t input_dim() const override { return 1; }
  std::size_t output_dim() const override { return 1; }

  bool kink_at(const Vec& theta, const Vec&) const override {
    return theta[0] == 0.0;
  }

 protected:
  Vec eval_impl(const Vec& theta, const Vec& x) const override {
    return Vec{x[0] + std::max(theta[0], 0.0)};
  }
  Mat jac_impl(const Vec& theta, const Vec&) const override {
    Mat j(1, 1);
    j(0, 0) = theta[0] > 0.0 ? 1.0 : 0.0;
    return j;
  }
};

/// f(theta, x) = x + chi(x) relu(theta) + (1 - chi(x)) theta, scalar.
/// chi is the piecewise-linear ramp with chi = 1 on (-inf, 1.5] and
/// chi = 0 on [M - 1, inf); for M > 4 the ramp misses the sample
/// support [0,1] union {M} entirely. Kink set: theta = 0 wherever
/// chi(x) != 0.
class ChiInterpolatedModel final : public ParamModel {
 public:
  explicit ChiInterpolatedModel(double m_location = 6.0) : m_(m_location) {
    if (!(m_ - 1.0 > 1.5))
      throw std::invalid_argument("chi: requires M > 2.5 for a valid ramp");
  }

  double chi(double x) const {
    if (x <= 1.5) return 1.0;
    if (x >= m_ - 1.0) return 0.0;
    return (m_ - 1.0 - x) / (m_ - 1.0 - 1.5);
  }

  double atom_location() const { return m_; }

  std::size_t param_dim() const override { return 1; }
  std::size_t input_dim() const override { return 1; }
  std::size_t output_dim() const override { return 1; }

  bool kink_at(const Vec& theta, const Vec& x) const override {
    return theta[0] == 0.0 && chi(x[0]) != 0.0;
  }

 protected:
  Vec eval_impl(const Vec& theta, const Vec& x) const override {
    const double c = chi(x[0]);
    return Vec{x[0] + c * std::max(theta[0], 0.0) + (1.0 - c) * theta[0]};
  }
  Mat jac_impl(const Vec& theta, const Vec& x) const override {
    const double c = chi(x[0]);
    Mat j(1, 1);
    j(0, 0) = (theta[0] > 0.0 ? c : 0.0) + (1.0 - c);
    return j;
  }

 private:
  double m_;
};

/// CLI model syntax: `translate`, `relu-shift`, `chi(M=6)`; also
/// `translate(d)`, `affine(dIn,dOut)` and `linear(d)` (affine without
/// bias) for vector instances.
inline std::unique_ptr<ParamModel> parse_model(std::string_view text) {
  const auto open = text.find('(');
  std::string name(text.substr(0, open));
  // trim
  while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back())))
    name.pop_back();
  while (!name.empty() &&
         std::isspace(static_cast<unsigned char>(name.front())))
    name.erase(name.begin());

  std::vector<double> args;
  if (open != std::string_view::npos) {
    const auto close = text.rfind(')');
    if (close == std::string_view::npos || close < open)
      throw ParseError("model: unbalanced parentheses in '" +
                       std::string(text) + "'");
    std::string inner(text.substr(open + 1, close - open - 1));
    std::size_t pos = 0;
    while (pos < inner.size()) {
      std::size_t next = inner.find(',', pos);
      if (next == std::string::npos) next = inner.size();
      std::string tok = inner.substr(pos, next - pos);
      const auto eq = tok.find('=');  // accept key=value (key ignored)
      if (eq != std::string::npos) tok = tok.substr(eq + 1);
      const char* start = tok.c_str();
      char* end = nullptr;
      const double v = std::strtod(start, &end);
      if (end == start)
        throw ParseError("model: bad argument '" + tok + "'");
      args.push_back(v);
      pos = next + 1;
    }
  }

  auto int_arg = [&](std::size_t idx, std::size_t fallback) -> std::size_t {
    if (idx >= args.size()) return fallback;
    if (args[idx] < 1 || args[idx] != std::floor(args[idx]))
      throw ParseError("model: expected a positive integer argument");
    return static_cast<std::size_t>(args[idx]);
  };

  if (name == "translate")
    return std::make_unique<TranslationModel>(int_arg(0, 1));
  if (name == "relu-shift") return std::make_unique<ReluShiftModel>();
  if (name == "chi")
    return std::make_unique<ChiInterpolatedModel>(args.empty() ? 6.0
                                                               : args[0]);
  if (name == "affine")
    return std::make_unique<AffineModel>(int_arg(0, 1), int_arg(1, 1), true);
  if (name == "linear")
    return std::make_unique<AffineModel>(int_arg(0, 1), 1, false);
  throw ParseError("model: unknown kind '" + name + "'");
}

}  // namespace otsg

#endif  // OTSG_MODELS_HPP
