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

#ifndef OTSG_LINALG_HPP
#define OTSG_LINALG_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include "otsg/errors.hpp"

namespace otsg {

using Vec = std::vector<double>;

inline double dot(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw ShapeError("dot: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const Vec& a) {
  double s = 0.0;
  for (double x : a) s += x * x;
  return std::sqrt(s);
}

inline double distance(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw ShapeError("distance: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

/// y += a * x
inline void axpy(double a, const Vec& x, Vec& y) {
  if (x.size() != y.size()) throw ShapeError("axpy: size mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

inline Vec scaled(const Vec& x, double a) {
  Vec y(x);
  for (double& v : y) v *= a;
  return y;
}

inline Vec sub(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw ShapeError("sub: size mismatch");
  Vec c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] - b[i];
  return c;
}

/// Dense row-major matrix, sized once at construction.
struct Mat {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Mat() = default;
  Mat(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) {
    return data[i * cols + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return data[i * cols + j];
  }

  /// Row i as a vector copy.
  Vec row(std::size_t i) const {
    return Vec(data.begin() + static_cast<std::ptrdiff_t>(i * cols),
               data.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols));
  }
};

/// Returns A^T v for A (rows x cols), v of length rows.
inline Vec transpose_times(const Mat& a, const Vec& v) {
  if (v.size() != a.rows) throw ShapeError("transpose_times: size mismatch");
  Vec out(a.cols, 0.0);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j) out[j] += a(i, j) * v[i];
  return out;
}

/// Pairwise (cascade) summation over [first, first + count). Gives a
/// fixed association tree, so the result does not depend on how work
/// was split across threads.
inline double pairwise_sum(const double* first, std::size_t count) {
  if (count == 0) return 0.0;
  if (count <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < count; ++i) s += first[i];
    return s;
  }
  const std::size_t half = count / 2;
  return pairwise_sum(first, half) + pairwise_sum(first + half, count - half);
}

inline double pairwise_sum(const std::vector<double>& v) {
  return pairwise_sum(v.data(), v.size());
}

/// Component-wise pairwise sum of equal-length vectors.
inline Vec pairwise_sum(const std::vector<Vec>& terms) {
  if (terms.empty()) return {};
  const std::size_t dim = terms.front().size();
  Vec out(dim, 0.0);
  std::vector<double> column(terms.size());
  for (std::size_t j = 0; j < dim; ++j) {
    for (std::size_t t = 0; t < terms.size(); ++t) {
      if (terms[t].size() != dim)
        throw ShapeError("pairwise_sum: ragged term list");
      column[t] = terms[t][j];
    }
    out[j] = pairwise_sum(column);
  }
  return out;
}

}  // namespace otsg

#endif  // OTSG_LINALG_HPP
