// Copyright 2026 The mlcompat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "mlcompat/error.hpp"
#include "mlcompat/matrix.hpp"

namespace mlcompat {

namespace detail {

// MATLAB reduction shape: a vector collapses to 1x1, a matrix reduces each
// column to one entry of a 1xcols row. NaN is skipped unless the whole slice
// is NaN.
template <typename Better>
Matrix reduce_ignoring_nan(const Matrix& m, Better better) {
  if (m.empty()) throw EmptyInput();
  auto reduce = [&](auto&& at, std::size_t n) {
    double best = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < n; ++i) {
      const double v = at(i);
      if (std::isnan(v)) continue;
      if (std::isnan(best) || better(v, best)) best = v;
    }
    return best;
  };
  if (m.is_vector()) {
    const auto d = m.data();
    return Matrix(1, 1, reduce([&](std::size_t i) { return d[i]; }, d.size()));
  }
  Matrix out(1, m.cols());
  for (std::size_t c = 0; c < m.cols(); ++c)
    out(0, c) = reduce([&](std::size_t r) { return m(r, c); }, m.rows());
  return out;
}

}  // namespace detail

/// MATLAB `max(m)`. Throws EmptyInput for an empty matrix.
inline Matrix mx_max(const Matrix& m) {
  return detail::reduce_ignoring_nan(m, [](double a, double b) { return a > b; });
}

/// MATLAB `min(m)`.
inline Matrix mx_min(const Matrix& m) {
  return detail::reduce_ignoring_nan(m, [](double a, double b) { return a < b; });
}

/// MATLAB `find(m)`: 1-based column-major linear indices of nonzero entries,
/// as a row for row-vector input and a column otherwise.
inline Matrix mx_find(const Matrix& m) {
  std::vector<double> idx;
  for (std::size_t c = 0; c < m.cols(); ++c)
    for (std::size_t r = 0; r < m.rows(); ++r)
      if (m(r, c) != 0.0) idx.push_back(static_cast<double>(c * m.rows() + r + 1));
  const auto n = idx.size();
  if (m.rows() == 1) return Matrix(1, n, std::move(idx));
  return Matrix(n, 1, std::move(idx));
}

}  // namespace mlcompat
