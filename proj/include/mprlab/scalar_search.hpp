/*
 * Copyright 2026 The mprlab Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

     http://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.

*/

#pragma once

// Bracketed scalar root finding and maximization.

#include <cmath>
#include <cstddef>
#include <span>
#include <utility>

#include "mprlab/error.hpp"

namespace mprlab::search {

struct Root {
  double x;
  double lo;
  double hi;
  int iterations;
};

/// Bisection for a sign change of f on [lo, hi]. Stops when the bracket is
/// narrower than tol or stops shrinking in floating point. f(lo) and f(hi)
/// must not share a strict sign.
template <class F>
Root bisect(F&& f, double lo, double hi, double tol = 0.0, int max_iter = 400) {
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return {lo, lo, lo, 0};
  if (fhi == 0.0) return {hi, hi, hi, 0};
  if ((flo > 0.0) == (fhi > 0.0)) throw InvalidArgument("bisect: bracket has no sign change");
  int it = 0;
  for (; it < max_iter; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi || hi - lo <= tol) break;
    const double fm = f(mid);
    if (fm == 0.0) return {mid, mid, mid, it + 1};
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return {0.5 * (lo + hi), lo, hi, it};
}

struct Peak {
  double x;
  double value;
  double lo;
  double hi;
};

/// Golden-section search for the maximum of a unimodal f on [lo, hi].
template <class F>
Peak golden_section_max(F&& f, double lo, double hi, double tol = 1e-10, int max_iter = 500) {
  constexpr double inv_phi = 0.6180339887498948482;
  const double a0 = lo, b0 = hi;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < max_iter && (b - a) > tol; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  Peak best = fc >= fd ? Peak{c, fc, a0, b0} : Peak{d, fd, a0, b0};
  // the interior estimate must beat the endpoints, otherwise the maximum is on the boundary
  const double fa = f(a0), fb = f(b0);
  if (fa > best.value) best = {a0, fa, a0, b0};
  if (fb > best.value) best = {b0, fb, a0, b0};
  return best;
}

/// Index of the largest value (first one on ties).
inline std::size_t argmax(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[best]) best = i;
  return best;
}

/// Neighbours of grid point i, clamped to the grid.
inline std::pair<std::size_t, std::size_t> neighbours(std::size_t i, std::size_t n) {
  return {i == 0 ? 0 : i - 1, i + 1 >= n ? n - 1 : i + 1};
}

}  // namespace mprlab::search
