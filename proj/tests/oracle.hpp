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

// Reference values computed without the library: Boost.Math distributions,
// Boost root finders and brute-force enumeration.

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/poisson.hpp>
#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <cstdint>
#include <utility>

namespace oracle {

inline double poisson_pmf(double lambda, long k) {
  return boost::math::pdf(boost::math::poisson_distribution<>(lambda), static_cast<double>(k));
}

inline double poisson_cdf(double lambda, long k) {
  if (k < 0) return 0.0;
  return boost::math::cdf(boost::math::poisson_distribution<>(lambda), static_cast<double>(k));
}

inline double binomial_pmf(int n, double p, long k) {
  if (k < 0 || k > n) return 0.0;
  return boost::math::pdf(boost::math::binomial_distribution<>(n, p), static_cast<double>(k));
}

inline double binomial_cdf(int n, double p, long k) {
  if (k < 0) return 0.0;
  if (k >= n) return 1.0;
  return boost::math::cdf(boost::math::binomial_distribution<>(n, p), static_cast<double>(k));
}

/// Root of f on [lo, hi] by TOMS 748 to full precision.
template <class F>
double root(F f, double lo, double hi) {
  boost::math::tools::eps_tolerance<double> tol(52);
  std::uintmax_t iters = 500;
  const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, tol, iters);
  return 0.5 * (a + b);
}

/// Maximizer of lambda Pr{Poisson(lambda) <= M-1}, from its first-order condition.
inline double optimal_lambda(int M) {
  if (M == 1) return 1.0;
  return root([M](double l) { return poisson_cdf(l, M - 1) - M * poisson_pmf(l, M); }, 1e-6,
              static_cast<double>(M));
}

/// lambda with Pr{Poisson(lambda) <= M-1} = 1 - 1/r.
inline double asymptotic_lambda(int M, double r) {
  const double target = 1.0 - 1.0 / r;
  double hi = M;
  while (poisson_cdf(hi, M - 1) > target) hi *= 2;
  return root([&](double l) { return poisson_cdf(l, M - 1) - target; }, 1e-12, hi);
}

/// Throughput by summing over every transmit pattern of N stations.
inline double brute_force_throughput(int N, int M, double p, double t_idle, double t_coll,
                                     double t_succ, double L) {
  double num = 0.0, den = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << N); ++mask) {
    const int k = __builtin_popcount(mask);
    const double prob = std::pow(p, k) * std::pow(1.0 - p, N - k);
    if (k == 0) {
      den += prob * t_idle;
    } else if (k <= M) {
      num += prob * k * L;
      den += prob * t_succ;
    } else {
      den += prob * t_coll;
    }
  }
  return num / den;
}

/// Normalized slotted-ALOHA throughput lambda Pr{X <= M-1}.
inline double aloha_asymptotic(double lambda, int M) { return lambda * poisson_cdf(lambda, M - 1); }

}  // namespace oracle
