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

#include "mprlab/attempt_stats.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "mprlab/error.hpp"

namespace mprlab::stats {

namespace {

double log_factorial(long k) { return std::lgamma(static_cast<double>(k) + 1.0); }

double binomial_pmf(int n, double p, long k) {
  if (k < 0 || k > n) return 0.0;
  if (p == 0.0) return k == 0 ? 1.0 : 0.0;
  if (p == 1.0) return k == n ? 1.0 : 0.0;
  const double log_choose = log_factorial(n) - log_factorial(k) - log_factorial(n - k);
  const double kd = static_cast<double>(k);
  return std::exp(log_choose + kd * std::log(p) + (n - kd) * std::log1p(-p));
}

double poisson_pmf(double lambda, long k) {
  if (k < 0) return 0.0;
  if (lambda == 0.0) return k == 0 ? 1.0 : 0.0;
  const double kd = static_cast<double>(k);
  return std::exp(kd * std::log(lambda) - lambda - log_factorial(k));
}

}  // namespace

AttemptDistribution AttemptDistribution::binomial(int n, double p) {
  if (n < 1) throw InvalidArgument("binomial: N must be >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("binomial: p_t must lie in [0, 1]");
  return AttemptDistribution(DistributionKind::binomial, n, p, 0.0);
}

AttemptDistribution AttemptDistribution::poisson(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw InvalidArgument("poisson: lambda must be finite and >= 0");
  return AttemptDistribution(DistributionKind::poisson, 0, 0.0, lambda);
}

double AttemptDistribution::mean() const noexcept {
  return kind_ == DistributionKind::binomial ? n_ * p_ : lambda_;
}

double AttemptDistribution::pmf(long k) const {
  return kind_ == DistributionKind::binomial ? binomial_pmf(n_, p_, k) : poisson_pmf(lambda_, k);
}

double AttemptDistribution::cdf(long k) const {
  if (k < 0) return 0.0;
  const long last = support_end();
  if (k >= last && kind_ == DistributionKind::binomial) return 1.0;
  const long stop = k < last ? k : last;
  double sum = 0.0;
  for (long j = 0; j <= stop; ++j) sum += pmf(j);
  return sum > 1.0 ? 1.0 : sum;
}

long AttemptDistribution::support_end() const {
  return kind_ == DistributionKind::binomial ? n_ : poisson_truncation_point(lambda_);
}

long poisson_truncation_point(double lambda) {
  if (!(lambda >= 0.0)) throw InvalidArgument("poisson_truncation_point: lambda must be >= 0");
  if (lambda == 0.0) return 0;
  // Past the mode the pmf ratio lambda/(j+1) is < 1, so the tail beyond k is
  // bounded by pmf(k+1) / (1 - lambda/(k+2)).
  long k = static_cast<long>(std::ceil(lambda));
  for (;; ++k) {
    const double next = poisson_pmf(lambda, k + 1);
    const double ratio = lambda / static_cast<double>(k + 2);
    if (ratio < 1.0 && next / (1.0 - ratio) < kPoissonTailMass) return k;
  }
}

TailBounds poisson_tail_bounds(double lambda, int M) {
  if (!(lambda > 0.0)) throw InvalidArgument("poisson_tail_bounds: lambda must be > 0");
  if (M < 1) throw InvalidArgument("poisson_tail_bounds: M must be >= 1");
  const double m = static_cast<double>(M);
  if (lambda == m) throw InvalidArgument("poisson_tail_bounds: bound degenerates at lambda == M");
  // (lambda/M)^M e^{M - lambda}, evaluated as exp(M ln(lambda/M) + M - lambda)
  const double chernoff = std::exp(m * std::log(lambda / m) + m - lambda);
  if (lambda < m) return {1.0 - chernoff, 1.0};
  return {0.0, chernoff};
}

long poisson_mode(double lambda) {
  if (!(lambda > 0.0)) throw InvalidArgument("poisson_mode: lambda must be > 0");
  return static_cast<long>(std::floor(lambda));
}

MedianBounds poisson_median_bounds(double lambda) {
  if (!(lambda > 0.0)) throw InvalidArgument("poisson_median_bounds: lambda must be > 0");
  return {lambda - std::numbers::ln2, lambda + 1.0 / 3.0};
}

}  // namespace mprlab::stats
