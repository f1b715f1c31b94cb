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

// Distribution of the number of stations X that attempt a transmission in a
// backoff slot: Binomial(N, p_t) for a finite population, Poisson(lambda) in
// the large-population limit.

namespace mprlab::stats {

enum class DistributionKind { binomial, poisson };

class AttemptDistribution {
 public:
  /// Throws InvalidArgument unless n >= 1 and 0 <= p <= 1.
  static AttemptDistribution binomial(int n, double p);
  /// Throws InvalidArgument unless lambda >= 0 and finite.
  static AttemptDistribution poisson(double lambda);

  DistributionKind kind() const noexcept { return kind_; }
  int trials() const noexcept { return n_; }
  double probability() const noexcept { return p_; }
  double lambda() const noexcept { return lambda_; }
  double mean() const noexcept;

  /// Pr{X = k}; evaluated in the log domain, 0 outside the support.
  double pmf(long k) const;
  /// Pr{X <= k}; 0 for k < 0.
  double cdf(long k) const;
  /// Last k worth summing: N for binomial, the truncation point for Poisson.
  long support_end() const;

 private:
  AttemptDistribution(DistributionKind kind, int n, double p, double lambda)
      : kind_(kind), n_(n), p_(p), lambda_(lambda) {}

  DistributionKind kind_;
  int n_ = 0;
  double p_ = 0.0;
  double lambda_ = 0.0;
};

inline double pmf(const AttemptDistribution& d, long k) { return d.pmf(k); }
inline double cdf(const AttemptDistribution& d, long k) { return d.cdf(k); }

/// Tail mass left beyond the Poisson truncation point.
inline constexpr double kPoissonTailMass = 1e-15;

/// Smallest k >= lambda such that Pr{X > k} < kPoissonTailMass.
long poisson_truncation_point(double lambda);

/// Chernoff-style bounds on Pr{X <= M-1} for X ~ Poisson(lambda).
/// Below capacity (lambda < M) only the lower bound is informative and the
/// upper bound is 1; above capacity (lambda > M) the lower bound is 0.
struct TailBounds {
  double lower;
  double upper;
};

/// Throws InvalidArgument for lambda <= 0, M < 1 or lambda == M.
TailBounds poisson_tail_bounds(double lambda, int M);

/// floor(lambda); ties at integer lambda resolve to lambda itself.
long poisson_mode(double lambda);

struct MedianBounds {
  double lo;
  double hi;
};

/// lambda - ln 2 <= median <= lambda + 1/3.
MedianBounds poisson_median_bounds(double lambda);

}  // namespace mprlab::stats
