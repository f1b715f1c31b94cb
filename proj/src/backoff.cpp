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

#include "mprlab/backoff.hpp"

#include <cmath>

#include "mprlab/attempt_stats.hpp"
#include "mprlab/error.hpp"
#include "mprlab/scalar_search.hpp"

namespace mprlab::backoff {

namespace {
constexpr double kResidualTol = 1e-12;
}

void EBParams::validate() const {
  if (w0 < 1) throw InvalidArgument("EBParams: w0 must be >= 1");
  if (!(r > 1.0) || !std::isfinite(r)) throw InvalidArgument("EBParams: r must be > 1");
}

double pt_of_pc(double p_c, const EBParams& eb) {
  eb.validate();
  if (!(p_c >= 0.0 && p_c <= 1.0)) throw InvalidArgument("pt_of_pc: p_c must lie in [0, 1]");
  const double slack = 1.0 - eb.r * p_c;
  if (!(slack > 0.0))
    throw SteadyStateUnreachable("pt_of_pc: r * p_c >= 1, backoff has no steady state");
  return 2.0 * slack / (eb.w0 * (1.0 - p_c) + slack);
}

double pc_of_pt(double p_t, int N, int M) {
  if (N < 1 || M < 1) throw InvalidArgument("pc_of_pt: N and M must be >= 1");
  if (!(p_t >= 0.0 && p_t <= 1.0)) throw InvalidArgument("pc_of_pt: p_t must lie in [0, 1]");
  if (M >= N || p_t == 0.0) return 0.0;
  if (N == 1) return 0.0;
  const auto others = stats::AttemptDistribution::binomial(N - 1, p_t);
  const double pc = 1.0 - others.cdf(M - 1);
  return pc < 0.0 ? 0.0 : pc;
}

FixedPointSolution solve_fixed_point(int N, int M, const EBParams& eb) {
  eb.validate();
  if (N < 1 || M < 1) throw InvalidArgument("solve_fixed_point: N and M must be >= 1");
  const double p_max = 2.0 / (eb.w0 + 1.0);
  if (M >= N) return {p_max, 0.0, N * p_max, 0.0, 0};

  // p - pt_of_pc(pc_of_pt(p)) is increasing in p. Past the r p_c = 1 boundary
  // pt_of_pc has shrunk to 0, so the residual there is just p > 0.
  auto residual = [&](double p) {
    const double pc = pc_of_pt(p, N, M);
    if (eb.r * pc >= 1.0) return p;
    return p - pt_of_pc(pc, eb);
  };
  const search::Root root = search::bisect(residual, 0.0, p_max);
  // take whichever bracket end sits on the feasible side
  double p = root.x;
  if (eb.r * pc_of_pt(p, N, M) >= 1.0) p = root.lo;
  const double pc = pc_of_pt(p, N, M);
  if (eb.r * pc >= 1.0)
    throw SteadyStateUnreachable("solve_fixed_point: every candidate p_t forces r * p_c >= 1");
  const double res = std::abs(p - pt_of_pc(pc, eb));
  if (!(res < kResidualTol))
    throw SteadyStateUnreachable("solve_fixed_point: bisection did not reach the residual tolerance");
  return {p, pc, N * p, res, root.iterations};
}

double asymptotic_lambda(int M, double r) {
  if (M < 1) throw InvalidArgument("asymptotic_lambda: M must be >= 1");
  if (!(r > 1.0) || !std::isfinite(r)) throw InvalidArgument("asymptotic_lambda: r must be > 1");
  const double target = 1.0 - 1.0 / r;
  auto excess = [&](double lambda) {
    return stats::AttemptDistribution::poisson(lambda).cdf(M - 1) - target;
  };
  double hi = static_cast<double>(M);
  while (excess(hi) > 0.0) hi *= 2.0;
  return search::bisect(excess, 0.0, hi).x;
}

}  // namespace mprlab::backoff
