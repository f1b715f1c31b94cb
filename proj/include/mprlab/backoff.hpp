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

// Steady state of exponential backoff over an M-packet reception channel:
// each station transmits with probability p_t and sees a collision with
// probability p_c, the two tied together by the backoff chain and by the
// attempt statistics of the other N-1 stations.

namespace mprlab::backoff {

/// Contention window W_i = r^i * w0 after i consecutive failures.
struct EBParams {
  int w0 = 32;
  double r = 2.0;

  /// Throws InvalidArgument unless w0 >= 1 and r > 1.
  void validate() const;

  bool operator==(const EBParams&) const = default;
};

struct FixedPointSolution {
  double p_t;
  double p_c;
  double n_p_t;
  double residual;  // |p_t - pt_of_pc(pc_of_pt(p_t))|
  int iterations;
};

/// Transmission probability of a station whose attempts fail with
/// probability p_c: 2(1 - r p_c) / (W0 (1 - p_c) + 1 - r p_c).
/// Throws SteadyStateUnreachable when r p_c >= 1.
double pt_of_pc(double p_c, const EBParams& eb);

/// Probability that at least M of the other N-1 stations also transmit.
double pc_of_pt(double p_t, int N, int M);

/// Unique root of the coupled system, by bisection on p_t in (0, 2/(W0+1)].
FixedPointSolution solve_fixed_point(int N, int M, const EBParams& eb);

/// Limit of N p_t as N grows: the lambda with Pr{Poisson(lambda) <= M-1} = 1 - 1/r.
/// Throws InvalidArgument for r <= 1 or M < 1.
double asymptotic_lambda(int M, double r);

}  // namespace mprlab::backoff
