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

#include "mprlab/throughput.hpp"

#include "mprlab/error.hpp"

namespace mprlab::throughput {

using stats::AttemptDistribution;

SlotProbabilities slot_probabilities(const AttemptDistribution& dist, int M) {
  if (M < 1) throw InvalidArgument("slot_probabilities: M must be >= 1");
  const double idle = dist.pmf(0);
  double succ = 0.0;
  for (long k = 1; k <= M; ++k) succ += dist.pmf(k);
  double coll = 1.0 - idle - succ;
  if (coll < 0.0) coll = 0.0;
  if (dist.kind() == stats::DistributionKind::binomial && M >= dist.trials()) coll = 0.0;
  return {idle, succ, coll};
}

ThroughputResult throughput(const AttemptDistribution& dist, int M,
                            const slots::SlotDurations& slots, double payload_bits) {
  if (!(payload_bits > 0.0)) throw InvalidArgument("throughput: payload must be > 0");
  const SlotProbabilities p = slot_probabilities(dist, M);
  double delivered = 0.0;
  for (long k = 1; k <= M; ++k) delivered += static_cast<double>(k) * dist.pmf(k);
  const double bits = payload_bits * delivered;
  const double length = p.idle * slots.t_idle + p.coll * slots.t_coll + p.succ * slots.t_succ;
  return {bits / length, p.idle, p.succ, p.coll, bits, length};
}

ThroughputResult throughput_finite(int N, int M, double p_t, const slots::SlotDurations& slots,
                                   double payload_bits) {
  return throughput(AttemptDistribution::binomial(N, p_t), M, slots, payload_bits);
}

ThroughputResult throughput_asymptotic(double lambda, int M, const slots::SlotDurations& slots,
                                       double payload_bits) {
  if (M < 1) throw InvalidArgument("throughput_asymptotic: M must be >= 1");
  const auto dist = AttemptDistribution::poisson(lambda);
  ThroughputResult r = throughput(dist, M, slots, payload_bits);
  // sum_{k=1}^{M} k pmf(k) = lambda Pr{X <= M-1}; use the closed form for the numerator.
  r.expected_payload_bits_per_slot = payload_bits * lambda * dist.cdf(M - 1);
  r.s_bits_per_sec = r.expected_payload_bits_per_slot / r.expected_slot_seconds;
  return r;
}

double throughput_finite_derivative(int N, int M, double p_t, const slots::SlotDurations& slots,
                                    double payload_bits) {
  if (!(p_t > 0.0 && p_t < 1.0))
    throw InvalidArgument("throughput_finite_derivative: p_t must lie in (0, 1)");
  const auto dist = AttemptDistribution::binomial(N, p_t);
  const double q = 1.0 - p_t;
  // d pmf(k) / dp = pmf(k) (k / p - (N - k) / (1 - p))
  auto dpmf = [&](long k) {
    return dist.pmf(k) * (static_cast<double>(k) / p_t - static_cast<double>(N - k) / q);
  };
  double a = 0.0, da = 0.0, ps = 0.0, dps = 0.0;
  const long top = M < N ? M : N;
  for (long k = 1; k <= top; ++k) {
    const double pk = dist.pmf(k);
    const double dk = dpmf(k);
    a += static_cast<double>(k) * pk;
    da += static_cast<double>(k) * dk;
    ps += pk;
    dps += dk;
  }
  const double p0 = dist.pmf(0);
  const double dp0 = dpmf(0);
  const double pc = M >= N ? 0.0 : 1.0 - p0 - ps;
  const double dpc = M >= N ? 0.0 : -dp0 - dps;
  const double d = slots.t_idle * p0 + slots.t_succ * ps + slots.t_coll * pc;
  const double dd = slots.t_idle * dp0 + slots.t_succ * dps + slots.t_coll * dpc;
  return payload_bits * (da * d - a * dd) / (d * d);
}

}  // namespace mprlab::throughput
