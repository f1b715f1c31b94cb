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

#include "mprlab/attempt_stats.hpp"
#include "mprlab/slot_model.hpp"

namespace mprlab::throughput {

/// Per-slot outcome probabilities for an M-packet reception channel.
struct SlotProbabilities {
  double idle;  // Pr{X = 0}
  double succ;  // Pr{1 <= X <= M}
  double coll;  // Pr{X > M}
};

/// Saturation throughput together with the renewal-reward parts it is built
/// from: expected payload delivered per backoff slot over expected slot length.
struct ThroughputResult {
  double s_bits_per_sec;
  double p_idle;
  double p_succ;
  double p_coll;
  double expected_payload_bits_per_slot;
  double expected_slot_seconds;
};

/// Throws InvalidArgument if M < 1.
SlotProbabilities slot_probabilities(const stats::AttemptDistribution& dist, int M);

/// Throughput for an arbitrary attempt distribution.
ThroughputResult throughput(const stats::AttemptDistribution& dist, int M,
                            const slots::SlotDurations& slots, double payload_bits);

/// N stations each transmitting with probability p_t.
ThroughputResult throughput_finite(int N, int M, double p_t, const slots::SlotDurations& slots,
                                   double payload_bits);

/// Poisson(lambda) attempts, the N -> infinity limit with N p_t -> lambda.
ThroughputResult throughput_asymptotic(double lambda, int M, const slots::SlotDurations& slots,
                                       double payload_bits);

/// d S / d p_t for the finite model, from the analytic pmf derivative.
double throughput_finite_derivative(int N, int M, double p_t, const slots::SlotDurations& slots,
                                    double payload_bits);

}  // namespace mprlab::throughput
