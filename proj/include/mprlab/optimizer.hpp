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

// Optimal attempt rates, transmission probabilities and backoff factors, plus
// the scans used to check super-linear throughput scaling.

#include <string_view>
#include <vector>

#include "mprlab/parallel.hpp"
#include "mprlab/slot_model.hpp"

namespace mprlab::design {

enum class SearchMethod { root_find, golden_section, grid };

std::string_view to_string(SearchMethod m);

struct Optimum {
  double argument;  // p_t*, lambda* or r*
  double value;     // throughput at the argument
  double lo;        // search interval
  double hi;
  SearchMethod method;
};

/// Finite population of N stations, or the Poisson limit.
struct Population {
  bool finite = false;
  int n = 0;

  static Population infinite() { return {}; }
  static Population of(int n) { return {true, n}; }
};

/// Normalized slotted ALOHA: L = R = 1, so throughput is S / R.
slots::SlotDurations unit_aloha();

/// lambda* in (0, M] solving Pr{X <= M-1} = M Pr{X = M} for Poisson X, which is
/// the maximizer of the slotted-ALOHA throughput R lambda Pr{X <= M-1}.
/// value = rate * lambda* Pr{X <= M-1}.
Optimum optimal_lambda(int M, double rate = 1.0);

/// Attempt rate maximizing the asymptotic throughput over general slots.
Optimum optimal_attempt_rate(int M, const slots::SlotDurations& slots, double payload_bits);

struct PtSearch {
  double tolerance = 1e-10;
  /// Refine the golden-section estimate by bisection on dS/dp_t.
  bool polish = true;
};

/// p_t* maximizing the N-station throughput. M >= N returns p_t* = 1.
Optimum optimal_pt(int N, int M, const slots::SlotDurations& slots, double payload_bits,
                   PtSearch opts = {});

/// Throughput reached by exponential backoff with factor r: through the
/// asymptotic attempt rate for an infinite population, through the fixed
/// point for N stations.
double throughput_at_r(double r, int M, int w0, const slots::SlotDurations& slots,
                       double payload_bits, Population population);

inline constexpr double kMinBackoffFactor = 1.05;
inline constexpr double kMaxBackoffFactor = 64.0;
inline constexpr int kBackoffGridPoints = 160;

/// r* > 1: grid over log r in [log 1.05, log 64], refined by golden section.
/// The grid evaluation is the parallel kernel.
Optimum optimal_r(int M, int w0, const slots::SlotDurations& slots, double payload_bits,
                  Population population, Exec exec = Exec::serial);

/// S(r = 2) / S(r*) for the infinite population.
double beb_efficiency(int M, const slots::SlotDurations& slots, double payload_bits);

struct ScanModel {
  Population population = Population::infinite();
  slots::SlotDurations slots = unit_aloha();
  double payload_bits = 1.0;
};

struct ScanRow {
  int M;
  double s_star;
  double s_star_per_m;
};

/// (M, S*(M), S*(M)/M) for M = 1..m_max; rows evaluated independently.
std::vector<ScanRow> superlinearity_scan(int m_max, const ScanModel& model = {},
                                         Exec exec = Exec::serial);

/// S(M, cM) / (cM R) = Pr{Poisson(cM) <= M-1}.
double efficiency_limit_check(double c, int M);

}  // namespace mprlab::design
