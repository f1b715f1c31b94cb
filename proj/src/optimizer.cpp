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

#include "mprlab/optimizer.hpp"

#include <algorithm>
#include <cmath>

#include "mprlab/attempt_stats.hpp"
#include "mprlab/backoff.hpp"
#include "mprlab/error.hpp"
#include "mprlab/scalar_search.hpp"
#include "mprlab/throughput.hpp"

namespace mprlab::design {

namespace {

constexpr int kProbeGrid = 200;

bool equal_slots(const slots::SlotDurations& s) {
  return s.t_idle == s.t_coll && s.t_coll == s.t_succ;
}

/// Coarse grid over [lo, hi], then golden section between the neighbours of the best point.
template <class F>
search::Peak grid_then_golden(F&& f, double lo, double hi, int points, double tol) {
  std::vector<double> xs(points), fs(points);
  for (int i = 0; i < points; ++i) {
    xs[i] = lo + (hi - lo) * i / (points - 1);
    fs[i] = f(xs[i]);
  }
  const auto [a, b] = search::neighbours(search::argmax(fs), xs.size());
  search::Peak peak = search::golden_section_max(f, xs[a], xs[b], tol);
  peak.lo = lo;
  peak.hi = hi;
  return peak;
}

}  // namespace

std::string_view to_string(SearchMethod m) {
  switch (m) {
    case SearchMethod::root_find: return "root-find";
    case SearchMethod::golden_section: return "golden-section";
    case SearchMethod::grid: return "grid";
  }
  return "?";
}

slots::SlotDurations unit_aloha() { return slots::aloha_slots(1.0, 1.0); }

Optimum optimal_lambda(int M, double rate) {
  if (M < 1) throw InvalidArgument("optimal_lambda: M must be >= 1");
  // first-order condition Pr{X <= M-1} - M Pr{X = M}: positive near 0,
  // nonpositive at lambda = M (zero only for M = 1)
  auto condition = [M](double lambda) {
    const auto d = stats::AttemptDistribution::poisson(lambda);
    return d.cdf(M - 1) - M * d.pmf(M);
  };
  const double hi = static_cast<double>(M);
  const search::Root root = search::bisect(condition, 0.0, hi);
  const double lambda = root.x;
  const double value = rate * lambda * stats::AttemptDistribution::poisson(lambda).cdf(M - 1);
  return {lambda, value, 0.0, hi, SearchMethod::root_find};
}

Optimum optimal_attempt_rate(int M, const slots::SlotDurations& slots, double payload_bits) {
  if (M < 1) throw InvalidArgument("optimal_attempt_rate: M must be >= 1");
  if (equal_slots(slots)) return optimal_lambda(M, payload_bits / slots.t_succ);
  auto s = [&](double lambda) {
    return throughput::throughput_asymptotic(lambda, M, slots, payload_bits).s_bits_per_sec;
  };
  const double hi = 3.0 * M + 10.0;
  const search::Peak peak = grid_then_golden(s, 0.0, hi, kProbeGrid, 1e-10);
  return {peak.x, peak.value, peak.lo, peak.hi, SearchMethod::golden_section};
}

Optimum optimal_pt(int N, int M, const slots::SlotDurations& slots, double payload_bits,
                   PtSearch opts) {
  if (N < 1 || M < 1) throw InvalidArgument("optimal_pt: N and M must be >= 1");
  if (M >= N) {
    const double s = throughput::throughput_finite(N, M, 1.0, slots, payload_bits).s_bits_per_sec;
    return {1.0, s, 0.0, 1.0, SearchMethod::grid};
  }
  auto s = [&](double p) {
    return throughput::throughput_finite(N, M, p, slots, payload_bits).s_bits_per_sec;
  };
  const search::Peak peak = grid_then_golden(s, 0.0, 1.0, kProbeGrid, opts.tolerance);
  Optimum best{peak.x, peak.value, 0.0, 1.0, SearchMethod::golden_section};
  if (!opts.polish || !(peak.x > 0.0 && peak.x < 1.0)) return best;

  auto slope = [&](double p) {
    return throughput::throughput_finite_derivative(N, M, p, slots, payload_bits);
  };
  // widen a bracket around the golden-section estimate until the slope changes sign
  for (double half = 1e-9; half < 0.5; half *= 4.0) {
    const double lo = std::max(peak.x - half, 1e-300);
    const double hi = std::min(peak.x + half, std::nextafter(1.0, 0.0));
    if (slope(lo) > 0.0 && slope(hi) < 0.0) {
      const double p = search::bisect(slope, lo, hi).x;
      const double value = s(p);
      if (value >= best.value * (1.0 - 1e-12)) best = {p, value, 0.0, 1.0, SearchMethod::root_find};
      break;
    }
  }
  return best;
}

double throughput_at_r(double r, int M, int w0, const slots::SlotDurations& slots,
                       double payload_bits, Population population) {
  if (!population.finite) {
    const double lambda = backoff::asymptotic_lambda(M, r);
    return throughput::throughput_asymptotic(lambda, M, slots, payload_bits).s_bits_per_sec;
  }
  const auto fp = backoff::solve_fixed_point(population.n, M, {w0, r});
  return throughput::throughput_finite(population.n, M, fp.p_t, slots, payload_bits)
      .s_bits_per_sec;
}

Optimum optimal_r(int M, int w0, const slots::SlotDurations& slots, double payload_bits,
                  Population population, Exec exec) {
  if (M < 1) throw InvalidArgument("optimal_r: M must be >= 1");
  if (population.finite && population.n <= M)
    throw InvalidArgument("optimal_r: a finite population needs N > M");
  auto s_of_log_r = [&](double log_r) {
    return throughput_at_r(std::exp(log_r), M, w0, slots, payload_bits, population);
  };
  const double lo = std::log(kMinBackoffFactor);
  const double hi = std::log(kMaxBackoffFactor);
  std::vector<double> xs(kBackoffGridPoints), fs(kBackoffGridPoints);
  for (int i = 0; i < kBackoffGridPoints; ++i) xs[i] = lo + (hi - lo) * i / (kBackoffGridPoints - 1);
  for_each_index(xs.size(), exec, [&](std::size_t i) { fs[i] = s_of_log_r(xs[i]); });
  const auto [a, b] = search::neighbours(search::argmax(fs), xs.size());
  const search::Peak peak = search::golden_section_max(s_of_log_r, xs[a], xs[b], 1e-10);
  return {std::exp(peak.x), peak.value, kMinBackoffFactor, kMaxBackoffFactor,
          SearchMethod::golden_section};
}

double beb_efficiency(int M, const slots::SlotDurations& slots, double payload_bits) {
  const Optimum best = optimal_r(M, 1, slots, payload_bits, Population::infinite());
  const double beb = throughput_at_r(2.0, M, 1, slots, payload_bits, Population::infinite());
  return std::min(1.0, beb / best.value);
}

std::vector<ScanRow> superlinearity_scan(int m_max, const ScanModel& model, Exec exec) {
  if (m_max < 2) throw InvalidArgument("superlinearity_scan: M_max must be >= 2");
  if (model.population.finite && model.population.n <= m_max)
    throw InvalidArgument("superlinearity_scan: a finite population needs N > M_max");
  std::vector<ScanRow> rows(static_cast<std::size_t>(m_max));
  for_each_index(rows.size(), exec, [&](std::size_t i) {
    const int M = static_cast<int>(i) + 1;
    const Optimum opt =
        model.population.finite
            ? optimal_pt(model.population.n, M, model.slots, model.payload_bits)
            : optimal_attempt_rate(M, model.slots, model.payload_bits);
    rows[i] = {M, opt.value, opt.value / M};
  });
  return rows;
}

double efficiency_limit_check(double c, int M) {
  if (!(c > 0.0)) throw InvalidArgument("efficiency_limit_check: c must be > 0");
  if (M < 1) throw InvalidArgument("efficiency_limit_check: M must be >= 1");
  return stats::AttemptDistribution::poisson(c * M).cdf(M - 1);
}

}  // namespace mprlab::design
