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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "mprlab/attempt_stats.hpp"
#include "mprlab/backoff.hpp"
#include "mprlab/mac_sim.hpp"
#include "mprlab/optimizer.hpp"
#include "mprlab/parallel.hpp"
#include "mprlab/phy.hpp"
#include "mprlab/throughput.hpp"
#include "oracle.hpp"

using namespace mprlab;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " [" << what << "]";
    }
  }
};

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<void(Outcome&)> body;
};

const slots::SlotDurations kUnit = design::unit_aloha();
const slots::PhyTimings kTimings;

void classical_optimum(Outcome& o) {
  const auto opt = design::optimal_lambda(1);
  o.detail << "lambda*=" << opt.argument << " S*/R=" << opt.value;
  o.require(std::abs(opt.argument - 1.0) < 1e-9, "lambda* != 1");
  o.require(std::abs(opt.value - std::exp(-1.0)) < 1e-9, "S*/R != 1/e");
}

void superlinearity(Outcome& o) {
  const auto rows = design::superlinearity_scan(50, {}, Exec::parallel);
  bool mono = true, strict = true;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    mono = mono && rows[i].s_star_per_m >= rows[i - 1].s_star_per_m;
    strict = strict && rows[i].s_star_per_m > rows[i - 1].s_star_per_m;
  }
  const double phi = (1 + std::sqrt(5.0)) / 2;
  const double want2 = oracle::aloha_asymptotic(phi, 2) / 2;
  o.detail << "S*(1)=" << rows[0].s_star_per_m << " S*(2)/2=" << rows[1].s_star_per_m
           << " (oracle " << want2 << ") strict=" << strict;
  o.require(mono, "S*/M not nondecreasing");
  o.require(std::abs(rows[0].s_star_per_m - 0.367879) < 1e-6, "S*(1)");
  o.require(std::abs(rows[1].s_star_per_m - want2) < 1e-3, "S*(2)/2 vs oracle");
  o.require(std::abs(rows[1].s_star_per_m - 0.4200) < 1e-3, "S*(2)/2");
}

void finite_superlinearity(Outcome& o) {
  design::ScanModel model;
  model.population = design::Population::of(40);
  std::vector<double> per(40, 0.0);
  for_each_index(39, Exec::parallel, [&](std::size_t i) {
    const int M = static_cast<int>(i) + 1;
    per[M] = design::optimal_pt(40, M, kUnit, 1, {1e-10, false}).value / M;
  });
  bool mono = true, strict = true;
  for (int M = 2; M <= 39; ++M) {
    mono = mono && per[M] >= per[M - 1];
    strict = strict && per[M] > per[M - 1];
  }
  o.detail << "S*(1)=" << per[1] << " S*(39)/39=" << per[39] << " strict=" << strict;
  o.require(mono, "S*_N/M not nondecreasing");
}

void efficiency_limits(Outcome& o) {
  const double a = design::efficiency_limit_check(0.5, 200);
  const double b = design::efficiency_limit_check(2.0, 200);
  const double c = design::efficiency_limit_check(1.0, 400);
  const double s10 = design::optimal_lambda(10).value / 10;
  const double s50 = design::optimal_lambda(50).value / 50;
  o.detail << "c=0.5:" << a << " c=2:" << b << " c=1:" << c << " S*(10)/10=" << s10
           << " S*(50)/50=" << s50;
  o.require(a >= 0.999, "c=0.5");
  o.require(b <= 0.001, "c=2");
  o.require(std::abs(c - 0.5) <= 0.02, "c=1");
  o.require(std::abs(c - oracle::poisson_cdf(400, 399)) < 1e-10, "c=1 vs oracle");
  o.require(s50 > s10, "S*(50)/50 <= S*(10)/10");
}

void fixed_point_closed_form(Outcome& o) {
  const double l1 = backoff::asymptotic_lambda(1, 2.0);
  const double l2 = backoff::asymptotic_lambda(2, 2.0);
  o.detail << "lambda(1,2)=" << l1 << " lambda(2,2)=" << l2;
  o.require(std::abs(l1 - std::log(2.0)) < 1e-9, "ln 2");
  o.require(std::abs(l2 - oracle::asymptotic_lambda(2, 2.0)) < 1e-9, "oracle");
  o.require(std::abs(l2 - 1.6783) < 1e-3, "1.6783");
}

void analysis_vs_simulation(Outcome& o) {
  double worst_np = 0.0, worst_s = 0.0;
  for (auto mode : {slots::AccessMode::aloha, slots::AccessMode::basic})
    for (int M : {1, 2, 4})
      for (int w0 : {16, 32}) {
        sim::SimConfig c;
        c.n_stations = 50;
        c.mpr = M;
        c.eb = {w0, 2.0};
        c.access_mode = mode;
        c.seed = 2026 + 100 * M + w0;
        c.warmup_slots = 100'000;
        c.measure_slots = 1'000'000;
        const auto runs = sim::run_replications(c, 5, Exec::parallel);
        double np = 0.0, s = 0.0;
        for (const auto& r : runs) {
          np += r.attempt_rate / runs.size();
          s += r.throughput_bits_per_sec / runs.size();
        }
        const auto fp = backoff::solve_fixed_point(50, M, c.eb);
        const double sa = throughput::throughput_finite(50, M, fp.p_t, slots::slots_for(mode, c.timings),
                                                        c.timings.payload_bits)
                              .s_bits_per_sec;
        const double enp = std::abs(np - fp.n_p_t) / fp.n_p_t, es = std::abs(s - sa) / sa;
        worst_np = std::max(worst_np, enp);
        worst_s = std::max(worst_s, es);
        std::ostringstream tag;
        tag << slots::to_string(mode) << " M=" << M << " W0=" << w0;
        o.require(enp <= 0.03, tag.str() + " Np_t");
        o.require(es <= 0.03, tag.str() + " S");
      }
  if (o.detail.tellp() > 0) o.detail << "; ";
  o.detail << "worst Np_t err=" << worst_np << " worst S err=" << worst_s;
}

void beb_suboptimality(Outcome& o) {
  const double aloha10 = design::beb_efficiency(10, kUnit, 1);
  double worst_rts = 1.0;
  for (int M = 1; M <= 10; ++M)
    worst_rts = std::min(worst_rts, design::beb_efficiency(M, slots::rtscts_slots(kTimings), 8184));
  o.detail << "aloha M=10:" << aloha10 << " rtscts min:" << worst_rts;
  o.require(std::abs(aloha10 - 0.80) <= 0.05, "aloha M=10");
  o.require(worst_rts >= 0.95, "rtscts");
}

void optimal_r_trend(Outcome& o) {
  const double r1 = design::optimal_r(1, 1, kUnit, 1, design::Population::infinite()).argument;
  const double want = 1 / (1 - std::exp(-1.0));
  o.detail << "r*(1)=" << r1;
  o.require(std::abs(r1 - want) <= 1e-3, "r*(1) aloha");
  for (auto mode : {slots::AccessMode::aloha, slots::AccessMode::basic}) {
    const bool aloha = mode == slots::AccessMode::aloha;
    const auto s = aloha ? kUnit : slots::basic_slots(kTimings);
    std::vector<double> r(13, 0.0);
    for_each_index(10, Exec::parallel, [&](std::size_t i) {
      const int M = static_cast<int>(i) + 3;
      r[M] = design::optimal_r(M, 1, s, aloha ? 1.0 : 8184.0, design::Population::infinite()).argument;
    });
    o.detail << " " << slots::to_string(mode) << ":";
    bool mono = true;
    for (int M = 3; M <= 12; ++M) {
      o.detail << (M == 3 ? "" : ",") << std::round(r[M] * 1000) / 1000;
      if (M > 3 && r[M] < r[M - 1]) mono = false;
    }
    o.require(mono, std::string(slots::to_string(mode)) + " r* not nondecreasing");
  }
}

void identities(Outcome& o) {
  double worst3 = 0.0, worst4 = 0.0;
  for (int N = 2; N <= 30; ++N)
    for (int M = 1; M < N; ++M)
      for (int i = 1; i <= 19; ++i) {
        const double p = 0.05 * i;
        const double s = throughput::throughput_finite(N, M, p, kUnit, 1).s_bits_per_sec;
        const double next = throughput::throughput_finite(N, M + 1, p, kUnit, 1).s_bits_per_sec;
        const double a3 = next - (s + (M + 1) * oracle::binomial_pmf(N, p, M + 1));
        const double a4 = s - (N * p * oracle::binomial_cdf(N, p, M) -
                               (1 - p) * (M + 1) * oracle::binomial_pmf(N, p, M + 1));
        worst3 = std::max(worst3, std::abs(a3) / next);
        worst4 = std::max(worst4, std::abs(a4) / s);
      }
  o.detail << "recurrence rel=" << worst3 << " closed form rel=" << worst4;
  o.require(worst3 < 1e-12, "recurrence");
  o.require(worst4 < 1e-12, "closed form");
}

void phy_correctness(Outcome& o) {
  using namespace phy;
  int exact = 0;
  double worst_gap = 0.0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    const int K = 1 + static_cast<int>(t % 4);
    const CMatrix h = random_channel(4, K, 10 * t);
    const CMatrix x = random_symbols(K, 32, Alphabet::bpsk, 10 * t + 1);
    const CMatrix soft = zf_detect(h * x, h);
    exact += (soft - x).cwiseAbs().maxCoeff() < 1e-9 && quantize(soft, Alphabet::bpsk) == x;
    const CMatrix y = simulate_uplink(h, x, 0.1, 10 * t + 2);
    const CMatrix zf = zf_detect(y, h);
    worst_gap = std::max(worst_gap, (mmse_detect(y, h, 1e-12) - zf).norm() / zf.norm());
  }

  const double eta20 = noise_variance_for_snr_db(20);
  std::vector<int> hit(1000, 0);
  for_each_index(hit.size(), Exec::parallel, [&](std::size_t t) {
    const CMatrix y = simulate_uplink(random_channel(4, 2, 7000 + 3 * t),
                                      random_symbols(2, 64, Alphabet::bpsk, 7001 + 3 * t), eta20, 7002 + 3 * t);
    hit[t] = estimate_num_sources(y, {eta20}) == 2;
  });
  int counted = 0;
  for (int v : hit) counted += v;

  const double eta25 = noise_variance_for_snr_db(25);
  std::vector<int> same(500, 0), descent(500, 1);
  for_each_index(same.size(), Exec::parallel, [&](std::size_t t) {
    const CMatrix y = simulate_uplink(random_channel(4, 2, 90000 + 3 * t),
                                      random_symbols(2, 8, Alphabet::bpsk, 90001 + 3 * t), eta25, 90002 + 3 * t);
    const auto ex = exhaustive_fa_detect(y, 2, Alphabet::bpsk);
    const auto il = ilsp_fa_detect(y, 2, Alphabet::bpsk);
    same[t] = match_up_to_ambiguity(il.x_hat, ex.x_hat, Alphabet::bpsk).matched;
    for (std::size_t i = 1; i < il.residual_history.size(); ++i)
      if (il.residual_history[i] > il.residual_history[i - 1]) descent[t] = 0;
    if (il.iterations > 100) descent[t] = 0;
  });
  int matched = 0, descending = 0;
  for (std::size_t t = 0; t < same.size(); ++t) {
    matched += same[t];
    descending += descent[t];
  }
  o.detail << "zf exact " << exact << "/100, mmse gap " << worst_gap << ", K-hat " << counted
           << "/1000, ilsp=exhaustive " << matched << "/500";
  o.require(exact == 100, "zf exact recovery");
  o.require(worst_gap < 1e-6, "mmse limit");
  o.require(counted >= 950, "source count");
  o.require(matched >= 475, "ilsp vs exhaustive");
  o.require(descending == 500, "ilsp descent");
}

void sequence_pool(Outcome& o) {
  sim::SimConfig c;
  c.n_stations = 50;
  c.mpr = 4;
  c.eb = {32, 2.0};
  c.seed = 11;
  const double base = sim::run(c).throughput_bits_per_sec;
  c.sequence_pool = sim::SequencePool{1'000'000};
  const double big = sim::run_sequence_pool(c).throughput_bits_per_sec;
  const double gap = std::abs(big - base) / base;
  o.detail << "Q=1e6 gap " << gap << "; sweep:";
  o.require(gap <= 0.01, "Q=1e6 vs base");

  c.access_mode = slots::AccessMode::basic;
  c.measure_slots = 500'000;
  const std::vector<int> qs = {4, 8, 16, 32};
  std::vector<double> s(qs.size());
  for_each_index(qs.size(), Exec::parallel, [&](std::size_t i) {
    sim::SimConfig ci = c;
    ci.sequence_pool = sim::SequencePool{qs[i], sim::PoolPolicy::unique_within_capacity, 4e-6};
    s[i] = sim::run_sequence_pool(ci).throughput_bits_per_sec;
  });
  std::size_t best = 0;
  for (std::size_t i = 0; i < qs.size(); ++i) {
    o.detail << " Q=" << qs[i] << ":" << s[i] / 1e6;
    if (s[i] > s[best]) best = i;
  }
  o.require(best > 0 && best + 1 < qs.size(), "no interior maximum");
}

}  // namespace

int main() {
  apply_thread_cap_from_env();
  const std::vector<Criterion> criteria = {
      {1, "classical single-packet optimum", 1, classical_optimum},
      {2, "super-linear scaling, asymptotic", 10, superlinearity},
      {3, "super-linear scaling, N = 40", 30, finite_superlinearity},
      {4, "capacity-scaled efficiency limits", 10, efficiency_limits},
      {5, "backoff attempt-rate closed form", 1, fixed_point_closed_form},
      {6, "analysis vs simulation", 300, analysis_vs_simulation},
      {7, "binary backoff efficiency", 30, beb_suboptimality},
      {8, "optimal backoff factor trend", 60, optimal_r_trend},
      {9, "throughput identities", 10, identities},
      {10, "multiuser detection", 300, phy_correctness},
      {11, "sequence-pool protocol", 180, sequence_pool},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail << " exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.budget_seconds) o.require(false, "over time budget");
    failed += !o.ok;
    std::printf("%s  %2d  %-36s %7.2fs  %s\n", o.ok ? "PASS" : "FAIL", c.id, c.name, secs,
                o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
