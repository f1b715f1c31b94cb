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

#include "mprlab/lab.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "mprlab/backoff.hpp"
#include "mprlab/error.hpp"
#include "mprlab/mac_sim.hpp"
#include "mprlab/matrix_io.hpp"
#include "mprlab/optimizer.hpp"
#include "mprlab/phy.hpp"
#include "mprlab/throughput.hpp"

namespace mprlab::lab {

namespace {

using slots::AccessMode;

constexpr int kCurvePoints = 100;
constexpr int kRGridPoints = 40;

std::vector<long> or_default(const std::vector<long>& given, std::vector<long> fallback) {
  return given.empty() ? fallback : given;
}

std::vector<long> one_to(long m_max) {
  std::vector<long> out;
  for (long m = 1; m <= m_max; ++m) out.push_back(m);
  return out;
}

int as_int(long v) { return static_cast<int>(v); }

design::Population population_of(const Scenario& s) {
  return s.get_string("population") == "finite" ? design::Population::of(as_int(s.get_int("N")))
                                                 : design::Population::infinite();
}

/// Data rate used to normalize throughput (1 for the unit ALOHA model).
struct SlotModel {
  slots::SlotDurations slots;
  double payload_bits;
  double rate;
};

SlotModel model_for(AccessMode mode, const slots::PhyTimings& t) {
  return {slots::slots_for(mode, t), t.payload_bits, t.data_rate};
}

SlotModel unit_model() { return {design::unit_aloha(), 1.0, 1.0}; }

/// ALOHA figures use the normalized model; carrier sensing uses the timings.
SlotModel figure_model(AccessMode mode, const Scenario& s) {
  return mode == AccessMode::aloha ? unit_model() : model_for(mode, timings_of(s));
}

Table table(std::string name, std::vector<std::string> header, std::size_t rows) {
  Table t{std::move(name), std::move(header), {}};
  t.rows.assign(rows, std::vector<double>(t.header.size(), 0.0));
  return t;
}

Table analyze(const Scenario& s) {
  const AccessMode mode = access_of(s);
  const SlotModel m = model_for(mode, timings_of(s));
  const int M = as_int(s.get_int("M"));
  const design::Population pop = population_of(s);
  std::vector<double> xs;
  const double fixed = pop.finite ? s.get_double("p_t") : s.get_double("lambda");
  if (fixed >= 0.0) {
    xs.push_back(fixed);
  } else {
    const double hi = pop.finite ? 1.0 : 3.0 * M;
    for (int i = 1; i < kCurvePoints; ++i) xs.push_back(hi * i / kCurvePoints);
  }
  Table t = table("curve", {pop.finite ? "p_t" : "lambda", "S_bps", "S_norm", "p_idle", "p_succ", "p_coll"},
                  xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto r = pop.finite ? throughput::throughput_finite(pop.n, M, xs[i], m.slots, m.payload_bits)
                              : throughput::throughput_asymptotic(xs[i], M, m.slots, m.payload_bits);
    t.rows[i] = {xs[i], r.s_bits_per_sec, r.s_bits_per_sec / m.rate, r.p_idle, r.p_succ, r.p_coll};
  }
  return t;
}

Table analyze_optimum(const Scenario& s) {
  const SlotModel m = model_for(access_of(s), timings_of(s));
  const int M = as_int(s.get_int("M"));
  const design::Population pop = population_of(s);
  const design::Optimum o = pop.finite ? design::optimal_pt(pop.n, M, m.slots, m.payload_bits)
                                       : design::optimal_attempt_rate(M, m.slots, m.payload_bits);
  Table t = table("optimum", {"argument", "S_star_bps", "S_star_norm"}, 1);
  t.rows[0] = {o.argument, o.value, o.value / m.rate};
  return t;
}

Table fixpoint(const Scenario& s, Exec exec) {
  const auto ns = or_default(s.get_list("N_list"), {s.get_int("N")});
  const int M = as_int(s.get_int("M"));
  const backoff::EBParams eb = eb_of(s);
  const SlotModel m = model_for(access_of(s), timings_of(s));
  const double lambda = backoff::asymptotic_lambda(M, eb.r);
  Table t = table("fixpoint",
                  {"N", "M", "W0", "r", "p_t", "p_c", "Np_t", "lambda_limit", "S_bps", "S_norm"},
                  ns.size());
  for_each_index(ns.size(), exec, [&](std::size_t i) {
    const int n = as_int(ns[i]);
    const auto fp = backoff::solve_fixed_point(n, M, eb);
    const double sb = throughput::throughput_finite(n, M, fp.p_t, m.slots, m.payload_bits).s_bits_per_sec;
    t.rows[i] = {double(n), double(M), double(eb.w0), eb.r, fp.p_t, fp.p_c, fp.n_p_t, lambda, sb,
                 sb / m.rate};
  });
  return t;
}

Table optimal_r_table(const Scenario& s, Exec exec) {
  const auto ms = or_default(s.get_list("M_list"), one_to(s.get_int("M_max")));
  const SlotModel m = figure_model(access_of(s), s);
  const int w0 = as_int(s.get_int("W0"));
  const design::Population pop = population_of(s);
  Table t = table("optimal_r", {"M", "r_star", "S_star", "S_beb", "beb_ratio"}, ms.size());
  for_each_index(ms.size(), exec, [&](std::size_t i) {
    const int M = as_int(ms[i]);
    const auto best = design::optimal_r(M, w0, m.slots, m.payload_bits, pop);
    const double beb = design::throughput_at_r(2.0, M, w0, m.slots, m.payload_bits, pop);
    t.rows[i] = {double(M), best.argument, best.value, beb, std::min(1.0, beb / best.value)};
  });
  return t;
}

Table scan(const Scenario& s, Exec exec) {
  const SlotModel m = figure_model(access_of(s), s);
  const design::ScanModel model{population_of(s), m.slots, m.payload_bits};
  const auto rows = design::superlinearity_scan(as_int(s.get_int("M_max")), model, exec);
  Table t = table("scan", {"M", "S_star", "S_star_per_M", "S_norm"}, rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    t.rows[i] = {double(rows[i].M), rows[i].s_star, rows[i].s_star_per_m,
                 rows[i].s_star_per_m / m.rate};
  return t;
}

struct SimPoint {
  sim::SimStats sim;
  double np_t_analytic;
  double p_c_analytic;
  double s_analytic;
};

SimPoint simulate_point(sim::SimConfig cfg, int replications, Exec exec) {
  const auto runs = sim::run_replications(cfg, replications, exec);
  SimPoint p{sim::aggregate(runs), 0, 0, 0};
  const auto fp = backoff::solve_fixed_point(cfg.n_stations, cfg.mpr, cfg.eb);
  p.np_t_analytic = fp.n_p_t;
  p.p_c_analytic = fp.p_c;
  const auto sl = slots::slots_for(cfg.access_mode, cfg.timings);
  p.s_analytic = throughput::throughput_finite(cfg.n_stations, cfg.mpr, fp.p_t, sl,
                                               cfg.timings.payload_bits)
                     .s_bits_per_sec;
  return p;
}

Table simulate(const Scenario& s, Exec exec) {
  const auto ns = or_default(s.get_list("N_list"), {s.get_int("N")});
  const sim::SimConfig base = sim_config_of(s);
  const int reps = as_int(s.get_int("replications"));
  Table t = table("simulate",
                  {"N", "M", "Np_t_sim", "Np_t_analytic", "p_c_sim", "p_c_analytic", "S_sim_bps",
                   "S_analytic_bps", "S_rel_err"},
                  ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i) {
    sim::SimConfig cfg = base;
    cfg.n_stations = as_int(ns[i]);
    const SimPoint p = simulate_point(cfg, reps, exec);
    t.rows[i] = {double(cfg.n_stations), double(cfg.mpr), p.sim.attempt_rate, p.np_t_analytic,
                 p.sim.cond_collision_p_c, p.p_c_analytic, p.sim.throughput_bits_per_sec,
                 p.s_analytic, std::abs(p.sim.throughput_bits_per_sec - p.s_analytic) / p.s_analytic};
  }
  return t;
}

double symbol_error_rate(const phy::CMatrix& soft, const phy::CMatrix& x, phy::Alphabet a) {
  if (x.size() == 0) return 0.0;
  const phy::CMatrix hard = phy::quantize(soft, a);
  long errors = 0;
  for (Eigen::Index i = 0; i < x.size(); ++i) errors += std::abs(hard(i) - x(i)) > 1e-9;
  return static_cast<double>(errors) / static_cast<double>(x.size());
}

Table phy_input(const Scenario& s) {
  const phy::CMatrix y = io::load_matrix(s.get_string("input"));
  const double eta = phy::noise_variance_for_snr_db(s.get_double("snr_db"));
  const int k_hat = phy::estimate_num_sources(y, {eta});
  Table t = table("detect", {"k_hat", "residual", "iterations", "converged"}, 1);
  if (k_hat == 0) {
    t.rows[0] = {0.0, y.squaredNorm(), 0.0, 1.0};
    return t;
  }
  const auto a = phy::alphabet_from_string(s.get_string("alphabet"));
  const auto method = s.get_string("method") == "exhaustive" ? phy::BlindMethod::exhaustive
                                                             : phy::BlindMethod::ilsp;
  const auto rep = phy::blind_fa_detect(y, std::min<int>(k_hat, y.rows()), a, method, Exec::parallel);
  t.rows[0] = {double(rep.k_hat), rep.residual, double(rep.iterations), rep.converged ? 1.0 : 0.0};
  return t;
}

Table phy_monte_carlo(const Scenario& s, Exec exec) {
  const int K = as_int(s.get_int("K"));
  const int m_rx = as_int(s.get_int("M_rx"));
  const int n_sym = as_int(s.get_int("N_sym"));
  if (K > m_rx) throw ConfigError(0, "K", "K must not exceed M_rx");
  const double eta = phy::noise_variance_for_snr_db(s.get_double("snr_db"));
  const auto a = phy::alphabet_from_string(s.get_string("alphabet"));
  const auto method = s.get_string("method") == "exhaustive" ? phy::BlindMethod::exhaustive
                                                             : phy::BlindMethod::ilsp;
  const auto seed = static_cast<std::uint64_t>(s.get_int("seed"));
  const auto trials = static_cast<std::size_t>(s.get_int("trials"));
  Table t = table("phy", {"trial", "k_hat", "zf_ser", "mmse_ser", "blind_match", "blind_residual"},
                  trials);
  for_each_index(trials, exec, [&](std::size_t i) {
    const std::uint64_t base = sim::replication_seed(seed, static_cast<int>(i));
    const phy::CMatrix h = phy::random_channel(m_rx, K, base);
    const phy::CMatrix x = phy::random_symbols(K, n_sym, a, base + 1);
    const phy::CMatrix y = phy::simulate_uplink(h, x, eta, base + 2);
    const int k_hat = phy::estimate_num_sources(y, {eta});
    double zf = 0.0, mmse = 0.0, match = k_hat == K ? 1.0 : 0.0, residual = y.squaredNorm();
    if (K > 0) {
      zf = symbol_error_rate(phy::zf_detect(y, h), x, a);
      mmse = symbol_error_rate(phy::mmse_detect(y, h, eta), x, a);
      match = 0.0;
      if (k_hat == K) {
        const auto rep = phy::blind_fa_detect(y, K, a, method);
        residual = rep.residual;
        match = phy::match_up_to_ambiguity(rep.x_hat, x, a).matched ? 1.0 : 0.0;
      }
    }
    t.rows[i] = {double(i), double(k_hat), zf, mmse, match, residual};
  });
  return t;
}

Table simulated_curves(int figure, const Scenario& s, Exec exec) {
  const auto ns = or_default(s.get_list("N_list"), {5, 10, 20, 50, 100});
  sim::SimConfig base = sim_config_of(s);
  const int reps = as_int(s.get_int("replications"));
  struct Point {
    int n, m, w0;
  };
  std::vector<Point> pts;
  if (figure == 5) {
    for (int w0 : {16, 32})
      for (long n : ns) pts.push_back({as_int(n), base.mpr, w0});
  } else {
    for (long m : or_default(s.get_list("M_list"), {1, 2, 4}))
      for (long n : ns) pts.push_back({as_int(n), as_int(m), base.eb.w0});
  }
  base.access_mode = figure == 7 ? AccessMode::basic : base.access_mode;
  if (figure == 6) base.access_mode = AccessMode::aloha;
  const double rate = base.timings.data_rate;

  Table t = figure == 5
                ? table("fig5", {"N", "W0", "M", "Np_t_analytic", "Np_t_sim", "lambda_limit"}, pts.size())
            : figure == 6 ? table("fig6", {"N", "M", "S_norm_analytic", "S_norm_sim"}, pts.size())
                          : table("fig7", {"N", "M", "S_analytic_mbps", "S_sim_mbps"}, pts.size());
  for_each_index(pts.size(), exec, [&](std::size_t i) {
    sim::SimConfig cfg = base;
    cfg.n_stations = pts[i].n;
    cfg.mpr = pts[i].m;
    cfg.eb.w0 = pts[i].w0;
    cfg.seed = sim::replication_seed(base.seed, 1000 + static_cast<int>(i));
    const SimPoint p = simulate_point(cfg, reps, Exec::serial);
    const double n = pts[i].n, m = pts[i].m;
    if (figure == 5)
      t.rows[i] = {n, double(pts[i].w0), m, p.np_t_analytic, p.sim.attempt_rate,
                   backoff::asymptotic_lambda(pts[i].m, cfg.eb.r)};
    else if (figure == 6)
      t.rows[i] = {n, m, p.s_analytic / rate, p.sim.throughput_bits_per_sec / rate};
    else
      t.rows[i] = {n, m, p.s_analytic / 1e6, p.sim.throughput_bits_per_sec / 1e6};
  });
  return t;
}

Table throughput_vs_r(int figure, const Scenario& s, Exec exec) {
  const AccessMode mode = figure == 8 ? AccessMode::aloha : AccessMode::basic;
  const SlotModel m = figure_model(mode, s);
  const auto ms = or_default(s.get_list("M_list"), {1, 2, 4, 8});
  const int w0 = as_int(s.get_int("W0"));
  const design::Population pop = population_of(s);
  std::vector<std::pair<double, int>> pts;
  for (long M : ms)
    for (int i = 0; i < kRGridPoints; ++i) {
      const double r = design::kMinBackoffFactor *
                       std::pow(design::kMaxBackoffFactor / design::kMinBackoffFactor,
                                double(i) / (kRGridPoints - 1));
      pts.push_back({r, as_int(M)});
    }
  const double scale = mode == AccessMode::aloha ? 1.0 : 1e-6;
  Table t = table(figure == 8 ? "fig8" : "fig9",
                  {"r", "M", mode == AccessMode::aloha ? "S_norm" : "S_mbps"}, pts.size());
  for_each_index(pts.size(), exec, [&](std::size_t i) {
    const auto [r, M] = pts[i];
    t.rows[i] = {r, double(M), scale * design::throughput_at_r(r, M, w0, m.slots, m.payload_bits, pop)};
  });
  return t;
}

Table per_mode(int figure, const Scenario& s, Exec exec) {
  const auto ms = one_to(s.get_int("M_max"));
  const std::vector<AccessMode> modes = {AccessMode::aloha, AccessMode::basic, AccessMode::rtscts};
  Table t = figure == 10 ? table("fig10", {"M", "beb_ratio_aloha", "beb_ratio_basic", "beb_ratio_rtscts"}, ms.size())
                         : table("fig11", {"M", "r_star_aloha", "r_star_basic", "r_star_rtscts"}, ms.size());
  for_each_index(ms.size(), exec, [&](std::size_t i) {
    const int M = as_int(ms[i]);
    t.rows[i][0] = M;
    for (std::size_t j = 0; j < modes.size(); ++j) {
      const SlotModel m = figure_model(modes[j], s);
      t.rows[i][j + 1] =
          figure == 10 ? design::beb_efficiency(M, m.slots, m.payload_bits)
                       : design::optimal_r(M, 1, m.slots, m.payload_bits, design::Population::infinite())
                             .argument;
    }
  });
  return t;
}

Table optimal_throughput(int figure, const Scenario& s, Exec exec) {
  const auto t_phy = timings_of(s);
  const design::ScanModel basic{design::Population::infinite(),
                                slots::slots_for(AccessMode::basic, t_phy), t_phy.payload_bits};
  design::ScanModel rts = basic;
  rts.slots = slots::slots_for(AccessMode::rtscts, t_phy);
  const int m_max = as_int(s.get_int("M_max"));
  const auto b = design::superlinearity_scan(m_max, basic, exec);
  const auto r = design::superlinearity_scan(m_max, rts, exec);
  Table t = figure == 2 ? table("fig2", {"M", "S_star_basic_mbps", "S_star_rtscts_mbps"}, b.size())
                        : table("fig3", {"M", "S_star_per_M_basic_mbps", "S_star_per_M_rtscts_mbps"},
                                b.size());
  for (std::size_t i = 0; i < b.size(); ++i)
    t.rows[i] = figure == 2 ? std::vector<double>{double(b[i].M), b[i].s_star / 1e6, r[i].s_star / 1e6}
                            : std::vector<double>{double(b[i].M), b[i].s_star_per_m / 1e6,
                                                  r[i].s_star_per_m / 1e6};
  return t;
}

std::string format_cell(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

std::size_t Table::column(const std::string& n) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == n) return i;
  throw InvalidArgument("table " + name + " has no column '" + n + "'");
}

Table reproduce_figure(int figure, const Scenario& s, Exec exec) {
  switch (figure) {
    case 1: {
      Scenario aloha = s;
      aloha.params["access"] = std::string("aloha");
      aloha.params["population"] = std::string("infinite");
      const Table t = scan(aloha, exec);
      Table out = table("fig1", {"M", "S_star", "S_norm"}, t.rows.size());
      for (std::size_t i = 0; i < t.rows.size(); ++i) out.rows[i] = {t.rows[i][0], t.rows[i][1], t.rows[i][3]};
      return out;
    }
    case 2:
    case 3: return optimal_throughput(figure, s, exec);
    case 5:
    case 6:
    case 7: return simulated_curves(figure, s, exec);
    case 8:
    case 9: return throughput_vs_r(figure, s, exec);
    case 10:
    case 11: return per_mode(figure, s, exec);
    default:
      throw ConfigError(0, "figure", "no reproduction for figure " + std::to_string(figure));
  }
}

std::vector<Table> compute(const Scenario& s, Exec exec) {
  switch (s.mode) {
    case Mode::analyze: return {analyze(s), analyze_optimum(s)};
    case Mode::fixpoint: return {fixpoint(s, exec)};
    case Mode::optimal_r: return {optimal_r_table(s, exec)};
    case Mode::scan: return {scan(s, exec)};
    case Mode::simulate: return {simulate(s, exec)};
    case Mode::phy: return {s.get_string("input").empty() ? phy_monte_carlo(s, exec) : phy_input(s)};
    case Mode::reproduce: {
      const long fig = s.get_int("figure");
      if (fig == 0) throw ConfigError(0, "figure", "missing required key");
      return {reproduce_figure(as_int(fig), s, exec)};
    }
  }
  throw InvalidArgument("unknown mode");
}

void write_csv(const std::string& path, const Table& t) {
  for (const auto& row : t.rows)
    for (std::size_t j = 0; j < row.size(); ++j)
      if (!std::isfinite(row[j]))
        throw Error("table " + t.name + ": non-finite value in column " + t.header[j]);
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  for (std::size_t j = 0; j < t.header.size(); ++j) out << (j ? "," : "") << t.header[j];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << format_cell(row[j]);
    out << '\n';
  }
  if (!out) throw Error("write failed for '" + path + "'");
}

std::vector<std::string> run_scenario(const Scenario& s, Exec exec) {
  const std::vector<Table> tables = compute(s, exec);
  const std::filesystem::path dir(s.output_path);
  std::filesystem::create_directories(dir);
  std::vector<std::string> written;
  for (const Table& t : tables) {
    const std::string path = (dir / (s.name + "_" + t.name + ".csv")).string();
    write_csv(path, t);
    written.push_back(path);
  }
  if (s.mode == Mode::simulate && s.get_int("trace_slots") > 0) {
    const std::string path = (dir / (s.name + "_trace.csv")).string();
    std::ofstream out(path);
    out << "slot,type,k,duration_s,transmitters\n";
    const auto trace = sim::timeline_trace(sim_config_of(s), s.get_int("trace_slots"));
    sim::write_trace(out, trace);
    if (!out) throw Error("write failed for '" + path + "'");
    written.push_back(path);
  }
  if (s.mode == Mode::phy && !s.get_string("input").empty() && tables[0].rows[0][0] > 0) {
    const phy::CMatrix y = io::load_matrix(s.get_string("input"));
    const auto a = phy::alphabet_from_string(s.get_string("alphabet"));
    const auto method = s.get_string("method") == "exhaustive" ? phy::BlindMethod::exhaustive
                                                               : phy::BlindMethod::ilsp;
    const auto rep = phy::blind_fa_detect(y, static_cast<int>(tables[0].rows[0][0]), a, method, exec);
    for (const auto& [stem, m] : {std::pair{"x_hat", rep.x_hat}, std::pair{"h_hat", rep.h_hat}}) {
      const std::string path = (dir / (s.name + "_" + stem + ".txt")).string();
      io::save_matrix(path, m);
      written.push_back(path);
    }
  }
  return written;
}

}  // namespace mprlab::lab
