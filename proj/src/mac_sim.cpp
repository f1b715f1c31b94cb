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

#include "mprlab/mac_sim.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#include "mprlab/error.hpp"

namespace mprlab::sim {

namespace {

constexpr double kMaxWindow = 4.0e18;  // below 2^62

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Independent stream for station `index`.
std::mt19937_64 station_stream(std::uint64_t seed, int index) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(index))));
}

struct Outcome {
  SlotType type;
  int transmitters;
  int delivered;
  double duration;
};

class Simulator {
 public:
  explicit Simulator(const SimConfig& config) : Simulator(config, {}) {}

  Simulator(const SimConfig& config, std::span<const std::int64_t> initial_counters)
      : config_(config), slots_(slots::slots_for(config.access_mode, config.timings)) {
    config_.validate();
    if (config_.sequence_pool) {
      const auto& pool = *config_.sequence_pool;
      t_succ_ = slots_.t_succ + pool.q * pool.overhead_per_sequence;
      seen_.assign(static_cast<std::size_t>(pool.q), 0);
    } else {
      t_succ_ = slots_.t_succ;
    }
    if (!initial_counters.empty() &&
        initial_counters.size() != static_cast<std::size_t>(config_.n_stations))
      throw InvalidArgument("timeline_trace: need one initial counter per station");

    const std::int64_t w0 = window_size(config_.eb, 0, config_.stage_cap);
    stations_.resize(static_cast<std::size_t>(config_.n_stations));
    streams_.reserve(stations_.size());
    for (int i = 0; i < config_.n_stations; ++i) {
      streams_.push_back(station_stream(config_.seed, i));
      StationState& s = stations_[static_cast<std::size_t>(i)];
      s.stage = 0;
      s.window = w0;
      if (initial_counters.empty()) {
        s.counter = draw(i, w0);
      } else {
        s.counter = initial_counters[static_cast<std::size_t>(i)];
        if (s.counter < 0 || s.counter >= w0)
          throw InvalidArgument("timeline_trace: initial counter outside [0, W0 - 1]");
      }
    }
  }

  const std::vector<StationState>& stations() const { return stations_; }
  const std::vector<int>& transmitters() const { return tx_; }
  const std::vector<int>& delivered() const { return ok_; }

  Outcome step() {
    tx_.clear();
    ok_.clear();
    for (int i = 0; i < config_.n_stations; ++i)
      if (stations_[static_cast<std::size_t>(i)].counter == 0) tx_.push_back(i);
    const int k = static_cast<int>(tx_.size());

    for (auto& s : stations_)
      if (s.counter > 0) --s.counter;
    if (k == 0) return {SlotType::idle, 0, 0, slots_.t_idle};

    resolve(k);
    for (int i : tx_) {
      StationState& s = stations_[static_cast<std::size_t>(i)];
      const bool success = std::binary_search(ok_.begin(), ok_.end(), i);
      s.stage = success ? 0 : std::min(s.stage + 1, config_.stage_cap);
      s.window = window_size(config_.eb, s.stage, config_.stage_cap);
      s.counter = draw(i, s.window);
    }
    const int delivered = static_cast<int>(ok_.size());
    if (delivered > 0) return {SlotType::success, k, delivered, t_succ_};
    return {SlotType::collision, k, 0, slots_.t_coll};
  }

  double success_overhead() const { return t_succ_ - slots_.t_succ; }

 private:
  std::int64_t draw(int station, std::int64_t window) {
    std::uniform_int_distribution<std::int64_t> u(0, window - 1);
    return u(streams_[static_cast<std::size_t>(station)]);
  }

  // Fills ok_ (sorted) with the transmitters whose packet is decoded.
  void resolve(int k) {
    if (!config_.sequence_pool) {
      if (k <= config_.mpr) ok_ = tx_;
      return;
    }
    const SequencePool& pool = *config_.sequence_pool;
    std::uniform_int_distribution<int> pick(0, pool.q - 1);
    picks_.clear();
    for (int i : tx_) {
      const int seq = pick(streams_[static_cast<std::size_t>(i)]);
      picks_.push_back(seq);
      ++seen_[static_cast<std::size_t>(seq)];
    }
    const bool within = pool.policy == PoolPolicy::unique_only || k <= config_.mpr;
    for (std::size_t j = 0; j < tx_.size(); ++j)
      if (within && seen_[static_cast<std::size_t>(picks_[j])] == 1) ok_.push_back(tx_[j]);
    for (int seq : picks_) seen_[static_cast<std::size_t>(seq)] = 0;
  }

  SimConfig config_;
  slots::SlotDurations slots_;
  double t_succ_ = 0.0;
  std::vector<StationState> stations_;
  std::vector<std::mt19937_64> streams_;
  std::vector<int> tx_;
  std::vector<int> ok_;
  std::vector<int> picks_;
  std::vector<int> seen_;
};

SimStats run_impl(const SimConfig& config) {
  Simulator sim(config);
  for (long i = 0; i < config.warmup_slots; ++i) sim.step();
  SimStats st;
  for (long i = 0; i < config.measure_slots; ++i) {
    const Outcome o = sim.step();
    st.elapsed_seconds += o.duration;
    st.attempts += o.transmitters;
    st.failed_attempts += o.transmitters - o.delivered;
    st.packets_delivered += o.delivered;
    switch (o.type) {
      case SlotType::idle: ++st.slots_idle; break;
      case SlotType::success: ++st.slots_succ; break;
      case SlotType::collision: ++st.slots_coll; break;
    }
  }
  st.throughput_bits_per_sec =
      static_cast<double>(st.packets_delivered) * config.timings.payload_bits / st.elapsed_seconds;
  st.attempt_rate = static_cast<double>(st.attempts) / static_cast<double>(config.measure_slots);
  st.cond_collision_p_c = st.attempts > 0 ? static_cast<double>(st.failed_attempts) /
                                                static_cast<double>(st.attempts)
                                          : 0.0;
  return st;
}

std::vector<slots::Phase> phases_for(const SimConfig& config, SlotType type, double overhead) {
  if (type == SlotType::idle) {
    const double t = slots::slots_for(config.access_mode, config.timings).t_idle;
    return {{"IDLE", t}};
  }
  auto phases =
      slots::slot_phases(config.access_mode, config.timings, type == SlotType::success);
  if (type == SlotType::success && overhead > 0.0) phases.push_back({"TRAINING", overhead});
  return phases;
}

}  // namespace

void SimConfig::validate() const {
  if (n_stations < 1) throw InvalidArgument("SimConfig: n_stations must be >= 1");
  if (mpr < 1) throw InvalidArgument("SimConfig: M must be >= 1");
  eb.validate();
  if (stage_cap < 1) throw InvalidArgument("SimConfig: stage_cap must be >= 1");
  if (std::pow(eb.r, stage_cap) * eb.w0 > kMaxWindow)
    throw InvalidArgument("SimConfig: window at stage_cap overflows; lower stage_cap");
  if (warmup_slots < 0) throw InvalidArgument("SimConfig: warmup_slots must be >= 0");
  if (measure_slots < 1) throw InvalidArgument("SimConfig: measure_slots must be >= 1");
  timings.validate();
  if (sequence_pool) {
    if (sequence_pool->q < 1) throw InvalidArgument("SimConfig: sequence pool Q must be >= 1");
    if (!(sequence_pool->overhead_per_sequence >= 0.0))
      throw InvalidArgument("SimConfig: per-sequence overhead must be >= 0");
  }
}

std::int64_t window_size(const backoff::EBParams& eb, int stage, int stage_cap) {
  const int s = std::clamp(stage, 0, stage_cap);
  const double w = std::round(std::pow(eb.r, s) * eb.w0);
  return w < 1.0 ? 1 : static_cast<std::int64_t>(w);
}

SimStats run(const SimConfig& config) {
  if (config.sequence_pool) throw InvalidArgument("run: use run_sequence_pool for pool mode");
  return run_impl(config);
}

SimStats run_sequence_pool(const SimConfig& config) {
  if (!config.sequence_pool) throw InvalidArgument("run_sequence_pool: config has no pool");
  return run_impl(config);
}

SimStats simulate(const SimConfig& config) { return run_impl(config); }

std::uint64_t replication_seed(std::uint64_t base_seed, int replication) {
  return splitmix64(base_seed + 0xD1B54A32D192ED03ULL * static_cast<std::uint64_t>(replication));
}

std::vector<SimStats> run_replications(const SimConfig& config, int replications, Exec exec) {
  if (replications < 1) throw InvalidArgument("run_replications: need at least one replication");
  config.validate();
  std::vector<SimStats> out(static_cast<std::size_t>(replications));
  for_each_index(out.size(), exec, [&](std::size_t i) {
    SimConfig c = config;
    c.seed = replication_seed(config.seed, static_cast<int>(i));
    out[i] = simulate(c);
  });
  return out;
}

SimStats aggregate(std::span<const SimStats> runs) {
  SimStats total;
  double bits = 0.0;
  for (const SimStats& s : runs) {
    total.slots_idle += s.slots_idle;
    total.slots_succ += s.slots_succ;
    total.slots_coll += s.slots_coll;
    total.elapsed_seconds += s.elapsed_seconds;
    total.packets_delivered += s.packets_delivered;
    total.attempts += s.attempts;
    total.failed_attempts += s.failed_attempts;
    bits += s.throughput_bits_per_sec * s.elapsed_seconds;
  }
  const long slots = total.slots_idle + total.slots_succ + total.slots_coll;
  if (total.elapsed_seconds > 0.0) total.throughput_bits_per_sec = bits / total.elapsed_seconds;
  if (slots > 0) total.attempt_rate = static_cast<double>(total.attempts) / static_cast<double>(slots);
  if (total.attempts > 0)
    total.cond_collision_p_c =
        static_cast<double>(total.failed_attempts) / static_cast<double>(total.attempts);
  return total;
}

std::string_view to_string(SlotType t) {
  switch (t) {
    case SlotType::idle: return "idle";
    case SlotType::success: return "success";
    case SlotType::collision: return "collision";
  }
  return "?";
}

std::vector<TraceRecord> timeline_trace(const SimConfig& config, long n_slots) {
  return timeline_trace(config, n_slots, {});
}

std::vector<TraceRecord> timeline_trace(const SimConfig& config, long n_slots,
                                        std::span<const std::int64_t> initial_counters) {
  if (n_slots < 0 || n_slots > 10'000)
    throw InvalidArgument("timeline_trace: n_slots must lie in [0, 10000]");
  Simulator sim(config, initial_counters);
  std::vector<TraceRecord> log;
  log.reserve(static_cast<std::size_t>(n_slots));
  for (long i = 0; i < n_slots; ++i) {
    TraceRecord rec;
    rec.slot = i;
    rec.before = sim.stations();
    const Outcome o = sim.step();
    rec.type = o.type;
    rec.transmitters = sim.transmitters();
    rec.delivered = sim.delivered();
    rec.duration = o.duration;
    rec.after = sim.stations();
    rec.phases = phases_for(config, o.type, sim.success_overhead());
    log.push_back(std::move(rec));
  }
  return log;
}

void write_trace(std::ostream& out, std::span<const TraceRecord> records) {
  const auto old_precision = out.precision(9);
  for (const TraceRecord& r : records) {
    out << r.slot << ',' << to_string(r.type) << ',' << r.transmitters.size() << ','
        << r.duration << ',';
    for (std::size_t j = 0; j < r.transmitters.size(); ++j)
      out << (j ? ";" : "") << r.transmitters[j];
    out << '\n';
  }
  out.precision(old_precision);
}

}  // namespace mprlab::sim
