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

// Slot-synchronous simulator of N saturated stations running exponential
// backoff over a channel that decodes up to M simultaneous packets.
//
// Every backoff slot, stations whose counter is 0 transmit. With k
// transmitters the slot is idle (k = 0), a success (1 <= k <= M: every
// transmitter delivers and returns to stage 0) or a collision (k > M: every
// transmitter moves up one stage). A station that just transmitted redraws its
// counter uniformly from [0, W_stage - 1]; everybody else decrements by one,
// whatever the slot type.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mprlab/backoff.hpp"
#include "mprlab/parallel.hpp"
#include "mprlab/slot_model.hpp"

namespace mprlab::sim {

/// Success rule in sequence-pool mode.
enum class PoolPolicy {
  unique_within_capacity,  // own sequence unique and at most M transmitters
  unique_only,             // own sequence unique, M not enforced
};

/// Training-sequence pool: each transmitter picks one of q orthogonal
/// sequences at random; a shared sequence cannot be resolved.
struct SequencePool {
  int q = 1;
  PoolPolicy policy = PoolPolicy::unique_within_capacity;
  /// Added to the success slot for every sequence in the pool (longer training).
  double overhead_per_sequence = 0.0;

  bool operator==(const SequencePool&) const = default;
};

struct SimConfig {
  int n_stations = 1;
  int mpr = 1;
  backoff::EBParams eb{};
  int stage_cap = 32;
  slots::AccessMode access_mode = slots::AccessMode::aloha;
  slots::PhyTimings timings{};
  std::uint64_t seed = 1;
  long warmup_slots = 100'000;
  long measure_slots = 1'000'000;
  std::optional<SequencePool> sequence_pool;

  /// Throws InvalidArgument. Also rejects window sizes that overflow int64.
  void validate() const;

  bool operator==(const SimConfig&) const = default;
};

struct SimStats {
  double throughput_bits_per_sec = 0.0;
  double attempt_rate = 0.0;        // transmissions per slot, N p_t
  double cond_collision_p_c = 0.0;  // failed attempts / attempts
  long slots_idle = 0;
  long slots_succ = 0;
  long slots_coll = 0;
  double elapsed_seconds = 0.0;
  long packets_delivered = 0;
  long attempts = 0;
  long failed_attempts = 0;

  bool operator==(const SimStats&) const = default;
};

struct StationState {
  int stage = 0;
  std::int64_t window = 1;
  std::int64_t counter = 0;

  bool operator==(const StationState&) const = default;
};

/// Contention window round(r^min(stage, cap) * w0), at least 1.
std::int64_t window_size(const backoff::EBParams& eb, int stage, int stage_cap);

/// Base MPR rule. Throws InvalidArgument if config.sequence_pool is set.
SimStats run(const SimConfig& config);

/// Sequence-pool variant. Throws InvalidArgument without a pool.
SimStats run_sequence_pool(const SimConfig& config);

/// Dispatches on config.sequence_pool.
SimStats simulate(const SimConfig& config);

/// Seed of replication i derived from the base seed.
std::uint64_t replication_seed(std::uint64_t base_seed, int replication);

/// Independent replications with seeds replication_seed(config.seed, i).
/// Serial and parallel execution return identical results.
std::vector<SimStats> run_replications(const SimConfig& config, int replications,
                                       Exec exec = Exec::serial);

/// Pooled statistics: counts add up, rates are recomputed from the totals.
SimStats aggregate(std::span<const SimStats> runs);

enum class SlotType { idle, success, collision };

std::string_view to_string(SlotType t);

struct TraceRecord {
  long slot = 0;
  SlotType type = SlotType::idle;
  std::vector<int> transmitters;
  std::vector<int> delivered;  // transmitters whose packet got through
  double duration = 0.0;
  std::vector<StationState> before;
  std::vector<StationState> after;
  std::vector<slots::Phase> phases;
};

/// Per-slot log of the first n_slots slots (no warmup). Same seed, same log.
std::vector<TraceRecord> timeline_trace(const SimConfig& config, long n_slots);

/// Starts every station at stage 0 with the given counters instead of random draws.
std::vector<TraceRecord> timeline_trace(const SimConfig& config, long n_slots,
                                        std::span<const std::int64_t> initial_counters);

/// One line per record: slot,type,k,duration_s,transmitter ids separated by ';'.
void write_trace(std::ostream& out, std::span<const TraceRecord> records);

}  // namespace mprlab::sim
