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

#include <string>
#include <string_view>
#include <vector>

namespace mprlab::slots {

/// PHY/MAC timing parameters. Durations in seconds, sizes in bits, rates in
/// bits per second. Defaults are the IEEE 802.11g values (DIFS = SIFS + 2
/// sigma, 1 us propagation delay).
struct PhyTimings {
  double sigma = 9e-6;
  double sifs = 10e-6;
  double difs = 28e-6;
  double delta = 1e-6;
  double phy_overhead = 26e-6;
  double mac_header_bits = 272;
  double ack_bits = 112;
  double rts_bits = 160;
  double cts_bits = 112;
  double payload_bits = 8184;
  double data_rate = 54e6;
  double basic_rate = 6e6;
  /// Extra 48-bit receiver address fields carried by the MPR CTS. Zero keeps
  /// the legacy CTS duration.
  int cts_extra_addresses = 0;

  /// Throws InvalidArgument on negative durations, nonpositive rates or payload.
  void validate() const;

  bool operator==(const PhyTimings&) const = default;
};

/// Backoff-slot lengths for an idle, collision and success slot.
struct SlotDurations {
  double t_idle;
  double t_coll;
  double t_succ;

  bool operator==(const SlotDurations&) const = default;
};

enum class AccessMode { aloha, basic, rtscts };

std::string_view to_string(AccessMode mode);
/// Throws InvalidArgument for an unknown name.
AccessMode access_mode_from_string(std::string_view name);

/// Non-carrier-sensing: every slot lasts one packet time L/R.
SlotDurations aloha_slots(double payload_bits, double data_rate);
SlotDurations basic_slots(const PhyTimings& t);
SlotDurations rtscts_slots(const PhyTimings& t);
/// aloha mode uses t.payload_bits / t.data_rate.
SlotDurations slots_for(AccessMode mode, const PhyTimings& t);

/// Named components of a slot, in transmission order; they sum to the slot.
struct Phase {
  std::string name;
  double seconds;
};

/// Breakdown of a success (success = true) or collision slot.
std::vector<Phase> slot_phases(AccessMode mode, const PhyTimings& t, bool success);

}  // namespace mprlab::slots
