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

#include "mprlab/slot_model.hpp"

#include <cmath>

#include "mprlab/error.hpp"

namespace mprlab::slots {

namespace {

constexpr double kAddressBits = 48.0;

struct FrameTimes {
  double header;  // PHY overhead + MAC header at the data rate
  double payload;
  double ack;
  double rts;
  double cts;
};

FrameTimes frame_times(const PhyTimings& t) {
  t.validate();
  const double cts_bits = t.cts_bits + kAddressBits * t.cts_extra_addresses;
  return {t.phy_overhead + t.mac_header_bits / t.data_rate, t.payload_bits / t.data_rate,
          t.phy_overhead + t.ack_bits / t.data_rate, t.phy_overhead + t.rts_bits / t.basic_rate,
          t.phy_overhead + cts_bits / t.basic_rate};
}

double sum(const std::vector<Phase>& phases) {
  double s = 0.0;
  for (const auto& p : phases) s += p.seconds;
  return s;
}

}  // namespace

void PhyTimings::validate() const {
  for (double d : {sigma, sifs, difs, delta, phy_overhead, mac_header_bits, ack_bits, rts_bits,
                   cts_bits}) {
    if (!(d >= 0.0) || !std::isfinite(d))
      throw InvalidArgument("PhyTimings: durations and frame sizes must be finite and >= 0");
  }
  if (!(payload_bits > 0.0)) throw InvalidArgument("PhyTimings: payload_bits must be > 0");
  if (!(data_rate > 0.0) || !(basic_rate > 0.0))
    throw InvalidArgument("PhyTimings: rates must be > 0");
  if (cts_extra_addresses < 0)
    throw InvalidArgument("PhyTimings: cts_extra_addresses must be >= 0");
}

std::string_view to_string(AccessMode mode) {
  switch (mode) {
    case AccessMode::aloha: return "aloha";
    case AccessMode::basic: return "basic";
    case AccessMode::rtscts: return "rtscts";
  }
  return "?";
}

AccessMode access_mode_from_string(std::string_view name) {
  if (name == "aloha") return AccessMode::aloha;
  if (name == "basic") return AccessMode::basic;
  if (name == "rtscts") return AccessMode::rtscts;
  throw InvalidArgument("unknown access mode '" + std::string(name) + "'");
}

SlotDurations aloha_slots(double payload_bits, double data_rate) {
  if (!(payload_bits > 0.0) || !(data_rate > 0.0))
    throw InvalidArgument("aloha_slots: L and R must be > 0");
  const double t = payload_bits / data_rate;
  return {t, t, t};
}

std::vector<Phase> slot_phases(AccessMode mode, const PhyTimings& t, bool success) {
  if (mode == AccessMode::aloha) {
    const double slot = aloha_slots(t.payload_bits, t.data_rate).t_succ;
    return {{"DATA", slot}};
  }
  const FrameTimes f = frame_times(t);
  const double gap = t.sifs + t.delta;
  const double tail = t.difs + t.delta;
  if (mode == AccessMode::basic) {
    if (!success) return {{"HDR", f.header}, {"DATA", f.payload}, {"DIFS+delta", tail}};
    return {{"HDR", f.header}, {"DATA", f.payload}, {"SIFS+delta", gap},
            {"ACK", f.ack},    {"DIFS+delta", tail}};
  }
  if (!success) return {{"RTS", f.rts}, {"DIFS+delta", tail}};
  return {{"RTS", f.rts},  {"SIFS+delta", gap}, {"CTS", f.cts},        {"SIFS+delta", gap},
          {"HDR", f.header}, {"DATA", f.payload}, {"SIFS+delta", gap}, {"ACK", f.ack},
          {"DIFS+delta", tail}};
}

SlotDurations basic_slots(const PhyTimings& t) {
  return {t.sigma, sum(slot_phases(AccessMode::basic, t, false)),
          sum(slot_phases(AccessMode::basic, t, true))};
}

SlotDurations rtscts_slots(const PhyTimings& t) {
  return {t.sigma, sum(slot_phases(AccessMode::rtscts, t, false)),
          sum(slot_phases(AccessMode::rtscts, t, true))};
}

SlotDurations slots_for(AccessMode mode, const PhyTimings& t) {
  switch (mode) {
    case AccessMode::aloha: return aloha_slots(t.payload_bits, t.data_rate);
    case AccessMode::basic: return basic_slots(t);
    case AccessMode::rtscts: return rtscts_slots(t);
  }
  throw InvalidArgument("slots_for: unknown access mode");
}

}  // namespace mprlab::slots
