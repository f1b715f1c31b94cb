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

// Line-oriented scenario files:
//
//   # comment
//   access = basic          keys before the first section are shared defaults
//   [fig5]                  one scenario per section, named by the header
//   mode = fixpoint
//   N_list = 5, 10, 20
//
// Every known key has a type and a default, and parsing fills all of them in.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mprlab/backoff.hpp"
#include "mprlab/mac_sim.hpp"
#include "mprlab/slot_model.hpp"

namespace mprlab::lab {

enum class Mode { analyze, fixpoint, optimal_r, scan, simulate, phy, reproduce };

std::string_view to_string(Mode m);
/// Throws InvalidArgument for an unknown name.
Mode mode_from_string(std::string_view name);

using Value = std::variant<long, double, std::string, std::vector<long>>;

struct Scenario {
  std::string name = "scenario";
  Mode mode = Mode::analyze;
  std::map<std::string, Value> params;
  std::string output_path = ".";

  long get_int(const std::string& key) const;
  double get_double(const std::string& key) const;
  const std::string& get_string(const std::string& key) const;
  const std::vector<long>& get_list(const std::string& key) const;

  /// Parses `text` as the value of `key` and validates it. Throws ConfigError (line 0).
  void set(const std::string& key, const std::string& text);

  bool operator==(const Scenario&) const = default;
};

/// Every scenario in the file. `default_mode` is used when a scenario has no
/// `mode` key; without it the key is required. Throws ConfigError.
std::vector<Scenario> parse_scenarios(std::string_view text,
                                      std::optional<Mode> default_mode = std::nullopt);

/// Exactly one scenario. Throws ConfigError otherwise.
Scenario parse_scenario(std::string_view text, std::optional<Mode> default_mode = std::nullopt);

/// Canonical text; parse_scenario(render(s)) == s.
std::string render(const Scenario& s);

/// Names of all accepted keys, in rendering order.
std::vector<std::string> known_keys();

// Typed views of a scenario.
slots::PhyTimings timings_of(const Scenario& s);
backoff::EBParams eb_of(const Scenario& s);
slots::AccessMode access_of(const Scenario& s);
/// SimConfig for n_stations = N, mpr = M plus the pool when Q > 0.
sim::SimConfig sim_config_of(const Scenario& s);

}  // namespace mprlab::lab
