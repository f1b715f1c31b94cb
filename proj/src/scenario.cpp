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

#include "mprlab/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "mprlab/error.hpp"

namespace mprlab::lab {

namespace {

enum class Kind { integer, real, text, choice, list };

struct KeySpec {
  const char* name;
  Kind kind;
  Value def;
  double min = -1e300;
  double max = 1e300;
  std::vector<std::string> choices = {};
  bool min_exclusive = false;
};

const std::vector<KeySpec>& schema() {
  static const std::vector<KeySpec> keys = {
      {"access", Kind::choice, std::string("aloha"), 0, 0, {"aloha", "basic", "rtscts"}},
      {"population", Kind::choice, std::string("infinite"), 0, 0, {"infinite", "finite"}},
      {"N", Kind::integer, 50L, 1, 100000},
      {"M", Kind::integer, 1L, 1, 10000},
      {"N_list", Kind::list, std::vector<long>{}, 1, 100000},
      {"M_list", Kind::list, std::vector<long>{}, 1, 10000},
      {"M_max", Kind::integer, 30L, 2, 1000},
      {"p_t", Kind::real, -1.0, -1, 1},
      {"lambda", Kind::real, -1.0, -1, 1e6},
      {"W0", Kind::integer, 32L, 1, 1 << 20},
      {"r", Kind::real, 2.0, 1, 1e6, {}, true},
      {"stage_cap", Kind::integer, 32L, 1, 1000},
      {"seed", Kind::integer, 1L, 0, 9.2e18},
      {"warmup", Kind::integer, 100000L, 0, 1e12},
      {"measure", Kind::integer, 1000000L, 1, 1e12},
      {"replications", Kind::integer, 1L, 1, 10000},
      {"Q", Kind::integer, 0L, 0, 1e9},
      {"pool_policy", Kind::choice, std::string("unique_within_capacity"), 0, 0,
       {"unique_within_capacity", "unique_only"}},
      {"seq_overhead_us", Kind::real, 0.0, 0, 1e9},
      {"trace_slots", Kind::integer, 0L, 0, 10000},
      {"sigma_us", Kind::real, 9.0, 0, 1e9},
      {"sifs_us", Kind::real, 10.0, 0, 1e9},
      {"difs_us", Kind::real, 28.0, 0, 1e9},
      {"delta_us", Kind::real, 1.0, 0, 1e9},
      {"phy_overhead_us", Kind::real, 26.0, 0, 1e9},
      {"header_bits", Kind::real, 272.0, 0, 1e12},
      {"ack_bits", Kind::real, 112.0, 0, 1e12},
      {"rts_bits", Kind::real, 160.0, 0, 1e12},
      {"cts_bits", Kind::real, 112.0, 0, 1e12},
      {"payload_bits", Kind::real, 8184.0, 0, 1e12, {}, true},
      {"data_rate_mbps", Kind::real, 54.0, 0, 1e9, {}, true},
      {"basic_rate_mbps", Kind::real, 6.0, 0, 1e9, {}, true},
      {"cts_extra_addresses", Kind::integer, 0L, 0, 10000},
      {"K", Kind::integer, 2L, 0, 64},
      {"M_rx", Kind::integer, 4L, 1, 1024},
      {"N_sym", Kind::integer, 64L, 1, 1 << 20},
      {"snr_db", Kind::real, 20.0, -100, 300},
      {"trials", Kind::integer, 100L, 1, 1e7},
      {"alphabet", Kind::choice, std::string("bpsk"), 0, 0, {"bpsk", "qpsk"}},
      {"method", Kind::choice, std::string("ilsp"), 0, 0, {"ilsp", "exhaustive"}},
      {"input", Kind::text, std::string()},
      {"figure", Kind::integer, 0L, 0, 11},
  };
  return keys;
}

const KeySpec* find_key(std::string_view name) {
  for (const KeySpec& k : schema())
    if (name == k.name) return &k;
  return nullptr;
}

std::map<Mode, std::vector<std::string>> required_keys() {
  return {{Mode::analyze, {"M"}}, {Mode::fixpoint, {"M"}}, {Mode::simulate, {"N", "M"}}};
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

bool parse_long(std::string_view s, long& out) {
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

bool parse_double(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size() && std::isfinite(out);
}

void check_range(const KeySpec& k, double v, int line) {
  const bool low = k.min_exclusive ? v <= k.min : v < k.min;
  if (low || v > k.max) {
    std::ostringstream msg;
    msg << "value " << v << " out of range (" << (k.min_exclusive ? "> " : ">= ") << k.min
        << ", <= " << k.max << ")";
    throw ConfigError(line, k.name, msg.str());
  }
}

Value parse_value(const KeySpec& k, const std::string& text, int line) {
  switch (k.kind) {
    case Kind::integer: {
      long v;
      if (!parse_long(text, v)) throw ConfigError(line, k.name, "expected an integer, got '" + text + "'");
      check_range(k, static_cast<double>(v), line);
      return v;
    }
    case Kind::real: {
      double v;
      if (!parse_double(text, v)) throw ConfigError(line, k.name, "expected a number, got '" + text + "'");
      check_range(k, v, line);
      return v;
    }
    case Kind::text:
      return text;
    case Kind::choice:
      if (std::find(k.choices.begin(), k.choices.end(), text) == k.choices.end())
        throw ConfigError(line, k.name, "unknown choice '" + text + "'");
      return text;
    case Kind::list: {
      std::vector<long> out;
      if (text.empty()) return out;
      std::stringstream ss(text);
      std::string item;
      while (std::getline(ss, item, ',')) {
        long v;
        const std::string t = trim(item);
        if (!parse_long(t, v))
          throw ConfigError(line, k.name, "expected a comma-separated integer list, got '" + text + "'");
        check_range(k, static_cast<double>(v), line);
        out.push_back(v);
      }
      return out;
    }
  }
  throw ConfigError(line, k.name, "unsupported key type");
}

std::string format_value(const Value& v) {
  if (const long* i = std::get_if<long>(&v)) return std::to_string(*i);
  if (const double* d = std::get_if<double>(&v)) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", *d);
    return buf;
  }
  if (const std::string* s = std::get_if<std::string>(&v)) return *s;
  std::string out;
  for (long x : std::get<std::vector<long>>(v)) out += (out.empty() ? "" : ", ") + std::to_string(x);
  return out;
}

bool valid_name(const std::string& name) {
  return !name.empty() && std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
  });
}

Scenario defaults() {
  Scenario s;
  for (const KeySpec& k : schema()) s.params[k.name] = k.def;
  return s;
}

struct Pending {
  Scenario scenario;
  int header_line = 0;
  bool has_mode = false;
  std::set<std::string> given;
};

void assign(Pending& p, const std::string& key, const std::string& value, int line) {
  if (!p.given.insert(key).second) throw ConfigError(line, key, "duplicate key");
  if (key == "mode") {
    try {
      p.scenario.mode = mode_from_string(value);
    } catch (const InvalidArgument&) {
      throw ConfigError(line, key, "unknown mode '" + value + "'");
    }
    p.has_mode = true;
    return;
  }
  if (key == "out") {
    if (value.empty()) throw ConfigError(line, key, "empty output path");
    p.scenario.output_path = value;
    return;
  }
  const KeySpec* spec = find_key(key);
  if (!spec) throw ConfigError(line, key, "unknown key");
  p.scenario.params[key] = parse_value(*spec, value, line);
}

Scenario finish(Pending p, std::optional<Mode> default_mode) {
  if (!p.has_mode) {
    if (!default_mode) throw ConfigError(p.header_line, "mode", "missing required key");
    p.scenario.mode = *default_mode;
  } else if (default_mode && *default_mode != p.scenario.mode) {
    throw ConfigError(p.header_line, "mode",
                      "scenario mode '" + std::string(to_string(p.scenario.mode)) +
                          "' differs from requested mode '" + std::string(to_string(*default_mode)) + "'");
  }
  const auto req = required_keys();
  if (auto it = req.find(p.scenario.mode); it != req.end())
    for (const std::string& k : it->second)
      if (!p.given.count(k)) throw ConfigError(p.header_line, k, "missing required key");
  return std::move(p.scenario);
}

template <class T>
const T& typed(const Scenario& s, const std::string& key) {
  const auto it = s.params.find(key);
  if (it == s.params.end()) throw ConfigError(0, key, "unknown key");
  const T* v = std::get_if<T>(&it->second);
  if (!v) throw ConfigError(0, key, "type mismatch");
  return *v;
}

}  // namespace

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::analyze: return "analyze";
    case Mode::fixpoint: return "fixpoint";
    case Mode::optimal_r: return "optimal-r";
    case Mode::scan: return "scan";
    case Mode::simulate: return "simulate";
    case Mode::phy: return "phy";
    case Mode::reproduce: return "reproduce";
  }
  return "?";
}

Mode mode_from_string(std::string_view name) {
  for (Mode m : {Mode::analyze, Mode::fixpoint, Mode::optimal_r, Mode::scan, Mode::simulate,
                 Mode::phy, Mode::reproduce})
    if (to_string(m) == name) return m;
  throw InvalidArgument("unknown mode '" + std::string(name) + "'");
}

long Scenario::get_int(const std::string& key) const { return typed<long>(*this, key); }
double Scenario::get_double(const std::string& key) const { return typed<double>(*this, key); }
const std::string& Scenario::get_string(const std::string& key) const {
  return typed<std::string>(*this, key);
}
const std::vector<long>& Scenario::get_list(const std::string& key) const {
  return typed<std::vector<long>>(*this, key);
}

void Scenario::set(const std::string& key, const std::string& text) {
  if (key == "out") {
    output_path = text;
    return;
  }
  const KeySpec* spec = find_key(key);
  if (!spec) throw ConfigError(0, key, "unknown key");
  params[key] = parse_value(*spec, trim(text), 0);
}

std::vector<Scenario> parse_scenarios(std::string_view text, std::optional<Mode> default_mode) {
  Pending shared;
  shared.scenario = defaults();
  std::vector<Pending> sections;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string s = trim(raw);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError(line, "", "malformed section header");
      const std::string name = trim(std::string_view(s).substr(1, s.size() - 2));
      if (!valid_name(name)) throw ConfigError(line, "", "bad scenario name '" + name + "'");
      for (const Pending& p : sections)
        if (p.scenario.name == name) throw ConfigError(line, "", "duplicate scenario '" + name + "'");
      Pending p = shared;
      p.scenario.name = name;
      p.header_line = line;
      sections.push_back(std::move(p));
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(line, "", "expected 'key = value'");
    const std::string key = trim(std::string_view(s).substr(0, eq));
    const std::string value = trim(std::string_view(s).substr(eq + 1));
    if (key.empty()) throw ConfigError(line, "", "empty key");
    assign(sections.empty() ? shared : sections.back(), key, value, line);
  }
  std::vector<Scenario> out;
  if (sections.empty()) {
    shared.header_line = 1;
    out.push_back(finish(std::move(shared), default_mode));
    return out;
  }
  for (Pending& p : sections) out.push_back(finish(std::move(p), default_mode));
  return out;
}

Scenario parse_scenario(std::string_view text, std::optional<Mode> default_mode) {
  auto all = parse_scenarios(text, default_mode);
  if (all.size() != 1)
    throw ConfigError(0, "", "expected one scenario, found " + std::to_string(all.size()));
  return std::move(all.front());
}

std::string render(const Scenario& s) {
  std::ostringstream out;
  out << '[' << s.name << "]\n";
  out << "mode = " << to_string(s.mode) << '\n';
  out << "out = " << s.output_path << '\n';
  for (const KeySpec& k : schema()) {
    const auto it = s.params.find(k.name);
    out << k.name << " = " << format_value(it == s.params.end() ? k.def : it->second) << '\n';
  }
  return out.str();
}

std::vector<std::string> known_keys() {
  std::vector<std::string> keys = {"mode", "out"};
  for (const KeySpec& k : schema()) keys.emplace_back(k.name);
  return keys;
}

slots::PhyTimings timings_of(const Scenario& s) {
  slots::PhyTimings t;
  t.sigma = s.get_double("sigma_us") / 1e6;
  t.sifs = s.get_double("sifs_us") / 1e6;
  t.difs = s.get_double("difs_us") / 1e6;
  t.delta = s.get_double("delta_us") / 1e6;
  t.phy_overhead = s.get_double("phy_overhead_us") / 1e6;
  t.mac_header_bits = s.get_double("header_bits");
  t.ack_bits = s.get_double("ack_bits");
  t.rts_bits = s.get_double("rts_bits");
  t.cts_bits = s.get_double("cts_bits");
  t.payload_bits = s.get_double("payload_bits");
  t.data_rate = s.get_double("data_rate_mbps") * 1e6;
  t.basic_rate = s.get_double("basic_rate_mbps") * 1e6;
  t.cts_extra_addresses = static_cast<int>(s.get_int("cts_extra_addresses"));
  t.validate();
  return t;
}

backoff::EBParams eb_of(const Scenario& s) {
  backoff::EBParams eb{static_cast<int>(s.get_int("W0")), s.get_double("r")};
  eb.validate();
  return eb;
}

slots::AccessMode access_of(const Scenario& s) {
  return slots::access_mode_from_string(s.get_string("access"));
}

sim::SimConfig sim_config_of(const Scenario& s) {
  sim::SimConfig c;
  c.n_stations = static_cast<int>(s.get_int("N"));
  c.mpr = static_cast<int>(s.get_int("M"));
  c.eb = eb_of(s);
  c.stage_cap = static_cast<int>(s.get_int("stage_cap"));
  c.access_mode = access_of(s);
  c.timings = timings_of(s);
  c.seed = static_cast<std::uint64_t>(s.get_int("seed"));
  c.warmup_slots = s.get_int("warmup");
  c.measure_slots = s.get_int("measure");
  if (const long q = s.get_int("Q"); q > 0) {
    sim::SequencePool pool;
    pool.q = static_cast<int>(q);
    pool.policy = s.get_string("pool_policy") == "unique_only" ? sim::PoolPolicy::unique_only
                                                               : sim::PoolPolicy::unique_within_capacity;
    pool.overhead_per_sequence = s.get_double("seq_overhead_us") / 1e6;
    c.sequence_pool = pool;
  }
  c.validate();
  return c;
}

}  // namespace mprlab::lab
