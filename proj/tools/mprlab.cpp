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

// mprlab <mode> --config <path> [--seed S] [--out DIR] [--figure K]

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "mprlab/error.hpp"
#include "mprlab/lab.hpp"
#include "mprlab/parallel.hpp"

int main(int argc, char** argv) {
  CLI::App app{"mprlab: multipacket-reception WLAN lab"};
  std::string mode_name, config_path, out_dir, seed, figure;
  app.add_option("mode", mode_name, "analyze | fixpoint | optimal-r | scan | simulate | phy | reproduce")
      ->required();
  app.add_option("--config", config_path, "scenario file")->required();
  app.add_option("--seed", seed, "override the scenario seed");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--figure", figure, "figure to reproduce");
  CLI11_PARSE(app, argc, argv);

  try {
    mprlab::apply_thread_cap_from_env();
    const auto mode = mprlab::lab::mode_from_string(mode_name);
    std::ifstream in(config_path);
    if (!in) throw mprlab::Error("cannot open config '" + config_path + "'");
    std::stringstream text;
    text << in.rdbuf();
    auto scenarios = mprlab::lab::parse_scenarios(text.str(), mode);
    for (auto& s : scenarios) {
      if (!seed.empty()) s.set("seed", seed);
      if (!out_dir.empty()) s.set("out", out_dir);
      if (!figure.empty()) s.set("figure", figure);
      for (const std::string& path : mprlab::lab::run_scenario(s)) std::cout << path << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "mprlab: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
