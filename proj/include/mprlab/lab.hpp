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

// Scenario runner: each mode turns a Scenario into one or more tables, and
// run_scenario writes them as CSV files under the scenario's output path.

#include <string>
#include <vector>

#include "mprlab/parallel.hpp"
#include "mprlab/scenario.hpp"

namespace mprlab::lab {

struct Table {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Index of a header column. Throws InvalidArgument when absent.
  std::size_t column(const std::string& name) const;
};

/// Tables produced by the scenario, without touching the filesystem (except
/// for reading a phy input matrix).
std::vector<Table> compute(const Scenario& s, Exec exec = Exec::parallel);

/// Tables for `reproduce --figure k` (k in 1, 2, 3, 5..11).
Table reproduce_figure(int figure, const Scenario& s, Exec exec = Exec::parallel);

/// Header line, then one line per row. Throws Error on a non-finite cell.
void write_csv(const std::string& path, const Table& t);

/// compute() plus the files: <out>/<scenario>_<table>.csv, a slot trace for
/// simulate with trace_slots > 0, and the detected matrices for phy with an
/// input file. Returns the paths written.
std::vector<std::string> run_scenario(const Scenario& s, Exec exec = Exec::parallel);

}  // namespace mprlab::lab
