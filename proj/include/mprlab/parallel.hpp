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

#include <cstddef>
#include <functional>

namespace mprlab {

/// Execution policy for the data-parallel kernels. `serial` is the reference
/// path; `parallel` must produce bit-identical results.
enum class Exec { serial, parallel };

/// Apply MPRLAB_THREADS (if set and positive) as the OpenMP thread cap.
/// Returns the cap in effect afterwards.
int apply_thread_cap_from_env();

int max_threads();

/// Calls fn(i) for i in [0, n). Each index must be independent.
void for_each_index(std::size_t n, Exec exec, const std::function<void(std::size_t)>& fn);

}  // namespace mprlab
