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

// Text matrix format:
//   mprlab-matrix complex <rows> <cols>
//   re im re im ...   (one line per row, row-major)

#include <iosfwd>
#include <string>

#include "mprlab/phy.hpp"

namespace mprlab::io {

void write_matrix(std::ostream& out, const phy::CMatrix& m);

/// Throws FrameError on a bad header, short data or trailing garbage.
phy::CMatrix read_matrix(std::istream& in);

phy::CMatrix load_matrix(const std::string& path);
void save_matrix(const std::string& path, const phy::CMatrix& m);

}  // namespace mprlab::io
