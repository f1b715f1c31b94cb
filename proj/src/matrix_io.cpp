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

#include "mprlab/matrix_io.hpp"

#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

#include "mprlab/error.hpp"

namespace mprlab::io {

namespace {
constexpr const char* kMagic = "mprlab-matrix";
}

void write_matrix(std::ostream& out, const phy::CMatrix& m) {
  const auto old = out.precision(std::numeric_limits<double>::max_digits10);
  out << kMagic << " complex " << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      out << (j ? " " : "") << m(i, j).real() << ' ' << m(i, j).imag();
    out << '\n';
  }
  out.precision(old);
}

phy::CMatrix read_matrix(std::istream& in) {
  std::string magic, kind;
  long rows = -1, cols = -1;
  if (!(in >> magic >> kind >> rows >> cols) || magic != kMagic || kind != "complex")
    throw FrameError("matrix: bad header");
  if (rows < 0 || cols < 0 || rows * cols > 100'000'000) throw FrameError("matrix: bad dimensions");
  phy::CMatrix m(rows, cols);
  for (long i = 0; i < rows; ++i)
    for (long j = 0; j < cols; ++j) {
      double re, im;
      if (!(in >> re >> im)) throw FrameError("matrix: truncated data");
      m(i, j) = {re, im};
    }
  std::string extra;
  if (in >> extra) throw FrameError("matrix: trailing data");
  return m;
}

phy::CMatrix load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open matrix file '" + path + "'");
  return read_matrix(in);
}

void save_matrix(const std::string& path, const phy::CMatrix& m) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write matrix file '" + path + "'");
  write_matrix(out, m);
}

}  // namespace mprlab::io
