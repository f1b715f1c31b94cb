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

#include <doctest.h>

#include <cmath>
#include <sstream>

#include "mprlab/error.hpp"
#include "mprlab/matrix_io.hpp"
#include "mprlab/phy.hpp"

using namespace mprlab;
using namespace mprlab::phy;
using doctest::Approx;

namespace {
double rel(const CMatrix& a, const CMatrix& b) { return (a - b).norm() / b.norm(); }
}

TEST_CASE("uplink synthesis") {
  const CMatrix x = random_symbols(3, 10, Alphabet::bpsk, 1);
  CHECK(simulate_uplink(CMatrix::Identity(3, 3), x, 0.0, 5) == x);
  const CMatrix h = random_channel(4, 3, 2);
  CHECK((simulate_uplink(h, x, 0.0, 5) - h * x).norm() == 0.0);
  CHECK_THROWS_AS(simulate_uplink(random_channel(4, 2, 1), x, 0.1, 1), InvalidArgument);

  const CMatrix big = random_symbols(4, 10000, Alphabet::qpsk, 3);
  const CMatrix y = simulate_uplink(CMatrix::Identity(4, 4), big, 0.1, 9);
  const double var = (y - big).squaredNorm() / static_cast<double>(y.size());
  CHECK(var == Approx(0.1).epsilon(0.05));
  CHECK(simulate_uplink(h, x, 0.3, 5) == simulate_uplink(h, x, 0.3, 5));
}

TEST_CASE("quantizer") {
  CMatrix soft(1, 3);
  soft << Complex(0.0, 0.0), Complex(-0.2, 1.0), Complex(3.0, -1.0);
  const CMatrix b = quantize(soft, Alphabet::bpsk);
  CHECK(b(0, 0) == Complex(1, 0));
  CHECK(b(0, 1) == Complex(-1, 0));
  const CMatrix q = quantize(soft, Alphabet::qpsk);
  const double s = 1 / std::sqrt(2.0);
  CHECK(q(0, 0) == Complex(s, s));
  CHECK(q(0, 2) == Complex(s, -s));
}

TEST_CASE("zero forcing") {
  const CMatrix x = random_symbols(2, 5, Alphabet::bpsk, 4);
  CHECK(rel(zf_detect(x, CMatrix::Identity(2, 2)), x) < 1e-15);
  CMatrix h = CMatrix::Zero(2, 2);
  h(0, 0) = 2;
  h(1, 1) = 4;
  CMatrix row(2, 1);
  row << 1, -1;
  CMatrix y(2, 1);
  y << 2, -4;
  CHECK(rel(zf_detect(y, h), row) < 1e-15);
  CMatrix rank1(3, 2);
  rank1 << 1, 2, 2, 4, 3, 6;
  CHECK_THROWS_AS(zf_detect(CMatrix::Ones(3, 4), rank1), SingularMatrix);

  // square channel, every BPSK column
  const CMatrix sq = random_channel(3, 3, 11);
  CMatrix all(3, 8);
  for (int c = 0; c < 8; ++c)
    for (int k = 0; k < 3; ++k) all(k, c) = (c >> k) & 1 ? 1.0 : -1.0;
  CHECK(quantize(zf_detect(sq * all, sq), Alphabet::bpsk) == all);
}

TEST_CASE("zero forcing is unbiased") {
  const CMatrix h = random_channel(4, 2, 21);
  const CMatrix x = random_symbols(2, 20000, Alphabet::bpsk, 22);
  const CMatrix err = zf_detect(simulate_uplink(h, x, 0.5, 23), h) - x;
  CHECK(std::abs(err.mean()) < 0.02);
}

TEST_CASE("mmse") {
  CMatrix h(1, 1), y(1, 1);
  h << 1;
  y << 2;
  CHECK(mmse_detect(y, h, 1.0)(0, 0) == Complex(1, 0));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const CMatrix hh = random_channel(4, 2, seed);
    const CMatrix yy = simulate_uplink(hh, random_symbols(2, 16, Alphabet::bpsk, seed + 100), 0.1, seed);
    const CMatrix zf = zf_detect(yy, hh);
    CHECK(rel(mmse_detect(yy, hh, 1e-12), zf) < 1e-6);
  }
  CHECK_THROWS_AS(mmse_detect(y, h, 0.0), InvalidArgument);
}

TEST_CASE("mmse symbol errors do not exceed zero forcing") {
  const double eta = noise_variance_for_snr_db(0);
  long zf_err = 0, mmse_err = 0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    const CMatrix h = random_channel(4, 2, 1000 + t);
    const CMatrix x = random_symbols(2, 500, Alphabet::bpsk, 2000 + t);
    const CMatrix y = simulate_uplink(h, x, eta, 3000 + t);
    zf_err += (quantize(zf_detect(y, h), Alphabet::bpsk) - x).cwiseAbs().cast<double>().count();
    mmse_err += (quantize(mmse_detect(y, h, eta), Alphabet::bpsk) - x).cwiseAbs().cast<double>().count();
  }
  CHECK(mmse_err <= zf_err);
}

TEST_CASE("source counting") {
  const CMatrix h = random_channel(4, 2, 5);
  const CMatrix y = simulate_uplink(h, random_symbols(2, 64, Alphabet::bpsk, 6), 0.0, 7);
  CHECK(estimate_num_sources(y, {0.0}) == 2);
  const double eta = noise_variance_for_snr_db(20);
  const CMatrix noise = simulate_uplink(CMatrix::Zero(4, 1), CMatrix::Zero(1, 64), eta, 8);
  CHECK(estimate_num_sources(noise, {eta}) == 0);
  int hits = 0;
  for (std::uint64_t t = 0; t < 1000; ++t) {
    const CMatrix yy = simulate_uplink(random_channel(4, 2, 10 * t), random_symbols(2, 64, Alphabet::bpsk, 10 * t + 1),
                                       eta, 10 * t + 2);
    hits += estimate_num_sources(yy, {eta}) == 2;
  }
  CHECK(hits >= 950);
}

TEST_CASE("noiseless rank equals the number of users") {
  for (std::uint64_t t = 0; t < 100; ++t) {
    const int K = 1 + static_cast<int>(t % 4);
    const CMatrix y = random_channel(6, K, t) * random_symbols(K, 40, Alphabet::qpsk, t + 500);
    const Eigen::VectorXd sv = singular_values(y);
    CHECK((sv.array() > 1e-9 * sv(0)).count() == K);
  }
}

TEST_CASE("blind detection, rank one") {
  const CMatrix x = random_symbols(1, 2, Alphabet::bpsk, 3);
  const CMatrix y = random_channel(2, 1, 4) * x;
  for (BlindMethod m : {BlindMethod::exhaustive, BlindMethod::ilsp}) {
    const auto rep = blind_fa_detect(y, 1, Alphabet::bpsk, m);
    CHECK(rep.residual < 1e-20);
    CHECK(match_up_to_ambiguity(rep.x_hat, x, Alphabet::bpsk).matched);
  }
}

TEST_CASE("exhaustive search recovers noiseless symbols") {
  for (std::uint64_t t = 0; t < 5; ++t) {
    CMatrix x = random_symbols(2, 8, Alphabet::bpsk, 40 + t);
    // keep the two rows non-proportional
    x(1, 0) = x(0, 0);
    x(1, 1) = -x(0, 1);
    const CMatrix h = random_channel(4, 2, 50 + t);
    const auto rep = exhaustive_fa_detect(h * x, 2, Alphabet::bpsk);
    CHECK(rep.residual < 1e-20);
    const auto m = match_up_to_ambiguity(rep.x_hat, x, Alphabet::bpsk);
    CHECK(m.matched);
  }
}

TEST_CASE("exhaustive search: serial and parallel agree, QPSK and limits") {
  const double eta = noise_variance_for_snr_db(10);
  const CMatrix y = simulate_uplink(random_channel(3, 2, 1), random_symbols(2, 7, Alphabet::bpsk, 2), eta, 3);
  const auto a = exhaustive_fa_detect(y, 2, Alphabet::bpsk, Exec::serial);
  const auto b = exhaustive_fa_detect(y, 2, Alphabet::bpsk, Exec::parallel);
  CHECK(a.x_hat == b.x_hat);
  CHECK(a.residual == b.residual);

  const CMatrix xq = random_symbols(1, 5, Alphabet::qpsk, 4);
  const auto q = exhaustive_fa_detect(random_channel(2, 1, 5) * xq, 1, Alphabet::qpsk);
  CHECK(q.residual < 1e-20);
  CHECK(match_up_to_ambiguity(q.x_hat, xq, Alphabet::qpsk).matched);

  CHECK_THROWS_AS(exhaustive_fa_detect(CMatrix::Ones(4, 11), 2, Alphabet::bpsk), InvalidArgument);
  CHECK_THROWS_AS(exhaustive_fa_detect(CMatrix::Ones(2, 4), 3, Alphabet::bpsk), InvalidArgument);
}

TEST_CASE("ilsp descends and never beats the exhaustive optimum") {
  const double eta = noise_variance_for_snr_db(15);
  int equal = 0;
  for (std::uint64_t t = 0; t < 60; ++t) {
    const CMatrix y = simulate_uplink(random_channel(4, 2, 3 * t), random_symbols(2, 8, Alphabet::bpsk, 3 * t + 1),
                                      eta, 3 * t + 2);
    const auto il = ilsp_fa_detect(y, 2, Alphabet::bpsk);
    for (std::size_t i = 1; i < il.residual_history.size(); ++i)
      CHECK(il.residual_history[i] <= il.residual_history[i - 1]);
    CHECK(il.iterations <= 100);
    const auto ex = exhaustive_fa_detect(y, 2, Alphabet::bpsk);
    CHECK(il.residual >= ex.residual * (1 - 1e-12));
    equal += std::abs(il.residual - ex.residual) <= 1e-9 * ex.residual;
  }
  MESSAGE("ilsp reached the exhaustive optimum in " << equal << " of 60 instances");
}

TEST_CASE("degenerate symbol blocks") {
  const CMatrix x = CMatrix::Ones(2, 6);
  CHECK(std::isinf(projected_residual(CMatrix::Ones(3, 6), x)));
  CHECK_THROWS_AS(channel_for_symbols(CMatrix::Ones(3, 6), x), SingularMatrix);
  // a silent block quantizes to constant rows
  const auto rep = ilsp_fa_detect(CMatrix::Zero(3, 6), 2, Alphabet::bpsk);
  CHECK_FALSE(rep.converged);
}

TEST_CASE("ambiguity matching") {
  CMatrix x(2, 3);
  x << 1, -1, 1, -1, -1, 1;
  CMatrix swapped(2, 3);
  swapped << 1, 1, -1, 1, -1, 1;  // rows swapped, first negated
  const auto m = match_up_to_ambiguity(swapped, x, Alphabet::bpsk);
  CHECK(m.matched);
  CHECK(m.permutation == std::vector<int>{1, 0});
  CHECK(m.factor[1] == Complex(-1, 0));
  CMatrix other = x;
  other(0, 0) = -1;
  CHECK_FALSE(match_up_to_ambiguity(other, x, Alphabet::bpsk).matched);
  const CMatrix xq = random_symbols(2, 6, Alphabet::qpsk, 9);
  CMatrix turned = xq;
  turned.row(0) *= Complex(0, 1);
  CHECK(match_up_to_ambiguity(turned, xq, Alphabet::qpsk).matched);
}

TEST_CASE("training allocation") {
  const RMatrix two = allocate_training(2, 4);
  CHECK(two.rows() == 2);
  CHECK(two.row(0).dot(two.row(1)) == 0.0);
  for (int M : {1, 3, 4, 5, 8}) {
    const RMatrix s = allocate_training(M, M);
    CHECK(s.rows() == M);
    CHECK((s.array().abs() == 1.0).all());
    CHECK((s * s.transpose() - s.cols() * RMatrix::Identity(M, M)).norm() == 0.0);
  }
  CHECK(allocate_training(3, 5) == allocate_training(3, 5));
  CHECK_THROWS_AS(allocate_training(5, 4), CapabilityExceeded);
  CHECK_THROWS_AS(allocate_training(0, 4), InvalidArgument);
}

TEST_CASE("training-based channel estimation") {
  const RMatrix s = allocate_training(3, 16);
  const CMatrix h = random_channel(4, 3, 77);
  const CMatrix y = h * s.cast<Complex>();
  CHECK((channel_estimate_training(y, s) - h).cwiseAbs().maxCoeff() < 1e-12);

  RMatrix dup(2, 4);
  dup << 1, 1, -1, -1, 1, 1, -1, -1;
  CHECK_THROWS_AS(channel_estimate_training(CMatrix::Ones(2, 4), dup), InvalidArgument);

  const RMatrix s16 = allocate_training(2, 16);
  const CMatrix h2 = random_channel(2, 2, 1);
  double sq = 0.0;
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) {
    const CMatrix yy = simulate_uplink(h2, s16.cast<Complex>(), 0.4, 5000 + t);
    sq += (channel_estimate_training(yy, s16) - h2).squaredNorm();
  }
  CHECK(sq / (trials * 4.0) == Approx(0.4 / 16).epsilon(0.1));
}

TEST_CASE("matrix text round trip") {
  const CMatrix m = random_channel(3, 5, 42);
  std::stringstream io;
  mprlab::io::write_matrix(io, m);
  CHECK(mprlab::io::read_matrix(io) == m);
  std::stringstream bad("mprlab-matrix complex 2 2\n1 2 3");
  CHECK_THROWS_AS(mprlab::io::read_matrix(bad), FrameError);
  std::stringstream junk("nope");
  CHECK_THROWS_AS(mprlab::io::read_matrix(junk), FrameError);
}
