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

#include "mprlab/backoff.hpp"
#include "mprlab/error.hpp"
#include "oracle.hpp"

using namespace mprlab::backoff;
using doctest::Approx;

TEST_CASE("transmission probability from collision probability") {
  CHECK(pt_of_pc(0.0, {16, 2.0}) == Approx(2.0 / 17).epsilon(1e-15));
  CHECK(pt_of_pc(0.3, {16, 2.0}) == Approx(0.8 / 11.6).epsilon(1e-15));
  CHECK_THROWS_AS(pt_of_pc(0.5, {16, 2.0}), mprlab::SteadyStateUnreachable);
  CHECK_THROWS_AS(pt_of_pc(0.2, {16, 1.0}), mprlab::InvalidArgument);
  double prev = 1.0;
  for (int i = 0; i < 100; ++i) {
    const double p = pt_of_pc(i * 0.0049, {32, 2.0});
    CHECK(p < prev);
    CHECK(p > 0.0);
    prev = p;
  }
}

TEST_CASE("collision probability from transmission probability") {
  CHECK(pc_of_pt(0.0, 10, 2) == 0.0);
  CHECK(pc_of_pt(0.5, 3, 1) == Approx(0.75).epsilon(1e-15));
  CHECK(pc_of_pt(0.7, 4, 4) == 0.0);
  for (int N : {5, 30})
    for (int M : {1, 3})
      for (double p : {0.01, 0.2, 0.6})
        CHECK(pc_of_pt(p, N, M) == Approx(1 - oracle::binomial_cdf(N - 1, p, M - 1)).epsilon(1e-12));
}

TEST_CASE("composition is monotone") {
  const EBParams eb{32, 2.0};
  double prev = 1.0;
  for (int i = 0; i <= 200; ++i) {
    const double pc = i * 0.4999 / 200;
    const double back = pc_of_pt(pt_of_pc(pc, eb), 20, 2);
    CHECK(back <= prev + 1e-15);
    prev = back;
  }
}

TEST_CASE("fixed point") {
  const auto free = solve_fixed_point(3, 4, {16, 2.0});
  CHECK(free.p_c == 0.0);
  CHECK(free.p_t == Approx(2.0 / 17));
  for (int N : {2, 10, 50, 300})
    for (int M : {1, 2, 5})
      for (int w0 : {16, 32})
        for (double r : {1.5, 2.0, 4.0}) {
          if (M >= N) continue;
          const auto fp = solve_fixed_point(N, M, {w0, r});
          CHECK(fp.residual < 1e-12);
          CHECK(r * fp.p_c < 1.0);
          CHECK(std::abs(fp.p_t - pt_of_pc(pc_of_pt(fp.p_t, N, M), {w0, r})) < 1e-12);
          CHECK(fp.n_p_t == Approx(N * fp.p_t));
        }
}

TEST_CASE("large population fixed point approaches the limit") {
  const double lambda = asymptotic_lambda(2, 2.0);
  CHECK(solve_fixed_point(10000, 2, {32, 2.0}).n_p_t == Approx(lambda).epsilon(0.01));
  double prev_gap = 1e9;
  for (int N : {100, 1000, 10000}) {
    const double gap = std::abs(solve_fixed_point(N, 2, {32, 2.0}).n_p_t - lambda);
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
  for (int M : {1, 3}) {
    const double a = solve_fixed_point(10000, M, {16, 2.0}).n_p_t;
    const double b = solve_fixed_point(10000, M, {32, 2.0}).n_p_t;
    CHECK(a == Approx(b).epsilon(0.01));
  }
}

TEST_CASE("asymptotic attempt rate") {
  CHECK(asymptotic_lambda(1, 2.0) == Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(asymptotic_lambda(2, 2.0) == Approx(oracle::asymptotic_lambda(2, 2.0)).epsilon(1e-12));
  CHECK(asymptotic_lambda(2, 2.0) == Approx(1.6783).epsilon(1e-4));
  double prev = 0.0;
  for (double r : {1.5, 1.1, 1.01, 1.001, 1.0001}) {
    const double l = asymptotic_lambda(1, r);
    CHECK(l == Approx(std::log(r / (r - 1))).epsilon(1e-10));
    CHECK(l > prev);
    CHECK(l > 0.0);
    prev = l;
  }
  for (int M : {1, 2, 5, 20, 100})
    for (double r : {1.2, 2.0, 8.0, 60.0}) {
      const double l = asymptotic_lambda(M, r);
      CHECK(std::abs(oracle::poisson_cdf(l, M - 1) - (1 - 1 / r)) < 1e-12);
    }
  CHECK_THROWS_AS(asymptotic_lambda(2, 1.0), mprlab::InvalidArgument);
  CHECK_THROWS_AS(asymptotic_lambda(0, 2.0), mprlab::InvalidArgument);
}
