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

// Symbol-level uplink with a multi-antenna access point: Y = H X + W.
//   Y  M_rx x N_sym received block
//   H  M_rx x K channel (column k belongs to user k)
//   X  K x N_sym symbols from a finite alphabet
//   W  circularly-symmetric complex Gaussian noise, variance eta per entry

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string_view>
#include <vector>

#include "mprlab/parallel.hpp"

namespace mprlab::phy {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;

enum class Alphabet { bpsk, qpsk };

std::string_view to_string(Alphabet a);
Alphabet alphabet_from_string(std::string_view name);

/// Constellation points, in enumeration order.
std::vector<Complex> constellation(Alphabet a);

/// Nearest constellation point per entry. Zero components round to +.
CMatrix quantize(const CMatrix& soft, Alphabet a);

/// Uniformly random symbols, deterministic given the seed.
CMatrix random_symbols(int K, int n_sym, Alphabet a, std::uint64_t seed);

/// i.i.d. CN(0, 1) channel, deterministic given the seed.
CMatrix random_channel(int m_rx, int K, std::uint64_t seed);

/// Noise variance for a per-antenna SNR in dB with unit-power symbols and channel taps.
double noise_variance_for_snr_db(double snr_db);

/// Y = H X + W. eta = 0 gives Y = H X exactly. Throws InvalidArgument on mismatch.
CMatrix simulate_uplink(const CMatrix& h, const CMatrix& x, double eta, std::uint64_t seed);

/// H^+ Y. Throws SingularMatrix unless H has full column rank.
CMatrix zf_detect(const CMatrix& y, const CMatrix& h);

/// (H^H H + eta I)^{-1} H^H Y. Throws InvalidArgument for eta <= 0.
CMatrix mmse_detect(const CMatrix& y, const CMatrix& h, double eta);

/// sigma_k counts as a source when sigma_k > max(abs_floor, ratio * sigma_1).
struct SourceCountPolicy {
  double noise_var = 0.0;
  /// Absolute floor. Negative means 2 sqrt(noise_var) (sqrt(N_sym) + sqrt(M_rx)),
  /// twice the largest singular value expected from noise alone.
  double abs_floor = -1.0;
  double ratio = 1e-8;
};

int estimate_num_sources(const CMatrix& y, const SourceCountPolicy& policy = {});

/// Singular values of Y, largest first.
Eigen::VectorXd singular_values(const CMatrix& y);

enum class BlindMethod { exhaustive, ilsp };

struct DetectionReport {
  int k_hat = 0;
  CMatrix h_hat;
  CMatrix x_hat;
  double residual = 0.0;  // ||Y - H_hat X_hat||_F^2
  int iterations = 0;
  bool converged = true;
  std::vector<double> residual_history;  // ILSP only, nonincreasing
};

/// ||Y - H X||_F^2 minimized over H for fixed X, i.e. ||Y P_perp(X^H)||_F^2.
/// Returns +inf when X X^H is singular.
double projected_residual(const CMatrix& y, const CMatrix& x);

/// Least-squares channel for fixed symbols: Y X^H (X X^H)^{-1}. Throws SingularMatrix.
CMatrix channel_for_symbols(const CMatrix& y, const CMatrix& x);

/// Largest candidate count accepted by the exhaustive search.
inline constexpr double kMaxExhaustiveCandidates = 1 << 20;

/// Global minimizer of the projected residual over every X in alphabet^{K x N}.
/// Candidates with singular X X^H are skipped. Ties go to the first candidate in
/// enumeration order, so serial and parallel runs agree exactly.
DetectionReport exhaustive_fa_detect(const CMatrix& y, int K, Alphabet a,
                                     Exec exec = Exec::serial);

struct IlspOptions {
  int max_iterations = 100;
  /// Extra deterministic random starts; the best residual wins. 0 = SVD start only.
  int restarts = 0;
  std::uint64_t restart_seed = 0x5eed;
};

/// Iterative least squares with projection: alternate H <- Y X^+ and
/// X <- quantize(H^+ Y) until the residual stops decreasing. For a real
/// alphabet the iteration runs on [Re Y; Im Y] so that H^+ Y is a real
/// least-squares estimate.
DetectionReport ilsp_fa_detect(const CMatrix& y, int K, Alphabet a, const IlspOptions& opts = {});

DetectionReport blind_fa_detect(const CMatrix& y, int K, Alphabet a, BlindMethod method,
                                Exec exec = Exec::serial);

/// x_hat.row(perm[i]) * factor[i] == x.row(i) for every i.
struct AmbiguityMatch {
  bool matched = false;
  std::vector<int> permutation;
  std::vector<Complex> factor;
};

/// Matches x_hat to x up to a row permutation and per-row alphabet symmetry
/// (sign for BPSK, quarter turn for QPSK).
AmbiguityMatch match_up_to_ambiguity(const CMatrix& x_hat, const CMatrix& x, Alphabet a);

/// k_hat training sequences: the first k_hat rows of a Sylvester-Hadamard
/// matrix of order P (M rounded up to a power of two). Entries are +-1, rows
/// are pairwise orthogonal, length P. Throws CapabilityExceeded for k_hat > M.
RMatrix allocate_training(int k_hat, int M);

/// H_hat = Y S^H / N_train with S the K x N_train training block.
/// Throws InvalidArgument unless S S^H = N_train I.
CMatrix channel_estimate_training(const CMatrix& y_preamble, const RMatrix& sequences);

}  // namespace mprlab::phy
