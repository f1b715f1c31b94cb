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

#include "mprlab/phy.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "mprlab/error.hpp"

namespace mprlab::phy {

namespace {

constexpr double kRankTol = 1e-10;
constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_real(Alphabet a) { return a == Alphabet::bpsk; }

void require(bool ok, const char* what) {
  if (!ok) throw InvalidArgument(what);
}

double quantize_axis(double v) { return v >= 0.0 ? 1.0 : -1.0; }

RMatrix stack_real(const CMatrix& y) {
  RMatrix out(2 * y.rows(), y.cols());
  out.topRows(y.rows()) = y.real();
  out.bottomRows(y.rows()) = y.imag();
  return out;
}

double conj_of(double v) { return v; }
Complex conj_of(const Complex& v) { return std::conj(v); }

/// Cholesky solve of G Z = A for small Hermitian G; returns trace(Z), or +inf
/// when a pivot falls below tol * trace(G) / K.
template <class Scalar>
double trace_of_solve(std::vector<Scalar>& g, std::vector<Scalar>& a, int K) {
  double scale = 0.0;
  for (int i = 0; i < K; ++i) scale += std::real(g[i * K + i]);
  const double floor = 1e-9 * scale / K;
  // in-place lower Cholesky: g = L L^H
  for (int j = 0; j < K; ++j) {
    double d = std::real(g[j * K + j]);
    for (int p = 0; p < j; ++p) d -= std::norm(g[j * K + p]);
    if (!(d > floor)) return kInf;
    const double l = std::sqrt(d);
    g[j * K + j] = l;
    for (int i = j + 1; i < K; ++i) {
      Scalar s = g[i * K + j];
      for (int p = 0; p < j; ++p) s -= g[i * K + p] * conj_of(g[j * K + p]);
      g[i * K + j] = s / l;
    }
  }
  // forward then backward substitution per column of a
  double trace = 0.0;
  for (int c = 0; c < K; ++c) {
    for (int i = 0; i < K; ++i) {
      Scalar s = a[i * K + c];
      for (int p = 0; p < i; ++p) s -= g[i * K + p] * a[p * K + c];
      a[i * K + c] = s / std::real(g[i * K + i]);
    }
    for (int i = K - 1; i >= 0; --i) {
      Scalar s = a[i * K + c];
      for (int p = i + 1; p < K; ++p) s -= conj_of(g[p * K + i]) * a[p * K + c];
      a[i * K + c] = s / std::real(g[i * K + i]);
    }
    trace += std::real(a[c * K + c]);
  }
  return trace;
}

/// Objective of the exhaustive search for one candidate, with the Gram matrix
/// C = Y^H Y precomputed (its real part for a real alphabet).
template <class Scalar>
class CandidateScorer {
 public:
  CandidateScorer(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& gram,
                  double y_energy, int K, int n, std::vector<Scalar> points)
      : gram_(gram), y_energy_(y_energy), K_(K), n_(n), points_(std::move(points)),
        x_(static_cast<std::size_t>(K * n)), t_(static_cast<std::size_t>(K * n)),
        g_(static_cast<std::size_t>(K * K)), a_(static_cast<std::size_t>(K * K)) {}

  void decode(std::uint64_t index) {
    const auto base = static_cast<std::uint64_t>(points_.size());
    for (int e = K_ * n_ - 1; e >= 0; --e) {
      x_[static_cast<std::size_t>(e)] = points_[index % base];
      index /= base;
    }
  }

  const std::vector<Scalar>& symbols() const { return x_; }

  double score(std::uint64_t index) {
    decode(index);
    const int K = K_, n = n_;
    for (int i = 0; i < K; ++i)
      for (int j = 0; j <= i; ++j) {
        Scalar s{};
        for (int t = 0; t < n; ++t) s += x_[i * n + t] * conj_of(x_[j * n + t]);
        g_[i * K + j] = s;
        g_[j * K + i] = conj_of(s);
      }
    // t = X C, a = t X^H
    for (int i = 0; i < K; ++i)
      for (int c = 0; c < n; ++c) {
        Scalar s{};
        for (int t = 0; t < n; ++t) s += x_[i * n + t] * gram_(t, c);
        t_[i * n + c] = s;
      }
    for (int i = 0; i < K; ++i)
      for (int j = 0; j < K; ++j) {
        Scalar s{};
        for (int c = 0; c < n; ++c) s += t_[i * n + c] * conj_of(x_[j * n + c]);
        a_[i * K + j] = s;
      }
    const double captured = trace_of_solve(g_, a_, K);
    if (!std::isfinite(captured)) return kInf;
    return y_energy_ - captured;
  }

 private:
  const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& gram_;
  double y_energy_;
  int K_, n_;
  std::vector<Scalar> points_;
  std::vector<Scalar> x_, t_, g_, a_;
};

struct Best {
  double value = kInf;
  std::uint64_t index = std::numeric_limits<std::uint64_t>::max();

  void offer(double v, std::uint64_t i) {
    if (v < value || (v == value && i < index)) {
      value = v;
      index = i;
    }
  }
};

template <class Scalar>
Best exhaustive_kernel(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& gram,
                       double y_energy, int K, int n, const std::vector<Scalar>& points,
                       std::uint64_t count, Exec exec) {
  if (exec == Exec::serial) {
    CandidateScorer<Scalar> scorer(gram, y_energy, K, n, points);
    Best best;
    for (std::uint64_t c = 0; c < count; ++c) {
      const double v = scorer.score(c);
      if (v < best.value) {
        best.value = v;
        best.index = c;
      }
    }
    return best;
  }
  Best best;
#pragma omp parallel
  {
    CandidateScorer<Scalar> scorer(gram, y_energy, K, n, points);
    Best local;
    const auto total = static_cast<long long>(count);
#pragma omp for schedule(static)
    for (long long c = 0; c < total; ++c) local.offer(scorer.score(c), static_cast<std::uint64_t>(c));
#pragma omp critical(mprlab_exhaustive_reduce)
    best.offer(local.value, local.index);
  }
  return best;
}

CMatrix to_symbols(const std::vector<Complex>& flat, int K, int n) {
  CMatrix x(K, n);
  for (int i = 0; i < K; ++i)
    for (int t = 0; t < n; ++t) x(i, t) = flat[static_cast<std::size_t>(i * n + t)];
  return x;
}

double direct_residual(const CMatrix& y, const CMatrix& h, const CMatrix& x) {
  return (y - h * x).squaredNorm();
}

}  // namespace

std::string_view to_string(Alphabet a) { return a == Alphabet::bpsk ? "bpsk" : "qpsk"; }

Alphabet alphabet_from_string(std::string_view name) {
  if (name == "bpsk") return Alphabet::bpsk;
  if (name == "qpsk") return Alphabet::qpsk;
  throw InvalidArgument("unknown alphabet '" + std::string(name) + "'");
}

std::vector<Complex> constellation(Alphabet a) {
  if (a == Alphabet::bpsk) return {{-1.0, 0.0}, {1.0, 0.0}};
  const double s = 1.0 / std::sqrt(2.0);
  return {{-s, -s}, {-s, s}, {s, -s}, {s, s}};
}

CMatrix quantize(const CMatrix& soft, Alphabet a) {
  CMatrix out(soft.rows(), soft.cols());
  const double s = 1.0 / std::sqrt(2.0);
  for (Eigen::Index i = 0; i < soft.rows(); ++i)
    for (Eigen::Index j = 0; j < soft.cols(); ++j) {
      const Complex z = soft(i, j);
      out(i, j) = a == Alphabet::bpsk
                      ? Complex(quantize_axis(z.real()), 0.0)
                      : Complex(s * quantize_axis(z.real()), s * quantize_axis(z.imag()));
    }
  return out;
}

CMatrix random_symbols(int K, int n_sym, Alphabet a, std::uint64_t seed) {
  require(K >= 0 && n_sym >= 1, "random_symbols: bad dimensions");
  const auto points = constellation(a);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, points.size() - 1);
  CMatrix x(K, n_sym);
  for (int i = 0; i < K; ++i)
    for (int t = 0; t < n_sym; ++t) x(i, t) = points[pick(rng)];
  return x;
}

CMatrix random_channel(int m_rx, int K, std::uint64_t seed) {
  require(m_rx >= 1 && K >= 0, "random_channel: bad dimensions");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  CMatrix h(m_rx, K);
  for (int i = 0; i < m_rx; ++i)
    for (int k = 0; k < K; ++k) {
      const double re = g(rng);
      h(i, k) = Complex(re, g(rng));
    }
  return h;
}

double noise_variance_for_snr_db(double snr_db) { return std::pow(10.0, -snr_db / 10.0); }

CMatrix simulate_uplink(const CMatrix& h, const CMatrix& x, double eta, std::uint64_t seed) {
  if (h.cols() != x.rows()) throw InvalidArgument("simulate_uplink: H columns must equal X rows");
  require(h.rows() >= 1 && x.cols() >= 1, "simulate_uplink: empty block");
  require(eta >= 0.0 && std::isfinite(eta), "simulate_uplink: noise variance must be >= 0");
  CMatrix y = h * x;
  if (eta == 0.0) return y;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, std::sqrt(eta / 2.0));
  for (Eigen::Index i = 0; i < y.rows(); ++i)
    for (Eigen::Index j = 0; j < y.cols(); ++j) {
      const double re = g(rng);
      y(i, j) += Complex(re, g(rng));
    }
  return y;
}

CMatrix zf_detect(const CMatrix& y, const CMatrix& h) {
  if (y.rows() != h.rows()) throw InvalidArgument("zf_detect: Y and H row counts differ");
  Eigen::ColPivHouseholderQR<CMatrix> qr(h);
  qr.setThreshold(kRankTol);
  if (qr.rank() < h.cols()) throw SingularMatrix("zf_detect: H is not full column rank");
  return qr.solve(y);
}

CMatrix mmse_detect(const CMatrix& y, const CMatrix& h, double eta) {
  if (y.rows() != h.rows()) throw InvalidArgument("mmse_detect: Y and H row counts differ");
  require(eta > 0.0, "mmse_detect: eta must be > 0");
  CMatrix gram = h.adjoint() * h;
  gram.diagonal().array() += eta;
  return gram.ldlt().solve(h.adjoint() * y);
}

Eigen::VectorXd singular_values(const CMatrix& y) {
  return Eigen::JacobiSVD<CMatrix>(y).singularValues();
}

int estimate_num_sources(const CMatrix& y, const SourceCountPolicy& policy) {
  require(policy.noise_var >= 0.0, "estimate_num_sources: noise variance must be >= 0");
  const Eigen::VectorXd sv = singular_values(y);
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double floor = policy.abs_floor >= 0.0
                           ? policy.abs_floor
                           : 2.0 * std::sqrt(policy.noise_var) *
                                 (std::sqrt(static_cast<double>(y.cols())) + std::sqrt(static_cast<double>(y.rows())));
  const double threshold = std::max(floor, policy.ratio * sv(0));
  return static_cast<int>((sv.array() > threshold).count());
}

double projected_residual(const CMatrix& y, const CMatrix& x) {
  if (y.cols() != x.cols()) throw InvalidArgument("projected_residual: column counts differ");
  Eigen::ColPivHouseholderQR<CMatrix> qr(x.adjoint());
  qr.setThreshold(kRankTol);
  if (qr.rank() < x.rows()) return kInf;
  // Y P_perp = Y - (Y X^H)(X X^H)^{-1} X = Y - H_ls X
  const CMatrix h = qr.solve(y.adjoint()).adjoint();
  return direct_residual(y, h, x);
}

CMatrix channel_for_symbols(const CMatrix& y, const CMatrix& x) {
  if (y.cols() != x.cols()) throw InvalidArgument("channel_for_symbols: column counts differ");
  Eigen::ColPivHouseholderQR<CMatrix> qr(x.adjoint());
  qr.setThreshold(kRankTol);
  if (qr.rank() < x.rows()) throw SingularMatrix("channel_for_symbols: X X^H is singular");
  // least squares X^H H^H = Y^H
  return qr.solve(y.adjoint()).adjoint();
}

DetectionReport exhaustive_fa_detect(const CMatrix& y, int K, Alphabet a, Exec exec) {
  require(K >= 1, "exhaustive_fa_detect: K must be >= 1");
  require(K <= y.rows(), "exhaustive_fa_detect: K must not exceed the antenna count");
  const int n = static_cast<int>(y.cols());
  const auto points = constellation(a);
  const double log2_count = K * n * std::log2(static_cast<double>(points.size()));
  if (log2_count > std::log2(kMaxExhaustiveCandidates))
    throw InvalidArgument("exhaustive_fa_detect: more than 2^20 candidates");
  const auto count = static_cast<std::uint64_t>(std::llround(std::exp2(log2_count)));

  const CMatrix gram = y.adjoint() * y;
  const double energy = y.squaredNorm();
  Best best;
  if (is_real(a)) {
    std::vector<double> real_points;
    for (const Complex& p : points) real_points.push_back(p.real());
    const RMatrix real_gram = gram.real();
    best = exhaustive_kernel<double>(real_gram, energy, K, n, real_points, count, exec);
  } else {
    best = exhaustive_kernel<Complex>(gram, energy, K, n, points, count, exec);
  }
  if (!std::isfinite(best.value))
    throw SingularMatrix("exhaustive_fa_detect: every candidate has singular X X^H");

  CandidateScorer<Complex> decoder(gram, energy, K, n, points);
  decoder.decode(best.index);
  DetectionReport report;
  report.k_hat = K;
  report.x_hat = to_symbols(decoder.symbols(), K, n);
  report.h_hat = channel_for_symbols(y, report.x_hat);
  report.residual = direct_residual(y, report.h_hat, report.x_hat);
  return report;
}

namespace {

/// One ILSP descent from x0. Works on real-stacked data for a real alphabet.
DetectionReport ilsp_from(const CMatrix& y, const CMatrix& x0, Alphabet a, int max_iterations) {
  DetectionReport rep;
  rep.k_hat = static_cast<int>(x0.rows());
  rep.converged = false;
  const bool real = is_real(a);
  const RMatrix yr = real ? stack_real(y) : RMatrix();

  CMatrix x = x0;
  CMatrix best_x;
  double best = kInf;
  for (int it = 0; it < max_iterations; ++it) {
    double r;
    CMatrix h;
    if (real) {
      const RMatrix xr = x.real();
      Eigen::ColPivHouseholderQR<RMatrix> qr(xr.transpose());
      qr.setThreshold(kRankTol);
      if (qr.rank() < xr.rows()) break;  // degenerate iterate
      const RMatrix hr = qr.solve(yr.transpose()).transpose();
      r = (yr - hr * xr).squaredNorm();
      if (!(r < best)) {
        rep.converged = true;
        break;
      }
      best = r;
      best_x = x;
      rep.residual_history.push_back(r);
      rep.iterations = it + 1;
      Eigen::ColPivHouseholderQR<RMatrix> hqr(hr);
      const RMatrix soft = hqr.solve(yr);
      x = quantize(soft.cast<Complex>(), a);
    } else {
      Eigen::ColPivHouseholderQR<CMatrix> qr(x.adjoint());
      qr.setThreshold(kRankTol);
      if (qr.rank() < x.rows()) break;
      h = qr.solve(y.adjoint()).adjoint();
      r = direct_residual(y, h, x);
      if (!(r < best)) {
        rep.converged = true;
        break;
      }
      best = r;
      best_x = x;
      rep.residual_history.push_back(r);
      rep.iterations = it + 1;
      x = quantize(Eigen::ColPivHouseholderQR<CMatrix>(h).solve(y), a);
    }
    if (it + 1 == max_iterations) rep.converged = true;  // iteration budget spent while descending
  }
  if (!std::isfinite(best)) {
    rep.converged = false;
    rep.residual = kInf;
    rep.x_hat = x0;
    rep.h_hat = CMatrix::Zero(y.rows(), x0.rows());
    return rep;
  }
  rep.x_hat = best_x;
  rep.h_hat = channel_for_symbols(y, best_x);
  rep.residual = direct_residual(y, rep.h_hat, rep.x_hat);
  return rep;
}

CMatrix svd_start(const CMatrix& y, int K, Alphabet a) {
  if (is_real(a)) {
    const RMatrix yr = stack_real(y);
    Eigen::JacobiSVD<RMatrix> svd(yr, Eigen::ComputeThinU);
    const RMatrix soft = svd.matrixU().leftCols(K).transpose() * yr;
    return quantize(soft.cast<Complex>(), a);
  }
  Eigen::JacobiSVD<CMatrix> svd(y, Eigen::ComputeThinU);
  return quantize(svd.matrixU().leftCols(K).adjoint() * y, a);
}

}  // namespace

DetectionReport ilsp_fa_detect(const CMatrix& y, int K, Alphabet a, const IlspOptions& opts) {
  require(K >= 1, "ilsp_fa_detect: K must be >= 1");
  require(K <= y.rows(), "ilsp_fa_detect: K must not exceed the antenna count");
  require(opts.max_iterations >= 1, "ilsp_fa_detect: need at least one iteration");
  DetectionReport best = ilsp_from(y, svd_start(y, K, a), a, opts.max_iterations);
  for (int s = 0; s < opts.restarts; ++s) {
    const CMatrix x0 =
        random_symbols(K, static_cast<int>(y.cols()), a, opts.restart_seed + static_cast<std::uint64_t>(s));
    DetectionReport cand = ilsp_from(y, x0, a, opts.max_iterations);
    if (cand.residual < best.residual) best = std::move(cand);
  }
  return best;
}

DetectionReport blind_fa_detect(const CMatrix& y, int K, Alphabet a, BlindMethod method,
                                Exec exec) {
  return method == BlindMethod::exhaustive ? exhaustive_fa_detect(y, K, a, exec)
                                           : ilsp_fa_detect(y, K, a);
}

AmbiguityMatch match_up_to_ambiguity(const CMatrix& x_hat, const CMatrix& x, Alphabet a) {
  AmbiguityMatch m;
  if (x_hat.rows() != x.rows() || x_hat.cols() != x.cols()) return m;
  const int K = static_cast<int>(x.rows());
  std::vector<Complex> factors = {{1, 0}, {-1, 0}};
  if (a == Alphabet::qpsk) factors = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  std::vector<int> perm(static_cast<std::size_t>(K));
  std::iota(perm.begin(), perm.end(), 0);
  do {
    std::vector<Complex> chosen;
    for (int i = 0; i < K; ++i) {
      bool found = false;
      for (const Complex& f : factors) {
        if ((x_hat.row(perm[i]) * f - x.row(i)).cwiseAbs().maxCoeff() < 1e-9) {
          chosen.push_back(f);
          found = true;
          break;
        }
      }
      if (!found) break;
    }
    if (static_cast<int>(chosen.size()) == K) {
      m.matched = true;
      m.permutation = perm;
      m.factor = chosen;
      return m;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return m;
}

RMatrix allocate_training(int k_hat, int M) {
  require(M >= 1, "allocate_training: M must be >= 1");
  require(k_hat >= 1, "allocate_training: k_hat must be >= 1");
  if (k_hat > M) throw CapabilityExceeded("allocate_training: more users than orthogonal sequences");
  int order = 1;
  while (order < M) order *= 2;
  RMatrix hadamard = RMatrix::Ones(1, 1);
  while (hadamard.rows() < order) {
    const Eigen::Index n = hadamard.rows();
    RMatrix next(2 * n, 2 * n);
    next << hadamard, hadamard, hadamard, -hadamard;
    hadamard = std::move(next);
  }
  return hadamard.topRows(k_hat);
}

CMatrix channel_estimate_training(const CMatrix& y_preamble, const RMatrix& sequences) {
  if (y_preamble.cols() != sequences.cols())
    throw InvalidArgument("channel_estimate_training: preamble length differs from sequence length");
  const double n_train = static_cast<double>(sequences.cols());
  const RMatrix gram = sequences * sequences.transpose();
  const RMatrix expected = n_train * RMatrix::Identity(sequences.rows(), sequences.rows());
  if ((gram - expected).cwiseAbs().maxCoeff() > 1e-9 * n_train)
    throw InvalidArgument("channel_estimate_training: sequences are not orthogonal");
  return y_preamble * sequences.transpose().cast<Complex>() / n_train;
}

}  // namespace mprlab::phy
