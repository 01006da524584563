// vbx/vbx.hpp

// Copyright 2026  vbx-cpp authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

/*
  Variational Bayes inference for the x-vector Bayesian HMM.

  Every HMM state is a speaker s with latent vector y_s ~ N(0, I); an
  embedding emitted by s is x_t ~ N(V y_s, I) with V = diag(phi)^(1/2).
  Speakers repeat with probability loop_p, otherwise the next speaker is
  drawn from pi (re-entering the same one is allowed):

     p(s | s') = (1 - loop_p) pi_s + [s == s'] loop_p.

  The posterior q(Z) q(Y) is refined by alternating

     q(y_s) = N(alpha_s, diag(lambda_s)),
        lambda_s = 1 / (1 + (fa/fb) n_s phi),
        alpha_s  = (fa/fb) lambda_s o sum_t gamma_ts rho_t,   rho_t = V x_t,

  a forward-backward pass over the "expected" emission log-likelihoods

     log pbar(x_t|s) = fa [alpha_s . rho_t - 1/2 phi . (lambda_s + alpha_s^2)
                           - R/2 log(2 pi) - 1/2 x_t . x_t],

  and a type-II maximum-likelihood update of pi. The bound after each
  forward-backward pass is

     ELBO = log pbar(X) + sum_s fb/2 (R + sum log lambda_s - sum lambda_s
                                      - alpha_s . alpha_s).

  All recursions run in the log domain.
*/

#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "vbx/common.hpp"

namespace vbx {

struct VBxConfig {
  double fa = 0.3;         // acoustic scale
  double fb = 17.0;        // speaker regularisation scale
  double loop_p = 0.99;    // speaker self-loop probability
  int max_iters = 40;
  double elbo_tol = 1e-6;  // relative ELBO change that counts as converged
  double prune_pi = 1e-4;  // speakers whose prior falls below this are dropped

  void Validate() const {
    if (!(fa > 0.0) || !std::isfinite(fa)) throw Error(ErrorKind::kInput, "fa must be > 0");
    if (!(fb > 0.0) || !std::isfinite(fb)) throw Error(ErrorKind::kInput, "fb must be > 0");
    if (!(loop_p > 0.0 && loop_p < 1.0))
      throw Error(ErrorKind::kInput, "loop_p must lie in (0, 1)");
    if (max_iters < 1) throw Error(ErrorKind::kInput, "max_iters must be positive");
    if (!(elbo_tol > 0.0)) throw Error(ErrorKind::kInput, "elbo_tol must be > 0");
    if (!(prune_pi >= 0.0)) throw Error(ErrorKind::kInput, "prune_pi must be >= 0");
  }
};

/// Inference state for one recording. Matrices hold only the speakers that
/// are still active; `speakers[c]` is the initial index of column c and
/// `active` is indexed by initial speaker.
struct VBxState {
  Matrix gamma;   // T x S responsibilities
  Matrix alpha;   // S x R posterior means of y_s
  Matrix lambda;  // S x R diagonal posterior covariances of y_s
  Vector pi;      // S speaker priors
  std::vector<double> elbo_trace;
  std::vector<bool> active;
  std::vector<int> speakers;

  int iterations = 0;
  bool converged = false;
  std::vector<int> labels;  // hard labels as initial speaker indices

  Index num_speakers() const { return pi.size(); }
};

struct ForwardBackwardResult {
  Matrix gamma;   // T x S
  double log_px = 0.0;
  Matrix log_a;   // log A(t, s), t = 1..T stored at rows 0..T-1
  Matrix log_b;   // log B(t, s)
};

inline double TransitionProb(const Vector &pi, double loop_p, Index from, Index to) {
  return (1.0 - loop_p) * pi(to) + (from == to ? loop_p : 0.0);
}

/// One-hot responsibilities from hard labels, uniform pi, prior q(Y).
inline VBxState InitState(const std::vector<int> &labels, int num_speakers, Index dim) {
  if (num_speakers < 1) throw Error(ErrorKind::kInput, "need at least one speaker");
  if (dim < 1) throw Error(ErrorKind::kInput, "embedding dimension must be positive");
  const Index t_len = static_cast<Index>(labels.size());
  VBxState st;
  st.gamma = Matrix::Zero(t_len, num_speakers);
  for (Index t = 0; t < t_len; ++t) {
    const int l = labels[t];
    if (l < 0 || l >= num_speakers)
      throw Error(ErrorKind::kInput, "label " + std::to_string(l) + " at position " +
                                         std::to_string(t) + " outside [0, " +
                                         std::to_string(num_speakers) + ")");
    st.gamma(t, l) = 1.0;
  }
  st.pi = Vector::Constant(num_speakers, 1.0 / num_speakers);
  st.alpha = Matrix::Zero(num_speakers, dim);
  st.lambda = Matrix::Ones(num_speakers, dim);
  st.active.assign(num_speakers, true);
  st.speakers.resize(num_speakers);
  for (int s = 0; s < num_speakers; ++s) st.speakers[s] = s;
  return st;
}

/// q(Y) update given the current responsibilities. Writes alpha and lambda.
inline void UpdateQy(const Matrix &x, const Vector &phi, const VBxConfig &cfg, VBxState &st) {
  if (x.cols() != phi.size() || x.rows() != st.gamma.rows())
    throw Error(ErrorKind::kInput, "q(Y) update: dimension mismatch");
  const double ratio = cfg.fa / cfg.fb;
  const Matrix rho = x * phi.array().sqrt().matrix().asDiagonal();
  const Vector occupancy = st.gamma.colwise().sum().transpose();
  const Matrix weighted = st.gamma.transpose() * rho;  // S x R

  const Index s_len = st.gamma.cols();
  st.lambda.resize(s_len, phi.size());
  st.alpha.resize(s_len, phi.size());
  for (Index s = 0; s < s_len; ++s) {
    st.lambda.row(s) = (1.0 + ratio * occupancy(s) * phi.array()).inverse().transpose();
    st.alpha.row(s) = ratio * st.lambda.row(s).array() * weighted.row(s).array();
  }
  if (!st.alpha.allFinite() || !st.lambda.allFinite())
    throw Error(ErrorKind::kNumerical,
                "non-finite q(Y) at iteration " + std::to_string(st.iterations + 1));
}

/// log pbar(x_t | s). The constant -R/2 log 2pi - |x_t|^2/2 (times fa) is
/// the same for every speaker; pass include_constants = false to drop it.
inline double EmissionLoglik(const Vector &x_t, const Vector &alpha_s, const Vector &lambda_s,
                             const Vector &phi, double fa, bool include_constants = true) {
  const Vector rho = phi.array().sqrt() * x_t.array();
  double v = alpha_s.dot(rho) -
             0.5 * phi.dot((lambda_s.array() + alpha_s.array().square()).matrix());
  if (include_constants)
    v += -0.5 * static_cast<double>(x_t.size()) * kLog2Pi - 0.5 * x_t.squaredNorm();
  return fa * v;
}

/// T x S matrix of EmissionLoglik values.
inline Matrix EmissionMatrix(const Matrix &x, const Matrix &alpha, const Matrix &lambda,
                             const Vector &phi, double fa, bool include_constants = true) {
  const Matrix rho = x * phi.array().sqrt().matrix().asDiagonal();
  Matrix ll = rho * alpha.transpose();
  const Vector speaker_term =
      0.5 * ((lambda.array() + alpha.array().square()).matrix() * phi);
  ll.rowwise() -= speaker_term.transpose();
  if (include_constants) {
    const Vector frame_term =
        (-0.5 * static_cast<double>(x.cols()) * kLog2Pi -
         0.5 * x.rowwise().squaredNorm().array()).matrix();
    ll.colwise() += frame_term;
  }
  return fa * ll;
}

/// Forward-backward with the loop/re-entry topology in O(T S). loglik holds
/// log pbar(x_t|s).
inline ForwardBackwardResult ForwardBackward(const Matrix &loglik, const Vector &pi,
                                             double loop_p) {
  const Index t_len = loglik.rows();
  const Index s_len = loglik.cols();
  if (t_len == 0) throw Error(ErrorKind::kEmpty, "forward-backward needs at least one frame");
  if (pi.size() != s_len) throw Error(ErrorKind::kInput, "pi size does not match loglik columns");
  if (!loglik.allFinite()) throw Error(ErrorKind::kNumerical, "non-finite emission log-likelihood");

  const double log_loop = std::log(loop_p);
  const double log_switch = std::log1p(-loop_p);
  const Vector log_pi = pi.array().log();

  ForwardBackwardResult r;
  r.log_a.resize(t_len, s_len);
  r.log_b.resize(t_len, s_len);

  r.log_a.row(0) = (log_pi + loglik.row(0).transpose()).transpose();
  for (Index t = 1; t < t_len; ++t) {
    const double total = LogSumExp(r.log_a.row(t - 1));
    for (Index s = 0; s < s_len; ++s) {
      const double pred = LogAddExp(log_loop + r.log_a(t - 1, s), log_switch + log_pi(s) + total);
      r.log_a(t, s) = loglik(t, s) + pred;
    }
  }

  r.log_b.row(t_len - 1).setZero();
  Vector next(s_len);
  for (Index t = t_len - 2; t >= 0; --t) {
    for (Index s = 0; s < s_len; ++s) next(s) = loglik(t + 1, s) + r.log_b(t + 1, s);
    const double reenter = log_switch + LogSumExp((log_pi + next).eval());
    for (Index s = 0; s < s_len; ++s) r.log_b(t, s) = LogAddExp(log_loop + next(s), reenter);
  }

  r.log_px = LogSumExp(r.log_a.row(t_len - 1));
  r.gamma = (r.log_a + r.log_b).array() - r.log_px;
  r.gamma = r.gamma.array().exp();
  for (Index t = 0; t < t_len; ++t) {
    const double sum = r.gamma.row(t).sum();
    r.gamma.row(t) /= sum;
  }
  return r;
}

/// pi_s proportional to gamma_1s plus the expected number of re-entries into
/// s, evaluated with the forward/backward tables of the same pass.
inline Vector UpdatePi(const ForwardBackwardResult &fb, const Matrix &loglik, const Vector &pi,
                       double loop_p) {
  const Index t_len = loglik.rows();
  const Index s_len = loglik.cols();
  const double log_switch = std::log1p(-loop_p);
  Vector num = fb.gamma.row(0).transpose();
  if (t_len > 1) {
    Vector prev_total(t_len - 1);
    for (Index t = 1; t < t_len; ++t) prev_total(t - 1) = LogSumExp(fb.log_a.row(t - 1));
    for (Index s = 0; s < s_len; ++s) {
      if (pi(s) <= 0.0) continue;
      const Vector terms = prev_total + loglik.col(s).tail(t_len - 1) + fb.log_b.col(s).tail(t_len - 1);
      num(s) += std::exp(log_switch + std::log(pi(s)) - fb.log_px + LogSumExp(terms));
    }
  }
  return num / num.sum();
}

/// Bound from the forward-backward log-likelihood (which must include the
/// emission constants) and the q(Y) KL correction.
inline double Elbo(double log_px, const Matrix &alpha, const Matrix &lambda, double fb) {
  const double r = static_cast<double>(alpha.cols());
  double correction = 0.0;
  for (Index s = 0; s < alpha.rows(); ++s)
    correction += r + lambda.row(s).array().log().sum() - lambda.row(s).sum() -
                  alpha.row(s).squaredNorm();
  return log_px + 0.5 * fb * correction;
}

namespace detail {

// Drops speakers with pi below the threshold. At least one speaker always
// survives. Renormalises pi and gamma rows.
inline void PruneSpeakers(double prune_pi, VBxState &st) {
  const Index s_len = st.pi.size();
  std::vector<Index> keep;
  for (Index s = 0; s < s_len; ++s)
    if (st.pi(s) >= prune_pi) keep.push_back(s);
  if (keep.empty()) {
    Index best = 0;
    st.pi.maxCoeff(&best);
    keep.push_back(best);
  }
  if (static_cast<Index>(keep.size()) == s_len) return;

  const Index n = static_cast<Index>(keep.size());
  Matrix gamma(st.gamma.rows(), n);
  Matrix alpha(n, st.alpha.cols()), lambda(n, st.lambda.cols());
  Vector pi(n);
  std::vector<int> speakers(n);
  for (Index c = 0; c < n; ++c) {
    gamma.col(c) = st.gamma.col(keep[c]);
    alpha.row(c) = st.alpha.row(keep[c]);
    lambda.row(c) = st.lambda.row(keep[c]);
    pi(c) = st.pi(keep[c]);
    speakers[c] = st.speakers[keep[c]];
  }
  for (Index s = 0; s < s_len; ++s)
    if (std::find(keep.begin(), keep.end(), s) == keep.end()) st.active[st.speakers[s]] = false;
  for (Index t = 0; t < gamma.rows(); ++t) {
    const double sum = gamma.row(t).sum();
    if (sum > 0.0)
      gamma.row(t) /= sum;
    else
      gamma.row(t) = pi.transpose() / pi.sum();
  }
  st.gamma = std::move(gamma);
  st.alpha = std::move(alpha);
  st.lambda = std::move(lambda);
  st.pi = pi / pi.sum();
  st.speakers = std::move(speakers);
}

}  // namespace detail

/// Argmax over the columns of gamma, lowest column on ties, reported as the
/// initial speaker index of that column.
inline std::vector<int> HardLabels(const VBxState &st) {
  std::vector<int> labels(st.gamma.rows());
  for (Index t = 0; t < st.gamma.rows(); ++t) {
    Index best = 0;
    for (Index s = 1; s < st.gamma.cols(); ++s)
      if (st.gamma(t, s) > st.gamma(t, best)) best = s;
    labels[t] = st.speakers[best];
  }
  return labels;
}

/// Full VB loop. x is T x R in the diarization space, init_labels come from
/// the initial clustering (values 0..S-1), phi is the between-speaker
/// variance of each dimension.
inline VBxState Run(const Matrix &x, const std::vector<int> &init_labels, const Vector &phi,
                    const VBxConfig &cfg) {
  cfg.Validate();
  if (x.rows() == 0) throw Error(ErrorKind::kEmpty, "VBx needs at least one embedding");
  if (static_cast<Index>(init_labels.size()) != x.rows())
    throw Error(ErrorKind::kInput, "number of initial labels does not match embeddings");
  if (x.cols() != phi.size())
    throw Error(ErrorKind::kInput, "embedding dimension does not match phi");
  if (!x.allFinite() || !phi.allFinite())
    throw Error(ErrorKind::kNumerical, "non-finite input to VBx");

  const int num_speakers = *std::max_element(init_labels.begin(), init_labels.end()) + 1;
  VBxState st = InitState(init_labels, num_speakers, x.cols());

  for (int it = 0; it < cfg.max_iters; ++it) {
    UpdateQy(x, phi, cfg, st);
    const Matrix loglik = EmissionMatrix(x, st.alpha, st.lambda, phi, cfg.fa);
    ForwardBackwardResult fb = ForwardBackward(loglik, st.pi, cfg.loop_p);
    st.pi = UpdatePi(fb, loglik, st.pi, cfg.loop_p);
    st.gamma = std::move(fb.gamma);
    const double elbo = Elbo(fb.log_px, st.alpha, st.lambda, cfg.fb);
    st.iterations = it + 1;
    if (!std::isfinite(elbo) || !st.gamma.allFinite() || !st.pi.allFinite())
      throw Error(ErrorKind::kNumerical, "non-finite state at iteration " + std::to_string(it + 1));

    const bool done = !st.elbo_trace.empty() &&
                      std::abs(elbo - st.elbo_trace.back()) <= cfg.elbo_tol * std::abs(elbo);
    st.elbo_trace.push_back(elbo);
    detail::PruneSpeakers(cfg.prune_pi, st);
    if (done) {
      st.converged = true;
      break;
    }
  }
  st.labels = HardLabels(st);
  return st;
}

}  // namespace vbx
