// vbx/oracle.hpp

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

// Slow reference computations written directly from the model definition.
// Only ElboFdGradientAtUpdate touches the engine, to obtain the point whose
// stationarity it checks.

#pragma once

#include <cstdint>
#include <vector>

#include "vbx/common.hpp"
#include "vbx/vbx.hpp"

namespace vbx::oracle {

inline constexpr std::int64_t kMaxPaths = 1'000'000;

/// A small inference problem; gamma is the (fixed) responsibility matrix used
/// by the finite-difference check.
struct SmallProblem {
  Matrix x;      // T x R
  Vector phi;    // R
  Vector pi;     // S
  double loop_p = 0.9;
  double fa = 1.0;
  double fb = 1.0;
  Matrix gamma;  // T x S
};

struct PathPosterior {
  Matrix gamma;
  double log_total = 0.0;  // log sum over all paths
};

/// Exact state marginals by summing the joint over all S^T label sequences.
inline PathPosterior EnumeratePathPosterior(const Matrix &loglik, const Vector &pi,
                                            double loop_p) {
  const Index t_len = loglik.rows();
  const Index s_len = loglik.cols();
  if (t_len == 0) throw Error(ErrorKind::kEmpty, "enumeration needs at least one frame");
  std::int64_t paths = 1;
  for (Index t = 0; t < t_len; ++t) {
    paths *= s_len;
    if (paths > kMaxPaths)
      throw Error(ErrorKind::kTooLarge, "S^T exceeds " + std::to_string(kMaxPaths) + " paths");
  }

  auto log_trans = [&](Index from, Index to) {
    return std::log((1.0 - loop_p) * pi(to) + (from == to ? loop_p : 0.0));
  };

  std::vector<double> log_joint(static_cast<std::size_t>(paths));
  std::vector<Index> z(t_len, 0);
  for (std::int64_t p = 0; p < paths; ++p) {
    std::int64_t code = p;
    for (Index t = t_len - 1; t >= 0; --t) {
      z[t] = code % s_len;
      code /= s_len;
    }
    double lj = std::log(pi(z[0])) + loglik(0, z[0]);
    for (Index t = 1; t < t_len; ++t) lj += log_trans(z[t - 1], z[t]) + loglik(t, z[t]);
    log_joint[static_cast<std::size_t>(p)] = lj;
  }

  const Eigen::Map<const Vector> all(log_joint.data(), static_cast<Index>(paths));
  PathPosterior out;
  out.log_total = LogSumExp(all);
  out.gamma = Matrix::Zero(t_len, s_len);
  for (std::int64_t p = 0; p < paths; ++p) {
    const double w = std::exp(log_joint[static_cast<std::size_t>(p)] - out.log_total);
    std::int64_t code = p;
    for (Index t = t_len - 1; t >= 0; --t) {
      out.gamma(t, code % s_len) += w;
      code /= s_len;
    }
  }
  return out;
}

/// Expected number of entries into each state through the re-entry node,
/// plus the initial state marginal, by path enumeration. Normalising this
/// gives the type-II ML prior update.
inline Vector EnumerateEntryCounts(const Matrix &loglik, const Vector &pi, double loop_p) {
  const Index t_len = loglik.rows();
  const Index s_len = loglik.cols();
  std::int64_t paths = 1;
  for (Index t = 0; t < t_len; ++t) {
    paths *= s_len;
    if (paths > kMaxPaths)
      throw Error(ErrorKind::kTooLarge, "S^T exceeds " + std::to_string(kMaxPaths) + " paths");
  }
  // For a transition s' -> s the probability of having gone through the
  // re-entry node is (1 - loop_p) pi_s / p(s | s').
  std::vector<double> log_joint(static_cast<std::size_t>(paths));
  std::vector<std::vector<Index>> seqs(static_cast<std::size_t>(paths), std::vector<Index>(t_len));
  for (std::int64_t p = 0; p < paths; ++p) {
    auto &z = seqs[static_cast<std::size_t>(p)];
    std::int64_t code = p;
    for (Index t = t_len - 1; t >= 0; --t) {
      z[t] = code % s_len;
      code /= s_len;
    }
    double lj = std::log(pi(z[0])) + loglik(0, z[0]);
    for (Index t = 1; t < t_len; ++t) {
      const double tr = (1.0 - loop_p) * pi(z[t]) + (z[t - 1] == z[t] ? loop_p : 0.0);
      lj += std::log(tr) + loglik(t, z[t]);
    }
    log_joint[static_cast<std::size_t>(p)] = lj;
  }
  const Eigen::Map<const Vector> all(log_joint.data(), static_cast<Index>(paths));
  const double log_total = LogSumExp(all);
  Vector counts = Vector::Zero(s_len);
  for (std::int64_t p = 0; p < paths; ++p) {
    const auto &z = seqs[static_cast<std::size_t>(p)];
    const double w = std::exp(log_joint[static_cast<std::size_t>(p)] - log_total);
    counts(z[0]) += w;
    for (Index t = 1; t < t_len; ++t) {
      const double tr = (1.0 - loop_p) * pi(z[t]) + (z[t - 1] == z[t] ? loop_p : 0.0);
      counts(z[t]) += w * (1.0 - loop_p) * pi(z[t]) / tr;
    }
  }
  return counts;
}

/// log p(X) for a single speaker with fa = fb = 1. Per dimension r the T
/// values are N(0, I + phi_r 1 1^T); determinant and inverse come from the
/// rank-one identities.
inline double SingleSpeakerLogMl(const Matrix &x, const Vector &phi) {
  const double t_len = static_cast<double>(x.rows());
  double total = 0.0;
  for (Index r = 0; r < x.cols(); ++r) {
    const double p = phi(r);
    const double sum = x.col(r).sum();
    const double sq = x.col(r).squaredNorm();
    const double log_det = std::log1p(t_len * p);
    const double quad = sq - p * sum * sum / (1.0 + t_len * p);
    total += -0.5 * (t_len * kLog2Pi + log_det + quad);
  }
  return total;
}

/// First two ELBO terms as an explicit function of q(Y) with gamma fixed:
///   fa * sum_ts gamma_ts E_q[log N(x_t; V y_s, I)] - fb * KL(q(Y) || p(Y)).
inline double ExplicitElboYTerms(const Matrix &x, const Matrix &gamma, const Matrix &alpha,
                                 const Matrix &lambda, const Vector &phi, double fa, double fb) {
  const Index r = x.cols();
  double expected_ll = 0.0;
  for (Index t = 0; t < x.rows(); ++t) {
    for (Index s = 0; s < gamma.cols(); ++s) {
      if (gamma(t, s) == 0.0) continue;
      // E ||x - V y||^2 = ||x - V alpha||^2 + sum phi * lambda
      double sq = 0.0;
      for (Index d = 0; d < r; ++d) {
        const double diff = x(t, d) - std::sqrt(phi(d)) * alpha(s, d);
        sq += diff * diff + phi(d) * lambda(s, d);
      }
      expected_ll += gamma(t, s) * (-0.5 * static_cast<double>(r) * kLog2Pi - 0.5 * sq);
    }
  }
  double kl = 0.0;
  for (Index s = 0; s < alpha.rows(); ++s)
    for (Index d = 0; d < r; ++d)
      kl += 0.5 * (lambda(s, d) + alpha(s, d) * alpha(s, d) - 1.0 - std::log(lambda(s, d)));
  return fa * expected_ll - fb * kl;
}

/// Largest |dELBO/d alpha_sd| by central differences of ExplicitElboYTerms.
inline double ElboFdGradient(const SmallProblem &prob, const Matrix &alpha, const Matrix &lambda,
                             double delta = 1e-5) {
  double worst = 0.0;
  Matrix a = alpha;
  for (Index s = 0; s < a.rows(); ++s) {
    for (Index d = 0; d < a.cols(); ++d) {
      const double keep = a(s, d);
      a(s, d) = keep + delta;
      const double up = ExplicitElboYTerms(prob.x, prob.gamma, a, lambda, prob.phi, prob.fa, prob.fb);
      a(s, d) = keep - delta;
      const double down = ExplicitElboYTerms(prob.x, prob.gamma, a, lambda, prob.phi, prob.fa, prob.fb);
      a(s, d) = keep;
      worst = std::max(worst, std::abs((up - down) / (2.0 * delta)));
    }
  }
  return worst;
}

/// Runs the engine's q(Y) update on prob.gamma and returns the largest
/// finite-difference gradient component at the resulting alpha.
inline double ElboFdGradientAtUpdate(const SmallProblem &prob, double delta = 1e-5) {
  VBxConfig cfg;
  cfg.fa = prob.fa;
  cfg.fb = prob.fb;
  VBxState st;
  st.gamma = prob.gamma;
  UpdateQy(prob.x, prob.phi, cfg, st);
  return ElboFdGradient(prob, st.alpha, st.lambda, delta);
}

}  // namespace vbx::oracle
