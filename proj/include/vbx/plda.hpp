// vbx/plda.hpp

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

// Two-covariance PLDA and the transform into the space where the
// within-speaker covariance is identity and the between-speaker covariance is
// diagonal. That space is what the VB-HMM clustering works in.

#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "vbx/common.hpp"

namespace vbx {

/// Two-covariance model: x = m + s + w with s ~ N(0, between), w ~ N(0, within).
struct PLDAModel {
  Vector mean;
  Matrix within_cov;
  Matrix between_cov;

  Index dim() const { return mean.size(); }

  /// Throws ErrorKind::kModel when dimensions disagree, a covariance is not
  /// symmetric, within_cov is not positive definite, or between_cov has a
  /// clearly negative eigenvalue.
  void Validate() const {
    const Index d = dim();
    if (d <= 0) throw Error(ErrorKind::kModel, "PLDA dimension must be positive");
    if (within_cov.rows() != d || within_cov.cols() != d || between_cov.rows() != d ||
        between_cov.cols() != d)
      throw Error(ErrorKind::kModel, "PLDA mean and covariance dimensions disagree");
    if (!mean.allFinite() || !within_cov.allFinite() || !between_cov.allFinite())
      throw Error(ErrorKind::kModel, "PLDA parameters contain non-finite values");
    auto asym = [](const Matrix &m) {
      return (m - m.transpose()).cwiseAbs().maxCoeff() /
             std::max(1.0, m.cwiseAbs().maxCoeff());
    };
    if (asym(within_cov) > 1e-9 || asym(between_cov) > 1e-9)
      throw Error(ErrorKind::kModel, "PLDA covariance is not symmetric");
    Eigen::LLT<Matrix> llt(within_cov);
    if (llt.info() != Eigen::Success)
      throw Error(ErrorKind::kModel, "within-speaker covariance is not positive definite");
    Eigen::SelfAdjointEigenSolver<Matrix> eig(between_cov, Eigen::EigenvaluesOnly);
    const double scale = std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
    if (eig.eigenvalues().minCoeff() < -1e-9 * scale)
      throw Error(ErrorKind::kModel, "between-speaker covariance is not positive semi-definite");
  }
};

/// The LDA-like space derived from a PLDAModel. Row vectors are mapped by
/// x = (raw - mean) * projection.
struct DiarSpace {
  Vector mean;        // source_dim
  Matrix projection;  // source_dim x dim
  Vector phi;         // dim, descending, > 0
  int clamped = 0;    // how many kept eigenvalues were raised to kPhiFloor

  static constexpr double kPhiFloor = 1e-10;

  Index source_dim() const { return projection.rows(); }
  Index dim() const { return projection.cols(); }

  /// Per-dimension speaker-mean scale, V = diag(phi)^(1/2).
  Vector v_diag() const { return phi.array().sqrt().matrix(); }
};

/// Training container: one row per embedding, one id per row.
struct LabeledEmbeddings {
  Matrix vectors;
  std::vector<std::string> speaker_ids;
};

/// Maximum-likelihood scatter estimate of the two-covariance model.
/// within_cov divides by the number of vectors, between_cov by the number of
/// speakers. A singular within_cov gets a ridge of 1e-6 * trace / D (or 1e-6
/// when the trace itself is zero).
inline PLDAModel EstimatePlda(const LabeledEmbeddings &data) {
  const Index n = data.vectors.rows();
  const Index d = data.vectors.cols();
  if (static_cast<Index>(data.speaker_ids.size()) != n)
    throw Error(ErrorKind::kInput, "number of speaker ids (" +
                                       std::to_string(data.speaker_ids.size()) +
                                       ") does not match number of vectors (" +
                                       std::to_string(n) + ")");
  if (d <= 0) throw Error(ErrorKind::kInput, "embedding dimension must be positive");
  if (!data.vectors.allFinite())
    throw Error(ErrorKind::kInput, "training vectors contain non-finite values");

  std::map<std::string, std::vector<Index>> by_speaker;
  for (Index i = 0; i < n; ++i) by_speaker[data.speaker_ids[i]].push_back(i);
  if (by_speaker.size() < 2)
    throw Error(ErrorKind::kEstimation, "PLDA estimation needs at least 2 speakers, got " +
                                            std::to_string(by_speaker.size()));

  PLDAModel model;
  model.mean = data.vectors.colwise().mean().transpose();
  model.within_cov = Matrix::Zero(d, d);
  model.between_cov = Matrix::Zero(d, d);
  for (const auto &[id, rows] : by_speaker) {
    Vector spk_mean = Vector::Zero(d);
    for (Index i : rows) spk_mean += data.vectors.row(i).transpose();
    spk_mean /= static_cast<double>(rows.size());
    for (Index i : rows) {
      const Vector c = data.vectors.row(i).transpose() - spk_mean;
      model.within_cov.noalias() += c * c.transpose();
    }
    const Vector b = spk_mean - model.mean;
    model.between_cov.noalias() += b * b.transpose();
  }
  model.within_cov /= static_cast<double>(n);
  model.between_cov /= static_cast<double>(by_speaker.size());

  Eigen::SelfAdjointEigenSolver<Matrix> eig(model.within_cov, Eigen::EigenvaluesOnly);
  const double max_ev = eig.eigenvalues().maxCoeff();
  const double min_ev = eig.eigenvalues().minCoeff();
  if (max_ev <= 0.0 || min_ev <= 1e-10 * max_ev) {
    const double trace = model.within_cov.trace();
    const double ridge = trace > 0.0 ? 1e-6 * trace / static_cast<double>(d) : 1e-6;
    model.within_cov.diagonal().array() += ridge;
  }
  return model;
}

/// Solves between * E = within * E * diag(phi) through the Cholesky factor of
/// within, keeping the r leading eigenpairs. Columns of E are normalised so
/// that E^T within E = I and each column's largest-magnitude entry is positive.
inline DiarSpace DeriveSpace(const PLDAModel &model, Index r) {
  model.Validate();
  const Index d = model.dim();
  if (r < 1 || r > d)
    throw Error(ErrorKind::kInput, "retained dimension r=" + std::to_string(r) +
                                       " must lie in [1, " + std::to_string(d) + "]");

  Eigen::LLT<Matrix> llt(model.within_cov);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorKind::kModel, "within-speaker covariance is not positive definite");
  const auto lower = llt.matrixL();

  // C = L^-1 between L^-T
  Matrix tmp = lower.solve(model.between_cov);
  Matrix c = lower.solve(tmp.transpose());
  c = 0.5 * (c + c.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(c);
  if (eig.info() != Eigen::Success)
    throw Error(ErrorKind::kNumerical, "eigendecomposition did not converge");

  // Eigen returns ascending order.
  Matrix u(d, r);
  DiarSpace space;
  space.phi.resize(r);
  for (Index k = 0; k < r; ++k) {
    space.phi(k) = eig.eigenvalues()(d - 1 - k);
    u.col(k) = eig.eigenvectors().col(d - 1 - k);
  }
  space.projection = lower.transpose().solve(u);
  for (Index k = 0; k < r; ++k) {
    Index arg = 0;
    space.projection.col(k).cwiseAbs().maxCoeff(&arg);
    if (space.projection(arg, k) < 0.0) space.projection.col(k) *= -1.0;
    if (space.phi(k) < DiarSpace::kPhiFloor) {
      space.phi(k) = DiarSpace::kPhiFloor;
      ++space.clamped;
    }
  }
  space.mean = model.mean;
  return space;
}

/// Centers, whitens and reduces raw row vectors: (raw - mean) * E.
inline Matrix Project(const DiarSpace &space, const Matrix &raw) {
  if (raw.cols() != space.source_dim())
    throw Error(ErrorKind::kInput, "embedding dimension " + std::to_string(raw.cols()) +
                                       " does not match space source dimension " +
                                       std::to_string(space.source_dim()));
  return (raw.rowwise() - space.mean.transpose()) * space.projection;
}

/// Scales every row to Euclidean norm sqrt(K), K = number of columns.
inline Matrix LengthNormalize(const Matrix &vectors) {
  const double target = std::sqrt(static_cast<double>(vectors.cols()));
  Matrix out(vectors.rows(), vectors.cols());
  for (Index i = 0; i < vectors.rows(); ++i) {
    const double norm = vectors.row(i).norm();
    if (!(norm > 0.0))
      throw Error(ErrorKind::kDegenerate,
                  "cannot length-normalize zero row " + std::to_string(i));
    out.row(i) = vectors.row(i) * (target / norm);
  }
  return out;
}

}  // namespace vbx
