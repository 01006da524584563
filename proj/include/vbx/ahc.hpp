// vbx/ahc.hpp

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

// Average-linkage agglomerative clustering on a precomputed cosine
// similarity matrix. Used to initialise the VB-HMM with (more) speakers than
// are actually present.

#pragma once

#include <vector>

#include "vbx/common.hpp"

namespace vbx {

enum class Linkage { kAverage };

struct AHCConfig {
  double threshold = 0.6;
  Linkage linkage = Linkage::kAverage;

  // Values outside [-1, 1] are accepted: below -1 merges everything, above 1
  // merges nothing.
  void Validate() const {
    if (!std::isfinite(threshold))
      throw Error(ErrorKind::kInput, "AHC threshold must be finite");
  }
};

inline Matrix CosineSimilarityMatrix(const Matrix &vectors) {
  const Index n = vectors.rows();
  Matrix unit(n, vectors.cols());
  for (Index i = 0; i < n; ++i) {
    const double norm = vectors.row(i).norm();
    if (!(norm > 0.0))
      throw Error(ErrorKind::kDegenerate,
                  "cosine similarity undefined for zero row " + std::to_string(i));
    unit.row(i) = vectors.row(i) / norm;
  }
  Matrix sim = unit * unit.transpose();
  sim.diagonal().setOnes();
  return sim;
}

/// Merges the pair of clusters with the highest mean pairwise similarity
/// until that similarity drops below cfg.threshold. Ties go to the lowest
/// (i, j) pair, clusters being indexed by their smallest member. Returns
/// 0-based labels numbered by first occurrence.
inline std::vector<int> Cluster(const Matrix &sim, const AHCConfig &cfg) {
  const Index n = sim.rows();
  if (n == 0) throw Error(ErrorKind::kEmpty, "AHC needs at least one vector");
  if (sim.cols() != n) throw Error(ErrorKind::kInput, "similarity matrix must be square");
  if (!sim.allFinite()) throw Error(ErrorKind::kInput, "similarity matrix has non-finite entries");

  // sums(i, j): total similarity between members of clusters i and j. Cluster
  // ids are the smallest original index they contain; j is always merged into
  // i < j so ids stay stable. best_j[i] caches the best partner of i among the
  // alive clusters above it (lowest index on ties).
  Matrix sums = sim;
  std::vector<double> size(n, 1.0);
  std::vector<int> owner(n);
  std::vector<bool> alive(n, true);
  std::vector<Index> best_j(n, -1);
  std::vector<double> best_val(n, kNegInf);
  for (Index i = 0; i < n; ++i) owner[i] = static_cast<int>(i);

  auto avg = [&](Index i, Index j) { return sums(i, j) / (size[i] * size[j]); };
  auto rescan = [&](Index i) {
    best_j[i] = -1;
    best_val[i] = kNegInf;
    for (Index j = i + 1; j < n; ++j) {
      if (!alive[j]) continue;
      const double v = avg(i, j);
      if (best_j[i] < 0 || v > best_val[i]) {
        best_val[i] = v;
        best_j[i] = j;
      }
    }
  };
  for (Index i = 0; i < n; ++i) rescan(i);

  for (Index remaining = n; remaining > 1; --remaining) {
    Index i = -1;
    for (Index k = 0; k < n; ++k)
      if (alive[k] && best_j[k] >= 0 && (i < 0 || best_val[k] > best_val[i])) i = k;
    if (i < 0 || best_val[i] < cfg.threshold) break;
    const Index j = best_j[i];

    for (Index k = 0; k < n; ++k) {
      if (!alive[k] || k == i || k == j) continue;
      sums(i, k) += sums(j, k);
      sums(k, i) = sums(i, k);
    }
    sums(i, i) += sums(j, j) + 2.0 * sums(i, j);
    size[i] += size[j];
    alive[j] = false;
    for (auto &o : owner)
      if (o == j) o = static_cast<int>(i);

    for (Index k = 0; k < n; ++k) {
      if (!alive[k]) continue;
      if (k == i || best_j[k] == i || best_j[k] == j) {
        rescan(k);
      } else if (k < i) {
        const double v = avg(k, i);
        if (v > best_val[k] || (v == best_val[k] && i < best_j[k])) {
          best_val[k] = v;
          best_j[k] = i;
        }
      }
    }
  }

  std::vector<int> labels(n);
  std::vector<int> remap(n, -1);
  int next = 0;
  for (Index t = 0; t < n; ++t) {
    int &r = remap[owner[t]];
    if (r < 0) r = next++;
    labels[t] = r;
  }
  return labels;
}

}  // namespace vbx
