// vbx/pipeline.hpp

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

#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "vbx/ahc.hpp"
#include "vbx/io.hpp"
#include "vbx/plda.hpp"
#include "vbx/timeline.hpp"
#include "vbx/vbx.hpp"

namespace vbx {

struct SubsegmentConfig {
  double window = 1.5;
  double shift = 0.25;
  double min_len = 0.1;
};

/// Sliding windows over each speech interval. Intervals shorter than min_len
/// are dropped; an interval no longer than the window becomes one piece;
/// otherwise windows start every `shift` and stop after the first one that
/// reaches the interval end.
inline std::vector<Interval> Subsegment(const VadTimeline &vad, const SubsegmentConfig &cfg = {}) {
  const Ticks window = ToTicks(cfg.window);
  const Ticks shift = ToTicks(cfg.shift);
  const Ticks min_len = ToTicks(cfg.min_len);
  if (window <= 0 || shift <= 0) throw Error(ErrorKind::kInput, "window and shift must be positive");
  std::vector<Interval> out;
  for (const auto &seg : vad.speech) {
    const Ticks len = seg.length();
    if (len < min_len) continue;
    if (len <= window) {
      out.push_back(seg);
      continue;
    }
    for (Ticks k = 0;; ++k) {
      const Ticks start = seg.begin + k * shift;
      const Ticks end = std::min(start + window, seg.end);
      out.push_back({start, end});
      if (end == seg.end) break;
    }
  }
  return out;
}

struct DiarizeOptions {
  AHCConfig ahc;
  VBxConfig vbx;
  bool preprocessed = false;  // embeddings already live in the space
};

struct DiarizationResult {
  Timeline timeline;
  int initial_clusters = 0;
  int speakers = 0;
  int iterations = 0;
  bool converged = true;
  std::vector<std::string> warnings;
};

/// Preprocess (unless already done), AHC, VB-HMM, then turn per-embedding
/// labels into speaker turns. Embedding i owns [onset_i, onset_{i+1})
/// clipped to its own offset; the last one ends at its offset.
inline DiarizationResult DiarizeRecording(const EmbeddingSequence &emb, const DiarSpace &space,
                                          const DiarizeOptions &opt) {
  DiarizationResult res;
  res.timeline.recording_id = emb.recording_id;
  if (emb.size() == 0) {
    res.warnings.push_back(emb.recording_id + ": no embeddings, empty output");
    return res;
  }
  opt.ahc.Validate();
  opt.vbx.Validate();

  Matrix x;
  if (opt.preprocessed) {
    if (emb.dim() != space.dim())
      throw Error(ErrorKind::kInput, emb.recording_id + ": embedding dimension " +
                                         std::to_string(emb.dim()) + " does not match space dimension " +
                                         std::to_string(space.dim()));
    x = emb.vectors;
  } else {
    x = LengthNormalize(Project(space, emb.vectors));
  }

  const std::vector<int> init = Cluster(CosineSimilarityMatrix(x), opt.ahc);
  res.initial_clusters = *std::max_element(init.begin(), init.end()) + 1;
  const VBxState st = Run(x, init, space.phi, opt.vbx);
  res.iterations = st.iterations;
  res.converged = st.converged;
  res.speakers = static_cast<int>(st.num_speakers());
  if (!st.converged)
    res.warnings.push_back(emb.recording_id + ": VBx did not converge in " +
                           std::to_string(st.iterations) + " iterations");

  std::vector<int> names;  // initial speaker index -> output name index
  auto name_of = [&](int label) {
    auto it = std::find(names.begin(), names.end(), label);
    if (it == names.end()) {
      names.push_back(label);
      it = names.end() - 1;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "spk%02d", static_cast<int>(it - names.begin()));
    return std::string(buf);
  };

  const Index t_len = emb.size();
  Ticks cur_begin = 0, cur_end = 0;
  int cur_label = -1;
  for (Index i = 0; i < t_len; ++i) {
    const Ticks begin = emb.onsets[i];
    const Ticks end = i + 1 < t_len ? std::min(emb.onsets[i + 1], emb.offsets[i]) : emb.offsets[i];
    const int label = st.labels[i];
    if (cur_label == label && cur_end == begin) {
      cur_end = end;
      continue;
    }
    if (cur_label >= 0) res.timeline.Add(cur_begin, cur_end, name_of(cur_label));
    cur_label = label;
    cur_begin = begin;
    cur_end = end;
  }
  res.timeline.Add(cur_begin, cur_end, name_of(cur_label));
  return res;
}

}  // namespace vbx
