// vbx/scoring.hpp

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

// Diarization metrics on exact tick arithmetic.
//
// DER = (missed + false alarm + speaker error) / reference speech, where
// reference speech counts every active reference speaker separately. The
// reference-to-hypothesis speaker mapping maximises total overlap and is
// computed once on the unfiltered timelines; a collar removes +-c around
// reference boundaries only, and with score_overlap off the instants with two
// or more reference speakers are not scored.
//
// JER averages, over reference speakers, 1 - |R ∩ H| / |R ∪ H| for the mapped
// hypothesis speaker H (1 when unmapped).

#pragma once

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vbx/common.hpp"
#include "vbx/timeline.hpp"

namespace vbx {

struct ScoreSetup {
  double collar = 0.0;  // seconds
  bool score_overlap = true;

  static ScoreSetup Forgiving() { return {0.25, false}; }
  static ScoreSetup Fair() { return {0.25, true}; }
  static ScoreSetup Full() { return {0.0, true}; }

  static ScoreSetup FromName(const std::string &name) {
    if (name == "forgiving") return Forgiving();
    if (name == "fair") return Fair();
    if (name == "full") return Full();
    throw Error(ErrorKind::kInput, "unknown scoring setup '" + name + "'");
  }
};

/// Minimum-cost perfect assignment on a square matrix (Hungarian method with
/// potentials, O(n^3)). Returns for each row the assigned column.
inline std::vector<int> SolveAssignment(const std::vector<std::vector<std::int64_t>> &cost) {
  const int n = static_cast<int>(cost.size());
  if (n == 0) return {};
  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
  // 1-based with a virtual column 0.
  std::vector<std::int64_t> u(n + 1, 0), v(n + 1, 0);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<std::int64_t> minv(n + 1, kInf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const int i0 = match[j0];
      std::int64_t delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const std::int64_t cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= n; ++j)
    if (match[j] > 0) row_to_col[match[j] - 1] = j - 1;
  return row_to_col;
}

struct SpeakerMapping {
  std::map<std::string, std::string> ref_to_hyp;
  Ticks total_overlap = 0;
};

/// One-to-one pairing of reference and hypothesis speakers maximising the
/// summed overlap. Pairs with zero overlap are left unmatched.
inline SpeakerMapping OptimalMapping(const Timeline &ref, const Timeline &hyp) {
  const auto ref_ivs = ref.SpeakerIntervals();
  const auto hyp_ivs = hyp.SpeakerIntervals();
  std::vector<const std::string *> ref_names, hyp_names;
  for (const auto &kv : ref_ivs) ref_names.push_back(&kv.first);
  for (const auto &kv : hyp_ivs) hyp_names.push_back(&kv.first);
  const std::size_t n = std::max(ref_names.size(), hyp_names.size());

  SpeakerMapping out;
  if (ref_names.empty() || hyp_names.empty()) return out;
  std::vector<std::vector<std::int64_t>> overlap(n, std::vector<std::int64_t>(n, 0));
  for (std::size_t i = 0; i < ref_names.size(); ++i)
    for (std::size_t j = 0; j < hyp_names.size(); ++j)
      overlap[i][j] = IntersectionLength(ref_ivs.at(*ref_names[i]), hyp_ivs.at(*hyp_names[j]));

  std::vector<std::vector<std::int64_t>> cost(n, std::vector<std::int64_t>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) cost[i][j] = -overlap[i][j];
  const auto assign = SolveAssignment(cost);
  for (std::size_t i = 0; i < ref_names.size(); ++i) {
    const int j = assign[i];
    if (j < 0 || static_cast<std::size_t>(j) >= hyp_names.size() || overlap[i][j] == 0) continue;
    out.ref_to_hyp[*ref_names[i]] = *hyp_names[j];
    out.total_overlap += overlap[i][j];
  }
  return out;
}

struct DerResult {
  Ticks miss = 0;
  Ticks false_alarm = 0;
  Ticks speaker_error = 0;
  Ticks total_speech = 0;  // reference speaker time in the scored region
  Ticks scored = 0;        // wall-clock length of the scored region

  double Ratio(Ticks v) const {
    if (total_speech == 0) return v == 0 ? 0.0 : std::numeric_limits<double>::infinity();
    return static_cast<double>(v) / static_cast<double>(total_speech);
  }
  double miss_rate() const { return Ratio(miss); }
  double false_alarm_rate() const { return Ratio(false_alarm); }
  double speaker_error_rate() const { return Ratio(speaker_error); }
  double der() const { return Ratio(miss + false_alarm + speaker_error); }

  DerResult &operator+=(const DerResult &o) {
    miss += o.miss;
    false_alarm += o.false_alarm;
    speaker_error += o.speaker_error;
    total_speech += o.total_speech;
    scored += o.scored;
    return *this;
  }
};

namespace detail {

inline std::vector<Interval> MergeIntervals(std::vector<Interval> ivs) {
  std::sort(ivs.begin(), ivs.end(),
            [](const Interval &a, const Interval &b) { return a.begin < b.begin; });
  std::vector<Interval> out;
  for (const auto &iv : ivs) {
    if (!out.empty() && iv.begin <= out.back().end)
      out.back().end = std::max(out.back().end, iv.end);
    else
      out.push_back(iv);
  }
  return out;
}

// Advances a cursor over sorted disjoint intervals and reports whether the
// elementary span starting at `at` lies inside one of them.
struct Cursor {
  const std::vector<Interval> *ivs;
  std::size_t pos = 0;
  bool Covers(Ticks at) {
    while (pos < ivs->size() && (*ivs)[pos].end <= at) ++pos;
    return pos < ivs->size() && (*ivs)[pos].begin <= at;
  }
};

}  // namespace detail

inline DerResult ScoreDer(const Timeline &ref, const Timeline &hyp, const ScoreSetup &setup,
                          const SpeakerMapping &mapping) {
  if (ref.recording_id != hyp.recording_id)
    throw Error(ErrorKind::kInput, "recording id mismatch: reference '" + ref.recording_id +
                                       "' vs hypothesis '" + hyp.recording_id + "'");
  const auto ref_ivs = ref.SpeakerIntervals();
  const auto hyp_ivs = hyp.SpeakerIntervals();
  const Ticks collar = ToTicks(setup.collar);

  std::vector<Interval> no_score;
  std::vector<Ticks> points;
  for (const auto &[spk, ivs] : ref_ivs) {
    for (const auto &iv : ivs) {
      points.push_back(iv.begin);
      points.push_back(iv.end);
      if (collar > 0) {
        no_score.push_back({iv.begin - collar, iv.begin + collar});
        no_score.push_back({iv.end - collar, iv.end + collar});
      }
    }
  }
  for (const auto &[spk, ivs] : hyp_ivs)
    for (const auto &iv : ivs) {
      points.push_back(iv.begin);
      points.push_back(iv.end);
    }
  no_score = detail::MergeIntervals(std::move(no_score));
  for (const auto &iv : no_score) {
    points.push_back(iv.begin);
    points.push_back(iv.end);
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  struct Track {
    detail::Cursor cursor;
    std::optional<std::size_t> partner;  // index into hyp tracks
  };
  std::vector<std::string> hyp_names;
  std::vector<detail::Cursor> hyp_tracks;
  for (const auto &[spk, ivs] : hyp_ivs) {
    hyp_names.push_back(spk);
    hyp_tracks.push_back({&ivs});
  }
  std::vector<Track> ref_tracks;
  for (const auto &[spk, ivs] : ref_ivs) {
    Track tr{{&ivs}, std::nullopt};
    if (auto it = mapping.ref_to_hyp.find(spk); it != mapping.ref_to_hyp.end()) {
      auto pos = std::find(hyp_names.begin(), hyp_names.end(), it->second);
      if (pos != hyp_names.end()) tr.partner = static_cast<std::size_t>(pos - hyp_names.begin());
    }
    ref_tracks.push_back(tr);
  }
  detail::Cursor excluded{&no_score};

  DerResult r;
  std::vector<bool> hyp_on(hyp_tracks.size());
  for (std::size_t k = 0; k + 1 < points.size(); ++k) {
    const Ticks at = points[k];
    const Ticks len = points[k + 1] - at;
    std::int64_t n_hyp = 0;
    for (std::size_t h = 0; h < hyp_tracks.size(); ++h) {
      hyp_on[h] = hyp_tracks[h].Covers(at);
      n_hyp += hyp_on[h];
    }
    std::int64_t n_ref = 0, n_correct = 0;
    for (auto &tr : ref_tracks) {
      if (!tr.cursor.Covers(at)) continue;
      ++n_ref;
      if (tr.partner && hyp_on[*tr.partner]) ++n_correct;
    }
    if (excluded.Covers(at)) continue;
    if (!setup.score_overlap && n_ref >= 2) continue;
    if (n_ref == 0 && n_hyp == 0) continue;
    r.scored += len;
    r.total_speech += n_ref * len;
    r.miss += std::max<std::int64_t>(0, n_ref - n_hyp) * len;
    r.false_alarm += std::max<std::int64_t>(0, n_hyp - n_ref) * len;
    r.speaker_error += (std::min(n_ref, n_hyp) - n_correct) * len;
  }
  return r;
}

inline DerResult ScoreDer(const Timeline &ref, const Timeline &hyp, const ScoreSetup &setup) {
  return ScoreDer(ref, hyp, setup, OptimalMapping(ref, hyp));
}

/// Wall-clock duration that a setup scores: everything covered by either
/// timeline, minus collars and (optionally) reference overlap.
inline Ticks ScoredRegionLength(const Timeline &ref, const Timeline &hyp, const ScoreSetup &setup) {
  return ScoreDer(ref, hyp, setup).scored;
}

struct JerResult {
  double jer = 0.0;
  std::map<std::string, double> per_speaker;
};

inline JerResult ScoreJer(const Timeline &ref, const Timeline &hyp, const SpeakerMapping &mapping) {
  if (ref.recording_id != hyp.recording_id)
    throw Error(ErrorKind::kInput, "recording id mismatch: reference '" + ref.recording_id +
                                       "' vs hypothesis '" + hyp.recording_id + "'");
  const auto ref_ivs = ref.SpeakerIntervals();
  if (ref_ivs.empty())
    throw Error(ErrorKind::kUndefined, "JER is undefined for an empty reference");
  const auto hyp_ivs = hyp.SpeakerIntervals();
  JerResult out;
  double sum = 0.0;
  for (const auto &[spk, ivs] : ref_ivs) {
    double err = 1.0;
    if (auto it = mapping.ref_to_hyp.find(spk); it != mapping.ref_to_hyp.end()) {
      const auto &h = hyp_ivs.at(it->second);
      const Ticks inter = IntersectionLength(ivs, h);
      const Ticks uni = TotalLength(ivs) + TotalLength(h) - inter;
      err = 1.0 - static_cast<double>(inter) / static_cast<double>(uni);
    }
    out.per_speaker[spk] = err;
    sum += err;
  }
  out.jer = sum / static_cast<double>(ref_ivs.size());
  return out;
}

inline JerResult ScoreJer(const Timeline &ref, const Timeline &hyp) {
  return ScoreJer(ref, hyp, OptimalMapping(ref, hyp));
}

enum class WordKind { kWord, kVocalSound };

struct WordRecord {
  std::string speaker;
  Ticks start = 0;
  Ticks end = 0;
  WordKind kind = WordKind::kWord;
  bool has_times = true;
  std::string token;  // only used in warnings
};

struct BuiltReference {
  Timeline timeline;
  std::vector<std::string> warnings;
};

/// Reference speech from word-level transcripts: keeps words (and vocal
/// sounds only if asked), merges same-speaker items that touch or overlap,
/// and keeps every positive pause.
inline BuiltReference BuildReference(const std::vector<WordRecord> &words,
                                     const std::string &recording_id,
                                     bool include_vocal_sounds = false) {
  BuiltReference out;
  out.timeline.recording_id = recording_id;
  std::map<std::string, std::vector<Interval>> by_speaker;
  for (const auto &w : words) {
    if (w.kind == WordKind::kVocalSound && !include_vocal_sounds) continue;
    if (!w.has_times) {
      out.warnings.push_back("skipping '" + w.token + "' of speaker " + w.speaker +
                             ": no time annotation");
      continue;
    }
    if (w.end <= w.start) {
      out.warnings.push_back("skipping '" + w.token + "' of speaker " + w.speaker +
                             ": end does not follow start");
      continue;
    }
    by_speaker[w.speaker].push_back({w.start, w.end});
  }
  for (auto &[spk, ivs] : by_speaker)
    for (const auto &iv : detail::MergeIntervals(std::move(ivs)))
      out.timeline.Add(iv.begin, iv.end, spk);
  out.timeline.SortByOnset();
  return out;
}

}  // namespace vbx
