// vbx/timeline.hpp

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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "vbx/common.hpp"

namespace vbx {

/// Time in units of 100 ns. All interval arithmetic is done on these.
using Ticks = std::int64_t;
inline constexpr Ticks kTicksPerSecond = 10'000'000;

inline Ticks ToTicks(double seconds) {
  if (!std::isfinite(seconds)) throw Error(ErrorKind::kInput, "non-finite time value");
  return static_cast<Ticks>(std::llround(seconds * static_cast<double>(kTicksPerSecond)));
}

inline double ToSeconds(Ticks t) {
  return static_cast<double>(t) / static_cast<double>(kTicksPerSecond);
}

struct Segment {
  std::string recording_id;
  Ticks onset = 0;
  Ticks duration = 0;
  std::string speaker;

  Ticks offset() const { return onset + duration; }

  friend bool operator==(const Segment &, const Segment &) = default;
};

/// Half-open interval [begin, end).
struct Interval {
  Ticks begin = 0;
  Ticks end = 0;
  Ticks length() const { return end - begin; }
  friend bool operator==(const Interval &, const Interval &) = default;
};

struct Timeline {
  std::string recording_id;
  std::vector<Segment> segments;

  void Add(Ticks onset, Ticks offset, const std::string &speaker) {
    segments.push_back({recording_id, onset, offset - onset, speaker});
  }

  void SortByOnset() {
    std::stable_sort(segments.begin(), segments.end(), [](const Segment &a, const Segment &b) {
      return std::tie(a.onset, a.duration, a.speaker) < std::tie(b.onset, b.duration, b.speaker);
    });
  }

  /// Speaker labels in first-appearance order.
  std::vector<std::string> Speakers() const {
    std::vector<std::string> out;
    for (const auto &s : segments)
      if (std::find(out.begin(), out.end(), s.speaker) == out.end()) out.push_back(s.speaker);
    return out;
  }

  /// Union of each speaker's segments as sorted, disjoint, non-touching
  /// intervals.
  std::map<std::string, std::vector<Interval>> SpeakerIntervals() const {
    std::map<std::string, std::vector<Interval>> out;
    for (const auto &s : segments) out[s.speaker].push_back({s.onset, s.offset()});
    for (auto &[spk, ivs] : out) {
      std::sort(ivs.begin(), ivs.end(), [](const Interval &a, const Interval &b) {
        return std::tie(a.begin, a.end) < std::tie(b.begin, b.end);
      });
      std::vector<Interval> merged;
      for (const auto &iv : ivs) {
        if (!merged.empty() && iv.begin <= merged.back().end)
          merged.back().end = std::max(merged.back().end, iv.end);
        else
          merged.push_back(iv);
      }
      ivs = std::move(merged);
    }
    return out;
  }

  /// Rebuilds segments from SpeakerIntervals(), sorted by onset.
  Timeline Normalized() const {
    Timeline t{recording_id, {}};
    for (const auto &[spk, ivs] : SpeakerIntervals())
      for (const auto &iv : ivs) t.Add(iv.begin, iv.end, spk);
    t.SortByOnset();
    return t;
  }

  /// Throws if any segment has non-positive duration, negative onset or a
  /// different recording id.
  void Validate() const {
    for (const auto &s : segments) {
      if (s.duration <= 0)
        throw Error(ErrorKind::kInput, "segment of speaker " + s.speaker + " in " +
                                           recording_id + " has non-positive duration");
      if (s.onset < 0)
        throw Error(ErrorKind::kInput, "segment of speaker " + s.speaker + " has negative onset");
      if (s.recording_id != recording_id)
        throw Error(ErrorKind::kInput, "segment recording id " + s.recording_id +
                                           " differs from timeline id " + recording_id);
    }
  }
};

inline Ticks TotalLength(const std::vector<Interval> &ivs) {
  Ticks total = 0;
  for (const auto &iv : ivs) total += iv.length();
  return total;
}

/// Length of the intersection of two sorted disjoint interval lists.
inline Ticks IntersectionLength(const std::vector<Interval> &a, const std::vector<Interval> &b) {
  Ticks total = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const Ticks lo = std::max(a[i].begin, b[j].begin);
    const Ticks hi = std::min(a[i].end, b[j].end);
    if (hi > lo) total += hi - lo;
    if (a[i].end < b[j].end)
      ++i;
    else
      ++j;
  }
  return total;
}

}  // namespace vbx
