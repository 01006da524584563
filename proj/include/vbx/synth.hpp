// vbx/synth.hpp

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

// Conversations sampled from the Bayesian HMM itself:
//   y_s ~ N(0, I) for every speaker,
//   z_1 ~ pi, z_t ~ p(z_t | z_{t-1}),
//   x_t = sqrt(phi) o y_{z_t} + e_t,  e_t ~ N(0, I).

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vbx/common.hpp"
#include "vbx/random.hpp"
#include "vbx/timeline.hpp"

namespace vbx {

struct SynthConfig {
  int speakers = 2;
  Index duration_steps = 400;
  double loop_p = 0.99;
  Vector pi;                  // empty means uniform
  Vector phi;                 // between-speaker variance per dimension
  double step_seconds = 0.25;
  std::uint64_t seed = 0;

  Vector ResolvedPi() const {
    if (pi.size() == 0) return Vector::Constant(speakers, 1.0 / speakers);
    return pi;
  }

  void Validate() const {
    if (speakers < 1) throw Error(ErrorKind::kInput, "synth needs at least one speaker");
    if (duration_steps < 1) throw Error(ErrorKind::kInput, "synth needs at least one step");
    if (!(loop_p >= 0.0 && loop_p <= 1.0)) throw Error(ErrorKind::kInput, "loop_p must lie in [0, 1]");
    if (phi.size() < 1) throw Error(ErrorKind::kInput, "phi must have at least one dimension");
    if ((phi.array() < 0.0).any() || !phi.allFinite())
      throw Error(ErrorKind::kInput, "phi entries must be finite and non-negative");
    if (!(step_seconds > 0.0)) throw Error(ErrorKind::kInput, "step_seconds must be positive");
    if (pi.size() != 0) {
      if (pi.size() != speakers) throw Error(ErrorKind::kInput, "pi size must equal speakers");
      if ((pi.array() < 0.0).any() || std::abs(pi.sum() - 1.0) > 1e-9)
        throw Error(ErrorKind::kInput, "pi must be a probability vector");
    }
  }
};

struct Conversation {
  Matrix x;            // T x R
  std::vector<int> z;  // T
  Matrix y;            // S x R
};

inline Conversation SampleConversation(const SynthConfig &cfg) {
  cfg.Validate();
  const Index r = cfg.phi.size();
  const Vector pi = cfg.ResolvedPi();
  const Vector scale = cfg.phi.array().sqrt();
  CounterRng rng(cfg.seed);

  auto draw_from = [&](double u) {
    double acc = 0.0;
    for (int s = 0; s < cfg.speakers; ++s) {
      acc += pi(s);
      if (u < acc) return s;
    }
    // Floating slack: fall back to the last speaker with mass.
    for (int s = cfg.speakers - 1; s >= 0; --s)
      if (pi(s) > 0.0) return s;
    return 0;
  };

  Conversation c;
  c.y.resize(cfg.speakers, r);
  for (int s = 0; s < cfg.speakers; ++s)
    for (Index d = 0; d < r; ++d) c.y(s, d) = rng.Normal();

  c.z.resize(cfg.duration_steps);
  c.x.resize(cfg.duration_steps, r);
  for (Index t = 0; t < cfg.duration_steps; ++t) {
    const double u = rng.Uniform();
    if (t == 0) {
      c.z[t] = draw_from(u);
    } else if (u < cfg.loop_p) {
      c.z[t] = c.z[t - 1];
    } else {
      c.z[t] = draw_from((u - cfg.loop_p) / (1.0 - cfg.loop_p));
    }
    for (Index d = 0; d < r; ++d) c.x(t, d) = scale(d) * c.y(c.z[t], d) + rng.Normal();
  }
  return c;
}

/// Tiles of step_seconds per label, with runs of equal labels merged.
/// Speakers are named "spk<label>".
inline Timeline LabelsToTimeline(const std::vector<int> &z, double step_seconds,
                                 const std::string &recording_id) {
  Timeline tl{recording_id, {}};
  const Ticks step = ToTicks(step_seconds);
  std::size_t start = 0;
  for (std::size_t t = 1; t <= z.size(); ++t) {
    if (t == z.size() || z[t] != z[start]) {
      tl.Add(static_cast<Ticks>(start) * step, static_cast<Ticks>(t) * step,
             "spk" + std::to_string(z[start]));
      start = t;
    }
  }
  return tl;
}

}  // namespace vbx
