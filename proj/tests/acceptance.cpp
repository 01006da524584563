// tests/acceptance.cpp

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


// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <string>

#include "test_util.hpp"
#include "vbx/ahc.hpp"
#include "vbx/oracle.hpp"
#include "vbx/pipeline.hpp"
#include "vbx/plda.hpp"
#include "vbx/scoring.hpp"
#include "vbx/synth.hpp"
#include "vbx/vbx.hpp"

namespace {

using namespace vbx;
using testing::RandomNormal;
using testing::RandomResponsibilities;
using testing::RandomSimplex;
using testing::UniformInt;
namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char *fmt, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), fmt, a, b, c);
  return buf;
}

Timeline Make(const std::string &rec,
              std::initializer_list<std::tuple<double, double, const char *>> segs) {
  Timeline t{rec, {}};
  for (const auto &[on, off, spk] : segs) t.Add(ToTicks(on), ToTicks(off), spk);
  t.SortByOnset();
  return t;
}

EmbeddingSequence Tiled(const Conversation &c, const std::string &id) {
  EmbeddingSequence e;
  e.recording_id = id;
  e.vectors = c.x;
  for (Index t = 0; t < c.x.rows(); ++t) {
    e.onsets.push_back(t * ToTicks(0.25));
    e.offsets.push_back((t + 1) * ToTicks(0.25));
  }
  return e;
}

// 1
Outcome ForwardBackwardExactness() {
  CounterRng rng(101);
  const auto start = std::chrono::steady_clock::now();
  double worst_gamma = 0.0, worst_rel = 0.0;
  for (int i = 0; i < 200; ++i) {
    const Index t = UniformInt(rng, 1, 6), s = UniformInt(rng, 1, 3);
    const Matrix ll = 3.0 * RandomNormal(rng, t, s);
    const Vector pi = RandomSimplex(rng, s);
    const double loop = 0.01 + 0.98 * rng.Uniform();
    const auto fb = ForwardBackward(ll, pi, loop);
    const auto ex = oracle::EnumeratePathPosterior(ll, pi, loop);
    worst_gamma = std::max(worst_gamma, (fb.gamma - ex.gamma).cwiseAbs().maxCoeff());
    worst_rel = std::max(worst_rel, std::abs(fb.log_px - ex.log_total) / std::max(1e-300, std::abs(ex.log_total)));
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {worst_gamma < 1e-9 && worst_rel < 1e-12 && secs < 5.0,
          Fmt("max |dgamma| %.2e, max rel dlogp %.2e, %.3f s", worst_gamma, worst_rel, secs)};
}

// 2
Outcome ElboMonotonicity() {
  CounterRng rng(102);
  double worst = std::numeric_limits<double>::infinity();  // smallest relative delta
  int iterations = 0;
  for (int i = 0; i < 100; ++i) {
    SynthConfig sc;
    sc.speakers = UniformInt(rng, 1, 5);
    sc.duration_steps = UniformInt(rng, 2, 200);
    sc.loop_p = 0.5 + 0.49 * rng.Uniform();
    const Index r = UniformInt(rng, 1, 10);
    sc.phi = (RandomNormal(rng, r, 1).array().square() * 50.0 + 0.5).matrix();
    sc.seed = 2000 + i;
    const Conversation c = SampleConversation(sc);
    const int s0 = UniformInt(rng, 1, 8);
    std::vector<int> init(c.z.size());
    for (auto &l : init) l = UniformInt(rng, 0, s0 - 1);
    init[0] = s0 - 1;
    VBxConfig cfg;
    cfg.fa = 0.05 + 1.5 * rng.Uniform();
    cfg.fb = 0.5 + 30.0 * rng.Uniform();
    cfg.loop_p = 0.3 + 0.69 * rng.Uniform();
    const VBxState st = Run(c.x, init, sc.phi, cfg);
    for (std::size_t k = 1; k < st.elbo_trace.size(); ++k) {
      const double rel = (st.elbo_trace[k] - st.elbo_trace[k - 1]) / std::abs(st.elbo_trace[k - 1]);
      worst = std::min(worst, rel);
      ++iterations;
    }
  }
  return {worst >= -1e-8, Fmt("%g iteration steps, worst relative delta %.2e", iterations, worst)};
}

// 3
Outcome SingleSpeakerExactness() {
  CounterRng rng(103);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Index t = UniformInt(rng, 1, 60), r = UniformInt(rng, 1, 8);
    const Vector phi = (RandomNormal(rng, r, 1).array().square() * 20.0).matrix();
    const Matrix x = RandomNormal(rng, t, r);
    VBxConfig cfg;
    cfg.fa = cfg.fb = 1.0;
    const VBxState st = Run(x, std::vector<int>(t, 0), phi, cfg);
    worst = std::max(worst, std::abs(st.elbo_trace.back() - oracle::SingleSpeakerLogMl(x, phi)));
  }
  return {worst < 1e-6, Fmt("max |ELBO - log p(X)| %.2e", worst)};
}

// 4
Outcome QyStationarity() {
  CounterRng rng(104);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    oracle::SmallProblem p;
    const Index t = UniformInt(rng, 1, 20), s = UniformInt(rng, 1, 4), r = UniformInt(rng, 1, 6);
    p.x = RandomNormal(rng, t, r);
    p.phi = (RandomNormal(rng, r, 1).array().square() * 10.0 + 0.1).matrix();
    p.gamma = RandomResponsibilities(rng, t, s);
    p.fa = 0.05 + rng.Uniform();
    p.fb = 0.5 + 20.0 * rng.Uniform();
    worst = std::max(worst, oracle::ElboFdGradientAtUpdate(p));
  }
  return {worst < 1e-5, Fmt("max |dELBO/dalpha| %.2e", worst)};
}

// 5
Outcome ArdSpeakerSelection() {
  int good = 0;
  double mean_init = 0.0;
  for (int seed = 0; seed < 50; ++seed) {
    SynthConfig sc;
    sc.speakers = 3;
    sc.duration_steps = 400;
    sc.loop_p = 0.95;
    sc.phi = Vector::Constant(16, 100.0);
    sc.seed = 5000 + seed;
    const Conversation c = SampleConversation(sc);
    const Matrix sim = CosineSimilarityMatrix(c.x);
    // Bisect for (nearly) the smallest threshold giving at least 6 clusters;
    // the count is non-decreasing in the threshold.
    auto clusters_at = [&](double th) {
      AHCConfig ahc;
      ahc.threshold = th;
      return Cluster(sim, ahc);
    };
    double lo = -1.0, hi = 1.0 + 1e-9;
    for (int step = 0; step < 30; ++step) {
      const double mid = 0.5 * (lo + hi);
      const auto l = clusters_at(mid);
      (*std::max_element(l.begin(), l.end()) + 1 >= 6 ? hi : lo) = mid;
    }
    const std::vector<int> init = clusters_at(hi);
    mean_init += *std::max_element(init.begin(), init.end()) + 1;
    const VBxState st = Run(c.x, init, sc.phi, VBxConfig{});
    Timeline hyp{"r", {}};
    std::vector<int> tiles(st.labels.begin(), st.labels.end());
    hyp = LabelsToTimeline(tiles, 0.25, "r");
    const Timeline ref = LabelsToTimeline(c.z, 0.25, "r");
    const double der = ScoreDer(ref, hyp, ScoreSetup::Full()).der();
    if (st.num_speakers() == 3 && der < 0.05) ++good;
  }
  return {good >= 45, Fmt("%g/50 seeds with 3 speakers and DER < 5%% (mean initial clusters %.1f)",
                          good, mean_init / 50.0)};
}

// 6
Outcome GenerativeRecovery() {
  double sum = 0.0;
  bool forgiving_ok = true;
  for (int seed = 0; seed < 20; ++seed) {
    SynthConfig sc;
    sc.speakers = 2;
    sc.duration_steps = 400;
    sc.loop_p = 0.95;
    sc.phi = Vector::Constant(32, 100.0);
    sc.seed = 6000 + seed;
    const Conversation c = SampleConversation(sc);
    DiarSpace space;
    space.mean = Vector::Zero(32);
    space.projection = Matrix::Identity(32, 32);
    space.phi = sc.phi;
    DiarizeOptions opt;
    opt.preprocessed = true;
    const auto res = DiarizeRecording(Tiled(c, "r"), space, opt);
    const Timeline ref = LabelsToTimeline(c.z, 0.25, "r");
    const double full = ScoreDer(ref, res.timeline, ScoreSetup::Full()).der();
    const double forgiving = ScoreDer(ref, res.timeline, ScoreSetup::Forgiving()).der();
    sum += full;
    forgiving_ok = forgiving_ok && forgiving <= full;
  }
  const double mean = sum / 20.0;
  return {mean < 0.02 && forgiving_ok,
          Fmt("mean full DER %.2f%%, forgiving <= full on every seed: ", 100.0 * mean) +
              (forgiving_ok ? "yes" : "no")};
}

// Independent check of the collar case: scores a 1 ms grid by brute force.
double GridDer(const Timeline &ref, const Timeline &hyp, double collar, double end) {
  auto active = [](const Timeline &t, double at) {
    std::set<std::string> s;
    for (const auto &seg : t.segments)
      if (at >= ToSeconds(seg.onset) && at < ToSeconds(seg.offset())) s.insert(seg.speaker);
    return s;
  };
  std::vector<double> bounds;
  for (const auto &seg : ref.segments) {
    bounds.push_back(ToSeconds(seg.onset));
    bounds.push_back(ToSeconds(seg.offset()));
  }
  double err = 0.0, total = 0.0;
  for (double at = 0.0005; at < end; at += 0.001) {
    bool skip = false;
    for (double b : bounds) skip = skip || std::abs(at - b) < collar;
    if (skip) continue;
    const auto r = active(ref, at), h = active(hyp, at);
    total += r.size();
    // Single-speaker reference mapped to h1.
    const bool correct = r.count("A") && h.count("h1");
    err += std::max(r.size(), h.size()) - (correct ? 1 : 0);
  }
  return err / total;
}

// 7
Outcome ScoringFixtures() {
  const Timeline ref = Make("r", {{0, 10, "A"}});
  const Timeline hyp = Make("r", {{0, 8, "h1"}, {8, 10, "h2"}});
  const double full = ScoreDer(ref, hyp, ScoreSetup::Full()).der();
  ScoreSetup collar = ScoreSetup::Full();
  collar.collar = 0.25;
  const double with_collar = ScoreDer(ref, hyp, collar).der();
  const double grid = GridDer(ref, hyp, 0.25, 10.0);
  const double j0 = ScoreJer(ref, ref).jer;
  const double j1 = ScoreJer(ref, Timeline{"r", {}}).jer;
  const double j5 = ScoreJer(ref, Make("r", {{0, 5, "h"}})).jer;
  bool identity = true;
  const Timeline busy = Make("r", {{0, 3, "A"}, {2, 6, "B"}, {6.5, 9, "A"}, {8, 12, "C"}});
  for (const auto &s : {ScoreSetup::Full(), ScoreSetup::Fair(), ScoreSetup::Forgiving()})
    identity = identity && ScoreDer(busy, busy, s).der() == 0.0;
  const bool pass = std::abs(full - 0.2) < 1e-10 && std::abs(with_collar - 1.75 / 9.5) < 1e-10 &&
                    std::abs(grid - with_collar) < 1e-3 && std::abs(j0) < 1e-10 &&
                    std::abs(j1 - 1.0) < 1e-10 && std::abs(j5 - 0.5) < 1e-10 && identity;
  return {pass, Fmt("full %.4f%%, collar %.4f%% (grid check %.4f%%)", 100.0 * full,
                    100.0 * with_collar, 100.0 * grid) +
                    Fmt(", JER %.1f/%.1f/%.1f", j0, j1, j5) +
                    "; the stated 21.05% collar figure is inconsistent with a 9.5 s scored region"};
}

// 8
Outcome ReferenceBuilder() {
  auto word = [](double a, double b) {
    WordRecord w;
    w.speaker = "A";
    w.start = ToTicks(a);
    w.end = ToTicks(b);
    return w;
  };
  const auto r = BuildReference({word(0.86, 1.02), word(1.02, 1.20), word(1.20, 1.40),
                                 word(1.45, 1.60), word(1.60, 1.78), word(1.78, 2.0)},
                                "ami");
  const auto &s = r.timeline.segments;
  const bool pass = s.size() == 2 && s[0].onset == ToTicks(0.86) && s[0].offset() == ToTicks(1.40) &&
                    s[1].onset == ToTicks(1.45) && s[1].offset() == ToTicks(2.0);
  return {pass, Fmt("%g segments", static_cast<double>(s.size()))};
}

// 9
Outcome Determinism() {
  const fs::path dir = testing::ScratchDir("acceptance");
  const std::string cli = VBX_CLI_PATH;
  auto run = [&](const std::string &tag) {
    const fs::path d = dir / tag;
    fs::create_directories(d);
    const std::string q = d.string() + "/";
    int rc = testing::RunCommand(cli + " synth --speakers 3 --steps 400 --loop-p 0.95 --phi 100 --dim 16 --seed 42" +
                                 " --out-emb " + q + "rec.emb --out-rttm " + q + "ref.rttm --out-space " + q +
                                 "space.txt 2>/dev/null");
    rc |= testing::RunCommand(cli + " diarize " + q + "rec.emb --space " + q +
                              "space.txt --preprocessed --out-dir " + q + "hyp 2>/dev/null");
    rc |= testing::RunCommand(cli + " score --ref " + q + "ref.rttm --hyp " + q + "hyp/rec.rttm --out " + q +
                              "report.txt 2>/dev/null");
    return rc == 0;
  };
  const bool ran = run("a") && run("b");
  const std::string rttm_a = testing::ReadFile(dir / "a/hyp/rec.rttm");
  const std::string rep_a = testing::ReadFile(dir / "a/report.txt");
  const bool same = ran && !rttm_a.empty() && !rep_a.empty() &&
                    rttm_a == testing::ReadFile(dir / "b/hyp/rec.rttm") &&
                    rep_a == testing::ReadFile(dir / "b/report.txt") &&
                    testing::ReadFile(dir / "a/rec.emb") == testing::ReadFile(dir / "b/rec.emb");
  fs::remove_all(dir);
  return {same, ran ? (same ? "RTTM, report and embeddings byte-identical" : "outputs differ")
                    : "a CLI step failed"};
}

// 10
Outcome TransformCorrectness() {
  CounterRng rng(110);
  double worst_eig = 0.0, worst_ortho = 0.0;
  int max_d = 0;
  for (int i = 0; i < 20; ++i) {
    const Index d = i == 0 ? 256 : UniformInt(rng, 1, 256);
    max_d = std::max<int>(max_d, static_cast<int>(d));
    PLDAModel m;
    m.mean = RandomNormal(rng, d, 1);
    m.within_cov = testing::RandomSpd(rng, d, 0.5);
    m.between_cov = 5.0 * testing::RandomSpd(rng, d, 0.1);
    const DiarSpace s = DeriveSpace(m, d);
    const Matrix eig = m.between_cov * s.projection - m.within_cov * s.projection * s.phi.asDiagonal();
    const Matrix ortho = s.projection.transpose() * m.within_cov * s.projection - Matrix::Identity(d, d);
    // Induced infinity norm (max absolute row sum); bounds the entrywise maximum.
    worst_eig = std::max(worst_eig, eig.cwiseAbs().rowwise().sum().maxCoeff());
    worst_ortho = std::max(worst_ortho, ortho.cwiseAbs().rowwise().sum().maxCoeff());
  }
  return {worst_eig < 1e-8 && worst_ortho < 1e-8,
          Fmt("D up to %g: eigen residual %.2e, orthonormality residual %.2e", max_d, worst_eig,
              worst_ortho)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char *, std::function<Outcome()>>> criteria = {
      {"forward-backward exactness", ForwardBackwardExactness},
      {"ELBO monotonicity", ElboMonotonicity},
      {"single-speaker exactness", SingleSpeakerExactness},
      {"q(Y) stationarity", QyStationarity},
      {"ARD speaker selection", ArdSpeakerSelection},
      {"generative recovery", GenerativeRecovery},
      {"scoring fixtures", ScoringFixtures},
      {"reference builder", ReferenceBuilder},
      {"determinism", Determinism},
      {"transform correctness", TransformCorrectness},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] %2zu %-28s %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
