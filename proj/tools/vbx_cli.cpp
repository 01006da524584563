// tools/vbx_cli.cpp

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

// Command-line front end: PLDA estimation, space derivation, sub-segmentation,
// synthetic data, diarization, scoring, reference building and the oracle
// self-check. Exit codes: 0 ok, 1 input error, 2 numerical failure,
// 3 non-convergence under --strict.

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "vbx/ahc.hpp"
#include "vbx/io.hpp"
#include "vbx/oracle.hpp"
#include "vbx/pipeline.hpp"
#include "vbx/plda.hpp"
#include "vbx/random.hpp"
#include "vbx/scoring.hpp"
#include "vbx/synth.hpp"
#include "vbx/vbx.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitNotConverged = 3;

std::string Stem(const std::string &path) { return fs::path(path).stem().string(); }

// ------------------------------------------------------------ estimate-plda

struct EstimateArgs {
  std::string input, out;
};

int RunEstimate(const EstimateArgs &a) {
  const auto data = vbx::io::WithInput(
      a.input, [&](std::istream &is) { return vbx::io::ReadLabeledEmbeddings(is, a.input); });
  const auto model = vbx::EstimatePlda(data);
  vbx::io::WithOutput(a.out, [&](std::ostream &os) { vbx::io::WritePlda(os, model); });
  return kExitOk;
}

// ------------------------------------------------------------- derive-space

struct DeriveArgs {
  std::string plda, out;
  long r = 128;
};

int RunDerive(const DeriveArgs &a) {
  const auto model =
      vbx::io::WithInput(a.plda, [&](std::istream &is) { return vbx::io::ReadPlda(is, a.plda); });
  const auto space = vbx::DeriveSpace(model, a.r);
  if (space.clamped > 0)
    std::cerr << "warning: " << space.clamped << " eigenvalue(s) clamped to "
              << vbx::DiarSpace::kPhiFloor << "\n";
  vbx::io::WithOutput(a.out, [&](std::ostream &os) { vbx::io::WriteSpace(os, space); });
  return kExitOk;
}

// --------------------------------------------------------------- subsegment

struct SubsegArgs {
  std::string vad, out;
  vbx::SubsegmentConfig cfg;
};

int RunSubsegment(const SubsegArgs &a) {
  const auto vad = vbx::io::WithInput(
      a.vad, [&](std::istream &is) { return vbx::io::ReadVad(is, Stem(a.vad), a.vad); });
  const auto pieces = vbx::Subsegment(vad, a.cfg);
  if (a.out.empty()) {
    vbx::io::WriteIntervals(std::cout, pieces);
  } else {
    vbx::io::WithOutput(a.out, [&](std::ostream &os) { vbx::io::WriteIntervals(os, pieces); });
  }
  return kExitOk;
}

// -------------------------------------------------------------------- synth

struct SynthArgs {
  int speakers = 2;
  long steps = 400;
  double loop_p = 0.99;
  std::vector<double> phi{100.0};
  long dim = 0;
  std::vector<double> pi;
  double step = 0.25;
  std::uint64_t seed = 0;
  std::string recording_id;  // defaults to the stem of --out-emb
  std::string out_emb, out_rttm, out_space;
  bool binary = false;
};

int RunSynth(const SynthArgs &a) {
  vbx::SynthConfig cfg;
  cfg.speakers = a.speakers;
  cfg.duration_steps = a.steps;
  cfg.loop_p = a.loop_p;
  cfg.step_seconds = a.step;
  cfg.seed = a.seed;
  if (!a.pi.empty()) cfg.pi = Eigen::Map<const vbx::Vector>(a.pi.data(), a.pi.size());
  if (a.phi.size() == 1 && a.dim > 0) {
    cfg.phi = vbx::Vector::Constant(a.dim, a.phi[0]);
  } else {
    if (a.dim > 0 && static_cast<long>(a.phi.size()) != a.dim)
      throw vbx::Error(vbx::ErrorKind::kInput, "--phi has " + std::to_string(a.phi.size()) +
                                                   " values but --dim is " + std::to_string(a.dim));
    cfg.phi = Eigen::Map<const vbx::Vector>(a.phi.data(), a.phi.size());
  }
  const auto conv = vbx::SampleConversation(cfg);
  const std::string rec_id =
      !a.recording_id.empty() ? a.recording_id : (a.out_emb.empty() ? "synth" : Stem(a.out_emb));

  vbx::EmbeddingSequence emb;
  emb.recording_id = rec_id;
  emb.vectors = conv.x;
  const vbx::Ticks step = vbx::ToTicks(a.step);
  for (long t = 0; t < a.steps; ++t) {
    emb.onsets.push_back(t * step);
    emb.offsets.push_back((t + 1) * step);
  }
  if (!a.out_emb.empty()) {
    vbx::io::WithOutput(
        a.out_emb,
        [&](std::ostream &os) {
          a.binary ? vbx::io::WriteEmbeddingsBinary(os, emb) : vbx::io::WriteEmbeddings(os, emb);
        },
        a.binary);
  }
  if (!a.out_rttm.empty()) {
    const auto ref = vbx::LabelsToTimeline(conv.z, a.step, rec_id);
    vbx::io::WithOutput(a.out_rttm, [&](std::ostream &os) { vbx::io::WriteRttm(os, ref); });
  }
  if (!a.out_space.empty()) {
    // The synthetic embeddings already live in the diarization space.
    vbx::DiarSpace space;
    space.mean = vbx::Vector::Zero(cfg.phi.size());
    space.projection = vbx::Matrix::Identity(cfg.phi.size(), cfg.phi.size());
    space.phi = cfg.phi.cwiseMax(vbx::DiarSpace::kPhiFloor);
    vbx::io::WithOutput(a.out_space, [&](std::ostream &os) { vbx::io::WriteSpace(os, space); });
  }
  return kExitOk;
}

// ------------------------------------------------------------------ diarize

struct DiarizeArgs {
  std::string space, out_dir = ".";
  std::vector<std::string> inputs;
  bool preprocessed = false;
  bool strict = false;
  int jobs = 1;
  vbx::DiarizeOptions opt;
};

int RunDiarize(const DiarizeArgs &a) {
  const auto space =
      vbx::io::WithInput(a.space, [&](std::istream &is) { return vbx::io::ReadSpace(is, a.space); });
  fs::create_directories(a.out_dir);

  struct Outcome {
    std::vector<std::string> warnings;
    bool converged = true;
    std::string error;
    vbx::ErrorKind kind = vbx::ErrorKind::kInput;
    bool failed = false;
  };
  std::vector<Outcome> outcomes(a.inputs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < a.inputs.size(); i = next++) {
      const std::string &path = a.inputs[i];
      try {
        const auto emb = vbx::io::WithInput(
            path, [&](std::istream &is) { return vbx::io::ReadEmbeddings(is, Stem(path), path); },
            true);
        const auto res = vbx::DiarizeRecording(emb, space, a.opt);
        const std::string out = (fs::path(a.out_dir) / (emb.recording_id + ".rttm")).string();
        vbx::io::WithOutput(out, [&](std::ostream &os) { vbx::io::WriteRttm(os, res.timeline); });
        outcomes[i].warnings = res.warnings;
        outcomes[i].converged = res.converged;
      } catch (const vbx::Error &e) {
        outcomes[i].failed = true;
        outcomes[i].kind = e.kind();
        outcomes[i].error = e.what();
      }
    }
  };
  const int n_threads = std::max(1, std::min<int>(a.jobs, static_cast<int>(a.inputs.size())));
  std::vector<std::thread> pool;
  for (int k = 1; k < n_threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto &t : pool) t.join();

  int code = kExitOk;
  bool all_converged = true;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    for (const auto &w : outcomes[i].warnings) std::cerr << "warning: " << w << "\n";
    all_converged = all_converged && outcomes[i].converged;
    if (outcomes[i].failed) {
      std::cerr << "error: " << a.inputs[i] << ": " << outcomes[i].error << "\n";
      const int c = outcomes[i].kind == vbx::ErrorKind::kNumerical ? kExitNumerical : kExitInput;
      code = std::max(code, c);
    }
  }
  if (code == kExitOk && a.strict && !all_converged) code = kExitNotConverged;
  return code;
}

// -------------------------------------------------------------------- score

struct ScoreArgs {
  std::vector<std::string> ref, hyp;
  std::string setup = "full";
  double collar = -1.0;
  bool no_overlap = false;
  std::string out;
};

std::map<std::string, vbx::Timeline> ReadRttms(const std::vector<std::string> &paths) {
  std::map<std::string, vbx::Timeline> all;
  for (const auto &p : paths) {
    auto part = vbx::io::WithInput(p, [&](std::istream &is) { return vbx::io::ReadRttm(is, p); });
    for (auto &[id, tl] : part) {
      auto &dst = all[id];
      dst.recording_id = id;
      dst.segments.insert(dst.segments.end(), tl.segments.begin(), tl.segments.end());
    }
  }
  return all;
}

std::string ReportLine(const std::string &name, const vbx::DerResult &d, double jer) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-24s %7.2f %7.2f %7.2f %7.2f %7.2f\n", name.c_str(),
                100.0 * d.miss_rate(), 100.0 * d.false_alarm_rate(),
                100.0 * d.speaker_error_rate(), 100.0 * d.der(), 100.0 * jer);
  return buf;
}

int RunScore(const ScoreArgs &a) {
  vbx::ScoreSetup setup = vbx::ScoreSetup::FromName(a.setup);
  if (a.collar >= 0.0) setup.collar = a.collar;
  if (a.no_overlap) setup.score_overlap = false;

  const auto refs = ReadRttms(a.ref);
  const auto hyps = ReadRttms(a.hyp);
  for (const auto &[id, tl] : hyps)
    if (!refs.count(id))
      throw vbx::Error(vbx::ErrorKind::kInput, "hypothesis recording '" + id + "' has no reference");

  std::ostringstream report;
  char head[256];
  std::snprintf(head, sizeof(head), "%-24s %7s %7s %7s %7s %7s\n", "RECORDING", "MISS", "FA", "SER",
                "DER", "JER");
  report << head;
  vbx::DerResult total;
  double jer_sum = 0.0;
  std::size_t jer_count = 0;
  for (const auto &[id, ref] : refs) {
    vbx::Timeline hyp{id, {}};
    if (auto it = hyps.find(id); it != hyps.end()) hyp = it->second;
    const auto mapping = vbx::OptimalMapping(ref, hyp);
    const auto der = vbx::ScoreDer(ref, hyp, setup, mapping);
    const auto jer = vbx::ScoreJer(ref, hyp, mapping);
    report << ReportLine(id, der, jer.jer);
    total += der;
    for (const auto &[spk, v] : jer.per_speaker) {
      jer_sum += v;
      ++jer_count;
    }
  }
  report << ReportLine("*** OVERALL ***", total, jer_count ? jer_sum / jer_count : 0.0);

  if (a.out.empty()) {
    std::cout << report.str();
  } else {
    vbx::io::WithOutput(a.out, [&](std::ostream &os) { os << report.str(); });
  }
  return kExitOk;
}

// ---------------------------------------------------------------- build-ref

struct BuildRefArgs {
  std::string words, out;
  bool include_vocal_sounds = false;
};

int RunBuildRef(const BuildRefArgs &a) {
  const auto words =
      vbx::io::WithInput(a.words, [&](std::istream &is) { return vbx::io::ReadWords(is, a.words); });
  std::ostringstream rttm;
  for (const auto &[id, list] : words) {
    const auto built = vbx::BuildReference(list, id, a.include_vocal_sounds);
    for (const auto &w : built.warnings) std::cerr << "warning: " << id << ": " << w << "\n";
    vbx::io::WriteRttm(rttm, built.timeline);
  }
  if (a.out.empty()) {
    std::cout << rttm.str();
  } else {
    vbx::io::WithOutput(a.out, [&](std::ostream &os) { os << rttm.str(); });
  }
  return kExitOk;
}

// ------------------------------------------------------------------- oracle

struct OracleArgs {
  std::uint64_t seed = 1;
  int instances = 50;
  int max_t = 6;
  int max_s = 3;
};

int RunOracle(const OracleArgs &a) {
  vbx::CounterRng rng(a.seed);
  auto rand_int = [&](int lo, int hi) {
    return lo + static_cast<int>(rng.Uniform() * (hi - lo + 1));
  };
  double fb_gamma = 0.0, fb_logp = 0.0, pi_upd = 0.0, single = 0.0, grad = 0.0;
  for (int k = 0; k < a.instances; ++k) {
    const int t_len = rand_int(1, a.max_t);
    const int s_len = rand_int(1, a.max_s);
    vbx::Matrix ll(t_len, s_len);
    for (int t = 0; t < t_len; ++t)
      for (int s = 0; s < s_len; ++s) ll(t, s) = 3.0 * rng.Normal();
    vbx::Vector pi(s_len);
    for (int s = 0; s < s_len; ++s) pi(s) = 0.05 + rng.Uniform();
    pi /= pi.sum();
    const double loop_p = 0.05 + 0.9 * rng.Uniform();

    const auto fb = vbx::ForwardBackward(ll, pi, loop_p);
    const auto exact = vbx::oracle::EnumeratePathPosterior(ll, pi, loop_p);
    fb_gamma = std::max(fb_gamma, (fb.gamma - exact.gamma).cwiseAbs().maxCoeff());
    fb_logp = std::max(fb_logp, std::abs(fb.log_px - exact.log_total) / std::abs(exact.log_total));
    const vbx::Vector counts = vbx::oracle::EnumerateEntryCounts(ll, pi, loop_p);
    pi_upd = std::max(pi_upd,
                      (vbx::UpdatePi(fb, ll, pi, loop_p) - counts / counts.sum()).cwiseAbs().maxCoeff());

    // Single speaker, fa = fb = 1: converged bound vs exact marginal.
    const int r = rand_int(1, 4);
    vbx::Matrix x(t_len * 5, r);
    vbx::Vector phi(r);
    for (int d = 0; d < r; ++d) phi(d) = 0.1 + 10.0 * rng.Uniform();
    for (vbx::Index t = 0; t < x.rows(); ++t)
      for (int d = 0; d < r; ++d) x(t, d) = 2.0 * rng.Normal();
    vbx::VBxConfig cfg;
    cfg.fa = cfg.fb = 1.0;
    cfg.loop_p = loop_p;
    const auto st = vbx::Run(x, std::vector<int>(x.rows(), 0), phi, cfg);
    single = std::max(single, std::abs(st.elbo_trace.back() - vbx::oracle::SingleSpeakerLogMl(x, phi)));

    vbx::oracle::SmallProblem prob;
    prob.x = x;
    prob.phi = phi;
    prob.fa = 0.2 + rng.Uniform();
    prob.fb = 0.5 + 20.0 * rng.Uniform();
    prob.gamma = vbx::Matrix(x.rows(), s_len);
    for (vbx::Index t = 0; t < x.rows(); ++t) {
      for (int s = 0; s < s_len; ++s) prob.gamma(t, s) = rng.Uniform();
      prob.gamma.row(t) /= prob.gamma.row(t).sum();
    }
    grad = std::max(grad, vbx::oracle::ElboFdGradientAtUpdate(prob));
  }
  std::printf("oracle check over %d random instances (seed %llu)\n", a.instances,
              static_cast<unsigned long long>(a.seed));
  std::printf("  forward-backward gamma vs path enumeration   max |delta| = %.3e\n", fb_gamma);
  std::printf("  forward log p(X) vs path enumeration         max rel     = %.3e\n", fb_logp);
  std::printf("  prior update vs enumerated entry counts      max |delta| = %.3e\n", pi_upd);
  std::printf("  single-speaker ELBO vs exact log marginal    max |delta| = %.3e\n", single);
  std::printf("  q(Y) stationarity, finite-difference grad    max |grad|  = %.3e\n", grad);
  return kExitOk;
}

// Expands `--config FILE` into `--key=value` tokens placed before the
// user's own arguments, so explicit flags win (options take the last value).
std::vector<std::string> ExpandConfig(int argc, char **argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string config;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                 args.begin() + static_cast<std::ptrdiff_t>(i + 2));
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      config = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (config.empty() || args.empty()) return args;

  std::ifstream is(config);
  if (!is) throw vbx::Error(vbx::ErrorKind::kInput, "cannot open config file '" + config + "'");
  std::vector<std::string> extra;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (vbx::io::IsBlankOrComment(line)) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) vbx::io::Fail(config, lineno, "expected key=value");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) vbx::io::Fail(config, lineno, "empty key");
    extra.push_back("--" + key + "=" + value);
  }
  // args[0] is the subcommand.
  args.insert(args.begin() + 1, extra.begin(), extra.end());
  return args;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"VB-HMM speaker diarization of x-vector sequences"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.set_help_all_flag("--help-all");
  app.footer("--config FILE supplies key=value defaults for the subcommand's flags; "
             "flags given on the command line take precedence.");

  EstimateArgs est;
  auto *c_est = app.add_subcommand("estimate-plda", "estimate a two-covariance PLDA model");
  c_est->add_option("--input", est.input, "labeled vectors: <speaker> <v_1> ... <v_D>")->required();
  c_est->add_option("--out", est.out, "output PLDA model file")->required();

  DeriveArgs der;
  auto *c_der = app.add_subcommand("derive-space", "derive the diarization space from a PLDA model");
  c_der->add_option("--plda", der.plda)->required();
  c_der->add_option("--r", der.r, "retained dimension")->capture_default_str();
  c_der->add_option("--out", der.out)->required();

  SubsegArgs sub;
  auto *c_sub = app.add_subcommand("subsegment", "split VAD speech into overlapping windows");
  c_sub->add_option("--vad", sub.vad, "VAD file: <onset> <offset> speech")->required();
  c_sub->add_option("--window", sub.cfg.window)->capture_default_str();
  c_sub->add_option("--shift", sub.cfg.shift)->capture_default_str();
  c_sub->add_option("--min-len", sub.cfg.min_len)->capture_default_str();
  c_sub->add_option("--out", sub.out, "output file (stdout when omitted)");

  SynthArgs syn;
  auto *c_syn = app.add_subcommand("synth", "sample a conversation from the generative model");
  c_syn->add_option("--speakers", syn.speakers)->capture_default_str();
  c_syn->add_option("--steps", syn.steps, "number of embeddings")->capture_default_str();
  c_syn->add_option("--loop-p", syn.loop_p)->capture_default_str();
  c_syn->add_option("--phi", syn.phi, "between-speaker variances (one value is repeated --dim times)");
  c_syn->add_option("--dim", syn.dim, "dimension when --phi is a single value");
  c_syn->add_option("--pi", syn.pi, "speaker priors (uniform when omitted)");
  c_syn->add_option("--step", syn.step, "seconds per embedding")->capture_default_str();
  c_syn->add_option("--seed", syn.seed)->capture_default_str();
  c_syn->add_option("--recording-id", syn.recording_id, "defaults to the stem of --out-emb");
  c_syn->add_option("--out-emb", syn.out_emb);
  c_syn->add_option("--out-rttm", syn.out_rttm);
  c_syn->add_option("--out-space", syn.out_space, "identity space carrying phi, for diarize");
  c_syn->add_flag("--binary", syn.binary, "write the binary embedding format");

  DiarizeArgs dia;
  auto *c_dia = app.add_subcommand("diarize", "cluster embedding files into RTTM speaker turns");
  c_dia->add_option("inputs", dia.inputs, "embedding files (text or binary)")->required();
  c_dia->add_option("--space", dia.space)->required();
  c_dia->add_option("--out-dir", dia.out_dir)->capture_default_str();
  c_dia->add_flag("--preprocessed", dia.preprocessed, "embeddings are already in the space");
  c_dia->add_option("--fa", dia.opt.vbx.fa)->capture_default_str();
  c_dia->add_option("--fb", dia.opt.vbx.fb)->capture_default_str();
  c_dia->add_option("--loop-p", dia.opt.vbx.loop_p)->capture_default_str();
  c_dia->add_option("--max-iters", dia.opt.vbx.max_iters)->capture_default_str();
  c_dia->add_option("--elbo-tol", dia.opt.vbx.elbo_tol)->capture_default_str();
  c_dia->add_option("--prune-pi", dia.opt.vbx.prune_pi)->capture_default_str();
  c_dia->add_option("--ahc-threshold", dia.opt.ahc.threshold)->capture_default_str();
  c_dia->add_option("--jobs", dia.jobs, "recordings processed in parallel")->capture_default_str();
  c_dia->add_flag("--strict", dia.strict, "exit with 3 if any recording did not converge");

  ScoreArgs sc;
  auto *c_sc = app.add_subcommand("score", "DER and JER of hypothesis against reference RTTM");
  c_sc->add_option("--ref", sc.ref)->required();
  c_sc->add_option("--hyp", sc.hyp)->required();
  c_sc->add_option("--setup", sc.setup, "forgiving | fair | full")->capture_default_str();
  c_sc->add_option("--collar", sc.collar, "override the setup's collar (seconds)");
  c_sc->add_flag("--no-overlap", sc.no_overlap, "exclude reference overlap from scoring");
  c_sc->add_option("--out", sc.out, "report file (stdout when omitted)");

  BuildRefArgs br;
  auto *c_br = app.add_subcommand("build-ref", "build reference RTTM from word-level transcripts");
  c_br->add_option("--words", br.words)->required();
  c_br->add_option("--out", br.out, "output RTTM (stdout when omitted)");
  c_br->add_flag("--include-vocal-sounds", br.include_vocal_sounds);

  OracleArgs orc;
  auto *c_orc = app.add_subcommand("oracle", "compare the engine against exact reference computations");
  c_orc->add_option("--seed", orc.seed)->capture_default_str();
  c_orc->add_option("--instances", orc.instances)->capture_default_str();
  c_orc->add_option("--max-t", orc.max_t)->capture_default_str();
  c_orc->add_option("--max-s", orc.max_s)->capture_default_str();

  try {
    std::vector<std::string> args = ExpandConfig(argc, argv);
    std::reverse(args.begin(), args.end());
    try {
      app.parse(args);
    } catch (const CLI::ParseError &e) {
      const int rc = app.exit(e);
      return rc == 0 ? kExitOk : kExitInput;
    }

    if (*c_est) return RunEstimate(est);
    if (*c_der) return RunDerive(der);
    if (*c_sub) return RunSubsegment(sub);
    if (*c_syn) return RunSynth(syn);
    if (*c_dia) {
      dia.opt.preprocessed = dia.preprocessed;
      return RunDiarize(dia);
    }
    if (*c_sc) return RunScore(sc);
    if (*c_br) return RunBuildRef(br);
    if (*c_orc) return RunOracle(orc);
  } catch (const vbx::Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == vbx::ErrorKind::kNumerical ? kExitNumerical : kExitInput;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
