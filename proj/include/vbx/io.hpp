// vbx/io.hpp

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
  Text and binary file formats. Every reader reports the offending line;
  every writer is byte-deterministic.

  PLDA model (text)
      VBXPLDA 1 <D>
      <mean: D values>
      <D rows of the within-speaker covariance>
      <D rows of the between-speaker covariance>

  Diarization space (text)
      VBXSPACE 1 <D> <R>
      <mean: D values>
      R lines: <phi_r> <column r of the projection: D values>

  Embeddings (text)
      VBXEMB 1 <R>
      <onset> <offset> <v_1> ... <v_R>          one line per embedding

  Embeddings (binary)
      "VBXEMBB 1 <R>\n", then per embedding R + 2 little-endian IEEE-754
      doubles: onset, offset (seconds), v_1 ... v_R.

  VAD:               <onset> <offset> speech
  RTTM:              SPEAKER <file> 1 <onset> <dur> <NA> <NA> <speaker> <NA> <NA>
  Labeled vectors:   <speaker> <v_1> ... <v_D>
  Words:             <file> <speaker> <start|NA> <end|NA> <word|vocalsound> <token>

  Real values are written with 17 significant digits; times with their exact
  tick value (at least two decimals), RTTM times with three decimals.
*/

#pragma once

#include <bit>
#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "vbx/common.hpp"
#include "vbx/plda.hpp"
#include "vbx/scoring.hpp"
#include "vbx/timeline.hpp"

namespace vbx {

struct EmbeddingSequence {
  std::string recording_id;
  std::vector<Ticks> onsets;
  std::vector<Ticks> offsets;
  Matrix vectors;  // T x R

  Index size() const { return vectors.rows(); }
  Index dim() const { return vectors.cols(); }
};

struct VadTimeline {
  std::string recording_id;
  std::vector<Interval> speech;
};

namespace io {

inline std::string FormatReal(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// Exact decimal rendering of a tick count, trailing zeros trimmed down to
/// two decimals.
inline std::string FormatTicks(Ticks t) {
  const bool neg = t < 0;
  const std::uint64_t a = neg ? static_cast<std::uint64_t>(-t) : static_cast<std::uint64_t>(t);
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%s%llu.%07llu", neg ? "-" : "",
                static_cast<unsigned long long>(a / kTicksPerSecond),
                static_cast<unsigned long long>(a % kTicksPerSecond));
  std::string s = buf;
  while (s.size() > 1 && s.back() == '0' && s[s.size() - 3] != '.') s.pop_back();
  return s;
}

/// Seconds rounded half away from zero to milliseconds.
inline std::string FormatMillis(Ticks t) {
  constexpr Ticks kPerMs = kTicksPerSecond / 1000;
  const bool neg = t < 0;
  const Ticks a = neg ? -t : t;
  const Ticks ms = (a + kPerMs / 2) / kPerMs;
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%s%lld.%03lld", neg && ms != 0 ? "-" : "",
                static_cast<long long>(ms / 1000), static_cast<long long>(ms % 1000));
  return buf;
}

[[noreturn]] inline void Fail(const std::string &source, std::size_t line, const std::string &msg) {
  throw Error(ErrorKind::kInput, source + ":" + std::to_string(line) + ": " + msg);
}

inline std::vector<std::string> SplitFields(const std::string &line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

inline bool IsBlankOrComment(const std::string &line) {
  const auto pos = line.find_first_not_of(" \t\r");
  if (pos == std::string::npos) return true;
  return line[pos] == '#' || line.compare(pos, 2, ";;") == 0;
}

inline double ParseReal(const std::string &tok, const std::string &source, std::size_t line) {
  char *end = nullptr;
  errno = 0;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0' || errno == ERANGE || !std::isfinite(v))
    Fail(source, line, "cannot parse number '" + tok + "'");
  return v;
}

inline long long ParseInt(const std::string &tok, const std::string &source, std::size_t line) {
  char *end = nullptr;
  errno = 0;
  const long long v = std::strtoll(tok.c_str(), &end, 10);
  if (end == tok.c_str() || *end != '\0' || errno == ERANGE)
    Fail(source, line, "cannot parse integer '" + tok + "'");
  return v;
}

inline Ticks ParseTime(const std::string &tok, const std::string &source, std::size_t line) {
  return ToTicks(ParseReal(tok, source, line));
}

inline void WriteRow(std::ostream &os, const Eigen::Ref<const Vector> &v) {
  for (Index i = 0; i < v.size(); ++i) {
    if (i) os << ' ';
    os << FormatReal(v(i));
  }
  os << '\n';
}

// Reads the next non-blank line; returns false at EOF.
inline bool NextLine(std::istream &is, std::string &line, std::size_t &lineno) {
  while (std::getline(is, line)) {
    ++lineno;
    if (!IsBlankOrComment(line)) return true;
  }
  return false;
}

inline Vector ReadRow(std::istream &is, Index n, const std::string &source, std::size_t &lineno,
                      const std::string &what) {
  std::string line;
  if (!NextLine(is, line, lineno)) Fail(source, lineno + 1, "missing " + what);
  const auto f = SplitFields(line);
  if (static_cast<Index>(f.size()) != n)
    Fail(source, lineno, what + " has " + std::to_string(f.size()) + " values, expected " +
                             std::to_string(n));
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = ParseReal(f[i], source, lineno);
  return v;
}

// ---------------------------------------------------------------- PLDA model

inline void WritePlda(std::ostream &os, const PLDAModel &m) {
  os << "VBXPLDA 1 " << m.dim() << '\n';
  WriteRow(os, m.mean);
  for (Index i = 0; i < m.dim(); ++i) WriteRow(os, m.within_cov.row(i).transpose());
  for (Index i = 0; i < m.dim(); ++i) WriteRow(os, m.between_cov.row(i).transpose());
}

inline PLDAModel ReadPlda(std::istream &is, const std::string &source = "<plda>") {
  std::string line;
  std::size_t lineno = 0;
  if (!NextLine(is, line, lineno)) Fail(source, 1, "empty PLDA file");
  const auto h = SplitFields(line);
  if (h.size() != 3 || h[0] != "VBXPLDA" || h[1] != "1")
    Fail(source, lineno, "expected header 'VBXPLDA 1 <D>'");
  const long long d = ParseInt(h[2], source, lineno);
  if (d < 1) Fail(source, lineno, "dimension must be positive");
  PLDAModel m;
  m.mean = ReadRow(is, d, source, lineno, "mean");
  m.within_cov.resize(d, d);
  m.between_cov.resize(d, d);
  for (Index i = 0; i < d; ++i)
    m.within_cov.row(i) = ReadRow(is, d, source, lineno, "within-covariance row").transpose();
  for (Index i = 0; i < d; ++i)
    m.between_cov.row(i) = ReadRow(is, d, source, lineno, "between-covariance row").transpose();
  if (NextLine(is, line, lineno)) Fail(source, lineno, "trailing data after PLDA model");
  return m;
}

// ----------------------------------------------------------------- DiarSpace

inline void WriteSpace(std::ostream &os, const DiarSpace &s) {
  os << "VBXSPACE 1 " << s.source_dim() << ' ' << s.dim() << '\n';
  WriteRow(os, s.mean);
  for (Index k = 0; k < s.dim(); ++k) {
    Vector row(s.source_dim() + 1);
    row(0) = s.phi(k);
    row.tail(s.source_dim()) = s.projection.col(k);
    WriteRow(os, row);
  }
}

inline DiarSpace ReadSpace(std::istream &is, const std::string &source = "<space>") {
  std::string line;
  std::size_t lineno = 0;
  if (!NextLine(is, line, lineno)) Fail(source, 1, "empty space file");
  const auto h = SplitFields(line);
  if (h.size() != 4 || h[0] != "VBXSPACE" || h[1] != "1")
    Fail(source, lineno, "expected header 'VBXSPACE 1 <D> <R>'");
  const long long d = ParseInt(h[2], source, lineno);
  const long long r = ParseInt(h[3], source, lineno);
  if (d < 1 || r < 1 || r > d) Fail(source, lineno, "need 1 <= R <= D");
  DiarSpace s;
  s.mean = ReadRow(is, d, source, lineno, "mean");
  s.projection.resize(d, r);
  s.phi.resize(r);
  for (Index k = 0; k < r; ++k) {
    const Vector row = ReadRow(is, d + 1, source, lineno, "phi/column line");
    if (!(row(0) > 0.0)) Fail(source, lineno, "phi must be positive");
    s.phi(k) = row(0);
    s.projection.col(k) = row.tail(d);
  }
  if (NextLine(is, line, lineno)) Fail(source, lineno, "trailing data after space");
  return s;
}

// ---------------------------------------------------------------- embeddings

inline void CheckRowTimes(const EmbeddingSequence &e, const std::string &source,
                          std::size_t lineno) {
  const std::size_t i = e.onsets.size() - 1;
  if (e.offsets[i] <= e.onsets[i]) Fail(source, lineno, "offset must exceed onset");
  if (i > 0 && e.onsets[i] <= e.onsets[i - 1]) Fail(source, lineno, "onsets must be strictly increasing");
}

inline void WriteEmbeddings(std::ostream &os, const EmbeddingSequence &e) {
  os << "VBXEMB 1 " << e.dim() << '\n';
  for (Index t = 0; t < e.size(); ++t) {
    os << FormatTicks(e.onsets[t]) << ' ' << FormatTicks(e.offsets[t]);
    for (Index d = 0; d < e.dim(); ++d) os << ' ' << FormatReal(e.vectors(t, d));
    os << '\n';
  }
}

inline EmbeddingSequence ReadEmbeddingsText(std::istream &is, const std::string &recording_id,
                                            const std::string &source) {
  std::string line;
  std::size_t lineno = 0;
  if (!NextLine(is, line, lineno)) Fail(source, 1, "empty embedding file");
  const auto h = SplitFields(line);
  if (h.size() != 3 || h[0] != "VBXEMB" || h[1] != "1")
    Fail(source, lineno, "expected header 'VBXEMB 1 <R>'");
  const long long r = ParseInt(h[2], source, lineno);
  if (r < 1) Fail(source, lineno, "dimension must be positive");

  EmbeddingSequence e;
  e.recording_id = recording_id;
  std::vector<double> values;
  while (NextLine(is, line, lineno)) {
    const auto f = SplitFields(line);
    if (static_cast<long long>(f.size()) != r + 2)
      Fail(source, lineno, "row has " + std::to_string(static_cast<long long>(f.size()) - 2) +
                               " vector values, header says " + std::to_string(r));
    e.onsets.push_back(ParseTime(f[0], source, lineno));
    e.offsets.push_back(ParseTime(f[1], source, lineno));
    CheckRowTimes(e, source, lineno);
    for (long long d = 0; d < r; ++d) values.push_back(ParseReal(f[d + 2], source, lineno));
  }
  e.vectors = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      values.data(), static_cast<Index>(e.onsets.size()), r);
  return e;
}

namespace detail {
inline void PutLe(std::ostream &os, double v) {
  std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
  os.write(reinterpret_cast<const char *>(b), 8);
}
inline bool GetLe(std::istream &is, double &v) {
  unsigned char b[8];
  if (!is.read(reinterpret_cast<char *>(b), 8)) return false;
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  v = std::bit_cast<double>(bits);
  return true;
}
}  // namespace detail

inline void WriteEmbeddingsBinary(std::ostream &os, const EmbeddingSequence &e) {
  os << "VBXEMBB 1 " << e.dim() << '\n';
  for (Index t = 0; t < e.size(); ++t) {
    detail::PutLe(os, ToSeconds(e.onsets[t]));
    detail::PutLe(os, ToSeconds(e.offsets[t]));
    for (Index d = 0; d < e.dim(); ++d) detail::PutLe(os, e.vectors(t, d));
  }
}

inline EmbeddingSequence ReadEmbeddingsBinary(std::istream &is, const std::string &recording_id,
                                              const std::string &source) {
  std::string line;
  if (!std::getline(is, line)) Fail(source, 1, "empty embedding file");
  const auto h = SplitFields(line);
  if (h.size() != 3 || h[0] != "VBXEMBB" || h[1] != "1")
    Fail(source, 1, "expected header 'VBXEMBB 1 <R>'");
  const long long r = ParseInt(h[2], source, 1);
  if (r < 1) Fail(source, 1, "dimension must be positive");
  EmbeddingSequence e;
  e.recording_id = recording_id;
  std::vector<double> values;
  std::size_t record = 0;
  double v = 0.0;
  while (detail::GetLe(is, v)) {
    ++record;
    // Records are numbered from 2 so "line" numbers match the text format.
    const std::size_t pos = record + 1;
    double off = 0.0;
    if (!detail::GetLe(is, off)) Fail(source, pos, "truncated record");
    e.onsets.push_back(ToTicks(v));
    e.offsets.push_back(ToTicks(off));
    CheckRowTimes(e, source, pos);
    for (long long d = 0; d < r; ++d) {
      double x = 0.0;
      if (!detail::GetLe(is, x)) Fail(source, pos, "truncated record");
      values.push_back(x);
    }
  }
  e.vectors = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      values.data(), static_cast<Index>(e.onsets.size()), r);
  return e;
}

/// Picks the text or binary reader from the header magic.
inline EmbeddingSequence ReadEmbeddings(std::istream &is, const std::string &recording_id,
                                        const std::string &source) {
  char magic[7] = {};
  is.read(magic, 7);
  const bool binary = is.gcount() == 7 && std::memcmp(magic, "VBXEMBB", 7) == 0;
  is.clear();
  is.seekg(0);
  return binary ? ReadEmbeddingsBinary(is, recording_id, source)
                : ReadEmbeddingsText(is, recording_id, source);
}

// ----------------------------------------------------------------------- VAD

inline VadTimeline ReadVad(std::istream &is, const std::string &recording_id,
                           const std::string &source) {
  VadTimeline vad{recording_id, {}};
  std::string line;
  std::size_t lineno = 0;
  while (NextLine(is, line, lineno)) {
    const auto f = SplitFields(line);
    if (f.size() != 3 && f.size() != 2) Fail(source, lineno, "expected '<onset> <offset> speech'");
    if (f.size() == 3 && f[2] != "speech") Fail(source, lineno, "unknown label '" + f[2] + "'");
    const Interval iv{ParseTime(f[0], source, lineno), ParseTime(f[1], source, lineno)};
    if (iv.begin < 0) Fail(source, lineno, "negative onset");
    if (iv.end <= iv.begin) Fail(source, lineno, "interval must have positive length");
    if (!vad.speech.empty() && iv.begin < vad.speech.back().end)
      Fail(source, lineno, "intervals must be sorted and non-overlapping");
    vad.speech.push_back(iv);
  }
  return vad;
}

inline void WriteIntervals(std::ostream &os, const std::vector<Interval> &ivs) {
  for (const auto &iv : ivs) os << FormatTicks(iv.begin) << ' ' << FormatTicks(iv.end) << '\n';
}

// ---------------------------------------------------------------------- RTTM

inline void WriteRttm(std::ostream &os, const Timeline &tl) {
  for (const auto &s : tl.segments)
    os << "SPEAKER " << tl.recording_id << " 1 " << FormatMillis(s.onset) << ' '
       << FormatMillis(s.duration) << " <NA> <NA> " << s.speaker << " <NA> <NA>\n";
}

/// Timelines keyed by file id.
inline std::map<std::string, Timeline> ReadRttm(std::istream &is, const std::string &source) {
  std::map<std::string, Timeline> out;
  std::string line;
  std::size_t lineno = 0;
  while (NextLine(is, line, lineno)) {
    const auto f = SplitFields(line);
    if (f.empty()) continue;
    if (f[0] != "SPEAKER") Fail(source, lineno, "unknown RTTM type '" + f[0] + "'");
    if (f.size() < 8) Fail(source, lineno, "SPEAKER line needs at least 8 fields");
    const Ticks onset = ParseTime(f[3], source, lineno);
    const Ticks dur = ParseTime(f[4], source, lineno);
    if (onset < 0) Fail(source, lineno, "negative onset");
    if (dur <= 0) Fail(source, lineno, "duration must be positive");
    Timeline &tl = out[f[1]];
    tl.recording_id = f[1];
    tl.segments.push_back({f[1], onset, dur, f[7]});
  }
  return out;
}

// ------------------------------------------------------------ other inputs

inline LabeledEmbeddings ReadLabeledEmbeddings(std::istream &is, const std::string &source) {
  LabeledEmbeddings out;
  std::vector<double> values;
  long long dim = -1;
  std::string line;
  std::size_t lineno = 0;
  while (NextLine(is, line, lineno)) {
    const auto f = SplitFields(line);
    if (f.size() < 2) Fail(source, lineno, "expected '<speaker> <v_1> ... <v_D>'");
    const long long d = static_cast<long long>(f.size()) - 1;
    if (dim < 0) dim = d;
    if (d != dim)
      Fail(source, lineno, "vector has " + std::to_string(d) + " values, expected " +
                               std::to_string(dim));
    out.speaker_ids.push_back(f[0]);
    for (long long i = 1; i <= d; ++i) values.push_back(ParseReal(f[i], source, lineno));
  }
  if (dim < 0) Fail(source, lineno + 1, "no training vectors");
  out.vectors = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      values.data(), static_cast<Index>(out.speaker_ids.size()), dim);
  return out;
}

/// Word records keyed by file id.
inline std::map<std::string, std::vector<WordRecord>> ReadWords(std::istream &is,
                                                                const std::string &source) {
  std::map<std::string, std::vector<WordRecord>> out;
  std::string line;
  std::size_t lineno = 0;
  while (NextLine(is, line, lineno)) {
    const auto f = SplitFields(line);
    if (f.size() < 5 || f.size() > 6)
      Fail(source, lineno, "expected '<file> <speaker> <start|NA> <end|NA> <word|vocalsound> [token]'");
    WordRecord w;
    w.speaker = f[1];
    w.has_times = f[2] != "NA" && f[3] != "NA";
    if (w.has_times) {
      w.start = ParseTime(f[2], source, lineno);
      w.end = ParseTime(f[3], source, lineno);
    }
    if (f[4] == "word")
      w.kind = WordKind::kWord;
    else if (f[4] == "vocalsound")
      w.kind = WordKind::kVocalSound;
    else
      Fail(source, lineno, "unknown kind '" + f[4] + "'");
    if (f.size() == 6) w.token = f[5];
    out[f[0]].push_back(std::move(w));
  }
  return out;
}

// Convenience wrappers over files.

template <typename Fn>
auto WithInput(const std::string &path, Fn &&fn, bool binary = false) {
  std::ifstream is(path, binary ? std::ios::binary : std::ios::in);
  if (!is) throw Error(ErrorKind::kInput, "cannot open '" + path + "'");
  return fn(is);
}

template <typename Fn>
void WithOutput(const std::string &path, Fn &&fn, bool binary = false) {
  std::ofstream os(path, binary ? std::ios::binary : std::ios::out);
  if (!os) throw Error(ErrorKind::kInput, "cannot write '" + path + "'");
  fn(os);
  if (!os) throw Error(ErrorKind::kInput, "write failed for '" + path + "'");
}

}  // namespace io
}  // namespace vbx
