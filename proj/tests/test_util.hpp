// tests/test_util.hpp

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

// Shared generators for the test binaries.

#pragma once

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <initializer_list>
#include <numeric>
#include <vector>

#include "vbx/common.hpp"
#include "vbx/random.hpp"

namespace vbx::testing {

inline int UniformInt(CounterRng &rng, int lo, int hi) {
  return lo + static_cast<int>(rng.Uniform() * (hi - lo + 1));
}

inline Matrix Diag(std::initializer_list<double> d) {
  Vector v(static_cast<Index>(d.size()));
  Index i = 0;
  for (double x : d) v(i++) = x;
  return v.asDiagonal();
}

inline Matrix RandomNormal(CounterRng &rng, Index rows, Index cols) {
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = rng.Normal();
  return m;
}

/// A A^T / d + shift I: symmetric positive definite with eigenvalues >= shift.
inline Matrix RandomSpd(CounterRng &rng, Index d, double shift = 0.5) {
  const Matrix a = RandomNormal(rng, d, d);
  Matrix s = a * a.transpose() / static_cast<double>(d);
  s.diagonal().array() += shift;
  return 0.5 * (s + s.transpose());
}

inline Vector RandomSimplex(CounterRng &rng, Index n, double floor = 0.05) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = floor + rng.Uniform();
  return v / v.sum();
}

inline Matrix RandomResponsibilities(CounterRng &rng, Index t, Index s) {
  Matrix g(t, s);
  for (Index i = 0; i < t; ++i) {
    for (Index j = 0; j < s; ++j) g(i, j) = rng.Uniform();
    g.row(i) /= g.row(i).sum();
  }
  return g;
}

/// Whether two label sequences describe the same partition.
inline bool SamePartition(const std::vector<int> &a, const std::vector<int> &b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j)
      if ((a[i] == a[j]) != (b[i] == b[j])) return false;
  return true;
}

/// Fraction of positions where a matches b under the best one-to-one
/// relabeling of a (brute force over permutations; small label counts only).
inline double BestPermutationAccuracy(const std::vector<int> &a, const std::vector<int> &b) {
  const int na = *std::max_element(a.begin(), a.end()) + 1;
  const int nb = *std::max_element(b.begin(), b.end()) + 1;
  const int n = std::max(na, nb);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = 0.0;
  do {
    std::size_t hit = 0;
    for (std::size_t i = 0; i < a.size(); ++i) hit += perm[a[i]] == b[i];
    best = std::max(best, static_cast<double>(hit) / static_cast<double>(a.size()));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

/// Runs a shell command and returns its exit status (-1 if it did not exit).
inline int RunCommand(const std::string &cmd) {
  const int raw = std::system(cmd.c_str());
  if (raw == -1 || !WIFEXITED(raw)) return -1;
  return WEXITSTATUS(raw);
}

inline std::string ReadFile(const std::filesystem::path &p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

inline void WriteFile(const std::filesystem::path &p, const std::string &text) {
  std::ofstream os(p, std::ios::binary);
  os << text;
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path ScratchDir(const std::string &name) {
  const auto dir = std::filesystem::temp_directory_path() / ("vbx_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace vbx::testing
