// vbx/common.hpp

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

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace vbx {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Broad failure classes; the CLI maps them onto exit codes.
enum class ErrorKind {
  kInput,        // malformed or inconsistent input data
  kModel,        // model parameters violate their invariants
  kEstimation,   // not enough data to estimate something
  kNumerical,    // non-finite values during a computation
  kDegenerate,   // input is well-formed but cannot be processed (zero rows...)
  kEmpty,        // empty input where at least one element is required
  kTooLarge,     // exhaustive computation over the allowed size
  kUndefined,    // metric undefined for this input
};

inline const char *ErrorKindName(ErrorKind k) {
  switch (k) {
    case ErrorKind::kInput: return "input error";
    case ErrorKind::kModel: return "model error";
    case ErrorKind::kEstimation: return "estimation error";
    case ErrorKind::kNumerical: return "numerical error";
    case ErrorKind::kDegenerate: return "degenerate input";
    case ErrorKind::kEmpty: return "empty input";
    case ErrorKind::kTooLarge: return "instance too large";
    case ErrorKind::kUndefined: return "undefined metric";
  }
  return "error";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string &what)
      : std::runtime_error(std::string(ErrorKindName(kind)) + ": " + what),
        kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline constexpr double kLog2Pi = 1.8378770664093454836;
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// log(exp(a) + exp(b)) without overflow; handles -inf operands.
inline double LogAddExp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  return a > b ? a + std::log1p(std::exp(b - a)) : b + std::log1p(std::exp(a - b));
}

template <typename Derived>
double LogSumExp(const Eigen::DenseBase<Derived> &v) {
  const double m = v.maxCoeff();
  if (m == kNegInf) return kNegInf;
  return m + std::log((v.derived().array() - m).exp().sum());
}

template <typename Derived>
bool AllFinite(const Eigen::DenseBase<Derived> &m) {
  return m.allFinite();
}

}  // namespace vbx
