// tests/oracle_test.cpp

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


#include <gtest/gtest.h>

#include "test_util.hpp"
#include "vbx/oracle.hpp"

namespace vbx {
namespace {

using testing::RandomNormal;
using testing::RandomResponsibilities;
using testing::UniformInt;

TEST(EnumeratePathPosterior, WorkedExample) {
  Matrix ll(2, 2);
  ll << std::log(0.9), std::log(0.1), std::log(0.9), std::log(0.1);
  Vector pi(2);
  pi << 0.5, 0.5;
  const auto p = oracle::EnumeratePathPosterior(ll, pi, 0.8);
  EXPECT_NEAR(p.gamma(0, 0), 0.9761904761904762, 1e-12);
  EXPECT_NEAR(p.gamma(1, 0), 0.9761904761904762, 1e-12);
  EXPECT_NEAR(std::exp(p.log_total), 0.378, 1e-12);
}

TEST(EnumeratePathPosterior, SingleState) {
  CounterRng rng(1);
  const auto p = oracle::EnumeratePathPosterior(RandomNormal(rng, 5, 1), Vector::Ones(1), 0.3);
  EXPECT_TRUE(p.gamma.isApprox(Matrix::Ones(5, 1), 1e-14));
}

TEST(EnumeratePathPosterior, UniformBySymmetry) {
  const auto p = oracle::EnumeratePathPosterior(Matrix::Constant(4, 3, -1.0),
                                                Vector::Constant(3, 1.0 / 3.0), 0.5);
  EXPECT_LT((p.gamma.array() - 1.0 / 3.0).abs().maxCoeff(), 1e-14);
}

TEST(EnumeratePathPosterior, TooLarge) {
  try {
    oracle::EnumeratePathPosterior(Matrix::Zero(13, 3), Vector::Constant(3, 1.0 / 3.0), 0.5);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::kTooLarge);
  }
  // 3^12 = 531441 paths is still allowed.
  EXPECT_NO_THROW(
      oracle::EnumeratePathPosterior(Matrix::Zero(12, 3), Vector::Constant(3, 1.0 / 3.0), 0.5));
}

TEST(EnumeratePathPosterior, TotalMatchesForwardPass) {
  CounterRng rng(2);
  for (int trial = 0; trial < 30; ++trial) {
    const Index s = UniformInt(rng, 1, 4), t = UniformInt(rng, 1, 7);
    const Matrix ll = 2.0 * RandomNormal(rng, t, s);
    const Vector pi = testing::RandomSimplex(rng, s);
    const auto p = oracle::EnumeratePathPosterior(ll, pi, 0.7);
    const auto fb = ForwardBackward(ll, pi, 0.7);
    EXPECT_NEAR(p.log_total, fb.log_px, 1e-12 * std::max(1.0, std::abs(fb.log_px)));
  }
}

TEST(SingleSpeakerLogMl, Examples) {
  CounterRng rng(3);
  const Matrix x = RandomNormal(rng, 6, 3);
  double iid = 0.0;
  for (Index i = 0; i < x.size(); ++i) iid += -0.5 * kLog2Pi - 0.5 * x(i) * x(i);
  EXPECT_NEAR(oracle::SingleSpeakerLogMl(x, Vector::Zero(3)), iid, 1e-12);

  Matrix zero(1, 1);
  zero << 0.0;
  EXPECT_NEAR(oracle::SingleSpeakerLogMl(zero, Vector::Ones(1)), -0.5 * std::log(4.0 * M_PI),
              1e-15);
}

// Dense check of the rank-one shortcut against an explicit Cholesky.
TEST(SingleSpeakerLogMl, MatchesDenseGaussian) {
  CounterRng rng(4);
  const Index t = 7;
  const Matrix x = RandomNormal(rng, t, 2);
  Vector phi(2);
  phi << 3.0, 0.4;
  double expect = 0.0;
  for (Index r = 0; r < 2; ++r) {
    const Matrix cov = Matrix::Identity(t, t) + phi(r) * Matrix::Ones(t, t);
    Eigen::LLT<Matrix> llt(cov);
    const Vector col = x.col(r);
    const Matrix lower = llt.matrixL();
    const double logdet = 2.0 * lower.diagonal().array().log().sum();
    expect += -0.5 * (t * kLog2Pi + logdet + col.dot(llt.solve(col)));
  }
  EXPECT_NEAR(oracle::SingleSpeakerLogMl(x, phi), expect, 1e-10);
}

TEST(ElboFdGradient, StationaryAtUpdateOnly) {
  CounterRng rng(5);
  oracle::SmallProblem p;
  p.x = RandomNormal(rng, 8, 3);
  p.phi = Vector::Constant(3, 4.0);
  p.gamma = RandomResponsibilities(rng, 8, 2);
  p.fa = 0.3;
  p.fb = 4.0;
  const double at = oracle::ElboFdGradientAtUpdate(p);
  EXPECT_LT(at, 1e-5);

  VBxConfig cfg;
  cfg.fa = p.fa;
  cfg.fb = p.fb;
  VBxState st;
  st.gamma = p.gamma;
  UpdateQy(p.x, p.phi, cfg, st);
  const Matrix shifted = st.alpha.array() + 0.1;
  EXPECT_GT(oracle::ElboFdGradient(p, shifted, st.lambda), at);
  EXPECT_GT(oracle::ElboFdGradient(p, shifted, st.lambda), 1e-3);
}

TEST(ElboFdGradient, OnlyRatioEntersUpdate) {
  CounterRng rng(6);
  const Matrix x = RandomNormal(rng, 10, 4);
  const Vector phi = Vector::Constant(4, 2.0);
  const Matrix gamma = RandomResponsibilities(rng, 10, 3);
  VBxConfig a, b;
  a.fa = 0.3;
  a.fb = 17.0;
  b.fa = 3.0;
  b.fb = 170.0;
  VBxState sa, sb;
  sa.gamma = sb.gamma = gamma;
  UpdateQy(x, phi, a, sa);
  UpdateQy(x, phi, b, sb);
  EXPECT_LT((sa.alpha - sb.alpha).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((sa.lambda - sb.lambda).cwiseAbs().maxCoeff(), 1e-14);
}

}  // namespace
}  // namespace vbx
