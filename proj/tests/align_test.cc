// Copyright 2026  The lsfvc Authors
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

#include "lsfvc/align.hpp"

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace lsfvc {
namespace {

using testing::CaughtCode;
using Path = std::vector<std::pair<std::size_t, std::size_t>>;

FeatureSequence RandomSequence(Rng& rng, std::size_t len, std::size_t dim) {
  FeatureSequence s(len, std::vector<double>(dim));
  for (auto& v : s)
    for (double& x : v) x = rng.Uniform(-1.0, 1.0);
  return s;
}

void ExpectValidPath(const Path& path, std::size_t n, std::size_t m) {
  ASSERT_FALSE(path.empty());
  EXPECT_EQ(path.front(), (std::pair<std::size_t, std::size_t>{0, 0}));
  EXPECT_EQ(path.back(), std::make_pair(n - 1, m - 1));
  EXPECT_GE(path.size(), std::max(n, m));
  EXPECT_LE(path.size(), n + m - 1);
  for (std::size_t k = 1; k < path.size(); ++k) {
    const std::size_t di = path[k].first - path[k - 1].first;
    const std::size_t dj = path[k].second - path[k - 1].second;
    ASSERT_TRUE((di == 1 && dj == 1) || (di == 1 && dj == 0) || (di == 0 && dj == 1));
  }
}

TEST(EuclideanDistance, Basics) {
  EXPECT_EQ(EuclideanDistance(std::vector<double>{0, 0}, std::vector<double>{3, 4}), 5.0);
  EXPECT_EQ(CaughtCode([] { EuclideanDistance(std::vector<double>{0}, std::vector<double>{1, 2}); }),
            ErrorCode::kDimensionMismatch);
}

TEST(DtwAlign, SmallHandCase) {
  const DtwAlignment r = DtwAlign({{0.0}, {1.0}}, {{0.0}, {2.0}});
  EXPECT_EQ(r.total_cost, 1.0);
  EXPECT_EQ(r.path, (Path{{0, 0}, {1, 1}}));
}

TEST(DtwAlign, TiesPreferDiagonalThenFirstAxis) {
  EXPECT_EQ(DtwAlign({{0.0}, {0.0}, {0.0}}, {{0.0}, {0.0}}).path, (Path{{0, 0}, {1, 0}, {2, 1}}));
  EXPECT_EQ(DtwAlign({{0.0}, {0.0}}, {{0.0}, {0.0}, {0.0}}).path, (Path{{0, 0}, {0, 1}, {1, 2}}));
  EXPECT_EQ(DtwAlign({{0.0}, {0.0}}, {{0.0}}).path, (Path{{0, 0}, {1, 0}}));
}

TEST(DtwAlign, SingleFrames) {
  const DtwAlignment r = DtwAlign({{1.0, 1.0}}, {{4.0, 5.0}});
  EXPECT_EQ(r.total_cost, 5.0);
  EXPECT_EQ(r.path, (Path{{0, 0}}));
}

TEST(DtwAlign, MatchesBruteForce) {
  Rng rng(53);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + trial % 6, m = 1 + (trial / 6) % 6;
    const auto a = RandomSequence(rng, n, 3);
    const auto b = RandomSequence(rng, m, 3);
    const DtwAlignment r = DtwAlign(a, b);
    ASSERT_EQ(r.total_cost, testing::BruteForceDtwCost(a, b)) << n << "x" << m;
    ExpectValidPath(r.path, n, m);
    double along = 0.0;
    for (const auto& [i, j] : r.path) along += EuclideanDistance(a[i], b[j]);
    ASSERT_EQ(along, r.total_cost);
  }
}

TEST(DtwAlign, Symmetric) {
  Rng rng(59);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = RandomSequence(rng, 5 + trial % 20, 4);
    const auto b = RandomSequence(rng, 3 + trial % 17, 4);
    EXPECT_DOUBLE_EQ(DtwAlign(a, b).total_cost, DtwAlign(b, a).total_cost);
  }
}

TEST(DtwAlign, IdenticalSequencesAlignOnDiagonal) {
  Rng rng(61);
  const auto a = RandomSequence(rng, 40, 6);
  const DtwAlignment r = DtwAlign(a, a);
  EXPECT_EQ(r.total_cost, 0.0);
  ASSERT_EQ(r.path.size(), 40u);
  for (std::size_t k = 0; k < 40; ++k) EXPECT_EQ(r.path[k], std::make_pair(k, k));
}

TEST(DtwAlign, Errors) {
  EXPECT_EQ(CaughtCode([] { DtwAlign({}, {{1.0}}); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(CaughtCode([] { DtwAlign({{1.0}}, {{1.0, 2.0}}); }), ErrorCode::kDimensionMismatch);
}

TEST(PairFrames, FollowsPath) {
  const FeatureSequence a{{1.0}, {2.0}, {3.0}};
  const FeatureSequence b{{10.0}, {20.0}};
  const DtwAlignment r{{{0, 0}, {1, 0}, {2, 1}}, 0.0};
  const auto pairs = PairFrames(r, a, b);
  ASSERT_EQ(pairs.size(), 3u);
  EXPECT_EQ(pairs[0].first, std::vector<double>{1.0});
  EXPECT_EQ(pairs[1].second, std::vector<double>{10.0});
  EXPECT_EQ(pairs[2].first, std::vector<double>{3.0});
  EXPECT_EQ(pairs[2].second, std::vector<double>{20.0});
}

TEST(PairFrames, StalePathRejected) {
  const DtwAlignment r{{{0, 0}, {1, 1}}, 0.0};
  EXPECT_EQ(CaughtCode([&] { PairFrames(r, {{1.0}}, {{1.0}, {2.0}}); }), ErrorCode::kInvalidArgument);
}

}  // namespace
}  // namespace lsfvc
