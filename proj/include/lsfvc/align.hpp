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

// Dynamic time warping over sequences of equal-dimension feature vectors.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lsfvc/error.hpp"

namespace lsfvc {

using FeatureSequence = std::vector<std::vector<double>>;

struct DtwAlignment {
  std::vector<std::pair<std::size_t, std::size_t>> path;
  double total_cost = 0.0;
};

inline double EuclideanDistance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw Error(ErrorCode::kDimensionMismatch,
                std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

/// Full-grid DTW with steps (1,1), (1,0), (0,1) and no slope weights.
/// Backtrace ties prefer the diagonal, then (1,0), then (0,1).
inline DtwAlignment DtwAlign(const FeatureSequence& a, const FeatureSequence& b) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::kInvalidArgument, "empty sequence");
  const std::size_t dim = a.front().size();
  for (const auto& v : a)
    if (v.size() != dim) throw Error(ErrorCode::kDimensionMismatch, "ragged first sequence");
  for (const auto& v : b)
    if (v.size() != dim) throw Error(ErrorCode::kDimensionMismatch, "sequences differ in dimension");

  const std::size_t n = a.size(), m = b.size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> cost(n * m, inf);
  auto at = [&](std::size_t i, std::size_t j) -> double& { return cost[i * m + j]; };

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double local = EuclideanDistance(a[i], b[j]);
      if (i == 0 && j == 0) {
        at(i, j) = local;
        continue;
      }
      double best = inf;
      if (i > 0 && j > 0) best = std::min(best, at(i - 1, j - 1));
      if (i > 0) best = std::min(best, at(i - 1, j));
      if (j > 0) best = std::min(best, at(i, j - 1));
      at(i, j) = best + local;
    }
  }

  DtwAlignment out;
  out.total_cost = at(n - 1, m - 1);
  std::size_t i = n - 1, j = m - 1;
  out.path.emplace_back(i, j);
  while (i > 0 || j > 0) {
    const double diag = (i > 0 && j > 0) ? at(i - 1, j - 1) : inf;
    const double up = i > 0 ? at(i - 1, j) : inf;
    const double left = j > 0 ? at(i, j - 1) : inf;
    if (diag <= up && diag <= left) {
      --i;
      --j;
    } else if (up <= left) {
      --i;
    } else {
      --j;
    }
    out.path.emplace_back(i, j);
  }
  std::reverse(out.path.begin(), out.path.end());
  return out;
}

/// Materializes one (a_i, b_j) pair per path cell, in path order.
inline std::vector<std::pair<std::vector<double>, std::vector<double>>> PairFrames(
    const DtwAlignment& alignment, const FeatureSequence& a, const FeatureSequence& b) {
  std::vector<std::pair<std::vector<double>, std::vector<double>>> pairs;
  pairs.reserve(alignment.path.size());
  for (const auto& [i, j] : alignment.path) {
    if (i >= a.size() || j >= b.size())
      throw Error(ErrorCode::kInvalidArgument,
                  "path cell (" + std::to_string(i) + ", " + std::to_string(j) +
                      ") is outside the sequences; stale alignment");
    pairs.emplace_back(a[i], b[j]);
  }
  return pairs;
}

}  // namespace lsfvc
