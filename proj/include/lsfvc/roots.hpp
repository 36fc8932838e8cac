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

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include "lsfvc/error.hpp"

namespace lsfvc {

using Complex = std::complex<double>;

struct RootResult {
  std::vector<Complex> roots;
  int iterations = 0;
  bool converged = false;  // largest single-root move reached the tolerance
  /// Largest |polynomial(root)| over the returned roots.
  double max_residual = 0.0;
};

/// Thrown when the returned roots fail the residual check; carries the best iterate.
class RootFindingError : public Error {
 public:
  RootFindingError(const std::string& what, RootResult best)
      : Error(ErrorCode::kNoConvergence, what), best_(std::move(best)) {}
  const RootResult& best() const noexcept { return best_; }

 private:
  RootResult best_;
};

/// Evaluates z^n + tail[0] z^(n-1) + ... + tail[n-1] by Horner's rule.
inline Complex EvalMonic(std::span<const double> tail, Complex z) {
  Complex acc = 1.0;
  for (double c : tail) acc = acc * z + c;
  return acc;
}

/// Durand-Kerner (Weierstrass) simultaneous iteration for the roots of the
/// monic polynomial z^n + tail[0] z^(n-1) + ... + tail[n-1].
///
/// Estimates start on a circle of radius max_k |tail[k-1]|^(1/k) with an
/// angular offset so no estimate sits on the real axis. Updates are applied
/// in place (each root sees the freshest values of the others). Iteration stops
/// once the largest single-root move is <= tolerance.
inline RootResult DurandKerner(std::span<const double> tail, int max_iterations = 1000,
                               double tolerance = 1e-12) {
  RootResult result;
  const std::size_t n = tail.size();
  if (n == 0) {
    result.converged = true;
    return result;
  }

  double radius = 0.0;
  for (std::size_t k = 0; k < n; ++k)
    radius = std::max(radius, std::pow(std::abs(tail[k]), 1.0 / static_cast<double>(k + 1)));
  if (radius == 0.0) radius = 1.0;

  result.roots.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n) + 0.4;
    result.roots[k] = std::polar(radius, angle);
  }

  for (int it = 1; it <= max_iterations; ++it) {
    double max_move = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const Complex z = result.roots[i];
      Complex denom = 1.0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) denom *= z - result.roots[j];
      if (denom == 0.0) denom = 1e-300;
      const Complex step = EvalMonic(tail, z) / denom;
      result.roots[i] = z - step;
      max_move = std::max(max_move, std::abs(step));
    }
    result.iterations = it;
    if (!std::isfinite(max_move)) break;
    if (max_move <= tolerance) {
      result.converged = true;
      break;
    }
  }

  for (const Complex& z : result.roots)
    result.max_residual = std::max(result.max_residual, std::abs(EvalMonic(tail, z)));
  return result;
}

}  // namespace lsfvc
