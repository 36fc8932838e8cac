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

// Linear prediction: autocorrelation analysis, the Levinson-Durbin recursion,
// inverse (residual) and synthesis filtering, and pole extraction.
//
// Sign convention used throughout the library: the predictor is
//   s_hat(n) = sum_{k=1..p} a_k s(n-k)
// so the inverse filter is A(z) = 1 - sum_k a_k z^-k and the synthesis
// filter is 1 / A(z).

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "lsfvc/error.hpp"
#include "lsfvc/roots.hpp"

namespace lsfvc {

inline constexpr double kSilenceFloor = 1e-12;

/// Outputs whose magnitude passes this bound are treated as a runaway filter.
inline constexpr double kDivergenceLimit = 1e8;

inline constexpr double kPoleResidualTolerance = 1e-8;

struct LpcFrame {
  std::vector<double> coefficients;  // a_1 .. a_p
  double gain = 0.0;                 // sqrt of the final prediction error power
  /// Set when the recursion hit a reflection coefficient with |k| >= 1 and
  /// stopped early; the untouched higher coefficients are zero.
  bool truncated = false;

  std::size_t order() const { return coefficients.size(); }
};

/// History of the last p samples, most recent first: history[k-1] = s[n-k].
struct FilterState {
  std::vector<double> history;

  static FilterState Zero(std::size_t order) { return {std::vector<double>(order, 0.0)}; }
};

struct FilterOutput {
  std::vector<double> samples;
  FilterState state;
  /// Synthesis only: a non-finite or runaway (> kDivergenceLimit) output occurred.
  bool unstable = false;
};

/// Biased estimator r[tau] = (1/N) sum_t x[t] x[t+tau], tau = 0..max_lag.
inline std::vector<double> Autocorrelate(std::span<const double> frame, std::size_t max_lag) {
  if (max_lag >= frame.size())
    throw Error(ErrorCode::kInvalidArgument,
                "max lag " + std::to_string(max_lag) + " needs a frame longer than " +
                    std::to_string(frame.size()));
  const std::size_t n = frame.size();
  std::vector<double> r(max_lag + 1, 0.0);
  for (std::size_t lag = 0; lag <= max_lag; ++lag) {
    double acc = 0.0;
    for (std::size_t t = 0; t + lag < n; ++t) acc += frame[t] * frame[t + lag];
    r[lag] = acc / static_cast<double>(n);
  }
  return r;
}

/// Solves the Toeplitz normal equations sum_j a_j r[|i-j|] = r[i], i = 1..order.
inline LpcFrame LevinsonDurbin(std::span<const double> r, std::size_t order) {
  if (r.size() < order + 1)
    throw Error(ErrorCode::kInvalidArgument,
                "autocorrelation has " + std::to_string(r.size()) + " lags, order " +
                    std::to_string(order) + " needs " + std::to_string(order + 1));
  LpcFrame out;
  out.coefficients.assign(order, 0.0);
  if (r[0] <= kSilenceFloor) return out;

  std::vector<double>& a = out.coefficients;
  std::vector<double> prev(order, 0.0);
  double error = r[0];
  for (std::size_t i = 1; i <= order; ++i) {
    double acc = r[i];
    for (std::size_t j = 1; j < i; ++j) acc -= a[j - 1] * r[i - j];
    const double k = acc / error;
    if (!(std::abs(k) < 1.0)) {
      out.truncated = true;
      break;
    }
    std::copy(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(i - 1), prev.begin());
    for (std::size_t j = 1; j < i; ++j) a[j - 1] = prev[j - 1] - k * prev[i - j - 1];
    a[i - 1] = k;
    error *= (1.0 - k * k);
  }
  out.gain = std::sqrt(std::max(error, 0.0));
  return out;
}

inline LpcFrame AnalyzeFrame(std::span<const double> frame, std::size_t order) {
  if (frame.empty()) throw Error(ErrorCode::kInvalidArgument, "empty frame");
  return LevinsonDurbin(Autocorrelate(frame, order), order);
}

namespace detail {

inline void CheckState(const LpcFrame& lpc, const FilterState& state) {
  if (state.history.size() != lpc.order())
    throw Error(ErrorCode::kDimensionMismatch,
                "filter state holds " + std::to_string(state.history.size()) +
                    " samples, order is " + std::to_string(lpc.order()));
}

inline void PushHistory(std::vector<double>& history, double x) {
  if (history.empty()) return;
  std::copy_backward(history.begin(), history.end() - 1, history.end());
  history[0] = x;
}

}  // namespace detail

/// e[n] = s[n] - sum_k a_k s[n-k]; the state carries the last p inputs.
inline FilterOutput InverseFilter(std::span<const double> segment, const LpcFrame& lpc,
                                  FilterState state) {
  detail::CheckState(lpc, state);
  const std::size_t p = lpc.order();
  FilterOutput out;
  out.samples.resize(segment.size());
  for (std::size_t n = 0; n < segment.size(); ++n) {
    double prediction = 0.0;
    for (std::size_t k = 0; k < p; ++k) prediction += lpc.coefficients[k] * state.history[k];
    out.samples[n] = segment[n] - prediction;
    detail::PushHistory(state.history, segment[n]);
  }
  out.state = std::move(state);
  return out;
}

/// s[n] = e[n] + sum_k a_k s[n-k]; the state carries the last p outputs.
inline FilterOutput SynthesisFilter(std::span<const double> residual, const LpcFrame& lpc,
                                    FilterState state) {
  detail::CheckState(lpc, state);
  const std::size_t p = lpc.order();
  FilterOutput out;
  out.samples.resize(residual.size());
  for (std::size_t n = 0; n < residual.size(); ++n) {
    double s = residual[n];
    for (std::size_t k = 0; k < p; ++k) s += lpc.coefficients[k] * state.history[k];
    if (!std::isfinite(s) || std::abs(s) > kDivergenceLimit) out.unstable = true;
    out.samples[n] = s;
    detail::PushHistory(state.history, s);
  }
  out.state = std::move(state);
  return out;
}

/// Roots of z^p - a_1 z^(p-1) - ... - a_p, i.e. the poles of 1/A(z).
/// Exact zero trailing coefficients contribute exact roots at the origin.
/// Throws RootFindingError when some |polynomial(root)| exceeds
/// kPoleResidualTolerance, whether or not the iteration settled.
inline std::vector<Complex> LpcPoles(const LpcFrame& lpc) {
  if (lpc.order() == 0) throw Error(ErrorCode::kInvalidArgument, "order must be >= 1");
  std::vector<double> tail(lpc.order());
  for (std::size_t k = 0; k < lpc.order(); ++k) tail[k] = -lpc.coefficients[k];
  std::size_t zeros = 0;
  while (!tail.empty() && tail.back() == 0.0) {
    tail.pop_back();
    ++zeros;
  }
  RootResult found = DurandKerner(tail);
  found.roots.insert(found.roots.end(), zeros, Complex(0.0, 0.0));
  if (!(found.max_residual <= kPoleResidualTolerance))
    throw RootFindingError("pole search left residual " + std::to_string(found.max_residual) +
                               " after " + std::to_string(found.iterations) + " iterations",
                           std::move(found));
  return std::move(found.roots);
}

/// Largest pole magnitude; uses the best iterate when the residual check fails.
inline double MaxPoleMagnitude(const LpcFrame& lpc) {
  std::vector<Complex> poles;
  try {
    poles = LpcPoles(lpc);
  } catch (const RootFindingError& e) {
    poles = e.best().roots;
  }
  double m = 0.0;
  for (const Complex& z : poles) {
    const double r = std::abs(z);
    if (!std::isfinite(r)) return std::numeric_limits<double>::infinity();
    m = std::max(m, r);
  }
  return m;
}

}  // namespace lsfvc
