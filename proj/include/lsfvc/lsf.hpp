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

// Line spectral frequencies.
//
// For an even order p and inverse filter A(z) = 1 - sum a_k z^-k, the sum and
// difference polynomials
//   P(z) = A(z) + z^-(p+1) A(1/z),   Q(z) = A(z) - z^-(p+1) A(1/z)
// have all their roots on the unit circle when A(z) is minimum phase. P has a
// trivial root at z = -1 and Q one at z = +1; the remaining p/2 conjugate
// pairs of each polynomial interleave, and their angles in (0, pi) are the
// LSFs. P contributes omegas[0], omegas[2], ..., Q contributes omegas[1], ...

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "lsfvc/error.hpp"
#include "lsfvc/lpc.hpp"

namespace lsfvc {

inline constexpr double kLsfMinGap = 1e-4;
inline constexpr int kLsfGridPoints = 4096;
inline constexpr double kLsfBisectionTolerance = 1e-10;

struct LsfVector {
  std::vector<double> omegas;  // strictly ascending, in (0, pi)

  std::size_t order() const { return omegas.size(); }
};

inline bool ValidateLsf(std::span<const double> omegas) {
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    if (!(omegas[i] > 0.0 && omegas[i] < std::numbers::pi)) return false;
    if (i > 0 && !(omegas[i] > omegas[i - 1])) return false;
  }
  return true;
}

namespace detail {

/// Symmetric degree-2m polynomial g on the unit circle, with the linear phase
/// e^{-j m w} removed: g_m + 2 sum_{k=1..m} g_{m-k} cos(k w). Evaluated as a
/// Chebyshev series in x = cos(w) by Clenshaw's recurrence.
class CosineSeries {
 public:
  explicit CosineSeries(std::span<const double> symmetric) {
    const std::size_t m = (symmetric.size() - 1) / 2;
    c_.resize(m + 1);
    c_[0] = symmetric[m];
    for (std::size_t k = 1; k <= m; ++k) c_[k] = 2.0 * symmetric[m - k];
  }

  double operator()(double omega) const {
    const double x = std::cos(omega);
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t k = c_.size() - 1; k >= 1; --k) {
      const double b0 = 2.0 * x * b1 - b2 + c_[k];
      b2 = b1;
      b1 = b0;
    }
    return c_[0] + x * b1 - b2;
  }

 private:
  std::vector<double> c_;
};

/// Sign-change brackets on a uniform grid over [0, pi], refined by bisection.
inline std::vector<double> GridRoots(const CosineSeries& f) {
  std::vector<double> roots;
  const double step = std::numbers::pi / kLsfGridPoints;
  double lo = 0.0;
  double f_lo = f(lo);
  for (int i = 1; i <= kLsfGridPoints; ++i) {
    const double hi = i == kLsfGridPoints ? std::numbers::pi : i * step;
    const double f_hi = f(hi);
    if (f_lo == 0.0 && lo > 0.0) {
      roots.push_back(lo);
    } else if ((f_lo < 0.0 && f_hi > 0.0) || (f_lo > 0.0 && f_hi < 0.0)) {
      double a = lo, b = hi, fa = f_lo;
      while (b - a > kLsfBisectionTolerance) {
        const double mid = 0.5 * (a + b);
        const double fm = f(mid);
        if ((fm < 0.0) == (fa < 0.0) && fm != 0.0) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    lo = hi;
    f_lo = f_hi;
  }
  return roots;
}

/// Multiplies polynomial (in z^-1) by (1 - 2 cos(w) z^-1 + z^-2).
inline std::vector<double> MulUnitCircleQuadratic(std::span<const double> poly, double omega) {
  const double c = -2.0 * std::cos(omega);
  std::vector<double> out(poly.size() + 2, 0.0);
  for (std::size_t i = 0; i < poly.size(); ++i) {
    out[i] += poly[i];
    out[i + 1] += c * poly[i];
    out[i + 2] += poly[i];
  }
  return out;
}

inline void CheckEvenOrder(std::size_t p) {
  if (p == 0 || p % 2 != 0)
    throw Error(ErrorCode::kOddOrder,
                "line spectral frequencies need an even order >= 2, got " + std::to_string(p));
}

}  // namespace detail

inline LsfVector LpcToLsf(const LpcFrame& lpc) {
  const std::size_t p = lpc.order();
  detail::CheckEvenOrder(p);

  // Inverse filter coefficients in powers of z^-1, with one extra zero slot.
  std::vector<double> a(p + 2, 0.0);
  a[0] = 1.0;
  for (std::size_t k = 0; k < p; ++k) a[k + 1] = -lpc.coefficients[k];

  // Deflate the trivial roots: P / (1 + z^-1) and Q / (1 - z^-1).
  std::vector<double> p_sym(p + 1), q_sym(p + 1);
  double carry_p = 0.0, carry_q = 0.0;
  for (std::size_t k = 0; k <= p; ++k) {
    const double sum = a[k] + a[p + 1 - k];
    const double diff = a[k] - a[p + 1 - k];
    carry_p = sum - carry_p;
    carry_q = diff + carry_q;
    p_sym[k] = carry_p;
    q_sym[k] = carry_q;
  }

  const std::vector<double> p_roots = detail::GridRoots(detail::CosineSeries(p_sym));
  const std::vector<double> q_roots = detail::GridRoots(detail::CosineSeries(q_sym));
  if (p_roots.size() != p / 2 || q_roots.size() != p / 2)
    throw Error(ErrorCode::kUnstableFilter,
                "found " + std::to_string(p_roots.size() + q_roots.size()) +
                    " unit-circle roots, expected " + std::to_string(p));

  LsfVector out;
  out.omegas.reserve(p);
  for (std::size_t i = 0; i < p / 2; ++i) {
    out.omegas.push_back(p_roots[i]);
    out.omegas.push_back(q_roots[i]);
  }
  if (!ValidateLsf(out.omegas))
    throw Error(ErrorCode::kUnstableFilter, "sum and difference roots do not interleave");
  return out;
}

inline LpcFrame LsfToLpc(const LsfVector& lsf, double gain) {
  const std::size_t p = lsf.order();
  detail::CheckEvenOrder(p);
  if (!ValidateLsf(lsf.omegas))
    throw Error(ErrorCode::kInvalidLsf, "frequencies must ascend strictly inside (0, pi)");

  std::vector<double> p_poly{1.0, 1.0};   // 1 + z^-1
  std::vector<double> q_poly{1.0, -1.0};  // 1 - z^-1
  for (std::size_t i = 0; i < p; i += 2) {
    p_poly = detail::MulUnitCircleQuadratic(p_poly, lsf.omegas[i]);
    q_poly = detail::MulUnitCircleQuadratic(q_poly, lsf.omegas[i + 1]);
  }

  LpcFrame out;
  out.gain = gain;
  out.coefficients.resize(p);
  for (std::size_t k = 1; k <= p; ++k) out.coefficients[k - 1] = -0.5 * (p_poly[k] + q_poly[k]);
  return out;
}

/// Forces an arbitrary real vector into a valid LSF vector with adjacent
/// separation >= kLsfMinGap. Valid inputs with that separation pass through.
inline LsfVector RectifyLsf(std::span<const double> raw) {
  const double lo = kLsfMinGap;
  const double hi = std::numbers::pi - kLsfMinGap;
  std::vector<double> w(raw.begin(), raw.end());
  for (double& x : w) x = std::isnan(x) ? 0.5 * std::numbers::pi : std::clamp(x, lo, hi);
  std::sort(w.begin(), w.end());
  for (std::size_t i = 1; i < w.size(); ++i) w[i] = std::max(w[i], w[i - 1] + kLsfMinGap);
  if (!w.empty() && w.back() > hi) {
    w.back() = hi;
    for (std::size_t i = w.size() - 1; i-- > 0;) {
      double limit = w[i + 1] - kLsfMinGap;
      // Keep limit + gap <= w[i+1] under rounding so a second pass is a no-op.
      while (limit + kLsfMinGap > w[i + 1]) limit = std::nextafter(limit, 0.0);
      w[i] = std::min(w[i], limit);
    }
  }
  return {std::move(w)};
}

}  // namespace lsfvc
