#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include "warpdn/errors.hpp"

namespace warpdn {

// 7-point Gauss-Legendre rule on [-1, 1].
inline constexpr std::array<double, 7> kGauss7Nodes = {
    -0.9491079123427585, -0.7415311855993945, -0.4058451513773972,
    0.0,
    0.4058451513773972, 0.7415311855993945, 0.9491079123427585};
inline constexpr std::array<double, 7> kGauss7Weights = {
    0.1294849661688697, 0.2797053914892766, 0.3818300505051189,
    0.4179591836734694,
    0.3818300505051189, 0.2797053914892766, 0.1294849661688697};

template <typename F>
double gauss7(F&& f, double a, double b) {
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0;
  for (int i = 0; i < 7; ++i) s += kGauss7Weights[i] * f(mid + half * kGauss7Nodes[i]);
  return s * half;
}

/// cosh(sqrt(w2)) and sinh(sqrt(w2))/sqrt(w2), stable through w2 <= 0.
inline void cosh_sinch(double w2, double& ch, double& shc) {
  if (std::abs(w2) < 1e-8) {
    ch = 1.0 + w2 * (0.5 + w2 / 24.0);
    shc = 1.0 + w2 * (1.0 / 6.0 + w2 / 120.0);
  } else if (w2 > 0) {
    double s = std::sqrt(w2);
    ch = std::cosh(s);
    shc = std::sinh(s) / s;
  } else {
    double s = std::sqrt(-w2);
    ch = std::cos(s);
    shc = std::sin(s) / s;
  }
}

inline void cosh_sinch(std::complex<double> w2, std::complex<double>& ch,
                       std::complex<double>& shc) {
  if (std::abs(w2) < 1e-8) {
    ch = 1.0 + w2 * (0.5 + w2 / 24.0);
    shc = 1.0 + w2 * (1.0 / 6.0 + w2 / 120.0);
  } else {
    std::complex<double> s = std::sqrt(w2);
    ch = std::cosh(s);
    shc = std::sinh(s) / s;
  }
}

/// Brent root finder on [a, b]; f(a), f(b) must have opposite signs.
template <typename F>
double brent(F&& f, double a, double b, double xtol, int maxIter = 200) {
  double fa = f(a), fb = f(b);
  if (fa == 0) return a;
  if (fb == 0) return b;
  if ((fa > 0) == (fb > 0))
    fail(ErrorCode::BracketingFailed, "brent: endpoints do not bracket a root");
  double c = a, fc = fa, d = b - a, e = d;
  for (int it = 0; it < maxIter; ++it) {
    if ((fb > 0) == (fc > 0)) { c = a; fc = fa; d = e = b - a; }
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    double tol = 2.0 * 1e-16 * std::abs(b) + 0.5 * xtol;
    double m = 0.5 * (c - b);
    if (std::abs(m) <= tol || fb == 0) return b;
    if (std::abs(e) < tol || std::abs(fa) <= std::abs(fb)) {
      d = e = m;
    } else {
      double s = fb / fa, p, q2;
      if (a == c) {
        p = 2 * m * s;
        q2 = 1 - s;
      } else {
        double qq = fa / fc, rr = fb / fc;
        p = s * (2 * m * qq * (qq - rr) - (b - a) * (rr - 1));
        q2 = (qq - 1) * (rr - 1) * (s - 1);
      }
      if (p > 0) q2 = -q2; else p = -p;
      if (2 * p < std::min(3 * m * q2 - std::abs(tol * q2), std::abs(e * q2))) {
        e = d; d = p / q2;
      } else {
        d = e = m;
      }
    }
    a = b; fa = fb;
    b += (std::abs(d) > tol) ? d : (m > 0 ? tol : -tol);
    fb = f(b);
  }
  return b;
}

/// Least-squares straight line y ~ intercept + slope * x.
inline std::pair<double, double> fit_line(const std::vector<double>& x,
                                          const std::vector<double>& y) {
  size_t n = x.size();
  if (n < 2 || y.size() != n)
    fail(ErrorCode::InvalidArgument, "fit_line: need >= 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += x[i]; sy += y[i]; sxx += x[i] * x[i]; sxy += x[i] * y[i];
  }
  double det = n * sxx - sx * sx;
  if (det == 0) fail(ErrorCode::Numeric, "fit_line: degenerate abscissae");
  double slope = (n * sxy - sx * sy) / det;
  double intercept = (sy - slope * sx) / n;
  return {intercept, slope};
}

/// Adaptive Simpson quadrature with absolute/relative tolerance.
namespace detail {
template <typename F>
double adsimp(F& f, double a, double b, double fa, double fm, double fb,
              double whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6 * (fa + 4 * flm + fm);
  double right = (b - m) / 6 * (fm + 4 * frm + fb);
  double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15 * tol)
    return left + right + delta / 15;
  return adsimp(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
         adsimp(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}
}  // namespace detail

template <typename F>
double adaptive_simpson(F&& f, double a, double b, double tol, int maxDepth = 40) {
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  double whole = (b - a) / 6 * (fa + 4 * fm + fb);
  return detail::adsimp(f, a, b, fa, fm, fb, whole, tol, maxDepth);
}

}  // namespace warpdn
