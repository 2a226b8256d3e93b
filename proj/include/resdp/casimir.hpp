#pragma once

// Implicit Kummer Casimirs.
//
// plus : C(x,y,z) is the unique r in (|z|, inf) with
//        Phi = x^2 + y^2 - ((r+z)/n)^m ((r-z)/m)^n = 0, defined off the z axis.
// minus: C_(x,y,z) is the unique r in (0, |z|) with
//        Psi = x^2 + y^2 - ((z+r)/n)^m ((z-r)/m)^n = 0, defined on
//        B = {n^m m^n (x^2+y^2) < z^(n+m), x^2+y^2 > 0}.
//
// The solver works in a gap variable measured from |z| so that the small
// factor (r -+ z near a pole) is carried exactly rather than recovered by
// subtraction. Gradients and the leaf fields reuse those exact factors.

#include <cmath>
#include <functional>
#include <limits>

#include "resdp/resonance_maps.hpp"

namespace resdp {

struct CasimirEval {
  double value = 0.0;
  Vec3 gradient = Vec3::Zero();
  int iterations = 0;
  /// Phi (plus) or Psi (minus) at (p, value), evaluated in factored form.
  double residual = 0.0;
  /// plus: r + z and r - z. minus: z + r and z - r. Both exact at the root.
  double sum_factor = 0.0;
  double diff_factor = 0.0;
};

inline double phi(double x, double y, double z, double r, int n, int m) {
  return x * x + y * y - ipow((r + z) / n, m) * ipow((r - z) / m, n);
}

inline double psi(double x, double y, double z, double r, int n, int m) {
  return x * x + y * y - ipow((z + r) / n, m) * ipow((z - r) / m, n);
}

/// Open domain of the Casimir: off the axis, and inside B for minus.
inline bool in_casimir_domain(const Resonance& res, const LeafPoint& p) {
  const double rho2 = p[0] * p[0] + p[1] * p[1];
  if (!(rho2 > 0.0) || !p.allFinite()) return false;
  if (res.sign == FormSign::plus) return true;
  const double lhs = ipow(static_cast<double>(res.n), res.m) * ipow(static_cast<double>(res.m), res.n) * rho2;
  return lhs < ipow(p[2], res.n + res.m);
}

namespace detail {

inline constexpr int kMaxCasimirIterations = 200;

struct RootResult {
  double x = 0.0;
  int iterations = 0;
};

/// Safeguarded Newton on [lo, hi] with f(lo) < 0 < f(hi). Newton steps that
/// leave the bracket or stall are replaced by bisection.
inline RootResult safeguarded_newton(const std::function<void(double, double&, double&)>& fdf, double lo, double hi,
                                     double guess) {
  double x = (guess > lo && guess < hi) ? guess : 0.5 * (lo + hi);
  double prev_step = hi - lo;
  double step = prev_step;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (int it = 1; it <= kMaxCasimirIterations; ++it) {
    double f = 0.0, df = 0.0;
    fdf(x, f, df);
    if (f == 0.0) return {x, it};
    if (f < 0.0)
      lo = x;
    else
      hi = x;

    const double newton = (df != 0.0) ? x - f / df : std::numeric_limits<double>::quiet_NaN();
    double next;
    if (!(newton > lo && newton < hi) || std::abs(2.0 * f) > std::abs(prev_step * df)) {
      next = 0.5 * (lo + hi);
      prev_step = step;
      step = hi - lo;
    } else {
      next = newton;
      prev_step = step;
      step = std::abs(next - x);
    }
    const double tol = 2.0 * eps * std::abs(next) + std::numeric_limits<double>::min();
    if (std::abs(next - x) <= tol || hi - lo <= 2.0 * eps * std::abs(hi)) return {next, it};
    x = next;
  }
  throw Error(ErrorKind::NoConvergence, "Casimir root-finding exceeded iteration limit");
}

// Largest ratio lambda in (0, 1) with lambda^p < ((1 + lambda)/2)^(p+q): the
// whole interval when p >= q, otherwise up to the root below p/q.
inline double admissible_ratio_bound(int p, int q) {
  if (p >= q) return 1.0;
  auto phi_fn = [&](double l) { return p * std::log(l) - (p + q) * std::log(0.5 * (1.0 + l)); };
  double lo = 1e-300, hi = static_cast<double>(p) / q;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (phi_fn(mid) < 0.0 ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace detail

/// Root of the implicit Casimir equation with value and gradient.
inline CasimirEval solve_casimir(const Resonance& res, const LeafPoint& p) {
  if (!in_casimir_domain(res, p)) throw Error(ErrorKind::OffDomain, "point outside the Casimir domain");

  const int n = res.n;
  const int m = res.m;
  const double dn = n, dm = m;
  const double rho2 = p[0] * p[0] + p[1] * p[1];
  const double z = p[2];
  const double a = std::abs(z);

  CasimirEval out;
  if (res.sign == FormSign::plus) {
    // Gap t = r - |z| > 0. For z >= 0: r + z = 2a + t, r - z = t; mirrored for z < 0.
    auto factors = [&](double t, double& sum, double& diff) {
      if (z >= 0.0) {
        sum = 2.0 * a + t;
        diff = t;
      } else {
        sum = t;
        diff = 2.0 * a + t;
      }
    };
    auto fdf = [&](double t, double& f, double& df) {
      double s, d;
      factors(t, s, d);
      const double A = s / dn, B = d / dm;
      f = ipow(A, m) * ipow(B, n) - rho2;
      df = (m > 0 ? dm / dn * ipow(A, m - 1) * ipow(B, n) : 0.0) + dn / dm * ipow(A, m) * ipow(B, n - 1);
    };
    // Both asymptotic roots bound the true root from above (the product is
    // increasing and dominates each approximation), so min(...) brackets it.
    const double near_axis = (a > 0.0) ? (z >= 0.0 ? dm * std::pow(rho2 * ipow(dn / (2.0 * a), m), 1.0 / n)
                                                   : dn * std::pow(rho2 * ipow(dm / (2.0 * a), n), 1.0 / m))
                                       : std::numeric_limits<double>::infinity();
    const double far = std::pow(rho2 * ipow(dn, m) * ipow(dm, n), 1.0 / (n + m));
    double hi = std::min(near_axis, far) * (1.0 + 1e-12) + std::numeric_limits<double>::min();
    double f_hi, df_hi;
    fdf(hi, f_hi, df_hi);
    int guard = 0;
    while (!(f_hi > 0.0)) {
      hi = 2.0 * hi + 1.0;
      fdf(hi, f_hi, df_hi);
      if (++guard > 2000) throw Error(ErrorKind::NoConvergence, "could not bracket the Casimir root");
    }
    const auto root = detail::safeguarded_newton(fdf, 0.0, hi, hi);
    double s, d;
    factors(root.x, s, d);
    out.value = a + root.x;
    out.iterations = root.iterations;
    out.sum_factor = s;
    out.diff_factor = d;
    out.residual = rho2 - ipow(s / dn, m) * ipow(d / dm, n);
    // grad C = v / f with v = (2x, 2y, -rho2 (m/s - n/d)), f = rho2 (m/s + n/d).
    const double denom = dm * d + dn * s;
    const double w = 2.0 * s * d / (rho2 * denom);
    out.gradient = Vec3(w * p[0], w * p[1], -(dm * d - dn * s) / denom);
  } else {
    // Gap g = |z| - r in (0, |z|). For z > 0: z + r = 2a - g, z - r = g.
    // For z < 0 (n + m even inside B): z + r = -g, z - r = -(2a - g).
    auto factors = [&](double g, double& sum, double& diff) {
      if (z > 0.0) {
        sum = 2.0 * a - g;
        diff = g;
      } else {
        sum = -g;
        diff = -(2.0 * a - g);
      }
    };
    // q(g) = ((z+r)/n)^m ((z-r)/m)^n - rho2 rises from -rho2 at g = 0 to a
    // positive value at g = |z| (that is p(|z|) < 0 < p(0) in terms of r).
    auto fdf = [&](double g, double& f, double& df) {
      double s, d;
      factors(g, s, d);
      const double A = s / dn, B = d / dm;
      f = ipow(A, m) * ipow(B, n) - rho2;
      // ds/dg and dd/dg are -1, +1 (z > 0) or -1, +1 (z < 0) alike.
      df = -dm / dn * ipow(A, m - 1) * ipow(B, n) + dn / dm * ipow(A, m) * ipow(B, n - 1);
    };
    const double guess = (z > 0.0) ? dm * std::pow(rho2 * ipow(dn / (2.0 * a), m), 1.0 / n)
                                   : dn * std::pow(rho2 * ipow(dm / (2.0 * a), n), 1.0 / m);
    const auto root = detail::safeguarded_newton(fdf, 0.0, a, guess);
    double s, d;
    factors(root.x, s, d);
    out.value = a - root.x;
    out.iterations = root.iterations;
    out.sum_factor = s;
    out.diff_factor = d;
    out.residual = rho2 - ipow(s / dn, m) * ipow(d / dm, n);
    // grad C_ = w / g with w = (2x, 2y, -rho2 (m/s + n/d)), g = rho2 (m/s - n/d).
    const double denom = dm * d - dn * s;
    const double w = 2.0 * s * d / (rho2 * denom);
    out.gradient = Vec3(w * p[0], w * p[1], -(dm * d + dn * s) / denom);
  }
  if (!(out.value > 0.0) || !out.gradient.allFinite())
    throw Error(ErrorKind::NoConvergence, "Casimir root degenerated");
  return out;
}

inline Vec3 grad_casimir(const Resonance& res, const LeafPoint& p) { return solve_casimir(res, p).gradient; }

namespace detail {

// Third component of v (plus) or w (minus) from the exact root factors.
inline double leaf_field_z(const Resonance& res, double rho2, const CasimirEval& c) {
  const double dn = res.n, dm = res.m;
  if (res.sign == FormSign::plus) return -rho2 * (dm / c.sum_factor - dn / c.diff_factor);
  // C_ - z = -(z - C_).
  return -rho2 * (dm / c.sum_factor + dn / c.diff_factor);
}

inline double scaling_factor(const Resonance& res, double rho2, const CasimirEval& c) {
  const double dn = res.n, dm = res.m;
  if (res.sign == FormSign::plus) return rho2 * (dm / c.sum_factor + dn / c.diff_factor);
  return rho2 * (dm / c.sum_factor - dn / c.diff_factor);
}

}  // namespace detail

/// v = grad_(x,y,z) Phi at r = C (plus) or w = grad Psi at r = C_ (minus).
inline Vec3 leaf_field(const Resonance& res, const LeafPoint& p) {
  const CasimirEval c = solve_casimir(res, p);
  const double rho2 = p[0] * p[0] + p[1] * p[1];
  return {2.0 * p[0], 2.0 * p[1], detail::leaf_field_z(res, rho2, c)};
}

/// f = -d_r Phi at r = C, positive; g = -d_r Psi at r = C_, negative. In both
/// cases leaf_field = scaling_factor * grad_casimir.
inline double scaling_factor(const Resonance& res, const LeafPoint& p) {
  const CasimirEval c = solve_casimir(res, p);
  return detail::scaling_factor(res, p[0] * p[0] + p[1] * p[1], c);
}

}  // namespace resdp
