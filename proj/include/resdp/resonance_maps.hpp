#pragma once

// The maps R_+-, Pi_+- = (X, Y, Z_+-) of the n:+-m resonance and their
// derivatives. X - iY = a1^m conj(a2)^n in both signatures;
//   plus : R  = n/2 |a1|^2 + m/2 |a2|^2,  Z  = n/2 |a1|^2 - m/2 |a2|^2
//   minus: R_ = n/2 |a1|^2 - m/2 |a2|^2,  Z_ = n/2 |a1|^2 + m/2 |a2|^2

#include <cmath>
#include <stdexcept>

#include "resdp/phase_space.hpp"

namespace resdp {

struct Resonance {
  int n = 1;
  int m = 1;
  FormSign sign = FormSign::plus;

  Resonance() = default;
  Resonance(int n_, int m_, FormSign sign_) : n(n_), m(m_), sign(sign_) {
    if (n < 1 || m < 1) throw Error(ErrorKind::BadParams, "resonance orders must be positive");
  }

  double nm() const { return static_cast<double>(n) * m; }
};

using LeafPoint = Vec3;

/// Integer power by repeated multiplication; exact exponents avoid branch cuts.
template <class T>
T ipow(T base, int exponent) {
  T result(1);
  while (exponent > 0) {
    if (exponent & 1) result *= base;
    base *= base;
    exponent >>= 1;
  }
  return result;
}

inline double momentum_R(const Resonance& res, const PhasePoint& a) {
  return 0.5 * res.n * std::norm(a.a1()) + 0.5 * plane_sign(res.sign) * res.m * std::norm(a.a2());
}

/// Third component of Pi: Z (plus) or Z_ (minus).
inline double momentum_Z(const Resonance& res, const PhasePoint& a) {
  return 0.5 * res.n * std::norm(a.a1()) - 0.5 * plane_sign(res.sign) * res.m * std::norm(a.a2());
}

inline LeafPoint map_Pi(const Resonance& res, const PhasePoint& a) {
  const Complex w = ipow(a.a1(), res.m) * ipow(std::conj(a.a2()), res.n);
  return {w.real(), -w.imag(), momentum_Z(res, a)};
}

/// 1:1 momentum map for SU(2).
inline LeafPoint J_one_one(const PhasePoint& a) {
  const Complex w = a.a1() * std::conj(a.a2());
  return {w.real(), -w.imag(), 0.5 * std::norm(a.a1()) - 0.5 * std::norm(a.a2())};
}

/// 1:-1 momentum map for SU(1,1) with third component
/// -(|a1|^2 + |a2|^2)/2. The abstract pairing gives the opposite sign; see
/// momentum_pairing for the equivariant version.
inline LeafPoint J_one_minus_one(const PhasePoint& a) {
  const Complex w = a.a1() * std::conj(a.a2());
  return {w.real(), -w.imag(), -0.5 * (std::norm(a.a1()) + std::norm(a.a2()))};
}

/// Gradient of momentum_R in the (x1, y1, x2, y2) layout.
inline Vec4 gradient_R(const Resonance& res, const PhasePoint& a) {
  const double n = res.n;
  const double m = plane_sign(res.sign) * res.m;
  const Vec4& c = a.coords;
  return {n * c[0], n * c[1], m * c[2], m * c[3]};
}

/// Analytic 3x4 Jacobian of map_Pi; rows X, Y, Z_+-.
inline Eigen::Matrix<double, 3, 4> jacobian_Pi(const Resonance& res, const PhasePoint& a) {
  const Complex i(0.0, 1.0);
  const Complex a1 = a.a1();
  const Complex b2 = std::conj(a.a2());
  const int n = res.n;
  const int m = res.m;

  // d(a1^m conj(a2)^n) along x1, y1, x2, y2.
  const Complex d1 = static_cast<double>(m) * ipow(a1, m - 1) * ipow(b2, n);
  const Complex d2 = static_cast<double>(n) * ipow(a1, m) * ipow(b2, n - 1);
  const Complex dw[4] = {d1, i * d1, d2, -i * d2};

  Eigen::Matrix<double, 3, 4> jac;
  for (int k = 0; k < 4; ++k) {
    jac(0, k) = dw[k].real();
    jac(1, k) = -dw[k].imag();
  }
  const double s = plane_sign(res.sign);
  const Vec4& c = a.coords;
  jac(2, 0) = n * c[0];
  jac(2, 1) = n * c[1];
  jac(2, 2) = -s * m * c[2];
  jac(2, 3) = -s * m * c[3];
  return jac;
}

/// (n i a1, m i a2) as a real 4-vector: the infinitesimal circle action,
/// spanning ker T_a Pi off the coordinate axes.
inline TangentVector4 circle_generator(const Resonance& res, const PhasePoint& a) {
  const Vec4& c = a.coords;
  const double n = res.n;
  const double m = res.m;
  return {-n * c[1], n * c[0], -m * c[3], m * c[2]};
}

inline TangentVector4 kernel_generator(const Resonance& res, const PhasePoint& a) {
  if (a.a1() == Complex(0.0) || a.a2() == Complex(0.0))
    throw Error(ErrorKind::OnAxis, "kernel generator needs a1 != 0 and a2 != 0");
  return circle_generator(res, a);
}

/// plus: (C\{0})^2. minus: additionally (n|a1|^2)^m (m|a2|^2)^n < Z_^(n+m).
inline bool in_domain(const Resonance& res, const PhasePoint& a) {
  const double r1 = std::norm(a.a1());
  const double r2 = std::norm(a.a2());
  if (!(r1 > 0.0 && r2 > 0.0)) return false;
  if (res.sign == FormSign::plus) return true;
  const double lhs = ipow(res.n * r1, res.m) * ipow(res.m * r2, res.n);
  const double rhs = ipow(0.5 * res.n * r1 + 0.5 * res.m * r2, res.n + res.m);
  return lhs < rhs;
}

/// D+ = D intersected with {R_ > 0}; for plus this is the whole domain.
inline bool in_positive_domain(const Resonance& res, const PhasePoint& a) {
  return in_domain(res, a) && (res.sign == FormSign::plus || momentum_R(res, a) > 0.0);
}

/// |X^2 + Y^2 - ((R+Z)/n)^m ((R-Z)/m)^n| (plus), with (Z_ + R_, Z_ - R_) on
/// the minus side. Both factors are formed directly from |a1|^2 and |a2|^2.
inline double kummer_identity_defect(const Resonance& res, const PhasePoint& a) {
  const LeafPoint p = map_Pi(res, a);
  const double lhs = p[0] * p[0] + p[1] * p[1];
  const double R = momentum_R(res, a);
  const double Z = p[2];
  // plus: R + Z = n|a1|^2, R - Z = m|a2|^2. minus: Z_ + R_ and Z_ - R_ likewise.
  const double first = (res.sign == FormSign::plus ? R + Z : Z + R) / res.n;
  const double second = (res.sign == FormSign::plus ? R - Z : Z - R) / res.m;
  return std::abs(lhs - ipow(first, res.m) * ipow(second, res.n));
}

}  // namespace resdp
