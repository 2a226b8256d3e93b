#pragma once

// Linear algebra of C^2 viewed as R^4 with the fixed coordinate order
// (x1, y1, x2, y2), a_k = x_k + i y_k. Two signatures are supported:
//
//   plus : <a,b>  = a1 conj(b1) + a2 conj(b2),  omega  = -dx1^dy1 - dx2^dy2
//   minus: <a,b>_ = a1 conj(b1) - a2 conj(b2),  omega_ = -dx1^dy1 + dx2^dy2
//
// In both cases omega(u, v) = g(u, J v) where g is the Euclidean metric and
// J multiplies the first factor by i and the second by +i (plus) or -i (minus).

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "resdp/errors.hpp"

namespace resdp {

using Complex = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;
using Mat2c = Eigen::Matrix2cd;

/// Tangent vectors share the PhasePoint layout.
using TangentVector4 = Vec4;

enum class FormSign { plus, minus };

inline double plane_sign(FormSign sign) { return sign == FormSign::plus ? 1.0 : -1.0; }

inline std::string_view to_string(FormSign sign) { return sign == FormSign::plus ? "plus" : "minus"; }

/// A point of C^2 stored as (x1, y1, x2, y2).
struct PhasePoint {
  Vec4 coords = Vec4::Zero();

  PhasePoint() = default;
  explicit PhasePoint(const Vec4& c) : coords(c) {}
  PhasePoint(double x1, double y1, double x2, double y2) : coords(x1, y1, x2, y2) {}
  PhasePoint(Complex a1, Complex a2) : coords(a1.real(), a1.imag(), a2.real(), a2.imag()) {}

  Complex a1() const { return {coords[0], coords[1]}; }
  Complex a2() const { return {coords[2], coords[3]}; }

  double norm() const { return coords.norm(); }
  bool finite() const { return coords.allFinite(); }

  friend PhasePoint operator+(const PhasePoint& p, const Vec4& v) { return PhasePoint(Vec4(p.coords + v)); }
  friend PhasePoint operator*(double s, const PhasePoint& p) { return PhasePoint(Vec4(s * p.coords)); }
};

/// Complex multiplication on the real pair layout (re, im).
inline Eigen::Vector2d complex_mul(const Eigen::Vector2d& u, const Eigen::Vector2d& v) {
  return {u[0] * v[0] - u[1] * v[1], u[0] * v[1] + u[1] * v[0]};
}

/// Sesquilinear form, linear in the first argument.
inline Complex hermitian(FormSign sign, const PhasePoint& alpha, const PhasePoint& beta) {
  return alpha.a1() * std::conj(beta.a1()) + plane_sign(sign) * alpha.a2() * std::conj(beta.a2());
}

inline double metric(const TangentVector4& u, const TangentVector4& v) { return u.dot(v); }

/// Matrix of the symplectic form: omega(u, v) = u^T * form_matrix * v.
inline Mat4 form_matrix(FormSign sign) {
  Mat4 m = Mat4::Zero();
  m(0, 1) = -1.0;
  m(1, 0) = 1.0;
  const double s = plane_sign(sign);
  m(2, 3) = -s;
  m(3, 2) = s;
  return m;
}

/// The complex structure paired with omega: (i v1, +i v2) for plus, (i v1, -i v2) for minus.
inline TangentVector4 complex_structure(FormSign sign, const TangentVector4& v) {
  const double s = plane_sign(sign);
  return {-v[1], v[0], -s * v[3], s * v[2]};
}

inline double symplectic_form(FormSign sign, const TangentVector4& u, const TangentVector4& v) {
  const double s = plane_sign(sign);
  return -(u[0] * v[1] - u[1] * v[0]) - s * (u[2] * v[3] - u[3] * v[2]);
}

/// Orthogonal projector onto the span of an orthonormal basis.
inline Mat4 projector(std::span<const TangentVector4> orthonormal_basis) {
  Mat4 p = Mat4::Zero();
  for (const auto& b : orthonormal_basis) p += b * b.transpose();
  return p;
}

/// Max-norm distance between the orthogonal projectors of two subspaces.
inline double subspace_distance(std::span<const TangentVector4> a, std::span<const TangentVector4> b) {
  return (projector(a) - projector(b)).cwiseAbs().maxCoeff();
}

namespace detail {

inline Eigen::Matrix<double, 4, Eigen::Dynamic> as_columns(std::span<const TangentVector4> vs) {
  Eigen::Matrix<double, 4, Eigen::Dynamic> m(4, static_cast<Eigen::Index>(vs.size()));
  for (std::size_t i = 0; i < vs.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = vs[i];
  return m;
}

// Singular values below this fraction of the largest are treated as zero.
inline constexpr double kRankThreshold = 1e-10;

inline Eigen::Index numerical_rank(const Eigen::JacobiSVD<Eigen::MatrixXd>& svd) {
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return 0;
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > kRankThreshold * s[0]) ++r;
  return r;
}

}  // namespace detail

/// Orthonormal basis of span(basis)^omega = {u : omega(u, b) = 0 for all b}.
/// Throws DegenerateBasis when the input vectors are not linearly independent.
inline std::vector<TangentVector4> symplectic_orthogonal(FormSign sign, std::span<const TangentVector4> basis) {
  const auto k = static_cast<Eigen::Index>(basis.size());
  if (k == 0) return {Vec4::UnitX(), Vec4::UnitY(), Vec4::UnitZ(), Vec4::UnitW()};

  const Eigen::MatrixXd cols = detail::as_columns(basis);
  Eigen::JacobiSVD<Eigen::MatrixXd> basis_svd(cols);
  if (k > 4 || detail::numerical_rank(basis_svd) < k)
    throw Error(ErrorKind::DegenerateBasis, "basis vectors are linearly dependent");

  // Rows of the constraint matrix are (Omega b)^T; its null space is V^omega.
  const Eigen::MatrixXd constraints = (form_matrix(sign) * cols).transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(constraints, Eigen::ComputeFullV);
  std::vector<TangentVector4> out;
  for (Eigen::Index i = k; i < 4; ++i) out.emplace_back(svd.matrixV().col(i));
  return out;
}

struct PairingValue {
  double value = 0.0;
  double imaginary_residual = 0.0;
};

/// Skew-Hermitian defect of xi for the selected form: max |G xi + xi^H G|.
inline double skew_hermitian_defect(FormSign sign, const Mat2c& xi) {
  Mat2c g = Mat2c::Identity();
  g(1, 1) = plane_sign(sign);
  return (g * xi + xi.adjoint() * g).cwiseAbs().maxCoeff();
}

/// <J(a), xi> = (i/2) <a, xi a>_sign for xi in u(2) (plus) or u(1,1) (minus).
inline PairingValue momentum_pairing(FormSign sign, const PhasePoint& a, const Mat2c& xi) {
  constexpr double kTol = 1e-12;
  const double scale = std::max(1.0, xi.cwiseAbs().maxCoeff());
  if (skew_hermitian_defect(sign, xi) > kTol * scale)
    throw Error(ErrorKind::NotSkewHermitian, "xi is not skew-Hermitian for the selected form");

  const Eigen::Vector2cd av(a.a1(), a.a2());
  const Eigen::Vector2cd xa = xi * av;
  const PhasePoint image(xa[0], xa[1]);
  const Complex z = Complex(0.0, 0.5) * hermitian(sign, a, image);
  return {z.real(), std::abs(z.imag())};
}

}  // namespace resdp
