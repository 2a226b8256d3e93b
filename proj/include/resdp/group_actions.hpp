#pragma once

// SU(2) and SU(1,1) acting on C^2 by matrix multiplication, the identification
// of R^3 with su(2) / su(1,1), and the fiber-transitivity constructions.

#include <cmath>

#include "resdp/phase_space.hpp"

namespace resdp {

enum class GroupTag { SU2, SU11 };

inline FormSign form_of(GroupTag tag) { return tag == GroupTag::SU2 ? FormSign::plus : FormSign::minus; }

using LieAlgebraVector = Vec3;

/// A validated element of SU(2) or SU(1,1).
class GroupElement {
 public:
  /// Invariants are checked with tolerance 1e-12 scaled by the entry size.
  static GroupElement make(const Mat2c& entries, GroupTag tag) {
    const double d = defect(entries, tag);
    const double scale = std::max(1.0, entries.cwiseAbs2().maxCoeff());
    if (!(d <= 1e-12 * scale)) throw Error(ErrorKind::NotInGroup, "matrix violates the group constraints");
    return GroupElement(entries, tag);
  }

  static GroupElement identity(GroupTag tag) { return GroupElement(Mat2c::Identity(), tag); }

  /// Largest violation of det = 1 and preservation of the tag's Hermitian form.
  static double defect(const Mat2c& m, GroupTag tag) {
    Mat2c g = Mat2c::Identity();
    g(1, 1) = plane_sign(form_of(tag));
    const double det_err = std::abs(m.determinant() - Complex(1.0, 0.0));
    const double form_err = (m.adjoint() * g * m - g).cwiseAbs().maxCoeff();
    return std::max(det_err, form_err);
  }

  const Mat2c& matrix() const { return m_; }
  GroupTag tag() const { return tag_; }

  /// Closed-form 2x2 inverse; det = 1 so the adjugate suffices.
  GroupElement inverse() const {
    Mat2c inv;
    inv << m_(1, 1), -m_(0, 1), -m_(1, 0), m_(0, 0);
    return GroupElement(inv / m_.determinant(), tag_);
  }

  friend GroupElement operator*(const GroupElement& a, const GroupElement& b) {
    if (a.tag_ != b.tag_) throw Error(ErrorKind::BadParams, "group tags differ");
    return GroupElement(a.m_ * b.m_, a.tag_);
  }

 private:
  GroupElement(const Mat2c& m, GroupTag tag) : m_(m), tag_(tag) {}

  Mat2c m_;
  GroupTag tag_;
};

/// v -> xi_v. plus: [[i v3, i v1 + v2], [i v1 - v2, -i v3]];
/// minus: [[i v3, i v1 + v2], [-i v1 + v2, -i v3]].
inline Mat2c xi_matrix(FormSign sign, const LieAlgebraVector& v) {
  const Complex i(0.0, 1.0);
  Mat2c xi;
  if (sign == FormSign::plus)
    xi << i * v[2], i * v[0] + v[1], i * v[0] - v[1], -i * v[2];
  else
    xi << i * v[2], i * v[0] + v[1], -i * v[0] + v[1], -i * v[2];
  return xi;
}

/// Inverse of xi_matrix. Throws NotInImage when m is not of the xi pattern.
inline LieAlgebraVector xi_inverse(FormSign sign, const Mat2c& m) {
  LieAlgebraVector v;
  v[2] = m(0, 0).imag();
  if (sign == FormSign::plus) {
    v[0] = 0.5 * (m(0, 1) + m(1, 0)).imag();
    v[1] = 0.5 * (m(0, 1) - m(1, 0)).real();
  } else {
    v[0] = 0.5 * (m(0, 1) - m(1, 0)).imag();
    v[1] = 0.5 * (m(0, 1) + m(1, 0)).real();
  }
  const double residual = (xi_matrix(sign, v) - m).cwiseAbs().maxCoeff();
  if (residual > 1e-10 * std::max(1.0, m.cwiseAbs().maxCoeff()))
    throw Error(ErrorKind::NotInImage, "matrix is not in the image of v -> xi_v");
  return v;
}

/// h_a = [[a1, -conj a2], [a2, conj a1]] (SU2) or k_a = [[a1, conj a2], [a2, conj a1]] (SU11).
inline Mat2c embed(const PhasePoint& a, GroupTag tag) {
  const Complex a1 = a.a1();
  const Complex a2 = a.a2();
  Mat2c h;
  if (tag == GroupTag::SU2)
    h << a1, -std::conj(a2), a2, std::conj(a1);
  else
    h << a1, std::conj(a2), a2, std::conj(a1);
  return h;
}

inline PhasePoint act(const Mat2c& g, const PhasePoint& a) {
  const Eigen::Vector2cd b = g * Eigen::Vector2cd(a.a1(), a.a2());
  return PhasePoint(b[0], b[1]);
}

inline PhasePoint act(const GroupElement& g, const PhasePoint& a) { return act(g.matrix(), a); }

/// The element g = h_b h_a^{-1} (SU2) or k_b k_a^{-1} (SU11) with g a = b.
inline GroupElement transitive_element(const PhasePoint& a, const PhasePoint& b, GroupTag tag) {
  constexpr double kTol = 1e-12;
  const FormSign sign = form_of(tag);
  const double na = hermitian(sign, a, a).real();
  const double nb = hermitian(sign, b, b).real();
  const double scale = std::max({1.0, a.coords.squaredNorm(), b.coords.squaredNorm()});
  if (tag == GroupTag::SU2 && na <= 0.0) throw Error(ErrorKind::ZeroPoint, "a = 0 has no SU(2) orbit");
  if (tag == GroupTag::SU11 && std::abs(na) <= kTol * scale)
    throw Error(ErrorKind::SingularEmbed, "k_a is singular on the fiber |a1| = |a2|");
  if (std::abs(na - nb) > kTol * scale) throw Error(ErrorKind::FiberMismatch, "a and b lie on different fibers");

  const Mat2c ea = embed(a, tag);
  Mat2c ea_inv;
  ea_inv << ea(1, 1), -ea(0, 1), -ea(1, 0), ea(0, 0);
  ea_inv /= ea.determinant();
  return GroupElement::make(embed(b, tag) * ea_inv, tag);
}

/// w with xi_w = g xi_v g^{-1}.
inline LieAlgebraVector adjoint(FormSign sign, const GroupElement& g, const LieAlgebraVector& v) {
  if (form_of(g.tag()) != sign) throw Error(ErrorKind::BadParams, "group tag does not match form sign");
  return xi_inverse(sign, g.matrix() * xi_matrix(sign, v) * g.inverse().matrix());
}

/// |<J(g a), xi_v> - <J(a), Ad_{g^{-1}} xi_v>| through the abstract pairing.
inline double equivariance_defect(FormSign sign, const GroupElement& g, const PhasePoint& a, const LieAlgebraVector& v) {
  const double lhs = momentum_pairing(sign, act(g, a), xi_matrix(sign, v)).value;
  const LieAlgebraVector w = adjoint(sign, g.inverse(), v);
  const double rhs = momentum_pairing(sign, a, xi_matrix(sign, w)).value;
  return std::abs(lhs - rhs);
}

}  // namespace resdp
