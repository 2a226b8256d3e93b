#pragma once

// Poisson structures on R^3 given by a vector field v:
//   {F,G}_v = v . (grad F x grad G),  X_H = v x grad H.
// pi_v is Poisson iff v . curl v = 0.

#include <functional>
#include <string>
#include <utility>

#include "resdp/casimir.hpp"

namespace resdp {

/// Scalar function on R^3 with an optional analytic gradient.
struct ScalarField3 {
  std::function<double(const Vec3&)> value;
  std::function<Vec3(const Vec3&)> gradient;

  ScalarField3() = default;
  explicit ScalarField3(std::function<double(const Vec3&)> f, std::function<Vec3(const Vec3&)> df = {})
      : value(std::move(f)), gradient(std::move(df)) {}

  double operator()(const Vec3& p) const { return value(p); }
  bool has_gradient() const { return static_cast<bool>(gradient); }

  static constexpr double kFdStep = 1e-6;

  Vec3 fd_grad(const Vec3& p) const {
    const double h = kFdStep * (1.0 + p.norm());
    Vec3 g;
    for (int k = 0; k < 3; ++k) {
      const Vec3 e = h * Vec3::Unit(k);
      g[k] = (value(p + e) - value(p - e)) / (2.0 * h);
    }
    return g;
  }

  Vec3 grad(const Vec3& p) const { return has_gradient() ? gradient(p) : fd_grad(p); }
};

inline ScalarField3 coordinate_field(int k) {
  return ScalarField3([k](const Vec3& p) { return p[k]; }, [k](const Vec3&) -> Vec3 { return Vec3::Unit(k); });
}

inline ScalarField3 constant_field(double c) {
  return ScalarField3([c](const Vec3&) { return c; }, [](const Vec3&) -> Vec3 { return Vec3::Zero(); });
}

/// Casimir of a resonance as a scalar field with its analytic gradient.
inline ScalarField3 casimir_field(const Resonance& res) {
  return ScalarField3([res](const Vec3& p) { return solve_casimir(res, p).value; },
                      [res](const Vec3& p) { return solve_casimir(res, p).gradient; });
}

struct PoissonStructure3 {
  std::function<Vec3(const Vec3&)> field;
  std::function<bool(const Vec3&)> domain = [](const Vec3&) { return true; };
  std::string label;

  bool contains(const Vec3& p) const { return domain(p); }
};

namespace detail {

inline void require_domain(const PoissonStructure3& s, const Vec3& p) {
  if (!s.contains(p)) throw Error(ErrorKind::OffDomain, "point outside the domain of " + s.label);
}

// Every point of a central-difference stencil of half-width h around p.
inline void require_stencil(const PoissonStructure3& s, const Vec3& p, double h) {
  require_domain(s, p);
  for (int k = 0; k < 3; ++k) {
    const Vec3 e = h * Vec3::Unit(k);
    if (!s.contains(p + e) || !s.contains(p - e))
      throw Error(ErrorKind::OffDomain, "finite-difference stencil leaves the domain of " + s.label);
  }
}

}  // namespace detail

inline double bracket(const PoissonStructure3& s, const ScalarField3& f, const ScalarField3& g, const Vec3& p) {
  detail::require_domain(s, p);
  return s.field(p).dot(f.grad(p).cross(g.grad(p)));
}

/// X_H = v x grad H, so that X_H[F] = {H,F}_v.
inline Vec3 hamiltonian_vf(const PoissonStructure3& s, const ScalarField3& h, const Vec3& p) {
  detail::require_domain(s, p);
  return s.field(p).cross(h.grad(p));
}

/// Jac(C,F,G) = grad C . (grad F x grad G).
inline double nambu_bracket(const ScalarField3& c, const ScalarField3& f, const ScalarField3& g, const Vec3& p) {
  return c.grad(p).dot(f.grad(p).cross(g.grad(p)));
}

inline constexpr double kCurlStep = 1e-5;

/// |v . curl v| with curl v from fourth-order central differences.
inline double integrability_defect(const PoissonStructure3& s, const Vec3& p) {
  const double h = kCurlStep * (1.0 + p.norm());
  detail::require_stencil(s, p, 2.0 * h);
  Eigen::Matrix3d dv;  // dv(i, j) = d v_i / d x_j
  for (int j = 0; j < 3; ++j) {
    const Vec3 e = h * Vec3::Unit(j);
    dv.col(j) = (8.0 * (s.field(p + e) - s.field(p - e)) - (s.field(p + 2.0 * e) - s.field(p - 2.0 * e))) / (12.0 * h);
  }
  const Vec3 curl(dv(2, 1) - dv(1, 2), dv(0, 2) - dv(2, 0), dv(1, 0) - dv(0, 1));
  return std::abs(s.field(p).dot(curl));
}

inline constexpr double kJacobiOuterStep = 1e-4;

/// |{{F,G},H} + {{G,H},F} + {{H,F},G}| with the outer brackets differentiated
/// by central differences.
inline double jacobi_defect(const PoissonStructure3& s, const ScalarField3& f, const ScalarField3& g,
                            const ScalarField3& h, const Vec3& p) {
  const double step = kJacobiOuterStep * (1.0 + p.norm());
  detail::require_stencil(s, p, step);
  auto inner = [&](const ScalarField3& a, const ScalarField3& b) {
    return ScalarField3([&s, &a, &b](const Vec3& q) { return s.field(q).dot(a.grad(q).cross(b.grad(q))); });
  };
  auto outer = [&](const ScalarField3& a, const ScalarField3& b, const ScalarField3& c) {
    const ScalarField3 ab = inner(a, b);
    Vec3 grad;
    for (int k = 0; k < 3; ++k) {
      const Vec3 e = step * Vec3::Unit(k);
      grad[k] = (ab(p + e) - ab(p - e)) / (2.0 * step);
    }
    return s.field(p).dot(grad.cross(c.grad(p)));
  };
  return std::abs(outer(f, g, h) + outer(g, h, f) + outer(h, f, g));
}

/// M with {F,G} = grad F^T M grad G: M12 = v3, M23 = v1, M31 = v2.
inline Eigen::Matrix3d bivector_matrix(const PoissonStructure3& s, const Vec3& p) {
  detail::require_domain(s, p);
  const Vec3 v = s.field(p);
  Eigen::Matrix3d m;
  m << 0.0, v[2], -v[1],
      -v[2], 0.0, v[0],
      v[1], -v[0], 0.0;
  return m;
}

inline int bivector_rank(const Eigen::Matrix3d& m) {
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd{Eigen::MatrixXd(m)};
  return static_cast<int>(detail::numerical_rank(svd));
}

/// pi_(mn v) on R^3 minus the z axis (plus) or pi_(mn w) on B (minus).
inline PoissonStructure3 resonance_structure(const Resonance& res) {
  PoissonStructure3 s;
  const double nm = res.nm();
  s.field = [res, nm](const Vec3& p) -> Vec3 { return nm * leaf_field(res, p); };
  s.domain = [res](const Vec3& p) { return in_casimir_domain(res, p); };
  s.label = std::to_string(res.n) + ":" + (res.sign == FormSign::minus ? "-" : "") + std::to_string(res.m);
  return s;
}

}  // namespace resdp
