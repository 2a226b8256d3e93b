#pragma once

// Dual-pair certification: ker T_a R = (ker T_a Pi)^omega at sampled points,
// fiber samplers for R and R_, and the leaf correspondence C o Pi = c.

#include <array>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "resdp/casimir.hpp"

namespace resdp {

/// Orthonormal basis of the Euclidean complement of grad R, i.e. of
/// (n a1, m a2) (plus) or (n a1, -m a2) (minus).
inline std::array<TangentVector4, 3> kernel_TR_basis(const Resonance& res, const PhasePoint& a) {
  const Vec4 grad = gradient_R(res, a);
  if (grad.norm() == 0.0) throw Error(ErrorKind::ZeroPoint, "kernel of dR needs a != 0");
  const Eigen::HouseholderQR<Eigen::Matrix<double, 4, 1>> qr(grad);
  const Mat4 q = qr.householderQ();
  return {q.col(1), q.col(2), q.col(3)};
}

/// Unit generator of ker T_a Pi.
inline TangentVector4 kernel_TPi_basis(const Resonance& res, const PhasePoint& a) {
  return kernel_generator(res, a).normalized();
}

struct DualPairDefect {
  double kernel_residual = 0.0;
  double subspace_distance = 0.0;
};

inline constexpr double kDualPairFdStep = 1e-6;

/// Residuals are dimensionless: dR along each basis vector over |grad R|
/// (central differences and analytic), and |J k| over |J|_max.
inline DualPairDefect dual_pair_defect(const Resonance& res, const PhasePoint& a) {
  if (!in_domain(res, a)) throw Error(ErrorKind::OffDomain, "point outside the dual-pair domain");
  const auto tr = kernel_TR_basis(res, a);
  const TangentVector4 k = kernel_TPi_basis(res, a);

  const Vec4 grad = gradient_R(res, a);
  const double grad_norm = grad.norm();
  const double h = kDualPairFdStep * (1.0 + a.norm());
  DualPairDefect out;
  for (const auto& b : tr) {
    const double fd = (momentum_R(res, a + h * b) - momentum_R(res, a + (-h) * b)) / (2.0 * h);
    out.kernel_residual = std::max({out.kernel_residual, std::abs(fd) / grad_norm, std::abs(grad.dot(b)) / grad_norm});
  }
  const auto jac = jacobian_Pi(res, a);
  out.kernel_residual = std::max(out.kernel_residual, (jac * k).cwiseAbs().maxCoeff() / jac.cwiseAbs().maxCoeff());

  const std::array<TangentVector4, 1> kspan{k};
  const auto orth = symplectic_orthogonal(res.sign, kspan);
  out.subspace_distance = subspace_distance(tr, orth);
  return out;
}

namespace detail {

inline PhasePoint with_random_phases(std::mt19937_64& gen, double u, double w) {
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  return PhasePoint(std::polar(std::sqrt(u), phase(gen)), std::polar(std::sqrt(w), phase(gen)));
}

inline constexpr double kFiberMargin = 0.01;
inline constexpr double kMinusSMin = 0.1;
inline constexpr double kMinusSMax = 4.0;

}  // namespace detail

/// Samples of the fiber momentum_R = c with uniformly random phases.
///
/// plus: |a1|^2 = 2ct/n, |a2|^2 = 2c(1-t)/m with t uniform in (0.01, 0.99).
/// minus, c > 0: |a2|^2 = s, |a1|^2 = (2c + ms)/n with s uniform on (0.1, 4)
/// intersected with the part of the fiber inside D.
/// minus, c < 0: the ratio n|a1|^2 / (m|a2|^2) is drawn below its D bound.
/// Samples outside D are rejected.
inline std::vector<PhasePoint> fiber_sample(const Resonance& res, double c, std::size_t count,
                                            std::uint64_t seed = 42) {
  std::mt19937_64 gen(seed);
  std::vector<PhasePoint> out;
  out.reserve(count);
  const double n = res.n, m = res.m;
  if (res.sign == FormSign::plus) {
    if (!(c > 0.0)) throw Error(ErrorKind::EmptyFiber, "fiber of R is empty for c <= 0");
    std::uniform_real_distribution<double> t(detail::kFiberMargin, 1.0 - detail::kFiberMargin);
    while (out.size() < count) {
      const double tt = t(gen);
      out.push_back(detail::with_random_phases(gen, 2.0 * c * tt / n, 2.0 * c * (1.0 - tt) / m));
    }
    return out;
  }

  if (!(c != 0.0) || !std::isfinite(c)) throw Error(ErrorKind::EmptyFiber, "fiber of R_ inside D is empty for c = 0");
  std::size_t attempts = 0;
  auto push_if_in_domain = [&](const PhasePoint& a) {
    if (++attempts > 1000 * count + 1000) throw Error(ErrorKind::EmptyFiber, "fiber sampler rejected every draw");
    if (in_domain(res, a)) out.push_back(a);
  };
  if (c > 0.0) {
    // With U = n|a1|^2, W = m|a2|^2 the D condition is W/U < bound.
    const double bound = detail::admissible_ratio_bound(res.n, res.m);
    const double s_cap = bound < 1.0 ? 2.0 * c * bound / (m * (1.0 - bound)) : std::numeric_limits<double>::infinity();
    const double hi = std::min(detail::kMinusSMax, (1.0 - detail::kFiberMargin) * s_cap);
    const double lo = hi > 2.0 * detail::kMinusSMin ? detail::kMinusSMin : detail::kFiberMargin * hi;
    std::uniform_real_distribution<double> s(lo, hi);
    while (out.size() < count) {
      const double ss = s(gen);
      push_if_in_domain(detail::with_random_phases(gen, (2.0 * c + m * ss) / n, ss));
    }
  } else {
    // U/W = mu < bound', W = -2c / (1 - mu).
    const double bound = std::min(detail::admissible_ratio_bound(res.m, res.n), 1.0);
    std::uniform_real_distribution<double> mu(detail::kFiberMargin * bound, (1.0 - detail::kFiberMargin) * bound);
    while (out.size() < count) {
      const double mm = mu(gen);
      const double W = -2.0 * c / (1.0 - mm);
      push_if_in_domain(detail::with_random_phases(gen, mm * W / n, W / m));
    }
  }
  return out;
}

struct DualPairReport {
  Resonance resonance;
  double c = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 42;
  double tolerance = 1e-9;
  double max_kernel_residual = 0.0;
  double max_subspace_distance = 0.0;
  bool pass = false;
};

inline DualPairReport dual_pair_check(const Resonance& res, double c, std::size_t count, std::uint64_t seed = 42,
                                      double tolerance = 1e-9) {
  DualPairReport report{res, c, count, seed, tolerance};
  for (const auto& a : fiber_sample(res, c, count, seed)) {
    const auto d = dual_pair_defect(res, a);
    report.max_kernel_residual = std::max(report.max_kernel_residual, d.kernel_residual);
    report.max_subspace_distance = std::max(report.max_subspace_distance, d.subspace_distance);
  }
  report.pass = report.max_kernel_residual < tolerance && report.max_subspace_distance < tolerance;
  return report;
}

struct LeafCorrespondenceReport {
  Resonance resonance;
  double c = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 42;
  double tolerance = 0.0;
  double max_deviation = 0.0;
  bool pass = false;
};

/// |C(Pi(a)) - c| over fiber samples of R = c; tolerance 1e-9 (1 + c) by default.
inline LeafCorrespondenceReport leaf_correspondence_check(const Resonance& res, double c, std::size_t count,
                                                          std::uint64_t seed = 42, double rel_tolerance = 1e-9) {
  if (res.sign == FormSign::minus && !(c > 0.0))
    throw Error(ErrorKind::BadParams, "minus-side leaf correspondence is checked on D+ only (c > 0)");
  LeafCorrespondenceReport report{res, c, count, seed, rel_tolerance * (1.0 + c)};
  for (const auto& a : fiber_sample(res, c, count, seed))
    report.max_deviation = std::max(report.max_deviation, std::abs(solve_casimir(res, map_Pi(res, a)).value - c));
  report.pass = report.max_deviation < report.tolerance;
  return report;
}

}  // namespace resdp
