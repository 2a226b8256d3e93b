#pragma once

// Named numerical checks producing VerificationReports. Every defect is made
// dimensionless by the scale noted at its check, so one tolerance applies
// across resonances and sample points.

#include <algorithm>
#include <array>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "resdp/dual_pair.hpp"
#include "resdp/dynamics.hpp"
#include "resdp/group_actions.hpp"
#include "resdp/report.hpp"

namespace resdp {

namespace sampling {

inline double uniform(std::mt19937_64& g, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(g); }

/// Uniform in [-scale, scale]^4 with |a1|, |a2| >= 0.05 scale.
inline PhasePoint off_axis_point(std::mt19937_64& g, double scale = 1.0) {
  for (;;) {
    const PhasePoint a(Vec4(uniform(g, -scale, scale), uniform(g, -scale, scale), uniform(g, -scale, scale),
                            uniform(g, -scale, scale)));
    if (std::abs(a.a1()) >= 0.05 * scale && std::abs(a.a2()) >= 0.05 * scale) return a;
  }
}

/// Point of the Casimir domain with rho in [0.2, 1.5], away from the boundary
/// of B on the minus side.
inline LeafPoint leaf_domain_point(std::mt19937_64& g, const Resonance& res) {
  const double rho = uniform(g, 0.2, 1.5);
  const double th = uniform(g, 0.0, 2.0 * std::numbers::pi);
  if (res.sign == FormSign::plus) return {rho * std::cos(th), rho * std::sin(th), uniform(g, -2.0, 2.0)};
  const double zmin =
      std::pow(ipow(double(res.n), res.m) * ipow(double(res.m), res.n) * rho * rho, 1.0 / (res.n + res.m));
  const double z = zmin * uniform(g, 1.05, 2.0);
  const bool lower = (res.n + res.m) % 2 == 0 && uniform(g, 0.0, 1.0) < 0.5;
  return {rho * std::cos(th), rho * std::sin(th), lower ? -z : z};
}

/// Haar-uniform SU(2) element from a unit quaternion.
inline GroupElement su2_element(std::mt19937_64& g) {
  std::normal_distribution<double> normal;
  Vec4 q(normal(g), normal(g), normal(g), normal(g));
  q.normalize();
  const Complex alpha(q[0], q[3]), beta(q[2], q[1]);
  Mat2c m;
  m << alpha, beta, -std::conj(beta), std::conj(alpha);
  return GroupElement::make(m, GroupTag::SU2);
}

/// SU(1,1) element [[alpha, beta], [conj beta, conj alpha]] with boost rapidity <= 1.5.
inline GroupElement su11_element(std::mt19937_64& g) {
  const double r = uniform(g, 0.0, 1.5);
  const Complex alpha = std::polar(std::cosh(r), uniform(g, 0.0, 2.0 * std::numbers::pi));
  const Complex beta = std::polar(std::sinh(r), uniform(g, 0.0, 2.0 * std::numbers::pi));
  Mat2c m;
  m << alpha, beta, std::conj(beta), std::conj(alpha);
  return GroupElement::make(m, GroupTag::SU11);
}

inline GroupElement group_element(std::mt19937_64& g, FormSign sign) {
  return sign == FormSign::plus ? su2_element(g) : su11_element(g);
}

}  // namespace sampling

struct VerifyOptions {
  std::size_t samples = 0;  ///< 0 selects the check's default
  std::uint64_t seed = 42;
  double tolerance = 0.0;  ///< 0 selects the check's default
};

struct CheckInfo {
  std::string_view name;
  std::size_t default_samples;
  double default_tolerance;
};

/// Registered checks, sorted by name.
inline constexpr std::array<CheckInfo, 10> kChecks{{
    {"bracket-table", 1000, 1e-7},
    {"conservation", 1000, 1e-12},
    {"dual-pair", 1000, 1e-9},
    {"equivariance", 1000, 1e-12},
    {"identity", 10000, 1e-12},
    {"integrability", 200, 1e-8},
    {"jacobi", 50, 1e-5},
    {"leaf-correspondence", 1000, 1e-9},
    {"pushforward", 2, 1e-6},
    {"transitivity", 1000, 1e-12},
}};

inline const CheckInfo& check_info(std::string_view name) {
  for (const auto& c : kChecks)
    if (c.name == name) return c;
  throw Error(ErrorKind::BadParams, "unknown check '" + std::string(name) + "'");
}

namespace detail {

inline VerificationReport start_report(std::string_view name, const Resonance& res, const VerifyOptions& opt) {
  const CheckInfo& info = check_info(name);
  VerificationReport r;
  r.check = std::string(name);
  r.n = res.n;
  r.m = res.m;
  r.sign = res.sign;
  r.samples = opt.samples ? opt.samples : info.default_samples;
  r.seed = opt.seed;
  r.tolerance = opt.tolerance > 0.0 ? opt.tolerance : info.default_tolerance;
  r.pass = true;
  return r;
}

inline std::string c_label(const char* what, double c) { return std::string(what) + " c=" + format_g17(c); }

// Brackets against the closed-form tables, relative to
// 1 + mn (|Pi| + rho^2 (m/|a1|^2 + n/|a2|^2)), which bounds the size of the
// gradients entering {X,Y}.
inline void bracket_table(VerificationReport& r, const Resonance& res, std::mt19937_64& g) {
  const double mn = res.nm();
  const PhaseField X = pi_component_field(res, 0), Y = pi_component_field(res, 1), Z = pi_component_field(res, 2);
  const PhaseField R = momentum_R_field(res);
  double yz = 0, zx = 0, xy = 0, rr = 0;
  for (std::size_t i = 0; i < r.samples; ++i) {
    const PhasePoint a = sampling::off_axis_point(g);
    const Vec3 p = map_Pi(res, a);
    const double Rv = momentum_R(res, a);
    const double rho2 = p[0] * p[0] + p[1] * p[1];
    const double scale = 1 + mn * (p.norm() + rho2 * (res.m / std::norm(a.a1()) + res.n / std::norm(a.a2())));
    yz = std::max(yz, std::abs(canonical_bracket(res.sign, Y, Z, a) - 2 * mn * p[0]) / scale);
    zx = std::max(zx, std::abs(canonical_bracket(res.sign, Z, X, a) - 2 * mn * p[1]) / scale);
    const double expect_xy = -mn * rho2 * (res.m / (Rv + p[2]) - res.n / (Rv - p[2]));
    xy = std::max(xy, std::abs(canonical_bracket(res.sign, X, Y, a) - expect_xy) / scale);
    for (const auto* f : {&X, &Y, &Z}) rr = std::max(rr, std::abs(canonical_bracket(res.sign, R, *f, a)) / scale);
  }
  r.add("{Y,Z} = 2mn X", yz, r.tolerance);
  r.add("{Z,X} = 2mn Y", zx, r.tolerance);
  r.add("{X,Y}", xy, r.tolerance);
  r.add("{R,.} = 0", rr, r.tolerance);
}

inline void conservation(VerificationReport& r, const Resonance& res, std::mt19937_64& g) {
  double worst = 0;
  for (std::size_t i = 0; i < r.samples; ++i) {
    const PhasePoint a = PhasePoint(Vec4(sampling::uniform(g, -1, 1), sampling::uniform(g, -1, 1),
                                         sampling::uniform(g, -1, 1), sampling::uniform(g, -1, 1)));
    const std::vector<double> grid{0.0, sampling::uniform(g, -20, 20), sampling::uniform(g, -20, 20)};
    const auto rep = conservation_report(res, a, grid);
    worst = std::max(worst, rep.max_defect() / rep.scale);
  }
  r.add("X, Y, Z, R along the circle action", worst, r.tolerance);
}

inline void dual_pair(VerificationReport& r, const Resonance& res, std::uint64_t seed) {
  for (double c : {0.5, 1.5}) {
    const auto rep = dual_pair_check(res, c, r.samples, seed, r.tolerance);
    r.add(c_label("kernel residual", c), rep.max_kernel_residual, r.tolerance);
    r.add(c_label("subspace distance", c), rep.max_subspace_distance, r.tolerance);
  }
}

inline void equivariance(VerificationReport& r, const Resonance& res, std::mt19937_64& g) {
  double eq = 0, form = 0;
  const auto quad = [&](const Vec3& x) {
    return res.sign == FormSign::plus ? x.squaredNorm() : x[0] * x[0] + x[1] * x[1] - x[2] * x[2];
  };
  for (std::size_t i = 0; i < r.samples; ++i) {
    const GroupElement el = sampling::group_element(g, res.sign);
    const PhasePoint a(Vec4(sampling::uniform(g, -1, 1), sampling::uniform(g, -1, 1), sampling::uniform(g, -1, 1),
                            sampling::uniform(g, -1, 1)));
    const Vec3 v(sampling::uniform(g, -1, 1), sampling::uniform(g, -1, 1), sampling::uniform(g, -1, 1));
    eq = std::max(eq, equivariance_defect(res.sign, el, a, v));
    form = std::max(form, std::abs(quad(adjoint(res.sign, el, v)) - quad(v)));
  }
  r.add("momentum map equivariance", eq, r.tolerance);
  r.add("adjoint preserves invariant form", form, r.tolerance);
}

// Kummer identity relative to 1 + |a|^(2(n+m)); the 1:1 identities are absolute.
inline void identity(VerificationReport& r, const Resonance& res, std::mt19937_64& g) {
  double kummer = 0, quadric = 0, flipped = 0;
  for (std::size_t i = 0; i < r.samples; ++i) {
    const PhasePoint a(Vec4(sampling::uniform(g, -1.5, 1.5), sampling::uniform(g, -1.5, 1.5),
                            sampling::uniform(g, -1.5, 1.5), sampling::uniform(g, -1.5, 1.5)));
    kummer = std::max(kummer, kummer_identity_defect(res, a) / (1 + std::pow(a.norm(), 2 * (res.n + res.m))));
    const Resonance one(1, 1, res.sign);
    const double R = momentum_R(one, a);
    if (res.sign == FormSign::plus) {
      quadric = std::max(quadric, std::abs(J_one_one(a).squaredNorm() - R * R));
    } else {
      const Vec3 p = map_Pi(one, a);
      const double rho2 = p[0] * p[0] + p[1] * p[1];
      quadric = std::max(quadric, std::abs(p[2] * p[2] - rho2 - R * R));
      // X^2 + Y^2 - Z_^2 equals -R_^2.
      flipped = std::max(flipped, std::abs(rho2 - p[2] * p[2] + R * R));
    }
  }
  r.add("Kummer identity", kummer, r.tolerance);
  if (res.sign == FormSign::plus) {
    r.add("X^2 + Y^2 + Z^2 = R^2", quadric, r.tolerance);
  } else {
    r.add("Z_^2 - X^2 - Y^2 = R_^2", quadric, r.tolerance);
    r.add("X^2 + Y^2 - Z_^2 = -R_^2", flipped, r.tolerance);
  }
}

// |v . curl v| / (1 + |v|^2): the difference quotients carry roundoff of
// order eps |v| / h, so the defect is read against |v|^2. Rank of the
// bivector is reported as the fraction of points where it is not 2.
inline void integrability(VerificationReport& r, const Resonance& res, std::mt19937_64& g) {
  const PoissonStructure3 s = resonance_structure(res);
  double worst = 0;
  std::size_t bad_rank = 0;
  for (std::size_t i = 0; i < r.samples; ++i) {
    const Vec3 p = sampling::leaf_domain_point(g, res);
    worst = std::max(worst, integrability_defect(s, p) / (1 + s.field(p).squaredNorm()));
    if (bivector_rank(bivector_matrix(s, p)) != 2) ++bad_rank;
  }
  r.add("v . curl v", worst, r.tolerance);
  r.add("fraction with bivector rank != 2", static_cast<double>(bad_rank) / static_cast<double>(r.samples), 0.0);
  r.pass = r.pass && bad_rank == 0;
}

// Jacobiator of the coordinate functions relative to (1 + |v|)^2.
inline void jacobi(VerificationReport& r, const Resonance& res, std::mt19937_64& g) {
  const PoissonStructure3 s = resonance_structure(res);
  const ScalarField3 X = coordinate_field(0), Y = coordinate_field(1), Z = coordinate_field(2);
  const ScalarField3 C = casimir_field(res);
  double xyz = 0, cxy = 0;
  for (std::size_t i = 0; i < r.samples; ++i) {
    const Vec3 p = sampling::leaf_domain_point(g, res);
    const double scale = std::pow(1 + s.field(p).norm(), 2);
    xyz = std::max(xyz, jacobi_defect(s, X, Y, Z, p) / scale);
    cxy = std::max(cxy, std::abs(bracket(s, C, X, p)) / scale + std::abs(bracket(s, C, Y, p)) / scale);
  }
  r.add("Jacobiator of X, Y, Z", xyz, r.tolerance);
  r.add("Casimir is central", cxy, r.tolerance);
}

inline void leaf_correspondence(VerificationReport& r, const Resonance& res, std::uint64_t seed) {
  for (double c : {0.5, 1.5, 3.0}) {
    const auto rep = leaf_correspondence_check(res, c, r.samples, seed, r.tolerance);
    r.add(c_label("|C(Pi(a)) - c| / (1 + c)", c), rep.max_deviation / (1 + c), r.tolerance);
  }
}

// Upstairs flow of H o Pi against the downstairs flow of H, dt = 1e-3, T = 1,
// from fiber samples of R = 0.9. H = alpha X + beta Y + gamma Z + C^2 / 2.
// On the unbounded minus leaves some level curves of H run out of D before
// T; those starting points are redrawn and the number of redraws is reported.
inline void pushforward(VerificationReport& r, const Resonance& res, std::uint64_t seed) {
  DownstairsHamiltonian h;
  h.alpha = res.sign == FormSign::plus ? 0.3 : 0.05;
  h.beta = res.sign == FormSign::plus ? -0.2 : -0.02;
  h.gamma = 0.7;
  h.casimir_term = [](double c) { return 0.5 * c * c; };
  h.casimir_term_derivative = [](double c) { return c; };
  const std::size_t max_exits = 10 * r.samples;
  const auto starts = fiber_sample(res, 0.9, r.samples + max_exits, seed);
  double worst = 0;
  std::size_t done = 0, exits = 0;
  for (const auto& a0 : starts) {
    if (done == r.samples) break;
    try {
      worst = std::max(worst, pushforward_defect(res, h, a0, 1e-3, 1.0));
      ++done;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DomainExit && e.kind() != ErrorKind::StepRejected) throw;
      ++exits;
    }
  }
  if (done < r.samples) throw Error(ErrorKind::DomainExit, "too many trajectories left the domain");
  r.add("max |Pi(a(t)) - p(t)|", worst, r.tolerance);
  r.details.push_back({"trajectories redrawn after leaving D", static_cast<double>(exits),
                       static_cast<double>(max_exits), true});
}

inline void transitivity(VerificationReport& r, const Resonance& res, std::mt19937_64& g) {
  const GroupTag tag = res.sign == FormSign::plus ? GroupTag::SU2 : GroupTag::SU11;
  double worst = 0;
  std::size_t done = 0;
  while (done < r.samples) {
    const PhasePoint a(Vec4(sampling::uniform(g, -1, 1), sampling::uniform(g, -1, 1), sampling::uniform(g, -1, 1),
                            sampling::uniform(g, -1, 1)));
    const GroupElement el = sampling::group_element(g, res.sign);
    // SU(1,1) orbits degenerate on the null fiber |a1| = |a2|.
    if (tag == GroupTag::SU11 && std::abs(std::norm(a.a1()) - std::norm(a.a2())) < 0.1) continue;
    if (a.norm() < 1e-3) continue;
    ++done;
    const PhasePoint b = act(el, a);
    worst = std::max(worst, (act(transitive_element(a, b, tag), a).coords - b.coords).cwiseAbs().maxCoeff());
  }
  r.add("g(a, b) a = b", worst, r.tolerance);
}

}  // namespace detail

/// Runs one named check. Library errors raised by the check are recorded as
/// a failing detail rather than propagated.
inline VerificationReport run_check(std::string_view name, const Resonance& res, const VerifyOptions& opt = {}) {
  VerificationReport r = detail::start_report(name, res, opt);
  std::mt19937_64 g(opt.seed);
  try {
    if (name == "bracket-table") detail::bracket_table(r, res, g);
    else if (name == "conservation") detail::conservation(r, res, g);
    else if (name == "dual-pair") detail::dual_pair(r, res, opt.seed);
    else if (name == "equivariance") detail::equivariance(r, res, g);
    else if (name == "identity") detail::identity(r, res, g);
    else if (name == "integrability") detail::integrability(r, res, g);
    else if (name == "jacobi") detail::jacobi(r, res, g);
    else if (name == "leaf-correspondence") detail::leaf_correspondence(r, res, opt.seed);
    else if (name == "pushforward") detail::pushforward(r, res, opt.seed);
    else if (name == "transitivity") detail::transitivity(r, res, g);
  } catch (const Error& e) {
    r.fail(e.what());
  }
  return r;
}

/// Every check over n, m in 1..4 and both signs, sorted by check, n, m, sign.
inline std::vector<VerificationReport> run_all(const VerifyOptions& opt = {}) {
  std::vector<VerificationReport> out;
  for (const auto& info : kChecks)
    for (int n = 1; n <= 4; ++n)
      for (int m = 1; m <= 4; ++m)
        for (auto s : {FormSign::plus, FormSign::minus}) out.push_back(run_check(info.name, Resonance(n, m, s), opt));
  return out;
}

}  // namespace resdp
