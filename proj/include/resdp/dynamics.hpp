#pragma once

// Hamiltonian flows on (C^2, omega_+-) and on the reduced spaces.
//
// Canonical bracket: {F,G} = sum_k s_k (dF/dx_k dG/dy_k - dF/dy_k dG/dx_k)
// with s = (1, +-1), so {|a1|^2, a1} = 2i a1. Flows solve i_{X_H} omega = dH,
// giving dF/dt = {H,F} upstairs and X_H = v x grad H downstairs.

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "resdp/format.hpp"
#include "resdp/poisson3.hpp"

namespace resdp {

/// e^{it} . (a1, a2) = (e^{int} a1, e^{imt} a2).
inline PhasePoint circle_flow(const Resonance& res, const PhasePoint& a, double t) {
  return PhasePoint(std::polar(1.0, res.n * t) * a.a1(), std::polar(1.0, res.m * t) * a.a2());
}

/// Scalar function on C^2 = R^4 with an optional analytic gradient.
struct PhaseField {
  std::function<double(const PhasePoint&)> value;
  std::function<Vec4(const PhasePoint&)> gradient;

  PhaseField() = default;
  explicit PhaseField(std::function<double(const PhasePoint&)> f, std::function<Vec4(const PhasePoint&)> df = {})
      : value(std::move(f)), gradient(std::move(df)) {}

  double operator()(const PhasePoint& a) const { return value(a); }

  static constexpr double kFdStep = 1e-6;

  Vec4 grad(const PhasePoint& a) const {
    if (gradient) return gradient(a);
    const double h = kFdStep * (1.0 + a.norm());
    Vec4 g;
    for (int k = 0; k < 4; ++k) {
      const Vec4 e = h * Vec4::Unit(k);
      g[k] = (value(a + e) - value(a + Vec4(-e))) / (2.0 * h);
    }
    return g;
  }
};

inline PhaseField momentum_R_field(const Resonance& res) {
  return PhaseField([res](const PhasePoint& a) { return momentum_R(res, a); },
                    [res](const PhasePoint& a) { return gradient_R(res, a); });
}

/// Component k of map_Pi (0: X, 1: Y, 2: Z or Z_) with its analytic gradient.
inline PhaseField pi_component_field(const Resonance& res, int k) {
  return PhaseField([res, k](const PhasePoint& a) { return map_Pi(res, a)[k]; },
                    [res, k](const PhasePoint& a) -> Vec4 { return jacobian_Pi(res, a).row(k).transpose(); });
}

namespace detail {

// Poisson tensor P with {F,G} = grad F^T P grad G.
inline Mat4 poisson_tensor(FormSign sign) {
  const double s = plane_sign(sign);
  Mat4 p = Mat4::Zero();
  p(0, 1) = 1.0;
  p(1, 0) = -1.0;
  p(2, 3) = s;
  p(3, 2) = -s;
  return p;
}

}  // namespace detail

inline double canonical_bracket(FormSign sign, const PhaseField& f, const PhaseField& g, const PhasePoint& a) {
  return f.grad(a).dot(detail::poisson_tensor(sign) * g.grad(a));
}

/// X_H with i_{X_H} omega = dH, i.e. X_H = -P grad H so that X_H[F] = {H,F}.
inline TangentVector4 canonical_vector_field(FormSign sign, const PhaseField& h, const PhasePoint& a) {
  return -(detail::poisson_tensor(sign) * h.grad(a));
}

inline const Vec4& coordinates(const PhasePoint& a) { return a.coords; }
inline const Vec3& coordinates(const LeafPoint& p) { return p; }

template <class State>
struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  std::vector<std::string> conserved_names;
  /// conserved[i][j]: quantity j at step i.
  std::vector<std::vector<double>> conserved;

  std::size_t size() const { return times.size(); }

  /// Largest |q_j(t_i) - q_j(t_0)| over the trajectory.
  double max_drift(std::size_t j) const {
    double d = 0.0;
    for (const auto& row : conserved) d = std::max(d, std::abs(row[j] - conserved.front()[j]));
    return d;
  }
};

/// CSV with header "t,<state names>,<conserved names>" and %.17g fields.
template <class State>
std::string trajectory_csv(const Trajectory<State>& traj, const std::vector<std::string>& state_names) {
  std::string s = "t";
  for (const auto& name : state_names) s += "," + name;
  for (const auto& name : traj.conserved_names) s += "," + name;
  s += "\n";
  for (std::size_t i = 0; i < traj.size(); ++i) {
    s += format_g17(traj.times[i]);
    const auto& x = traj.states[i];
    for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(state_names.size()); ++k) s += "," + format_g17(coordinates(x)[k]);
    for (double q : traj.conserved[i]) s += "," + format_g17(q);
    s += "\n";
  }
  return s;
}

inline constexpr double kBlowupNorm = 1e6;

namespace detail {

inline std::size_t step_count(double dt, double T) {
  if (!(dt > 0.0) || !(T >= dt) || !std::isfinite(T)) throw Error(ErrorKind::BadParams, "need dt > 0 and T >= dt");
  return static_cast<std::size_t>(std::ceil(T / dt - 1e-9));
}

// Classical fourth-order Runge-Kutta step for y' = f(t, y).
template <class Vec, class F>
Vec rk4_step(const F& f, double t, const Vec& y, double h) {
  const Vec k1 = f(t, y);
  const Vec k2 = f(t + 0.5 * h, Vec(y + 0.5 * h * k1));
  const Vec k3 = f(t + 0.5 * h, Vec(y + 0.5 * h * k2));
  const Vec k4 = f(t + h, Vec(y + h * k3));
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace detail

inline Trajectory<PhasePoint> flow_upstairs(FormSign sign, const PhaseField& h, const PhasePoint& a0, double dt,
                                            double T) {
  const std::size_t steps = detail::step_count(dt, T);
  const double step = T / static_cast<double>(steps);
  Trajectory<PhasePoint> traj;
  traj.conserved_names = {"H"};
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);
  auto record = [&](double t, const PhasePoint& a) {
    traj.times.push_back(t);
    traj.states.push_back(a);
    traj.conserved.push_back({h(a)});
  };
  auto rhs = [&](double, const Vec4& y) -> Vec4 { return canonical_vector_field(sign, h, PhasePoint(y)); };

  // H defined through the Casimir is undefined off its domain.
  auto guarded = [](double t, auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::OffDomain) throw;
      throw Error(ErrorKind::DomainExit, "upstairs trajectory left the domain of H", t);
    }
  };

  Vec4 y = a0.coords;
  guarded(0.0, [&] { record(0.0, a0); });
  for (std::size_t i = 1; i <= steps; ++i) {
    const double t = (i - 1) * step;
    guarded(t, [&] { y = detail::rk4_step<Vec4>(rhs, t, y, step); });
    if (!y.allFinite() || y.norm() > kBlowupNorm) throw Error(ErrorKind::StepRejected, "upstairs state blew up", t + step);
    guarded(t + step, [&] { record(i * step, PhasePoint(y)); });
  }
  return traj;
}

/// H = alpha x + beta y + gamma z + h(C), the last term optional.
struct DownstairsHamiltonian {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  std::function<double(double)> casimir_term;
  std::function<double(double)> casimir_term_derivative;

  bool has_casimir_term() const { return static_cast<bool>(casimir_term); }

  double value(const Resonance& res, const LeafPoint& p) const {
    double v = alpha * p[0] + beta * p[1] + gamma * p[2];
    if (has_casimir_term()) v += casimir_term(solve_casimir(res, p).value);
    return v;
  }

  Vec3 gradient(const Resonance& res, const LeafPoint& p) const {
    Vec3 g(alpha, beta, gamma);
    if (has_casimir_term()) {
      if (!casimir_term_derivative) throw Error(ErrorKind::BadParams, "h(C) needs its derivative");
      const CasimirEval c = solve_casimir(res, p);
      g += casimir_term_derivative(c.value) * c.gradient;
    }
    return g;
  }

  ScalarField3 field(const Resonance& res) const {
    return ScalarField3([res, self = *this](const Vec3& p) { return self.value(res, p); },
                        [res, self = *this](const Vec3& p) { return self.gradient(res, p); });
  }

  /// H o Pi with gradient J_Pi^T grad H.
  PhaseField pullback(const Resonance& res) const {
    return PhaseField([res, self = *this](const PhasePoint& a) { return self.value(res, map_Pi(res, a)); },
                      [res, self = *this](const PhasePoint& a) -> Vec4 {
                        return jacobian_Pi(res, a).transpose() * self.gradient(res, map_Pi(res, a));
                      });
  }

  bool finite() const { return std::isfinite(alpha) && std::isfinite(beta) && std::isfinite(gamma); }
};

/// RK4 on X_H = mn leaf_field x grad H. Every stage is checked against the
/// Casimir domain; leaving it raises DomainExit with the step start time.
inline Trajectory<LeafPoint> flow_downstairs(const Resonance& res, const DownstairsHamiltonian& h, const LeafPoint& p0,
                                             double dt, double T) {
  if (!h.finite()) throw Error(ErrorKind::BadParams, "Hamiltonian coefficients must be finite");
  if (!in_casimir_domain(res, p0)) throw Error(ErrorKind::DomainExit, "initial point outside the domain", 0.0);
  const std::size_t steps = detail::step_count(dt, T);
  const double step = T / static_cast<double>(steps);
  const PoissonStructure3 s = resonance_structure(res);

  Trajectory<LeafPoint> traj;
  traj.conserved_names = {"H", "C"};
  auto record = [&](double t, const LeafPoint& p) {
    traj.times.push_back(t);
    traj.states.push_back(p);
    traj.conserved.push_back({h.value(res, p), solve_casimir(res, p).value});
  };

  double t0 = 0.0;
  auto rhs = [&](double, const Vec3& p) -> Vec3 {
    if (!in_casimir_domain(res, p)) throw Error(ErrorKind::DomainExit, "trajectory left the domain", t0);
    return s.field(p).cross(h.gradient(res, p));
  };

  Vec3 p = p0;
  record(0.0, p);
  for (std::size_t i = 1; i <= steps; ++i) {
    t0 = (i - 1) * step;
    p = detail::rk4_step<Vec3>(rhs, t0, p, step);
    if (!p.allFinite() || p.norm() > kBlowupNorm) throw Error(ErrorKind::StepRejected, "downstairs state blew up", t0 + step);
    if (!in_casimir_domain(res, p)) throw Error(ErrorKind::DomainExit, "trajectory left the domain", t0 + step);
    record(i * step, p);
  }
  return traj;
}

/// max_k |Pi(a_k) - p_k| between the upstairs flow of H o Pi and the
/// downstairs flow of H.
inline double pushforward_defect(const Resonance& res, const DownstairsHamiltonian& h, const PhasePoint& a0, double dt,
                                 double T) {
  if (!in_domain(res, a0)) throw Error(ErrorKind::OffDomain, "initial point outside the domain");
  const auto up = flow_upstairs(res.sign, h.pullback(res), a0, dt, T);
  const auto down = flow_downstairs(res, h, map_Pi(res, a0), dt, T);
  double defect = 0.0;
  for (std::size_t i = 0; i < up.size(); ++i)
    defect = std::max(defect, (map_Pi(res, up.states[i]) - down.states[i]).norm());
  return defect;
}

struct ConservationReport {
  double max_dX = 0.0;
  double max_dY = 0.0;
  double max_dZ = 0.0;
  double max_dR = 0.0;
  /// 1 + |Pi(a0)| + |R(a0)|.
  double scale = 1.0;

  double max_defect() const { return std::max({max_dX, max_dY, max_dZ, max_dR}); }
};

/// Drift of X, Y, Z and R along the circle action.
inline ConservationReport conservation_report(const Resonance& res, const PhasePoint& a0,
                                              const std::vector<double>& t_grid) {
  const LeafPoint p0 = map_Pi(res, a0);
  const double r0 = momentum_R(res, a0);
  ConservationReport report;
  report.scale = 1.0 + p0.norm() + std::abs(r0);
  for (double t : t_grid) {
    const PhasePoint a = circle_flow(res, a0, t);
    const LeafPoint p = map_Pi(res, a);
    report.max_dX = std::max(report.max_dX, std::abs(p[0] - p0[0]));
    report.max_dY = std::max(report.max_dY, std::abs(p[1] - p0[1]));
    report.max_dZ = std::max(report.max_dZ, std::abs(p[2] - p0[2]));
    report.max_dR = std::max(report.max_dR, std::abs(momentum_R(res, a) - r0));
  }
  return report;
}

}  // namespace resdp
