#include <gtest/gtest.h>

#include <cmath>

#include "test_util.hpp"

namespace resdp {
namespace {

using testing::random_domain_point;
using testing::random_vec3;
using testing::rng;

const ScalarField3 X = coordinate_field(0);
const ScalarField3 Y = coordinate_field(1);
const ScalarField3 Z = coordinate_field(2);

PoissonStructure3 constant_structure(const Vec3& v) {
  PoissonStructure3 s;
  s.field = [v](const Vec3&) { return v; };
  s.label = "constant";
  return s;
}

PoissonStructure3 sphere_structure() {
  PoissonStructure3 s;
  s.field = [](const Vec3& p) -> Vec3 { return 2.0 * p; };
  s.label = "sphere";
  return s;
}

// v = (z, x, y) has curl (1, 1, 1), so pi_v is not Poisson.
PoissonStructure3 helical_structure() {
  PoissonStructure3 s;
  s.field = [](const Vec3& p) { return Vec3(p[2], p[0], p[1]); };
  s.label = "helical";
  return s;
}

// Fields without analytic gradients, so the FD path is exercised.
ScalarField3 cubic() {
  return ScalarField3([](const Vec3& p) { return p[0] * p[0] * p[1] + std::sin(p[2]) - 0.3 * p[0] * p[2]; });
}
ScalarField3 quadratic() {
  return ScalarField3([](const Vec3& p) { return p[1] * p[1] - 2.0 * p[0] * p[2] + p[2]; });
}

TEST(ScalarField3, AnalyticGradientMatchesFiniteDifferences) {
  const ScalarField3 f([](const Vec3& p) { return p[0] * p[1] * p[1] + std::exp(p[2]); },
                       [](const Vec3& p) { return Vec3(p[1] * p[1], 2 * p[0] * p[1], std::exp(p[2])); });
  auto g = rng(40);
  for (int i = 0; i < 200; ++i) {
    const Vec3 p = random_vec3(g, 2.0);
    EXPECT_LT((f.grad(p) - f.fd_grad(p)).norm(), 1e-6 * (1 + f.grad(p).norm()));
  }
}

TEST(Bracket, Examples) {
  const Vec3 p(0.3, -0.2, 5.0);
  EXPECT_EQ(bracket(constant_structure(Vec3(0, 0, 1)), X, Y, p), 1.0);
  EXPECT_EQ(bracket(sphere_structure(), X, Y, Vec3(0, 0, 1)), 2.0);
  EXPECT_EQ(bracket(sphere_structure(), X, X, p), 0.0);
}

TEST(Bracket, AntisymmetryBilinearityLeibniz) {
  auto g = rng(41);
  const PoissonStructure3 s = resonance_structure(Resonance(2, 1, FormSign::plus));
  const ScalarField3 f = cubic(), h = quadratic();
  const ScalarField3 sum([&](const Vec3& p) { return 2.0 * f(p) - 3.0 * h(p); });
  const ScalarField3 prod([&](const Vec3& p) { return f(p) * h(p); });
  for (int i = 0; i < 200; ++i) {
    const Vec3 p = random_domain_point(g, Resonance(2, 1, FormSign::plus));
    const double fy = bracket(s, f, Y, p), hy = bracket(s, h, Y, p);
    const double scale = 1 + std::abs(fy) + std::abs(hy);
    EXPECT_NEAR(bracket(s, f, h, p), -bracket(s, h, f, p), 1e-12 * (1 + std::abs(bracket(s, f, h, p))));
    EXPECT_NEAR(bracket(s, sum, Y, p), 2.0 * fy - 3.0 * hy, 1e-6 * scale);
    EXPECT_NEAR(bracket(s, prod, Y, p), f(p) * hy + h(p) * fy, 1e-6 * scale * (1 + std::abs(f(p)) + std::abs(h(p))));
  }
}

TEST(Bracket, OffDomain) {
  try {
    bracket(resonance_structure(Resonance(1, 1, FormSign::plus)), X, Y, Vec3(0, 0, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OffDomain);
  }
  EXPECT_THROW(bracket(resonance_structure(Resonance(1, 1, FormSign::minus)), X, Y, Vec3(1, 0, 0.5)), Error);
}

TEST(HamiltonianVf, Examples) {
  const Vec3 p(0.4, 1.1, -0.7);
  EXPECT_EQ(hamiltonian_vf(constant_structure(Vec3(0, 0, 1)), X, p), Vec3(0, 1, 0));
  EXPECT_EQ(hamiltonian_vf(sphere_structure(), constant_field(3.0), p), Vec3::Zero());
  for (auto s : {FormSign::plus, FormSign::minus}) {
    const Resonance res(3, 1, s);
    const Vec3 q = s == FormSign::plus ? Vec3(0.5, 0.2, 0.3) : Vec3(0.3, 0.1, 2.0);
    const Vec3 xh = hamiltonian_vf(resonance_structure(res), casimir_field(res), q);
    EXPECT_LT(xh.norm(), 1e-9 * leaf_field(res, q).norm());
  }
}

TEST(HamiltonianVf, OrientationAndOrthogonality) {
  auto g = rng(42);
  for (int n = 1; n <= 3; ++n)
    for (int m = 1; m <= 3; ++m)
      for (auto sign : {FormSign::plus, FormSign::minus}) {
        const Resonance res(n, m, sign);
        const PoissonStructure3 s = resonance_structure(res);
        const ScalarField3 h = cubic(), f = quadratic();
        for (int i = 0; i < 50; ++i) {
          const Vec3 p = random_domain_point(g, res);
          const Vec3 xh = hamiltonian_vf(s, h, p);
          const Vec3 v = s.field(p);
          const double scale = xh.norm() * (1 + v.norm() + h.grad(p).norm());
          // X_H[F] = {H,F}_v.
          EXPECT_NEAR(xh.dot(f.grad(p)), bracket(s, h, f, p), 1e-9 * (1 + scale * f.grad(p).norm()));
          EXPECT_LT(std::abs(xh.dot(v)), 1e-9 * (1 + scale));
          EXPECT_LT(std::abs(xh.dot(h.grad(p))), 1e-9 * (1 + scale));
          // Leaf tangency.
          const Vec3 gc = grad_casimir(res, p);
          EXPECT_LT(std::abs(xh.dot(gc)), 1e-9 * (1 + xh.norm() * gc.norm()));
        }
      }
}

TEST(NambuBracket, Examples) {
  const ScalarField3 c([](const Vec3& p) { return p.squaredNorm(); });
  EXPECT_EQ(nambu_bracket(Z, X, Y, Vec3(0.1, 0.2, 0.3)), 1.0);
  EXPECT_NEAR(nambu_bracket(c, X, Y, Vec3(0, 0, 1)), 2.0, 1e-9);
  EXPECT_EQ(nambu_bracket(X, X, Y, Vec3(1, 2, 3)), 0.0);
  EXPECT_EQ(nambu_bracket(X, Y, Y, Vec3(1, 2, 3)), 0.0);
}

TEST(NambuBracket, EqualsBracketOfGradientFieldAndIsAlternating) {
  auto g = rng(43);
  const ScalarField3 c = cubic(), f = quadratic();
  PoissonStructure3 s;
  s.field = [&](const Vec3& p) { return c.grad(p); };
  s.label = "grad C";
  for (int i = 0; i < 200; ++i) {
    const Vec3 p = random_vec3(g, 2.0);
    const double j = nambu_bracket(c, f, Z, p);
    EXPECT_NEAR(j, bracket(s, f, Z, p), 1e-12 * (1 + std::abs(j)));
    EXPECT_NEAR(j, -nambu_bracket(f, c, Z, p), 1e-12 * (1 + std::abs(j)));
    EXPECT_NEAR(j, nambu_bracket(f, Z, c, p), 1e-12 * (1 + std::abs(j)));
    EXPECT_NEAR(j, -nambu_bracket(c, Z, f, p), 1e-12 * (1 + std::abs(j)));
  }
}

TEST(IntegrabilityDefect, Examples) {
  EXPECT_LT(integrability_defect(sphere_structure(), Vec3(0.3, -1.2, 0.8)), 1e-9);
  EXPECT_NEAR(integrability_defect(helical_structure(), Vec3(1, 1, 1)), 3.0, 1e-6);
  EXPECT_GT(integrability_defect(helical_structure(), Vec3(1, 1, 1)) / (1 + 3.0), 1e-2);
}

TEST(IntegrabilityDefect, ResonanceStructuresArePoisson) {
  auto g = rng(44);
  for (int n = 1; n <= 4; ++n)
    for (int m = 1; m <= 4; ++m)
      for (auto sign : {FormSign::plus, FormSign::minus}) {
        const Resonance res(n, m, sign);
        const PoissonStructure3 s = resonance_structure(res);
        for (int i = 0; i < 100; ++i) {
          const Vec3 p = random_domain_point(g, res);
          // Central differences of v carry roundoff ~ eps |v| / h, so the
          // defect is measured against |v|^2.
          EXPECT_LT(integrability_defect(s, p), 1e-8 * (1 + s.field(p).squaredNorm()))
              << n << ":" << m << " " << to_string(sign);
        }
      }
}

TEST(JacobiDefect, Examples) {
  EXPECT_LT(jacobi_defect(sphere_structure(), X, Y, Z, Vec3(0.2, 0.7, -0.4)), 1e-5);
  EXPECT_GT(jacobi_defect(helical_structure(), X, Y, Z, Vec3(1, 1, 1)), 1e-2);
  EXPECT_LT(jacobi_defect(helical_structure(), X, X, Z, Vec3(1, 1, 1)), 1e-8);
}

TEST(JacobiDefect, ResonanceStructures) {
  auto g = rng(45);
  const ScalarField3 f = cubic(), h = quadratic();
  for (int n = 1; n <= 4; ++n)
    for (int m = 1; m <= 4; ++m)
      for (auto sign : {FormSign::plus, FormSign::minus}) {
        const Resonance res(n, m, sign);
        const PoissonStructure3 s = resonance_structure(res);
        for (int i = 0; i < 20; ++i) {
          const Vec3 p = random_domain_point(g, res);
          const double scale = std::pow(1 + s.field(p).norm(), 2);
          EXPECT_LT(jacobi_defect(s, X, Y, Z, p), 1e-5 * scale);
          EXPECT_LT(jacobi_defect(s, f, h, Z, p), 1e-5 * scale);
        }
      }
}

TEST(BivectorMatrix, Examples) {
  Eigen::Matrix3d expect;
  expect << 0, 1, 0, -1, 0, 0, 0, 0, 0;
  EXPECT_EQ(bivector_matrix(constant_structure(Vec3(0, 0, 1)), Vec3(3, 2, 1)), expect);
  const Eigen::Matrix3d zero = bivector_matrix(constant_structure(Vec3::Zero()), Vec3(3, 2, 1));
  EXPECT_EQ(zero, Eigen::Matrix3d::Zero());
  EXPECT_EQ(bivector_rank(zero), 0);
}

TEST(BivectorMatrix, RankKernelAndBracket) {
  auto g = rng(46);
  const ScalarField3 f = cubic(), h = quadratic();
  for (int n = 1; n <= 4; ++n)
    for (int m = 1; m <= 4; ++m)
      for (auto sign : {FormSign::plus, FormSign::minus}) {
        const Resonance res(n, m, sign);
        const PoissonStructure3 s = resonance_structure(res);
        for (int i = 0; i < 50; ++i) {
          const Vec3 p = random_domain_point(g, res);
          const Eigen::Matrix3d mat = bivector_matrix(s, p);
          const Vec3 v = s.field(p);
          EXPECT_EQ(bivector_rank(mat), 2);
          EXPECT_EQ((mat + mat.transpose()).cwiseAbs().maxCoeff(), 0.0);
          EXPECT_LT((mat * v).norm(), 1e-12 * v.squaredNorm());
          const Vec3 gf = f.grad(p), gh = h.grad(p);
          EXPECT_NEAR(gf.dot(mat * gh), bracket(s, f, h, p), 1e-12 * (1 + v.norm() * gf.norm() * gh.norm()));
        }
      }
}

TEST(ResonanceStructure, Examples) {
  const PoissonStructure3 s11 = resonance_structure(Resonance(1, 1, FormSign::plus));
  auto g = rng(47);
  for (int i = 0; i < 100; ++i) {
    const Vec3 p = random_domain_point(g, Resonance(1, 1, FormSign::plus));
    EXPECT_LT((s11.field(p) - 2.0 * p).norm(), 1e-12 * p.norm());
  }
  const Vec3 v21 = resonance_structure(Resonance(2, 1, FormSign::plus)).field(Vec3(1, 0, 0));
  EXPECT_LT((v21 - Vec3(4, 0, 2.0 / std::cbrt(2.0))).norm(), 1e-14);
  const Vec3 w11 = resonance_structure(Resonance(1, 1, FormSign::minus)).field(Vec3(0.6, 0, 1));
  EXPECT_LT((w11 - Vec3(1.2, 0, -2.0)).norm(), 1e-14);
  EXPECT_FALSE(s11.contains(Vec3(0, 0, 1)));
}

TEST(ResonanceStructure, CasimirIsCentral) {
  auto g = rng(48);
  for (int n = 1; n <= 4; ++n)
    for (int m = 1; m <= 4; ++m)
      for (auto sign : {FormSign::plus, FormSign::minus}) {
        const Resonance res(n, m, sign);
        const PoissonStructure3 s = resonance_structure(res);
        const ScalarField3 c = casimir_field(res);
        for (int i = 0; i < 60; ++i) {
          const Vec3 p = random_domain_point(g, res);
          for (const auto* f : {&X, &Y, &Z}) EXPECT_LT(std::abs(bracket(s, c, *f, p)), 1e-8);
        }
      }
}

}  // namespace
}  // namespace resdp
