#include <gtest/gtest.h>

#include <cmath>

#include "test_util.hpp"

namespace resdp {
namespace {

using testing::random_vec4;
using testing::rng;

TEST(KernelTRBasis, Examples) {
  const auto b = kernel_TR_basis(Resonance(1, 1, FormSign::plus), PhasePoint(1, 0, 0, 0));
  const std::array<TangentVector4, 3> expect{Vec4::UnitY(), Vec4::UnitZ(), Vec4::UnitW()};
  EXPECT_LT(subspace_distance(b, expect), 1e-15);

  // (2 a1, -a2) for a = (1, 1) is the real vector (2, 0, -1, 0).
  const auto c = kernel_TR_basis(Resonance(2, 1, FormSign::minus), PhasePoint(1, 0, 1, 0));
  for (const auto& v : c) EXPECT_LT(std::abs(v.dot(Vec4(2, 0, -1, 0))), 1e-15);

  try {
    kernel_TR_basis(Resonance(2, 1, FormSign::plus), PhasePoint());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ZeroPoint);
  }
}

TEST(KernelTRBasis, OrthonormalAndAnnihilatesDR) {
  auto g = rng(50);
  for (int n = 1; n <= 4; ++n)
    for (int m = 1; m <= 4; ++m)
      for (auto s : {FormSign::plus, FormSign::minus}) {
        const Resonance res(n, m, s);
        for (int i = 0; i < 50; ++i) {
          const PhasePoint a(random_vec4(g));
          const auto b = kernel_TR_basis(res, a);
          const Vec4 grad = gradient_R(res, a);
          for (int j = 0; j < 3; ++j) {
            EXPECT_NEAR(b[j].norm(), 1.0, 1e-14);
            for (int k = j + 1; k < 3; ++k) EXPECT_LT(std::abs(b[j].dot(b[k])), 1e-14);
            // R is quadratic, so a wide central difference is exact up to roundoff.
            const double h = 1e-2;
            const double fd = (momentum_R(res, a + h * b[j]) - momentum_R(res, a + (-h) * b[j])) / (2 * h);
            EXPECT_LT(std::abs(fd), 1e-10 * (1 + grad.norm()));
          }
        }
      }
}

TEST(KernelTPiBasis, Examples) {
  const Vec4 k = kernel_TPi_basis(Resonance(2, 1, FormSign::plus), PhasePoint(1, 0, 1, 0));
  EXPECT_LT((k - Vec4(0, 2, 0, 1) / std::sqrt(5.0)).norm(), 1e-15);
  EXPECT_THROW(kernel_TPi_basis(Resonance(2, 1, FormSign::plus), PhasePoint(1, 0, 0, 0)), Error);
}

TEST(KernelTPiBasis, CircleOrbitTangentIsConsistent) {
  // Pushing the generator at a forward by the circle action gives the
  // generator at the rotated point.
  auto g = rng(51);
  for (int n = 1; n <= 4; ++n)
    for (int m = 1; m <= 4; ++m) {
      const Resonance res(n, m, FormSign::plus);
      for (int i = 0; i < 50; ++i) {
        const PhasePoint a(random_vec4(g));
        const double th = testing::uniform(g, 0, 6.3);
        const Complex r1 = std::polar(1.0, n * th), r2 = std::polar(1.0, m * th);
        const PhasePoint b(r1 * a.a1(), r2 * a.a2());
        const Vec4 ka = kernel_TPi_basis(res, a);
        const Vec4 moved(std::real(r1 * Complex(ka[0], ka[1])), std::imag(r1 * Complex(ka[0], ka[1])),
                         std::real(r2 * Complex(ka[2], ka[3])), std::imag(r2 * Complex(ka[2], ka[3])));
        EXPECT_LT((moved - kernel_TPi_basis(res, b)).norm(), 1e-10);
        EXPECT_LT((jacobian_Pi(res, a) * ka).cwiseAbs().maxCoeff(), 1e-10 * (1 + jacobian_Pi(res, a).cwiseAbs().maxCoeff()));
      }
    }
}

TEST(DualPairDefect, Examples) {
  const auto d = dual_pair_defect(Resonance(1, 1, FormSign::plus), PhasePoint(1, 0, 1, 0));
  EXPECT_LT(d.kernel_residual, 1e-12);
  EXPECT_LT(d.subspace_distance, 1e-12);
  try {
    dual_pair_defect(Resonance(1, 1, FormSign::minus), PhasePoint(1, 0, 1, 0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OffDomain);
  }
}

TEST(DualPairDefect, RandomInDomainPoints) {
  auto g = rng(52);
  for (int n = 1; n <= 4; ++n)
    for (int m = 1; m <= 4; ++m)
      for (auto s : {FormSign::plus, FormSign::minus}) {
        const Resonance res(n, m, s);
        int checked = 0;
        while (checked < 100) {
          const PhasePoint a(random_vec4(g, 1.5));
          if (!in_domain(res, a) || std::abs(a.a1()) < 0.05 || std::abs(a.a2()) < 0.05) continue;
          ++checked;
          const auto d = dual_pair_defect(res, a);
          EXPECT_LT(d.kernel_residual, 1e-9);
          EXPECT_LT(d.subspace_distance, 1e-9);
        }
      }
}

TEST(DualPairDefect, DimensionCount) {
  const Resonance res(3, 2, FormSign::minus);
  for (const auto& a : fiber_sample(res, 1.5, 50, 7)) {
    const std::array<TangentVector4, 1> k{kernel_TPi_basis(res, a)};
    EXPECT_EQ(symplectic_orthogonal(res.sign, k).size(), 3u);
    const auto tr = kernel_TR_basis(res, a);
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd{Eigen::MatrixXd(detail::as_columns(tr))};
    EXPECT_EQ(detail::numerical_rank(svd), 3);
  }
}

TEST(FiberSample, Examples) {
  const Resonance r21(2, 1, FormSign::plus);
  for (const auto& a : fiber_sample(r21, 1.5, 200)) EXPECT_NEAR(momentum_R(r21, a), 1.5, 1e-12);
  try {
    fiber_sample(r21, 0.0, 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptyFiber);
  }
  const Resonance r11m(1, 1, FormSign::minus);
  for (const auto& a : fiber_sample(r11m, 1.5, 200)) {
    EXPECT_NEAR(momentum_R(r11m, a), 1.5, 1e-12);
    EXPECT_GE(std::norm(a.a2()), 0.1 - 1e-12);
    EXPECT_LE(std::norm(a.a2()), 4.0 + 1e-12);
  }
}

TEST(FiberSample, OnFiberAndInDomain) {
  for (int n = 1; n <= 4; ++n)
    for (int m = 1; m <= 4; ++m)
      for (auto s : {FormSign::plus, FormSign::minus})
        for (double c : {0.5, 1.5, 3.0, -0.5, -2.0}) {
          const Resonance res(n, m, s);
          if (s == FormSign::plus && c < 0) {
            EXPECT_THROW(fiber_sample(res, c, 5), Error);
            continue;
          }
          const auto pts = fiber_sample(res, c, 200, 11);
          ASSERT_EQ(pts.size(), 200u);
          for (const auto& a : pts) {
            EXPECT_NEAR(momentum_R(res, a), c, 1e-12 * (1 + a.coords.squaredNorm()));
            EXPECT_TRUE(in_domain(res, a));
            EXPECT_EQ(in_positive_domain(res, a), c > 0);
          }
        }
}

TEST(FiberSample, DeterministicFromSeed) {
  const Resonance res(3, 1, FormSign::minus);
  const auto a = fiber_sample(res, 0.7, 20, 99);
  const auto b = fiber_sample(res, 0.7, 20, 99);
  const auto c = fiber_sample(res, 0.7, 20, 100);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].coords, b[i].coords);
  EXPECT_NE(a[0].coords, c[0].coords);
}

TEST(DualPairCheck, FiberSamplesAllResonances) {
  for (int n = 1; n <= 4; ++n)
    for (int m = 1; m <= 4; ++m)
      for (auto s : {FormSign::plus, FormSign::minus})
        for (double c : {0.5, 1.5}) {
          const auto report = dual_pair_check(Resonance(n, m, s), c, 200, 42);
          EXPECT_TRUE(report.pass) << n << ":" << m << " " << to_string(s) << " kernel " << report.max_kernel_residual
                                   << " subspace " << report.max_subspace_distance;
        }
  EXPECT_TRUE(dual_pair_check(Resonance(2, 3, FormSign::minus), -1.0, 200, 42).pass);
}

TEST(LeafCorrespondence, Examples) {
  const Resonance r21(2, 1, FormSign::plus);
  EXPECT_NEAR(momentum_R(r21, PhasePoint(1, 0, 1, 0)), 1.5, 1e-15);
  EXPECT_NEAR(solve_casimir(r21, map_Pi(r21, PhasePoint(1, 0, 1, 0))).value, 1.5, 1e-14);

  // 1:1 fibers map onto round spheres of radius c.
  const Resonance r11(1, 1, FormSign::plus);
  for (const auto& a : fiber_sample(r11, 0.8, 100)) EXPECT_NEAR(map_Pi(r11, a).norm(), 0.8, 1e-14);

  const Resonance r11m(1, 1, FormSign::minus);
  EXPECT_NEAR(solve_casimir(r11m, map_Pi(r11m, PhasePoint(2, 0, 1, 0))).value, 1.5, 1e-14);
  EXPECT_THROW(leaf_correspondence_check(r11m, -1.0, 10), Error);
}

TEST(LeafCorrespondence, AllResonances) {
  for (int n = 1; n <= 4; ++n)
    for (int m = 1; m <= 4; ++m)
      for (auto s : {FormSign::plus, FormSign::minus})
        for (double c : {0.5, 1.5, 3.0}) {
          const auto report = leaf_correspondence_check(Resonance(n, m, s), c, 200, 42);
          EXPECT_TRUE(report.pass) << n << ":" << m << " " << to_string(s) << " c=" << c << " dev " << report.max_deviation;
        }
}

}  // namespace
}  // namespace resdp
