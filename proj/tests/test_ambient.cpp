#include "trx/ambient.hpp"
#include "trx/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace trx;

namespace {

Vec v2(double a, double b) {
  Vec z(2);
  z << a, b;
  return z;
}

PolyMap unit_circle_equation() {
  const auto x = Polynomial::variable(2, 0);
  const auto y = Polynomial::variable(2, 1);
  return PolyMap(2, {x * x + y * y - Polynomial::constant(2, 1.0)});
}

}  // namespace

TEST(Ambient, EuclideanProjectionIsIdentity) {
  const auto M = AmbientManifold::euclidean(3);
  Vec z(3);
  z << 5.0, -2.0, 0.25;
  EXPECT_EQ(M.project(z), z);
  EXPECT_EQ(M.intrinsic_dim(), 3);
  EXPECT_TRUE(M.project_jacobian(z).isIdentity());
}

TEST(Ambient, SphereProjectionIsNormalization) {
  const auto S = AmbientManifold::sphere(3);
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  for (int i = 0; i < 100; ++i) {
    Vec d(3);
    d << g(rng), g(rng), g(rng);
    d.normalize();
    const double r = 1.0 + 0.4 * (2.0 * (i % 2) - 1.0) * (i / 100.0);
    const Vec z = r * d;
    EXPECT_LT((S.project(z) - d).norm(), 1e-14);
    EXPECT_NEAR(S.distance(z), std::abs(r - 1.0), 1e-14);
  }
}

TEST(Ambient, SphereRejectsPointsOutsideTube) {
  const auto S = AmbientManifold::sphere(3, 0.5);
  Vec z(3);
  z << 0.2, 0.1, 0.0;
  EXPECT_THROW(S.project(z), OutOfTube);
  EXPECT_DOUBLE_EQ(S.epsilon(z), 0.5);
}

TEST(Ambient, TorusProjectionNormalizesEachFactor) {
  const auto T = AmbientManifold::clifford_torus();
  const double r = AmbientManifold::torus_radius();
  EXPECT_NEAR(r, 1.0 / std::sqrt(2.0), 1e-15);
  Vec z(4);
  z << 0.9, 0.1, -0.2, 0.6;
  const Vec p = T.project(z);
  EXPECT_LT((p.head(2) - r * z.head(2).normalized()).norm(), 1e-14);
  EXPECT_LT((p.tail(2) - r * z.tail(2).normalized()).norm(), 1e-14);
  EXPECT_EQ(T.intrinsic_dim(), 2);
}

TEST(Ambient, LevelSetCircleMatchesNormalization) {
  const auto C = AmbientManifold::level_set(unit_circle_equation(), 0.5);
  EXPECT_EQ(C.intrinsic_dim(), 1);
  for (double a = 0.0; a < 6.2; a += 0.37) {
    const double r = 0.7 + 0.1 * std::sin(3 * a);
    const Vec z = r * v2(std::cos(a), std::sin(a));
    EXPECT_LT((C.project(z) - v2(std::cos(a), std::sin(a))).norm(), 1e-10) << a;
  }
  EXPECT_THROW(C.project(v2(0.1, 0.1)), OutOfTube);
}

TEST(Ambient, ProjectionJacobianMatchesFiniteDifference) {
  const auto S = AmbientManifold::sphere(3);
  Vec z(3);
  z << 0.8, 0.5, -0.3;
  const double h = 1e-6;
  const Mat J = S.project_jacobian(z);
  for (int c = 0; c < 3; ++c) {
    Vec zp = z, zm = z;
    zp[c] += h;
    zm[c] -= h;
    EXPECT_LT((J.col(c) - (S.project(zp) - S.project(zm)) / (2 * h)).norm(), 1e-8);
  }
}

TEST(Ambient, TangentBasisIsOrthonormalAndTangent) {
  const auto S = AmbientManifold::sphere(3);
  Vec z(3);
  z << 0.0, 0.6, 0.8;
  const auto F = S.tangent_basis(z);
  ASSERT_EQ(F.basis.cols(), 2);
  EXPECT_LT((F.basis.transpose() * F.basis - Mat::Identity(2, 2)).norm(), 1e-12);
  EXPECT_LT((F.basis.transpose() * z).norm(), 1e-12);

  const auto T = AmbientManifold::clifford_torus();
  Vec w(4);
  w << 0.5, 0.5, 0.5, -0.5;
  const auto G = T.tangent_basis(w);
  ASSERT_EQ(G.basis.cols(), 2);
  Vec n1 = Vec::Zero(4), n2 = Vec::Zero(4);
  n1.head(2) = w.head(2);
  n2.tail(2) = w.tail(2);
  EXPECT_LT((G.basis.transpose() * n1).norm(), 1e-12);
  EXPECT_LT((G.basis.transpose() * n2).norm(), 1e-12);
}

TEST(Ambient, ContainsUsesDistance) {
  const auto S = AmbientManifold::sphere(2);
  EXPECT_TRUE(S.contains(v2(0.0, 1.0), 1e-12));
  EXPECT_FALSE(S.contains(v2(0.0, 1.1), 1e-3));
}
