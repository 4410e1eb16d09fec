#include "trx/simplex_geom.hpp"

#include <gtest/gtest.h>

using namespace trx;

TEST(DeltaMorphism, CofaceAndCodegeneracyValues) {
  EXPECT_EQ(DeltaMorphism::coface(3, 1).values(), (std::vector<int>{0, 2, 3}));
  EXPECT_EQ(DeltaMorphism::codegeneracy(2, 1).values(), (std::vector<int>{0, 1, 1, 2}));
  EXPECT_TRUE(DeltaMorphism::coface(3, 0).is_injective());
  EXPECT_FALSE(DeltaMorphism::coface(3, 0).is_surjective());
  EXPECT_TRUE(DeltaMorphism::codegeneracy(2, 0).is_surjective());
  EXPECT_THROW(DeltaMorphism(1, {1, 0}), std::exception);
}

// delta_j delta_i = delta_i delta_{j-1} for i < j
TEST(DeltaMorphism, CosimplicialFaceIdentity) {
  for (int n = 2; n <= 5; ++n) {
    for (int j = 1; j <= n; ++j) {
      for (int i = 0; i < j; ++i) {
        const auto lhs = DeltaMorphism::coface(n, j).compose(DeltaMorphism::coface(n - 1, i));
        const auto rhs = DeltaMorphism::coface(n, i).compose(DeltaMorphism::coface(n - 1, j - 1));
        EXPECT_EQ(lhs, rhs) << n << " " << i << " " << j;
      }
    }
  }
}

TEST(DeltaMorphism, CosimplicialMixedIdentities) {
  for (int n = 1; n <= 4; ++n) {
    for (int j = 0; j <= n; ++j) {
      const auto s = DeltaMorphism::codegeneracy(n, j);
      // s_j delta_j = s_j delta_{j+1} = id
      EXPECT_EQ(s.compose(DeltaMorphism::coface(n + 1, j)), DeltaMorphism::identity(n));
      EXPECT_EQ(s.compose(DeltaMorphism::coface(n + 1, j + 1)), DeltaMorphism::identity(n));
      for (int i = 0; i <= n + 1; ++i) {
        const auto lhs = s.compose(DeltaMorphism::coface(n + 1, i));
        if (i < j) {
          const auto rhs = DeltaMorphism::coface(n, i).compose(DeltaMorphism::codegeneracy(n - 1, j - 1));
          EXPECT_EQ(lhs, rhs);
        } else if (i > j + 1) {
          const auto rhs = DeltaMorphism::coface(n, i - 1).compose(DeltaMorphism::codegeneracy(n - 1, j));
          EXPECT_EQ(lhs, rhs);
        }
      }
    }
  }
}

TEST(Realization, SendsVerticesToVertices) {
  const DeltaMorphism beta(3, {0, 2, 2});
  const auto A = realize_morphism(beta);
  for (int i = 0; i <= 2; ++i) {
    EXPECT_LT((A(simplex_vertex(2, i)) - simplex_vertex(3, beta(i))).norm(), 1e-15);
  }
}

TEST(Realization, IsFunctorial) {
  const DeltaMorphism a(3, {0, 1, 3});
  const DeltaMorphism b(2, {0, 0, 2, 2});
  const auto lhs = realize_morphism(a.compose(b));
  const auto rhs = realize_morphism(a).compose(realize_morphism(b));
  EXPECT_LT((lhs.matrix - rhs.matrix).norm(), 1e-15);
  EXPECT_LT((lhs.offset - rhs.offset).norm(), 1e-15);
}

TEST(Barycentric, RoundTripAndSum) {
  Vec x(3);
  x << 0.1, 0.2, 0.3;
  const Vec l = barycentric(x);
  ASSERT_EQ(l.size(), 4);
  EXPECT_NEAR(l.sum(), 1.0, 1e-15);
  EXPECT_NEAR(l[0], 0.4, 1e-15);
  EXPECT_LT((from_barycentric(l) - x).norm(), 1e-15);
}

TEST(Strata, DepthCountsVanishingCoordinates) {
  Vec x(2);
  x << 0.3, 0.3;
  EXPECT_EQ(stratum_of(2, x), 0);
  x << 0.0, 0.5;
  EXPECT_EQ(stratum_of(2, x), 1);
  x << 0.0, 0.0;
  EXPECT_EQ(stratum_of(2, x), 2);
  x << 1.0, 0.0;
  EXPECT_EQ(stratum_of(2, x), 2);
}

TEST(Strata, FacesOfCodimensionAreCountedByBinomials) {
  const int binom[5][5] = {{1}, {1, 1}, {1, 2, 1}, {1, 3, 3, 1}, {1, 4, 6, 4, 1}};
  for (int n = 0; n <= 3; ++n) {
    for (int k = 0; k <= n; ++k) {
      EXPECT_EQ(static_cast<int>(faces_of_codim(n, k).size()), binom[n + 1][k]) << n << " " << k;
    }
  }
  EXPECT_EQ(static_cast<int>(enumerate_face_maps(3).size()), 4);
}

TEST(Collapse, NearestPointOfSimplex) {
  Vec z(2);
  z << 0.2, 0.3;
  EXPECT_LT((collapse_to_simplex(2, z) - z).norm(), 1e-15);
  z << 1.0, 1.0;
  Vec expect(2);
  expect << 0.5, 0.5;
  EXPECT_LT((collapse_to_simplex(2, z) - expect).norm(), 1e-14);
  z << -1.0, 0.4;
  expect << 0.0, 0.4;
  EXPECT_LT((collapse_to_simplex(2, z) - expect).norm(), 1e-14);
  EXPECT_TRUE(in_simplex(collapse_to_simplex(2, z)));
}

TEST(Lattice, CountsPoints) {
  // (res + n choose n) points of the closed simplex
  EXPECT_EQ(simplex_lattice(2, 4).size(), 15u);
  EXPECT_EQ(simplex_lattice(3, 2).size(), 10u);
  for (const auto& p : simplex_lattice(3, 5)) EXPECT_TRUE(in_simplex(p, 1e-14));
}
