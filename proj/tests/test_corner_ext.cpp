#include "trx/corner_ext.hpp"
#include "trx/errors.hpp"
#include "trx/models.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace trx;

namespace {

Polynomial random_poly(std::uint64_t seed, int n, int deg) { return random_polymap(seed, n, 1, deg, 1.0)[0]; }

CornerData combine(double a, const CornerData& d1, double b, const CornerData& d2) {
  CornerData out{d1.n, d1.k, {}};
  for (int j = 0; j < d1.k; ++j) out.faces.push_back(d1.faces[j] * a + d2.faces[j] * b);
  return out;
}

}  // namespace

// The inducing polynomial itself is the oracle on each hyperplane.
TEST(CornerExtension, RestrictsToInducingPolynomialOnEachFace) {
  for (int n = 1; n <= 4; ++n) {
    for (int k = 1; k <= n; ++k) {
      const auto g = random_poly(100 * n + k, n, 3);
      const auto data = corner_data_from_global(g, k);
      const auto F = extend_from_corner(data);
      for (int i = 0; i < k; ++i) {
        for (auto x : corner_grid(n, 5)) {
          x[i] = 0.0;
          EXPECT_NEAR(F.eval(x), g.eval(x), 1e-12) << n << " " << k << " " << i;
        }
        EXPECT_LE(verify_restriction_identity(data, i, corner_grid(n, 5)), 1e-12);
      }
    }
  }
}

TEST(CornerExtension, SingleFaceReturnsTheFaceData) {
  const auto g = random_poly(7, 3, 3);
  const auto data = corner_data_from_global(g, 1);
  EXPECT_LE(max_abs_diff(extend_from_corner(data), data.faces[0]), 1e-15);
}

// F(x0, x1) = f0(0, x1) + f1(x0, 0) - f0(0, 0) written out by hand.
TEST(CornerExtension, TwoFaceFormulaByHand) {
  const auto x = Polynomial::variable(2, 0);
  const auto y = Polynomial::variable(2, 1);
  const auto one = Polynomial::constant(2, 1.0);
  CornerData d{2, 2, {one * 2.0 + y * y * 3.0, one * 2.0 - x * 5.0 + x * x * x}};
  const auto F = extend_from_corner(d);
  for (double a : {0.0, 0.3, 1.2}) {
    for (double b : {0.0, 0.7, 2.0}) {
      Vec p(2);
      p << a, b;
      const double expect = (2 + 3 * b * b) + (2 - 5 * a + a * a * a) - 2;
      EXPECT_NEAR(F.eval(p), expect, 1e-13);
    }
  }
}

TEST(CornerExtension, IsLinearInTheData) {
  const auto d1 = corner_data_from_global(random_poly(31, 3, 3), 3);
  const auto d2 = corner_data_from_global(random_poly(32, 3, 3), 3);
  const auto lhs = extend_from_corner(combine(2.0, d1, -0.5, d2));
  const auto rhs = extend_from_corner(d1) * 2.0 + extend_from_corner(d2) * -0.5;
  EXPECT_LE(max_abs_diff(lhs, rhs), 1e-13);
}

TEST(CornerExtension, IncompatibleDataIsRejected) {
  const auto x = Polynomial::variable(2, 0);
  const auto one = Polynomial::constant(2, 1.0);
  CornerData d{2, 2, {one, one * 2.0 + x}};
  EXPECT_THROW(check_corner_compatibility(d), IncompatibleFaces);
  EXPECT_THROW(extend_from_corner(d), IncompatibleFaces);
}

TEST(CornerExtension, GridHasExpectedSize) {
  EXPECT_EQ(corner_grid(2, 10).size(), 121u);
  EXPECT_EQ(corner_grid(3, 4).size(), 125u);
}

TEST(BoundaryInterpolant, AgreesWithFacetsOfAGlobalMap) {
  const auto plane = std::make_shared<const AmbientManifold>(AmbientManifold::euclidean(2));
  for (int n = 1; n <= 3; ++n) {
    const SmoothSimplexMap s(n, plane, random_polymap(40 + n, n, 2, 3, 1.0), false);
    std::vector<SmoothSimplexMap> facets;
    for (int i = 0; i <= n; ++i) facets.push_back(s.restrict(DeltaMorphism::coface(n, i)));
    const auto E = boundary_interpolant(n, facets);
    for (int i = 0; i <= n; ++i) {
      const auto A = realize_morphism(DeltaMorphism::coface(n, i));
      for (const auto& y : simplex_lattice(n - 1, 5)) {
        EXPECT_LT((E.eval(A(y)) - s.eval(A(y))).norm(), 1e-11) << n << " " << i;
      }
    }
  }
}

TEST(Smoothing, ReplacesContinuousMapWithinTolerance) {
  const auto plane = std::make_shared<const AmbientManifold>(AmbientManifold::euclidean(2));
  const SmoothSimplexMap s(2, plane, random_polymap(77, 2, 2, 2, 1.0), false);
  PiecewiseMap pw;
  pw.dim = 2;
  pw.ambient = plane;
  const auto rho = barycentric_bump(2);
  pw.evaluate = [s, rho](const Vec& x) {
    Vec v = s.eval(x);
    v[0] += 3.0 * rho.eval(x) * std::sqrt(x[0] + 0.1);
    return v;
  };
  for (int i = 0; i <= 2; ++i) pw.facets.push_back(s.restrict(DeltaMorphism::coface(2, i)));
  const auto r = smooth_rel_boundary(pw, 0.01);
  EXPECT_FALSE(r.unchanged);
  EXPECT_LE(r.sup_error, 0.01);
  EXPECT_LE(r.facet_error, 1e-10);
  for (int i = 0; i <= 2; ++i) {
    const auto A = realize_morphism(DeltaMorphism::coface(2, i));
    for (const auto& y : simplex_lattice(1, 7)) EXPECT_LT((r.map.eval(A(y)) - s.eval(A(y))).norm(), 1e-10);
  }
}

TEST(Smoothing, UnreachableToleranceThrows) {
  const auto plane = std::make_shared<const AmbientManifold>(AmbientManifold::euclidean(2));
  const SmoothSimplexMap s(1, plane, random_polymap(5, 1, 2, 1, 1.0), false);
  PiecewiseMap pw;
  pw.dim = 1;
  pw.ambient = plane;
  pw.evaluate = [s](const Vec& x) {
    Vec v = s.eval(x);
    v[1] += std::abs(x[0] - 0.5) < 0.25 ? 0.5 - 2.0 * std::abs(x[0] - 0.5) : 0.0;
    return v;
  };
  for (int i = 0; i <= 1; ++i) pw.facets.push_back(s.restrict(DeltaMorphism::coface(1, i)));
  EXPECT_THROW(smooth_rel_boundary(pw, 1e-9), ToleranceUnreachable);
}

TEST(Smoothing, SmoothInputIsReturnedUnchanged) {
  const auto plane = std::make_shared<const AmbientManifold>(AmbientManifold::euclidean(2));
  const SmoothSimplexMap s(2, plane, random_polymap(3, 2, 2, 2, 1.0), false);
  PiecewiseMap pw;
  pw.dim = 2;
  pw.ambient = plane;
  pw.evaluate = [s](const Vec& x) { return s.eval(x); };
  pw.exact = s;
  const auto r = smooth_rel_boundary(pw, 0.1);
  EXPECT_TRUE(r.unchanged);
  EXPECT_TRUE(r.map.same_as(s, 0.0));
}
