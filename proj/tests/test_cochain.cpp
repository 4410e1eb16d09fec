#include "trx/cochain.hpp"
#include "trx/errors.hpp"
#include "trx/models.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace trx;

namespace {

ManifoldPtr plane() {
  static const auto M = std::make_shared<const AmbientManifold>(AmbientManifold::euclidean(2));
  return M;
}

Vec v2(double a, double b) {
  Vec z(2);
  z << a, b;
  return z;
}

double orient(const Vec& a, const Vec& b, const Vec& c) {
  return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
}

RetractionOptions options() {
  RetractionOptions o;
  o.sup_tol = 0.25;
  return o;
}

}  // namespace

TEST(Boundary, SquaresToZeroOnRandomChains) {
  FiniteSingularFamily fam(plane(), {}, options());
  std::vector<std::string> by_dim[4];
  for (int i = 0; i < 12; ++i) {
    const int n = 2 + i % 2;
    const SmoothSimplexMap s(n, plane(), random_polymap(500 + i, n, 2, 2, 1.0), false);
    by_dim[n].push_back(fam.add(s, "r" + std::to_string(i)));
  }
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> coef(-3, 3);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 2;
    Chain c{n, {}};
    for (const auto& id : by_dim[n]) c.terms.emplace_back(coef(rng), id);
    c = c.normalized();
    const Chain dc = boundary(fam, c);
    EXPECT_EQ(dc.dim, n - 1);
    EXPECT_TRUE(boundary(fam, dc).normalized().empty()) << trial;
  }
}

TEST(Boundary, NormalizationMergesTerms) {
  Chain c{1, {{2, "a"}, {1, "b"}, {-2, "a"}, {3, "b"}}};
  const auto n = c.normalized();
  ASSERT_EQ(n.terms.size(), 1u);
  EXPECT_EQ(n.terms[0], (std::pair<long, std::string>{4, "b"}));
}

TEST(Iota, AffineTriangleSignIsOrientation) {
  const auto P = CornerManifold::point("origin", v2(0.0, 0.0));
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  int counted = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const Vec a = v2(u(rng), u(rng)), b = v2(u(rng), u(rng)), c = v2(u(rng), u(rng));
    const auto s = SmoothSimplexMap::affine(plane(), {a, b, c});
    if (!is_transverse_pair(s, P, {}).transverse) continue;
    const double o = orient(a, b, c);
    const bool inside = orient(a, b, Vec::Zero(2)) * o > 0 && orient(b, c, Vec::Zero(2)) * o > 0 &&
                        orient(c, a, Vec::Zero(2)) * o > 0;
    const long expected = inside ? (o > 0 ? 1 : -1) : 0;
    EXPECT_EQ(iota_W(P, s, {}).value, expected) << trial;
    EXPECT_EQ(boundary_winding_number(s, Eigen::Vector2d::Zero()), expected) << trial;
    ++counted;
  }
  EXPECT_GT(counted, 30);
}

TEST(Winding, CirclesAndOffsetCenters) {
  for (int k : {-2, -1, 1, 3}) {
    const auto circle = [k](double t) {
      return Eigen::Vector2d(std::cos(2 * std::numbers::pi * k * t), std::sin(2 * std::numbers::pi * k * t));
    };
    EXPECT_EQ(winding_number(circle, Eigen::Vector2d::Zero()), k);
    EXPECT_EQ(winding_number(circle, Eigen::Vector2d(2.0, 0.0)), 0);
    EXPECT_EQ(winding_number(circle, Eigen::Vector2d(0.3, -0.2)), k);
  }
}

TEST(Cocycle, RandomCubicsHaveZeroBoundaryCount) {
  const auto P = CornerManifold::point("origin", v2(0.0, 0.0));
  const auto cubics = random_transverse_cubics(plane(), P, 11, 5, {});
  ASSERT_EQ(cubics.size(), 5u);
  FiniteSingularFamily fam(plane(), {P}, options());
  for (std::size_t i = 0; i < cubics.size(); ++i) {
    const auto id = fam.add(cubics[i], "tau" + std::to_string(i));
    const auto r = cocycle_check(P, fam, id, {});
    EXPECT_EQ(r.value, 0);
    const auto& rec = fam.record(id);
    ASSERT_EQ(r.face_counts.size(), 4u);
    for (int f = 0; f < 4; ++f) {
      EXPECT_EQ(r.face_counts[f],
                boundary_winding_number(fam.record(rec.faces[f]).map, Eigen::Vector2d::Zero()));
    }
  }
}

TEST(Iota, TorusLongitudeCrossesMeridianPositively) {
  const auto torus = std::make_shared<const AmbientManifold>(AmbientManifold::clifford_torus());
  const auto W = torus_meridian();
  const double pi = std::numbers::pi;
  EXPECT_EQ(iota_W(W, torus_arc(torus, 5 * pi / 3, 7 * pi / 3, 0.4, 0.4), {}).value, 1);
  EXPECT_EQ(iota_W(W, torus_arc(torus, 7 * pi / 3, 5 * pi / 3, 0.4, 0.4), {}).value, -1);
  EXPECT_EQ(iota_W(W, torus_arc(torus, pi / 3, pi, 0.4, 0.4), {}).value, 0);
  EXPECT_THROW(iota_W(W, tangent_longitude_piece(torus, 0.0), {}), NotTransverse);
}

TEST(Iota, OrientedFrameFollowsCoorientation) {
  const auto M = AmbientManifold::euclidean(2);
  const auto y = Polynomial::variable(2, 1);
  const auto up = CornerManifold::level_set("up", PolyMap(2, {y}), {}, {PolyMap::constant(2, v2(0.0, 2.0))});
  const Mat E = oriented_normal_frame(M, up, v2(0.3, 0.0), Vec());
  ASSERT_EQ(E.cols(), 1);
  EXPECT_LT((E.col(0) - v2(0.0, 1.0)).norm(), 1e-14);
  const auto down = CornerManifold::level_set("down", PolyMap(2, {y}), {}, {PolyMap::constant(2, v2(0.0, -1.0))});
  EXPECT_LT((oriented_normal_frame(M, down, v2(0.3, 0.0), Vec()).col(0) - v2(0.0, -1.0)).norm(), 1e-14);
}

TEST(Pullback, MeridianChainEvaluatesToZero) {
  const auto torus = std::make_shared<const AmbientManifold>(AmbientManifold::clifford_torus());
  const auto W = torus_meridian();
  FiniteSingularFamily fam(torus, {W}, options());
  Chain c{1, {}};
  for (const auto& a : meridian_arcs(torus, 0.0)) c.terms.emplace_back(1, fam.add(a));
  EXPECT_TRUE(boundary(fam, c).normalized().empty());
  EXPECT_EQ(pullback_evaluate(W, c, fam), 0);
  const Chain p = retract_chain(fam, c);
  for (const auto& [coef, id] : p.terms) EXPECT_EQ(fam.record(id).status, RecordStatus::Transverse);
}
