#include "trx/models.hpp"
#include "trx/retraction.hpp"

#include <gtest/gtest.h>

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

RetractionOptions options() {
  RetractionOptions o;
  o.sup_tol = 0.25;
  o.seed = 5;
  return o;
}

struct PlaneFamily : ::testing::Test {
  FiniteSingularFamily fam{plane(), {CornerManifold::point("origin", v2(0.0, 0.0))}, options()};
  // Straight edge through the origin: dimension 1 < codimension 2, so it is
  // transverse only if it misses the point.
  std::string bad = fam.add(SmoothSimplexMap::affine(plane(), {v2(-1.0, -0.5), v2(1.0, 0.5)}), "bad");
  std::string good = fam.add(SmoothSimplexMap::affine(plane(), {v2(-1.0, -1.0), v2(2.0, -1.0), v2(-1.0, 2.0)}),
                             "good");
};

}  // namespace

TEST_F(PlaneFamily, StatusesAndFaces) {
  EXPECT_EQ(fam.record(good).status, RecordStatus::Transverse);
  EXPECT_NE(fam.record(bad).status, RecordStatus::Transverse);
  const auto& g = fam.record(good);
  ASSERT_EQ(g.faces.size(), 3u);
  for (int i = 0; i < 3; ++i) {
    EXPECT_TRUE(fam.record(g.faces[i]).map.same_as(g.map.restrict(DeltaMorphism::coface(2, i)), 1e-12));
  }
}

TEST_F(PlaneFamily, AddingTheSameMapReusesTheRecord) {
  const auto again = fam.add(SmoothSimplexMap::affine(plane(), {v2(-1.0, -0.5), v2(1.0, 0.5)}), "other");
  EXPECT_EQ(again, bad);
}

TEST_F(PlaneFamily, RetractionFixesTransverseRecords) {
  EXPECT_EQ(fam.retract(good), good);
  for (const auto& f : fam.record(good).faces) EXPECT_EQ(fam.retract(f), f);
}

TEST_F(PlaneFamily, RetractionOfBadEdgeIsTransverseAndIdempotent) {
  const auto p = fam.retract(bad);
  EXPECT_NE(p, bad);
  const auto& rec = fam.record(p);
  EXPECT_EQ(rec.status, RecordStatus::Transverse);
  EXPECT_EQ(fam.retract(p), p);
  // endpoints are off the point, so faces are fixed: d_i p = p d_i
  const auto& b = fam.record(bad);
  for (int i = 0; i < 2; ++i) EXPECT_EQ(rec.faces[i], fam.retract(b.faces[i]));
}

TEST_F(PlaneFamily, TrackEndpointsAndConstancy) {
  const auto h = fam.build_homotopy(bad);
  const auto p = fam.record(fam.retract(bad)).map;
  const auto s = fam.record(bad).map;
  for (const auto& x : simplex_lattice(1, 10)) {
    EXPECT_EQ(h->eval(0.0, x), s.eval(x));
    EXPECT_LT((h->eval(1.0, x) - p.eval(x)).norm(), 1e-9);
    EXPECT_LT((h->eval(h->t_B(), x) - h->eval(1.0, x)).norm(), 1e-12);
    EXPECT_LT((h->eval(0.5 * (h->t_B() + 1.0), x) - h->eval(1.0, x)).norm(), 1e-12);
  }
  EXPECT_DOUBLE_EQ(h->t_A(), 0.5);
  EXPECT_DOUBLE_EQ(h->t_B(), 2.0 / 3.0);
  EXPECT_TRUE(fam.has_track(bad));
}

TEST_F(PlaneFamily, TrackIsRelativeToFaceTracks) {
  const auto h = fam.build_homotopy(bad);
  const auto& b = fam.record(bad);
  for (int i = 0; i < 2; ++i) {
    const auto hf = fam.build_homotopy(b.faces[i]);
    const auto A = realize_morphism(DeltaMorphism::coface(1, i));
    for (double t : {0.1, 0.4, 0.55, 0.7, 1.0}) {
      EXPECT_LT((h->eval(t, A(Vec(0))) - hf->eval(t, Vec(0))).norm(), 1e-9) << t;
    }
  }
}

TEST_F(PlaneFamily, DegenerateRecordsFactorAndRetractConsistently) {
  const auto& b = fam.record(bad);
  const auto s0 = DeltaMorphism::codegeneracy(1, 0);
  const auto deg = fam.add(b.map.restrict(s0), "deg");
  const auto [collapse, base] = fam.nondeg_factorize(deg);
  EXPECT_FALSE(fam.record(deg).nondegenerate);
  EXPECT_EQ(base, bad);
  EXPECT_EQ(collapse, s0);
  const auto p = fam.retract(deg);
  EXPECT_TRUE(fam.record(p).map.same_as(fam.record(fam.retract(bad)).map.restrict(s0), 1e-11));
  const auto h = fam.build_homotopy(deg);
  EXPECT_TRUE(h->degenerate());
  for (const auto& x : simplex_lattice(2, 4)) {
    EXPECT_EQ(h->eval(0.0, x), fam.record(deg).map.eval(x));
  }
}

TEST_F(PlaneFamily, NaturalityHoldsForFacesAndDegeneracies) {
  EXPECT_LE(fam.verify_naturality(bad, DeltaMorphism::coface(1, 0)), 1e-9);
  EXPECT_LE(fam.verify_naturality(bad, DeltaMorphism::coface(1, 1)), 1e-9);
  EXPECT_LE(fam.verify_naturality(good, DeltaMorphism::coface(2, 1)), 1e-9);
  EXPECT_LE(fam.verify_naturality(bad, DeltaMorphism::codegeneracy(1, 0)), 1e-9);
}

TEST_F(PlaneFamily, DiagonalHomotopyEndpointsAreNamed) {
  const auto h0 = fam.homotopy_H(DeltaMorphism::constant(1, 1, 0), bad);
  const auto h1 = fam.homotopy_H(DeltaMorphism::constant(1, 1, 1), bad);
  ASSERT_TRUE(h0.record_id && h1.record_id);
  EXPECT_EQ(*h0.record_id, bad);
  EXPECT_EQ(*h1.record_id, fam.retract(bad));
  const auto mixed = fam.homotopy_H(DeltaMorphism::identity(1), bad);
  EXPECT_FALSE(mixed.record_id.has_value());
  Vec x(1);
  x << 0.0;
  EXPECT_EQ(mixed.eval(x), fam.record(bad).map.eval(x));
}

TEST(Retraction, SameSeedSameResult) {
  auto make = [] {
    FiniteSingularFamily f{plane(), {CornerManifold::point("origin", v2(0.0, 0.0))}, options()};
    const auto id = f.add(plane_fold(plane()), "fold");
    return f.record(f.retract(id)).map;
  };
  EXPECT_TRUE(make().same_as(make(), 0.0));
}

TEST(Retraction, EmptyCollectionRetractsSmoothMapsToThemselves) {
  FiniteSingularFamily f{plane(), {}, options()};
  const auto id = f.add(SmoothSimplexMap(2, plane(), random_polymap(4, 2, 2, 3, 1.0), false), "poly");
  EXPECT_EQ(f.retract(id), id);
}
