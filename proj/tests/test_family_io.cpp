#include "trx/errors.hpp"
#include "trx/family_io.hpp"
#include "trx/models.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace trx;

namespace {

ManifoldPtr torus() {
  static const auto M = std::make_shared<const AmbientManifold>(AmbientManifold::clifford_torus());
  return M;
}

RetractionOptions options() {
  RetractionOptions o;
  o.sup_tol = 0.25;
  o.seed = 17;
  return o;
}

FiniteSingularFamily torus_family() {
  FiniteSingularFamily fam(torus(), {torus_meridian()}, options());
  for (const auto& a : longitude_arcs(torus(), 0.5)) fam.add(a);
  const auto t = fam.add(tangent_longitude_piece(torus(), 0.0), "tangent");
  fam.add(fam.record(t).map.restrict(DeltaMorphism::codegeneracy(1, 1)), "flat");
  fam.retract(t);
  fam.retract("flat");
  return fam;
}

}  // namespace

TEST(FamilyIo, RoundTripPreservesRecords) {
  const auto fam = torus_family();
  const auto doc = family_to_json(fam);
  const auto text = doc.dump();
  const auto back = family_from_json(nlohmann::json::parse(text), torus(), {torus_meridian()});
  ASSERT_EQ(back.ids(), fam.ids());
  for (const auto& id : fam.ids()) {
    EXPECT_TRUE(back.record(id).map.same_as(fam.record(id).map, 0.0)) << id;
    EXPECT_EQ(back.record(id).status, fam.record(id).status) << id;
    EXPECT_EQ(back.record_seed(id), fam.record_seed(id));
  }
  EXPECT_EQ(family_to_json(back)["records"], doc["records"]);
  EXPECT_EQ(doc["retractions"]["tangent"], "p(tangent)");
}

TEST(FamilyIo, RebuiltFamilyRetractsTheSameWay) {
  const auto fam = torus_family();
  auto back = family_from_json(family_to_json(fam), torus(), {torus_meridian()});
  EXPECT_EQ(back.retract("tangent"), "p(tangent)");
  EXPECT_TRUE(back.record("p(tangent)").map.same_as(fam.record("p(tangent)").map, 0.0));
}

TEST(FamilyIo, RejectsMismatchedContext) {
  const auto doc = family_to_json(torus_family());
  const auto plane = std::make_shared<const AmbientManifold>(AmbientManifold::euclidean(4));
  EXPECT_THROW(family_from_json(doc, plane, {torus_meridian()}), SchemaError);
  EXPECT_THROW(family_from_json(doc, torus(), {}), SchemaError);
  auto tampered = doc;
  tampered["records"][0]["status"] = "raw";
  EXPECT_THROW(family_from_json(tampered, torus(), {torus_meridian()}), SchemaError);
  auto broken = doc;
  broken["records"][0].erase("lift");
  EXPECT_THROW(family_from_json(broken, torus(), {torus_meridian()}), SchemaError);
}
