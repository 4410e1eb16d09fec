#include "trx/battery.hpp"

#include "trx/errors.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

namespace trx {

using nlohmann::json;

namespace {

constexpr double kExactnessTol = 1e-10;
constexpr double kBoundaryTol = 1e-12;
constexpr double kStartTol = 1e-11;
constexpr double kRetractionTol = 1e-9;
constexpr double kConstancyTol = 1e-12;
constexpr double kVacuityMargin = 1e-6;
constexpr double kReferenceTolRank = 1e-6;

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

template <class Body>
CheckResult timed(const std::string& name, Body&& body) {
  CheckResult r;
  r.name = name;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(r);
  } catch (const Error& e) {
    r.passed = false;
    r.error_code = e.code();
    r.error_message = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

ManifoldPtr share(AmbientManifold M) { return std::make_shared<const AmbientManifold>(std::move(M)); }

CornerManifold line_member(int N, int coordinate, const std::string& name) {
  std::vector<PolyMap> frame;
  Vec e = Vec::Zero(N);
  e[coordinate] = 1.0;
  frame.push_back(PolyMap::constant(N, e));
  return CornerManifold::level_set(name, PolyMap(N, {Polynomial::variable(N, coordinate)}), {}, std::move(frame));
}

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

double boundary_displacement(const SmoothSimplexMap& a, const SmoothSimplexMap& b) {
  const int n = a.dim();
  double worst = 0.0;
  for (int i = 0; n > 0 && i <= n; ++i) {
    const AffineMap face = realize_morphism(DeltaMorphism::coface(n, i));
    for (const auto& y : simplex_lattice(n - 1, 10)) worst = std::max(worst, (a.eval(face(y)) - b.eval(face(y))).norm());
  }
  return worst;
}

}  // namespace

std::pair<CheckResult, CheckResult> check_corner_extension(const SuiteSettings& s) {
  double exact_err = 0.0;
  double tele_err = 0.0;
  int datasets = 0;
  const auto start = std::chrono::steady_clock::now();
  CheckResult exact;
  exact.name = "corner_extension_exactness";
  CheckResult tele;
  tele.name = "restriction_telescoping";
  try {
    std::uint64_t counter = 0;
    for (int n = 1; n <= 4; ++n) {
      const auto grid = corner_grid(n, 10);
      for (int k = 1; k <= n; ++k) {
        for (int trial = 0; trial < 50; ++trial) {
          const Polynomial g = random_polymap(splitmix64(s.seed * 1000003ULL + counter++), n, 1, 3, 1.0)[0];
          const CornerData data = corner_data_from_global(g, k);
          const Polynomial F = extend_from_corner(data);
          ++datasets;
          for (int i = 0; i < k; ++i) {
            for (const auto& x : grid) {
              Vec y = x;
              y[i] = 0.0;
              exact_err = std::max(exact_err, std::abs(F.eval(y) - g.eval(y)));
            }
            tele_err = std::max(tele_err, verify_restriction_identity(data, i, grid));
          }
        }
      }
    }
    exact.passed = exact_err <= kExactnessTol;
    tele.passed = tele_err <= kExactnessTol;
  } catch (const Error& e) {
    exact.error_code = tele.error_code = e.code();
    exact.error_message = tele.error_message = e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  exact.metrics = {{"datasets", datasets}, {"max_error", exact_err}, {"threshold", kExactnessTol}};
  tele.metrics = {{"datasets", datasets}, {"max_error", tele_err}, {"threshold", kExactnessTol}};
  exact.seconds = secs;
  tele.seconds = 0.0;
  return {exact, tele};
}

CheckResult check_perturbation_contract(const SuiteSettings& s) {
  return timed("perturbation_contract", [&](CheckResult& r) {
    struct Case {
      std::string label;
      SmoothSimplexMap sigma;
      TCollection Ts;
    };
    std::vector<Case> cases;
    const auto torus = share(AmbientManifold::clifford_torus());
    const auto plane = share(AmbientManifold::euclidean(2));
    const auto sphere = share(AmbientManifold::sphere(3));
    const CornerManifold meridian = torus_meridian();
    const CornerManifold axis = line_member(2, 1, "x_axis");
    const CornerManifold origin = CornerManifold::point("origin", Vec::Zero(2));
    const CornerManifold equator = line_member(3, 2, "equator");
    for (int j = 0; j < 5; ++j) {
      const double b = 0.3 + 1.2 * j;
      cases.push_back({"torus_point_" + std::to_string(j), SmoothSimplexMap::constant(0, torus, torus_point(0.0, b)),
                       {meridian}});
      cases.push_back({"torus_arc_" + std::to_string(j), torus_arc(torus, 0.0, 0.0, b, b + 0.8), {meridian}});
    }
    for (int j = 0; j < 3; ++j) {
      const double a = -1.0 + 0.8 * j;
      cases.push_back({"axis_point_" + std::to_string(j), SmoothSimplexMap::constant(0, plane, vec2(a, 0.0)), {axis}});
      cases.push_back(
          {"axis_segment_" + std::to_string(j), SmoothSimplexMap::affine(plane, {vec2(a, 0.0), vec2(a + 1.5, 0.0)}), {axis}});
    }
    cases.push_back({"origin_point", SmoothSimplexMap::constant(0, plane, Vec::Zero(2)), {origin}});
    cases.push_back({"origin_fold", plane_fold(plane), {origin}});
    for (int j = 0; j < 2; ++j) {
      const double a = 0.4 + 2.0 * j;
      Vec p(3), q(3);
      p << std::cos(a), std::sin(a), 0.0;
      q << std::cos(a + 1.2), std::sin(a + 1.2), 0.0;
      cases.push_back({"equator_arc_" + std::to_string(j), SmoothSimplexMap::affine(sphere, {p, q}), {equator}});
    }

    int max_trials_used = 0;
    int initially_transverse = 0;
    double max_boundary = 0.0;
    double min_sv = std::numeric_limits<double>::infinity();
    double max_start = 0.0;
    bool boundary_precondition_all = true;
    json per_case = json::array();
    for (const auto& c : cases) {
      if (is_T_transverse(c.sigma, c.Ts, s.transversality).transverse) ++initially_transverse;
      const PerturbResult pr = perturb_to_transverse(c.sigma, c.Ts, s.seed, s.max_trials, s.transversality);
      const double disp = boundary_displacement(pr.map, c.sigma);
      double start_err = 0.0;
      for (const auto& x : simplex_lattice(c.sigma.dim(), 10)) {
        start_err = std::max(start_err, (pr.homotopy.eval(0.0, x) - c.sigma.eval(x)).norm());
      }
      max_trials_used = std::max(max_trials_used, pr.trials_used);
      max_boundary = std::max(max_boundary, disp);
      min_sv = std::min(min_sv, pr.verdict.min_singular_value);
      max_start = std::max(max_start, start_err);
      boundary_precondition_all = boundary_precondition_all && pr.boundary_precondition_met;
      per_case.push_back({{"case", c.label},
                          {"dim", c.sigma.dim()},
                          {"trials_used", pr.trials_used},
                          {"trial_seed", pr.trial_seed},
                          {"eps", pr.eps},
                          {"boundary_displacement", disp},
                          {"min_singular_value", number(pr.verdict.min_singular_value)},
                          {"boundary_precondition_met", pr.boundary_precondition_met}});
    }
    r.metrics = {{"cases", cases.size()},
                 {"initially_transverse", initially_transverse},
                 {"max_trials_used", max_trials_used},
                 {"max_boundary_displacement", max_boundary},
                 {"min_singular_value", number(min_sv)},
                 {"max_homotopy_start_error", max_start},
                 {"per_case", per_case}};
    r.passed = cases.size() == 20 && initially_transverse == 0 && max_trials_used <= s.max_trials &&
               max_boundary <= kBoundaryTol && min_sv >= s.transversality.tol_rank && max_start <= kStartTol;
  });
}

CheckResult check_cocycle_zero(const SuiteSettings& s) {
  return timed("cocycle_zero", [&](CheckResult& r) {
    const auto plane = share(AmbientManifold::euclidean(2));
    const CornerManifold origin = CornerManifold::point("origin", Vec::Zero(2));
    int attempts = 0;
    const auto taus = random_transverse_cubics(plane, origin, s.seed, 50, s.transversality, &attempts);
    RetractionOptions ro;
    ro.transversality = s.transversality;
    ro.seed = s.seed;
    FiniteSingularFamily fam(plane, {origin}, ro);
    int nonzero_cocycles = 0;
    int oracle_mismatches = 0;
    int nonzero_faces = 0;
    for (const auto& tau : taus) {
      const std::string id = fam.add(tau);
      const CocycleCheck cc = cocycle_check(origin, fam, id, s.transversality);
      if (cc.value != 0) ++nonzero_cocycles;
      const auto& faces = fam.record(id).faces;
      for (std::size_t i = 0; i < faces.size(); ++i) {
        const long w = boundary_winding_number(fam.record(faces[i]).map, Eigen::Vector2d::Zero());
        if (w != cc.face_counts[i]) ++oracle_mismatches;
        if (w != 0) ++nonzero_faces;
      }
    }
    r.metrics = {{"simplices", taus.size()},
                 {"attempts", attempts},
                 {"nonzero_cocycle_values", nonzero_cocycles},
                 {"oracle_mismatches", oracle_mismatches},
                 {"faces_with_nonzero_count", nonzero_faces}};
    r.passed = taus.size() == 50 && nonzero_cocycles == 0 && oracle_mismatches == 0;
  });
}

CheckResult check_torus_duality(const SuiteSettings& s) {
  return timed("torus_duality", [&](CheckResult& r) {
    const double pi = std::numbers::pi;
    const auto torus = share(AmbientManifold::clifford_torus());
    const CornerManifold W = torus_meridian();
    RetractionOptions ro;
    ro.transversality = s.transversality;
    ro.sup_tol = s.sup_tol;
    ro.max_trials = s.max_trials;
    ro.seed = s.seed;
    FiniteSingularFamily fam(torus, {W}, ro);
    auto chain_of = [&](const std::vector<SmoothSimplexMap>& maps, const std::string& prefix) {
      Chain c{1, {}};
      for (std::size_t i = 0; i < maps.size(); ++i) c.terms.emplace_back(1, fam.add(maps[i], prefix + std::to_string(i)));
      return c;
    };
    const Chain longitude = chain_of(longitude_arcs(torus, 0.0), "longitude_");
    const Chain shifted = chain_of(longitude_arcs(torus, 1.0), "shifted_longitude_");
    const Chain meridian = chain_of(meridian_arcs(torus, 0.0), "meridian_");
    const Chain off_meridian = chain_of(meridian_arcs(torus, pi / 2), "shifted_meridian_");
    const Chain tangent = chain_of({tangent_longitude_piece(torus, 0.0), torus_arc(torus, pi / 3, pi, 0.0, 0.0),
                                    torus_arc(torus, pi, 5 * pi / 3, 0.0, 0.0)},
                                   "tangent_longitude_");
    bool cycles = true;
    for (const Chain* c : {&longitude, &shifted, &meridian, &off_meridian, &tangent}) {
      cycles = cycles && boundary(fam, *c).empty();
    }
    const long lon = iota_W(W, fam, longitude, s.transversality);
    const long lon_shift = iota_W(W, fam, shifted, s.transversality);
    const long mer_off = iota_W(W, fam, off_meridian, s.transversality);
    const long mer = pullback_evaluate(W, meridian, fam);
    const long tan = pullback_evaluate(W, tangent, fam);
    bool tangent_raw = fam.record(tangent.terms[0].second).status != RecordStatus::Transverse;
    r.metrics = {{"cycles_closed", cycles},
                 {"longitude", lon},
                 {"shifted_longitude", lon_shift},
                 {"meridian_pullback", mer},
                 {"shifted_meridian", mer_off},
                 {"tangent_longitude_pullback", tan},
                 {"tangent_piece_initially_nontransverse", tangent_raw}};
    r.passed = cycles && std::abs(lon) == 1 && lon_shift == lon && mer == 0 && mer_off == 0 && tan == lon &&
               tangent_raw;
  });
}

CheckResult check_retraction_identities(const SuiteSettings& s) {
  return timed("retraction_identities", [&](CheckResult& r) {
    const auto plane = share(AmbientManifold::euclidean(2));
    const CornerManifold origin = CornerManifold::point("origin", Vec::Zero(2));
    RetractionOptions ro;
    ro.transversality = s.transversality;
    ro.sup_tol = s.sup_tol;
    ro.max_trials = s.max_trials;
    ro.seed = s.seed;
    FiniteSingularFamily fam(plane, {origin}, ro);

    std::vector<std::string> gens;
    const SmoothSimplexMap tri = SmoothSimplexMap::affine(plane, {vec2(-1, -1), vec2(2, -0.5), vec2(-0.5, 2)});
    gens.push_back(fam.add(tri, "affine_triangle"));
    gens.push_back(fam.add(SmoothSimplexMap::affine(plane, {vec2(-1, -1), vec2(2, -1), vec2(0, 2), vec2(0.3, 0.2)}),
                           "affine_tetrahedron"));
    gens.push_back(fam.add(SmoothSimplexMap::affine(plane, {vec2(0.5, 0.5), vec2(1, -0.2)}), "segment_off"));
    gens.push_back(fam.add(tri.restrict(DeltaMorphism::codegeneracy(2, 0)), "triangle_s0"));
    gens.push_back(fam.add(SmoothSimplexMap::constant(0, plane, vec2(1, 1)), "point_off"));
    const SmoothSimplexMap fold = plane_fold(plane);
    gens.push_back(fam.add(fold, "fold"));
    const SmoothSimplexMap through = SmoothSimplexMap::affine(plane, {vec2(-1, -0.5), vec2(1, 0.5)});
    gens.push_back(fam.add(through, "segment_through"));
    gens.push_back(fam.add(SmoothSimplexMap::constant(0, plane, Vec::Zero(2)), "point_on"));
    gens.push_back(fam.add(through.restrict(DeltaMorphism::codegeneracy(1, 0)), "segment_through_s0"));
    gens.push_back(fam.add(fold.restrict(DeltaMorphism::codegeneracy(2, 1)), "fold_s1"));
    {
      const int n = 3;
      const Polynomial x1 = Polynomial::variable(n, 0);
      const Polynomial x2 = Polynomial::variable(n, 1) - Polynomial::constant(n, 0.25);
      const Polynomial x3 = Polynomial::variable(n, 2);
      PolyMap lift(n, {x1 + x3 * 0.5 - Polynomial::constant(n, 0.25), x2 * x2 - x3 * x3 * 0.1});
      gens.push_back(fam.add(SmoothSimplexMap(n, plane, std::move(lift), false), "folded_tetrahedron"));
    }

    // p o i = id on every transverse record present before retraction.
    int transverse_records = 0;
    int identity_failures = 0;
    for (const auto& id : fam.ids()) {
      if (fam.record(id).status != RecordStatus::Transverse) continue;
      ++transverse_records;
      if (fam.retract(id) != id) ++identity_failures;
    }

    int idempotence_failures = 0;
    int status_failures = 0;
    int face_failures = 0;
    double h0 = 0.0;
    double h1 = 0.0;
    double constancy = 0.0;
    double continuity = 0.0;
    for (const auto& id : gens) {
      const std::string p = fam.retract(id);
      if (fam.retract(p) != p) ++idempotence_failures;
      const SingularRecord& pr = fam.record(p);
      if (pr.status != RecordStatus::Transverse) ++status_failures;
      const int n = pr.dim;
      for (int i = 0; n > 0 && i <= n; ++i) {
        if (pr.faces[i] != fam.retract(fam.record(id).faces[i])) ++face_failures;
      }
      const std::vector<int> zeros(n + 1, 0);
      const std::vector<int> ones(n + 1, 1);
      const DiagonalSlice s0 = fam.homotopy_H(DeltaMorphism(1, zeros), id);
      const DiagonalSlice s1 = fam.homotopy_H(DeltaMorphism(1, ones), id);
      const TrackPtr track = fam.build_homotopy(id);
      for (const auto& x : simplex_lattice(n, 10)) {
        h0 = std::max(h0, (s0.eval(x) - fam.record(id).map.eval(x)).norm());
        h1 = std::max(h1, (s1.eval(x) - pr.map.eval(x)).norm());
        const Vec end = track->eval(1.0, x);
        for (int k = 0; k <= 8; ++k) {
          const double t = track->t_B() + (1.0 - track->t_B()) * k / 8.0;
          constancy = std::max(constancy, (track->eval(t, x) - end).norm());
        }
        for (const auto& stage : track->stages()) {
          if (stage.a <= 0.0) continue;
          continuity = std::max(continuity, (track->eval(stage.a - 1e-13, x) - track->eval(stage.a, x)).norm());
        }
      }
    }

    // Naturality over all face and degeneracy morphisms, up to dimension 3.
    double naturality = 0.0;
    int morphisms = 0;
    const auto snapshot = fam.ids();
    for (const auto& id : snapshot) {
      const int n = fam.record(id).dim;
      std::vector<DeltaMorphism> betas{DeltaMorphism::identity(n)};
      for (int i = 0; n > 0 && i <= n; ++i) betas.push_back(DeltaMorphism::coface(n, i));
      for (int j = 0; n + 1 <= 3 && j <= n; ++j) betas.push_back(DeltaMorphism::codegeneracy(n, j));
      for (const auto& beta : betas) {
        naturality = std::max(naturality, fam.verify_naturality(id, beta, 4));
        ++morphisms;
      }
    }

    r.metrics = {{"generators", gens.size()},
                 {"records", fam.ids().size()},
                 {"transverse_records", transverse_records},
                 {"identity_failures", identity_failures},
                 {"idempotence_failures", idempotence_failures},
                 {"status_failures", status_failures},
                 {"face_failures", face_failures},
                 {"H_start_error", h0},
                 {"H_end_error", h1},
                 {"naturality_morphisms", morphisms},
                 {"naturality_error", naturality},
                 {"constancy_error", constancy},
                 {"breakpoint_jump", continuity}};
    r.passed = transverse_records > 0 && identity_failures == 0 && idempotence_failures == 0 &&
               status_failures == 0 && face_failures == 0 && h0 == 0.0 && h1 <= kRetractionTol &&
               naturality <= kRetractionTol && constancy <= kConstancyTol && continuity <= kRetractionTol;
  });
}

CheckResult check_stratum_vacuity(const SuiteSettings& s) {
  return timed("stratum_vacuity", [&](CheckResult& r) {
    struct Item {
      SmoothSimplexMap map;
      const CornerManifold* W;
    };
    std::vector<Item> items;
    const auto torus = share(AmbientManifold::clifford_torus());
    const auto plane = share(AmbientManifold::euclidean(2));
    const CornerManifold meridian = torus_meridian();
    const CornerManifold origin = CornerManifold::point("origin", Vec::Zero(2));

    RetractionOptions ro;
    ro.transversality = s.transversality;
    ro.sup_tol = s.sup_tol;
    ro.max_trials = s.max_trials;
    ro.seed = s.seed;
    FiniteSingularFamily tfam(torus, {meridian}, ro);
    std::vector<SmoothSimplexMap> raw;
    for (double b : {0.0, 1.0}) {
      for (auto& a : longitude_arcs(torus, b)) raw.push_back(a);
    }
    for (auto& a : meridian_arcs(torus, 0.0)) raw.push_back(a);
    raw.push_back(tangent_longitude_piece(torus, 0.0));
    for (const auto& m : raw) items.push_back({tfam.record(tfam.retract(tfam.add(m))).map, &meridian});

    const auto taus = random_transverse_cubics(plane, origin, s.seed, 20, s.transversality);
    for (const auto& tau : taus) {
      for (int i = 0; i <= 3; ++i) items.push_back({tau.restrict(DeltaMorphism::coface(3, i)), &origin});
    }
    FiniteSingularFamily pfam(plane, {origin}, ro);
    items.push_back({pfam.record(pfam.retract(pfam.add(plane_fold(plane)))).map, &origin});

    int boundary_points = 0;
    int counted = 0;
    double min_bary = std::numeric_limits<double>::infinity();
    for (const auto& item : items) {
      const int n = item.map.dim();
      for (const auto& stratum : item.W->strata()) {
        for (int k = 0; k <= n; ++k) {
          const auto rep = intersection_locus(item.map, k, *item.W, stratum, s.transversality);
          if (k > 0 || stratum.depth > 0) {
            boundary_points += static_cast<int>(rep.points.size());
            continue;
          }
          for (const auto& pt : rep.points) {
            ++counted;
            min_bary = std::min(min_bary, barycentric(pt.x).minCoeff());
          }
        }
      }
    }
    r.metrics = {{"simplices", items.size()},
                 {"boundary_intersections", boundary_points},
                 {"counted_points", counted},
                 {"min_barycentric", number(min_bary)},
                 {"threshold", kVacuityMargin}};
    r.passed = boundary_points == 0 && counted > 0 && min_bary >= kVacuityMargin;
  });
}

CheckResult check_rank_sensitivity(const SuiteSettings& s) {
  return timed("rank_tolerance_sensitivity", [&](CheckResult& r) {
    const auto plane = share(AmbientManifold::euclidean(2));
    const CornerManifold axis = line_member(2, 1, "x_axis");
    const Polynomial t = Polynomial::variable(1, 0) - Polynomial::constant(1, 0.5);
    const SmoothSimplexMap shallow(1, plane, PolyMap(1, {t, t * 0.01}), false);
    const SmoothSimplexMap tangent(1, plane, PolyMap(1, {t, t * t}), false);
    TransversalityOptions reference = s.transversality;
    reference.tol_rank = kReferenceTolRank;
    const auto shallow_ref = is_transverse_pair(shallow, axis, reference);
    const auto shallow_cfg = is_transverse_pair(shallow, axis, s.transversality);
    const auto tangent_cfg = is_transverse_pair(tangent, axis, s.transversality);
    r.metrics = {{"tol_rank", s.transversality.tol_rank},
                 {"reference_tol_rank", kReferenceTolRank},
                 {"shallow_min_singular_value", number(shallow_ref.min_singular_value)},
                 {"shallow_transverse_reference", shallow_ref.transverse},
                 {"shallow_transverse_configured", shallow_cfg.transverse},
                 {"tangent_min_singular_value", number(tangent_cfg.min_singular_value)},
                 {"tangent_transverse_configured", tangent_cfg.transverse}};
    r.flagged = shallow_ref.transverse != shallow_cfg.transverse;
    // An exact tangency must never pass; a shallow crossing may flip with the threshold.
    r.passed = !tangent_cfg.transverse && shallow_ref.transverse;
  });
}

std::vector<CheckResult> run_battery(const SuiteSettings& s) {
  std::vector<CheckResult> out;
  auto [exact, tele] = check_corner_extension(s);
  out.push_back(std::move(exact));
  out.push_back(std::move(tele));
  out.push_back(check_perturbation_contract(s));
  out.push_back(check_cocycle_zero(s));
  out.push_back(check_torus_duality(s));
  out.push_back(check_retraction_identities(s));
  out.push_back(check_stratum_vacuity(s));
  out.push_back(check_rank_sensitivity(s));
  return out;
}

json battery_report(const SuiteSettings& s, const std::vector<CheckResult>& results) {
  json checks = json::array();
  json timings = json::object();
  bool all = true;
  for (const auto& r : results) {
    json entry = {{"name", r.name}, {"passed", r.passed}, {"flagged", r.flagged}, {"metrics", r.metrics}};
    if (!r.error_code.empty()) entry["error"] = {{"code", r.error_code}, {"message", r.error_message}};
    checks.push_back(std::move(entry));
    timings[r.name] = r.seconds;
    all = all && r.passed;
  }
  return {{"schema_version", 1},
          {"kind", "verify_suite"},
          {"seed", s.seed},
          {"tolerances",
           {{"tol_rank", s.transversality.tol_rank},
            {"tau_root", s.transversality.tau_root},
            {"sup_tol", s.sup_tol}}},
          {"max_trials", s.max_trials},
          {"checks", checks},
          {"passed", all},
          {"timings", timings}};
}

json strip_timings(const json& report) {
  json copy = report;
  copy.erase("timings");
  return copy;
}

}  // namespace trx
