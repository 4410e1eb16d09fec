#include "trx/config.hpp"

#include "trx/errors.hpp"

#include <fstream>
#include <set>

namespace trx {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& msg) {
  throw SchemaError(where + ": " + msg);
}

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) fail(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(where, std::string("missing key '") + key + "'");
  return *it;
}

template <class T>
T get(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    fail(where + "." + key, "wrong type");
  }
}

template <class T>
T get_or(const json& obj, const char* key, T fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  return get<T>(obj, key, where);
}

void only_keys(const json& obj, std::initializer_list<const char*> keys, const std::string& where) {
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) fail(where, "unknown key '" + it.key() + "'");
  }
}

Vec parse_vector(const json& j, int expected, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of numbers");
  if (expected >= 0 && static_cast<int>(j.size()) != expected) {
    fail(where, "expected " + std::to_string(expected) + " entries, got " + std::to_string(j.size()));
  }
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) fail(where, "expected numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

PolyMap parse_polymap(const json& j, int nvars, int ncomp, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of polynomials");
  if (ncomp >= 0 && static_cast<int>(j.size()) != ncomp) {
    fail(where, "expected " + std::to_string(ncomp) + " components, got " + std::to_string(j.size()));
  }
  std::vector<Polynomial> comps;
  for (std::size_t i = 0; i < j.size(); ++i) {
    comps.push_back(parse_polynomial(j[i], nvars, where + "[" + std::to_string(i) + "]"));
  }
  return PolyMap(nvars, std::move(comps));
}

std::vector<PolyMap> parse_frame(const json& obj, int N, const std::string& where) {
  std::vector<PolyMap> frame;
  if (!obj.contains("coorientation")) return frame;
  const json& f = obj["coorientation"];
  if (!f.is_array()) fail(where + ".coorientation", "expected an array of vector fields");
  for (std::size_t i = 0; i < f.size(); ++i) {
    frame.push_back(parse_polymap(f[i], N, N, where + ".coorientation[" + std::to_string(i) + "]"));
  }
  return frame;
}

ManifoldPtr parse_manifold(const json& j) {
  const std::string where = "manifold";
  const auto kind = get<std::string>(j, "kind", where);
  if (kind == "euclidean") {
    only_keys(j, {"kind", "dim", "eps_lower"}, where);
    return std::make_shared<const AmbientManifold>(
        AmbientManifold::euclidean(get<int>(j, "dim", where), get_or<double>(j, "eps_lower", 1.0, where)));
  }
  if (kind == "sphere") {
    only_keys(j, {"kind", "ambient_dim", "eps_lower"}, where);
    return std::make_shared<const AmbientManifold>(
        AmbientManifold::sphere(get<int>(j, "ambient_dim", where), get_or<double>(j, "eps_lower", 0.5, where)));
  }
  if (kind == "clifford_torus") {
    only_keys(j, {"kind", "eps_lower"}, where);
    return std::make_shared<const AmbientManifold>(
        AmbientManifold::clifford_torus(get_or<double>(j, "eps_lower", 0.3, where)));
  }
  if (kind == "level_set") {
    only_keys(j, {"kind", "ambient_dim", "G", "eps_lower"}, where);
    const int N = get<int>(j, "ambient_dim", where);
    return std::make_shared<const AmbientManifold>(AmbientManifold::level_set(
        parse_polymap(require(j, "G", where), N, -1, where + ".G"), get<double>(j, "eps_lower", where)));
  }
  fail(where + ".kind", "unknown manifold kind '" + kind + "'");
}

CornerManifold parse_member(const json& j, const AmbientManifold& M, const std::string& where) {
  const int N = M.ambient_dim();
  const auto name = get<std::string>(j, "name", where);
  const auto kind = get<std::string>(j, "kind", where);
  if (kind == "level_set") {
    only_keys(j, {"name", "kind", "G", "inequalities", "coorientation"}, where);
    PolyMap G = parse_polymap(require(j, "G", where), N, -1, where + ".G");
    std::vector<Polynomial> h;
    if (j.contains("inequalities")) {
      const json& arr = j["inequalities"];
      if (!arr.is_array()) fail(where + ".inequalities", "expected an array");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        h.push_back(parse_polynomial(arr[i], N, where + ".inequalities[" + std::to_string(i) + "]"));
      }
    }
    return CornerManifold::level_set(name, std::move(G), std::move(h), parse_frame(j, N, where));
  }
  if (kind == "point") {
    only_keys(j, {"name", "kind", "point"}, where);
    if (M.kind() != ManifoldKind::Euclidean) fail(where, "point members are only supported in Euclidean space");
    return CornerManifold::point(name, parse_vector(require(j, "point", where), N, where + ".point"));
  }
  if (kind == "parametric") {
    only_keys(j, {"name", "kind", "domain_dim", "psi", "project", "codim", "coorientation"}, where);
    const int d = get<int>(j, "domain_dim", where);
    PolyMap psi = parse_polymap(require(j, "psi", where), d, N, where + ".psi");
    const bool project = get_or<bool>(j, "project", M.kind() != ManifoldKind::Euclidean, where);
    return CornerManifold::parametric(name, d, std::move(psi), project, get<int>(j, "codim", where),
                                      parse_frame(j, N, where));
  }
  if (kind == "torus_meridian") {
    only_keys(j, {"name", "kind"}, where);
    if (M.kind() != ManifoldKind::CliffordTorus) fail(where, "torus_meridian needs the Clifford torus");
    return torus_meridian();
  }
  fail(where + ".kind", "unknown member kind '" + kind + "'");
}

SmoothSimplexMap parse_simplex(const json& j, const ManifoldPtr& M, const std::string& where) {
  const int N = M->ambient_dim();
  const bool curved = M->kind() != ManifoldKind::Euclidean;
  const auto kind = get<std::string>(j, "kind", where);
  if (kind == "lift") {
    only_keys(j, {"id", "kind", "dim", "components", "projected"}, where);
    const int n = get<int>(j, "dim", where);
    if (n < 0 || n > kMaxVars) fail(where + ".dim", "unsupported simplex dimension");
    return SmoothSimplexMap(n, M, parse_polymap(require(j, "components", where), n, N, where + ".components"),
                            get_or<bool>(j, "projected", curved, where));
  }
  if (kind == "affine") {
    only_keys(j, {"id", "kind", "vertices"}, where);
    const json& vs = require(j, "vertices", where);
    if (!vs.is_array() || vs.empty()) fail(where + ".vertices", "expected a non-empty array of points");
    std::vector<Vec> pts;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      pts.push_back(parse_vector(vs[i], N, where + ".vertices[" + std::to_string(i) + "]"));
    }
    return SmoothSimplexMap::affine(M, pts);
  }
  if (kind == "constant") {
    only_keys(j, {"id", "kind", "dim", "point"}, where);
    return SmoothSimplexMap::constant(get<int>(j, "dim", where), M,
                                      parse_vector(require(j, "point", where), N, where + ".point"));
  }
  if (kind == "torus_arc") {
    only_keys(j, {"id", "kind", "theta1", "theta2"}, where);
    if (M->kind() != ManifoldKind::CliffordTorus) fail(where, "torus_arc needs the Clifford torus");
    const Vec a = parse_vector(require(j, "theta1", where), 2, where + ".theta1");
    const Vec b = parse_vector(require(j, "theta2", where), 2, where + ".theta2");
    return torus_arc(M, a[0], a[1], b[0], b[1]);
  }
  if (kind == "tangent_longitude") {
    only_keys(j, {"id", "kind", "theta2"}, where);
    if (M->kind() != ManifoldKind::CliffordTorus) fail(where, "tangent_longitude needs the Clifford torus");
    return tangent_longitude_piece(M, get<double>(j, "theta2", where));
  }
  if (kind == "plane_fold") {
    only_keys(j, {"id", "kind"}, where);
    if (M->kind() != ManifoldKind::Euclidean || N != 2) fail(where, "plane_fold needs the plane");
    return plane_fold(M);
  }
  fail(where + ".kind", "unknown simplex kind '" + kind + "'");
}

void validate_step(const json& step, const ScenarioConfig& cfg, const std::string& where) {
  const auto op = get<std::string>(step, "op", where);
  auto has_simplex = [&](const std::string& id) {
    for (const auto& s : cfg.simplices) {
      if (s.id == id) return true;
    }
    return false;
  };
  auto check_simplex = [&](const char* key) {
    const auto id = get<std::string>(step, key, where);
    if (!has_simplex(id)) fail(where + "." + key, "unknown simplex '" + id + "'");
  };
  auto check_member = [&](bool required) {
    if (!step.contains("member")) {
      if (required) fail(where, "missing key 'member'");
      return;
    }
    cfg.member(get<std::string>(step, "member", where));
  };
  if (op == "check") {
    only_keys(step, {"op", "simplex", "member", "expect_transverse"}, where);
    check_simplex("simplex");
    check_member(false);
  } else if (op == "perturb") {
    only_keys(step, {"op", "simplex", "expect_success"}, where);
    check_simplex("simplex");
  } else if (op == "retract") {
    only_keys(step, {"op", "simplex", "expect_identity"}, where);
    check_simplex("simplex");
  } else if (op == "cocycle") {
    only_keys(step, {"op", "member", "simplex", "generator"}, where);
    check_member(true);
    if (step.contains("simplex") == step.contains("generator")) {
      fail(where, "cocycle needs exactly one of 'simplex' or 'generator'");
    }
    if (step.contains("simplex")) check_simplex("simplex");
    if (step.contains("generator")) {
      const auto g = get<std::string>(step, "generator", where);
      bool found = false;
      for (const auto& gen : cfg.generators) found = found || gen.name == g;
      if (!found) fail(where + ".generator", "unknown generator '" + g + "'");
    }
  } else if (op == "duality") {
    only_keys(step, {"op", "member", "chain", "pullback", "expect", "expect_abs"}, where);
    check_member(true);
    const auto c = get<std::string>(step, "chain", where);
    bool found = false;
    for (const auto& ch : cfg.chains) found = found || ch.name == c;
    if (!found) fail(where + ".chain", "unknown chain '" + c + "'");
  } else {
    fail(where + ".op", "unknown step '" + op + "'");
  }
}

}  // namespace

Polynomial parse_polynomial(const json& j, int expected_nvars, const std::string& where) {
  if (!j.is_object()) fail(where, "expected a polynomial object");
  only_keys(j, {"nvars", "degree", "coeffs"}, where);
  const int nvars = get<int>(j, "nvars", where);
  if (expected_nvars >= 0 && nvars != expected_nvars) {
    fail(where + ".nvars", "expected " + std::to_string(expected_nvars) + ", got " + std::to_string(nvars));
  }
  const int degree = get<int>(j, "degree", where);
  if (degree < 0 || degree > kMaxLiftDegree) fail(where + ".degree", "out of range");
  const auto coeffs = get<std::vector<double>>(j, "coeffs", where);
  const std::size_t expected = graded_monomials(nvars, degree).size();
  if (coeffs.size() != expected) {
    fail(where + ".coeffs", "expected " + std::to_string(expected) + " coefficients, got " +
                                std::to_string(coeffs.size()));
  }
  return Polynomial::from_dense(nvars, degree, coeffs);
}

json polynomial_to_json(const Polynomial& p) {
  const int d = std::max(0, p.degree());
  return {{"nvars", p.nvars()}, {"degree", d}, {"coeffs", p.to_dense(d)}};
}

TransversalityOptions ScenarioConfig::transversality() const {
  TransversalityOptions o;
  o.tol_rank = tolerances.tol_rank;
  o.tau_root = tolerances.tau_root;
  return o;
}

RetractionOptions ScenarioConfig::retraction() const {
  RetractionOptions o;
  o.transversality = transversality();
  o.sup_tol = tolerances.sup_tol;
  o.max_trials = max_trials;
  o.seed = seed;
  return o;
}

const CornerManifold& ScenarioConfig::member(const std::string& name) const {
  for (const auto& m : members) {
    if (m.name() == name) return m;
  }
  throw SchemaError("unknown member '" + name + "'");
}

ScenarioConfig parse_config(const json& doc) {
  if (!doc.is_object()) fail("config", "expected a JSON object");
  only_keys(doc, {"schema_version", "name", "seed", "manifold", "members", "simplices", "chains", "generators",
                  "tolerances", "max_trials", "steps"},
            "config");
  const int version = get<int>(doc, "schema_version", "config");
  if (version != kSchemaVersion) fail("config.schema_version", "unsupported version " + std::to_string(version));

  ScenarioConfig cfg;
  cfg.name = get_or<std::string>(doc, "name", "scenario", "config");
  cfg.seed = get<std::uint64_t>(doc, "seed", "config");
  cfg.manifold = parse_manifold(require(doc, "manifold", "config"));

  if (doc.contains("tolerances")) {
    const json& t = doc["tolerances"];
    only_keys(t, {"tol_rank", "tau_root", "sup_tol"}, "tolerances");
    cfg.tolerances.tol_rank = get_or<double>(t, "tol_rank", cfg.tolerances.tol_rank, "tolerances");
    cfg.tolerances.tau_root = get_or<double>(t, "tau_root", cfg.tolerances.tau_root, "tolerances");
    cfg.tolerances.sup_tol = get_or<double>(t, "sup_tol", cfg.tolerances.sup_tol, "tolerances");
    if (!(cfg.tolerances.tol_rank > 0) || !(cfg.tolerances.tau_root > 0) || !(cfg.tolerances.sup_tol > 0)) {
      fail("tolerances", "tolerances must be positive");
    }
    if (cfg.tolerances.sup_tol >= cfg.manifold->eps_lower()) {
      fail("tolerances.sup_tol", "must stay below the tube radius");
    }
  }
  cfg.max_trials = get_or<int>(doc, "max_trials", cfg.max_trials, "config");
  if (cfg.max_trials < 0) fail("config.max_trials", "must be non-negative");

  std::set<std::string> names;
  if (doc.contains("members")) {
    const json& arr = doc["members"];
    if (!arr.is_array()) fail("members", "expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string where = "members[" + std::to_string(i) + "]";
      cfg.members.push_back(parse_member(arr[i], *cfg.manifold, where));
      if (!names.insert(cfg.members.back().name()).second) fail(where, "duplicate member name");
    }
  }

  std::set<std::string> ids;
  if (doc.contains("simplices")) {
    const json& arr = doc["simplices"];
    if (!arr.is_array()) fail("simplices", "expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string where = "simplices[" + std::to_string(i) + "]";
      const auto id = get<std::string>(arr[i], "id", where);
      if (!ids.insert(id).second) fail(where, "duplicate simplex id '" + id + "'");
      cfg.simplices.push_back({id, parse_simplex(arr[i], cfg.manifold, where)});
    }
  }

  if (doc.contains("chains")) {
    const json& arr = doc["chains"];
    if (!arr.is_array()) fail("chains", "expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string where = "chains[" + std::to_string(i) + "]";
      only_keys(arr[i], {"name", "dim", "terms"}, where);
      NamedChain c{get<std::string>(arr[i], "name", where), get<int>(arr[i], "dim", where), {}};
      const json& terms = require(arr[i], "terms", where);
      if (!terms.is_array()) fail(where + ".terms", "expected [[coefficient, id], ...]");
      for (std::size_t k = 0; k < terms.size(); ++k) {
        const std::string tw = where + ".terms[" + std::to_string(k) + "]";
        if (!terms[k].is_array() || terms[k].size() != 2 || !terms[k][0].is_number_integer() ||
            !terms[k][1].is_string()) {
          fail(tw, "expected [integer, id]");
        }
        const auto id = terms[k][1].get<std::string>();
        if (!ids.count(id)) fail(tw, "unknown simplex '" + id + "'");
        for (const auto& s : cfg.simplices) {
          if (s.id == id && s.map.dim() != c.dim) fail(tw, "simplex dimension differs from chain dimension");
        }
        c.terms.emplace_back(terms[k][0].get<long>(), id);
      }
      cfg.chains.push_back(std::move(c));
    }
  }

  if (doc.contains("generators")) {
    const json& arr = doc["generators"];
    if (!arr.is_array()) fail("generators", "expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string where = "generators[" + std::to_string(i) + "]";
      only_keys(arr[i], {"name", "kind", "member", "count", "seed"}, where);
      if (get<std::string>(arr[i], "kind", where) != "random_transverse_cubics") {
        fail(where + ".kind", "unknown generator kind");
      }
      if (cfg.manifold->kind() != ManifoldKind::Euclidean || cfg.manifold->ambient_dim() != 2) {
        fail(where, "random cubics live in the plane");
      }
      CubicGenerator g{get<std::string>(arr[i], "name", where), get<std::string>(arr[i], "member", where),
                       get<int>(arr[i], "count", where), get_or<std::uint64_t>(arr[i], "seed", cfg.seed, where)};
      cfg.member(g.member);
      if (g.count < 0) fail(where + ".count", "must be non-negative");
      cfg.generators.push_back(std::move(g));
    }
  }

  if (doc.contains("steps")) {
    const json& arr = doc["steps"];
    if (!arr.is_array()) fail("steps", "expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) validate_step(arr[i], cfg, "steps[" + std::to_string(i) + "]");
    cfg.steps = arr;
  }
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open config '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("invalid JSON in '") + path + "': " + e.what());
  }
  return parse_config(doc);
}

}  // namespace trx
