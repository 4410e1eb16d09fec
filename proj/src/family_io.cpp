#include "trx/family_io.hpp"

#include "trx/config.hpp"
#include "trx/errors.hpp"

namespace trx {

using nlohmann::json;

json family_to_json(const FiniteSingularFamily& fam) {
  const auto& o = fam.options();
  json members = json::array();
  for (const auto& T : fam.Ts()) members.push_back(T.name());
  json records = json::array();
  for (const auto& id : fam.ids()) {
    const auto& r = fam.record(id);
    json lift = json::array();
    for (const auto& c : r.map.lift().components()) lift.push_back(polynomial_to_json(c));
    records.push_back({{"id", r.id},
                       {"dim", r.dim},
                       {"status", to_string(r.status)},
                       {"nondegenerate", r.nondegenerate},
                       {"base", r.base_id},
                       {"collapse", r.collapse.values()},
                       {"faces", r.faces},
                       {"projected", r.map.projected()},
                       {"lift", lift},
                       {"seed", fam.record_seed(r.id)}});
  }
  json retractions = json::object();
  for (const auto& [id, p] : fam.retractions()) retractions[id] = p;
  return {{"schema_version", kSchemaVersion},
          {"kind", "family"},
          {"ambient", {{"kind", to_string(fam.ambient()->kind())}, {"ambient_dim", fam.ambient()->ambient_dim()}}},
          {"members", members},
          {"options",
           {{"tol_rank", o.transversality.tol_rank},
            {"tau_root", o.transversality.tau_root},
            {"sup_tol", o.sup_tol},
            {"max_trials", o.max_trials},
            {"seed", o.seed}}},
          {"records", records},
          {"retractions", retractions}};
}

FiniteSingularFamily family_from_json(const json& j, ManifoldPtr ambient, TCollection Ts) {
  try {
    if (j.at("schema_version").get<int>() != kSchemaVersion || j.at("kind") != "family") {
      throw SchemaError("not a version " + std::to_string(kSchemaVersion) + " family document");
    }
    if (j.at("ambient").at("kind") != to_string(ambient->kind()) ||
        j.at("ambient").at("ambient_dim").get<int>() != ambient->ambient_dim()) {
      throw SchemaError("family was serialized on a different ambient manifold");
    }
    const auto names = j.at("members").get<std::vector<std::string>>();
    if (names.size() != Ts.size()) throw SchemaError("member count differs from the serialized family");
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] != Ts[i].name()) throw SchemaError("member '" + names[i] + "' does not match '" + Ts[i].name() + "'");
    }

    const json& oj = j.at("options");
    RetractionOptions o;
    o.transversality.tol_rank = oj.at("tol_rank").get<double>();
    o.transversality.tau_root = oj.at("tau_root").get<double>();
    o.sup_tol = oj.at("sup_tol").get<double>();
    o.max_trials = oj.at("max_trials").get<int>();
    o.seed = oj.at("seed").get<std::uint64_t>();

    FiniteSingularFamily fam(ambient, std::move(Ts), o);
    const int N = ambient->ambient_dim();
    for (const auto& rj : j.at("records")) {
      const auto id = rj.at("id").get<std::string>();
      const int n = rj.at("dim").get<int>();
      const std::string where = "records[" + id + "]";
      std::vector<Polynomial> comps;
      for (const auto& pj : rj.at("lift")) comps.push_back(parse_polynomial(pj, n, where + ".lift"));
      if (static_cast<int>(comps.size()) != N) throw SchemaError(where + ": lift has the wrong number of components");
      const SmoothSimplexMap map(n, ambient, PolyMap(n, std::move(comps)), rj.at("projected").get<bool>());

      const auto got = fam.add(map, id);
      const auto& r = fam.record(got);
      if (got != id) throw SchemaError(where + ": rebuilt as '" + got + "'");
      if (to_string(r.status) != rj.at("status").get<std::string>()) {
        throw SchemaError(where + ": status recomputed as " + to_string(r.status));
      }
      if (r.base_id != rj.at("base").get<std::string>() ||
          r.collapse.values() != rj.at("collapse").get<std::vector<int>>() ||
          r.faces != rj.at("faces").get<std::vector<std::string>>()) {
        throw SchemaError(where + ": face or factorization data differs");
      }
    }
    return fam;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed family document: ") + e.what());
  }
}

}  // namespace trx
