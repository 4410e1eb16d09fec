#include "trx/scenario.hpp"

#include "trx/cochain.hpp"
#include "trx/errors.hpp"
#include "trx/family_io.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <cctype>

namespace trx {

using nlohmann::json;

namespace {

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json vec_json(const Vec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

json point_json(const IntersectionPoint& p) {
  json out = {{"x", vec_json(p.x)}, {"z", vec_json(p.z)}, {"depth", p.k},
              {"residual", p.residual}, {"min_singular_value", number(p.min_singular_value)}};
  if (p.sign) out["sign"] = *p.sign;
  return out;
}

class CsvSink {
 public:
  explicit CsvSink(const std::optional<std::string>& dir) : dir_(dir) {
    if (dir_) std::filesystem::create_directories(*dir_);
  }

  bool enabled() const { return dir_.has_value(); }

  /// Writes `rows` under `name`, returning the path written.
  std::string write(const std::string& name, const std::vector<std::string>& header,
                    const std::vector<std::vector<std::string>>& rows) const {
    const auto path = (std::filesystem::path(*dir_) / name).string();
    std::ofstream out(path);
    if (!out) throw SchemaError("cannot write '" + path + "'");
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
      out << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return path;
  }

 private:
  std::optional<std::string> dir_;
};

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

std::string safe_name(const std::string& id) {
  std::string out = id;
  for (char& c : out) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '_';
  }
  return out;
}

struct Context {
  const ScenarioConfig& cfg;
  FiniteSingularFamily fam;
  std::map<std::string, std::string> ids;  // config id -> record id
  CsvSink csv;

  const SmoothSimplexMap& map_of(const std::string& id) const {
    for (const auto& s : cfg.simplices) {
      if (s.id == id) return s.map;
    }
    throw SchemaError("unknown simplex '" + id + "'");
  }

  Chain chain_of(const std::string& name) const {
    for (const auto& c : cfg.chains) {
      if (c.name != name) continue;
      Chain out{c.dim, {}};
      for (const auto& [coef, id] : c.terms) out.terms.emplace_back(coef, ids.at(id));
      return out.normalized();
    }
    throw SchemaError("unknown chain '" + name + "'");
  }
};

/// Compares an optional expectation against an observed flag.
bool meets(const json& step, const char* key, bool observed, json& entry) {
  if (!step.contains(key)) return true;
  const bool expected = step[key].get<bool>();
  entry[key] = expected;
  return expected == observed;
}

bool step_check(Context& ctx, const json& step, json& entry) {
  const auto id = step["simplex"].get<std::string>();
  const auto& sigma = ctx.map_of(id);
  const auto opts = ctx.cfg.transversality();
  bool transverse = true;
  double min_sv = std::numeric_limits<double>::infinity();
  json members = json::array();
  auto record = [&](const std::string& name, const PairVerdict& v) {
    json pts = json::array();
    for (const auto& p : v.report.points) pts.push_back(point_json(p));
    members.push_back({{"member", name}, {"transverse", v.transverse},
                       {"min_singular_value", number(v.min_singular_value)}, {"points", pts}});
    transverse = transverse && v.transverse;
    min_sv = std::min(min_sv, v.min_singular_value);
  };
  if (step.contains("member")) {
    const auto& T = ctx.cfg.member(step["member"].get<std::string>());
    record(T.name(), is_transverse_pair(sigma, T, opts));
  } else {
    for (const auto& T : ctx.cfg.members) record(T.name(), is_transverse_pair(sigma, T, opts));
  }
  entry["transverse"] = transverse;
  entry["min_singular_value"] = number(min_sv);
  entry["members"] = members;
  return meets(step, "expect_transverse", transverse, entry);
}

bool step_perturb(Context& ctx, const json& step, json& entry, std::size_t index) {
  const auto id = step["simplex"].get<std::string>();
  const bool expect_success = step.value("expect_success", true);
  entry["expect_success"] = expect_success;
  const std::uint64_t seed = splitmix64(ctx.cfg.seed + 0x9e3779b97f4a7c15ULL * (index + 1));
  try {
    const auto r = perturb_to_transverse(ctx.map_of(id), ctx.cfg.members, seed, ctx.cfg.max_trials,
                                         ctx.cfg.transversality());
    entry["succeeded"] = true;
    entry["trials_used"] = r.trials_used;
    entry["trial_seed"] = r.trial_seed;
    entry["eps"] = r.eps;
    entry["s"] = vec_json(r.s);
    entry["boundary_precondition_met"] = r.boundary_precondition_met;
    entry["min_singular_value"] = number(r.verdict.min_singular_value);
    return expect_success;
  } catch (const TrialsExhausted& e) {
    entry["succeeded"] = false;
    entry["error"] = {{"code", e.code()}, {"message", e.what()}};
    return !expect_success;
  }
}

bool step_retract(Context& ctx, const json& step, json& entry) {
  const auto cfg_id = step["simplex"].get<std::string>();
  const auto& id = ctx.ids.at(cfg_id);
  const auto p = ctx.fam.retract(id);
  const auto& rec = ctx.fam.record(id);
  const auto track = ctx.fam.build_homotopy(id);
  entry["record"] = id;
  entry["retracted"] = p;
  entry["status"] = to_string(rec.status);
  entry["nondegenerate"] = rec.nondegenerate;
  json stages = json::array();
  std::vector<double> breaks;
  for (const auto& s : track->stages()) {
    stages.push_back({{"kind", to_string(s.kind)}, {"a", s.a}, {"b", s.b}});
    breaks.push_back(s.a);
    if (const auto* ts = std::get_if<TransversalityStage>(&s.payload)) {
      stages.back()["trials_used"] = ts->trials_used;
    }
    if (const auto* ss = std::get_if<SmoothingStage>(&s.payload)) {
      stages.back()["sup_error"] = ss->sup_error;
      stages.back()["residual_degree"] = ss->residual_degree;
    }
  }
  entry["stages"] = stages;
  if (ctx.csv.enabled()) {
    const int n = rec.dim;
    const Vec bary = Vec::Constant(n, 1.0 / (n + 1));
    std::set<double> ts;
    for (int i = 0; i <= 40; ++i) ts.insert(i / 40.0);
    for (double b : breaks) ts.insert(b);
    std::vector<std::vector<std::string>> rows;
    const int N = ctx.cfg.manifold->ambient_dim();
    for (double t : ts) {
      const Vec z = track->eval(t, bary);
      std::vector<std::string> row{fmt(t)};
      for (int c = 0; c < N; ++c) row.push_back(fmt(z[c]));
      rows.push_back(std::move(row));
    }
    std::vector<std::string> header{"t"};
    for (int c = 0; c < N; ++c) header.push_back("z" + std::to_string(c));
    entry["csv"] = ctx.csv.write("track_" + safe_name(cfg_id) + ".csv", header, rows);
  }
  return meets(step, "expect_identity", p == id, entry);
}

bool step_cocycle(Context& ctx, const json& step, json& entry) {
  const auto& W = ctx.cfg.member(step["member"].get<std::string>());
  const auto opts = ctx.cfg.transversality();
  std::vector<std::string> taus;
  if (step.contains("simplex")) {
    taus.push_back(ctx.ids.at(step["simplex"].get<std::string>()));
  } else {
    const auto name = step["generator"].get<std::string>();
    for (const auto& g : ctx.cfg.generators) {
      if (g.name != name) continue;
      int attempts = 0;
      const auto maps =
          random_transverse_cubics(ctx.cfg.manifold, ctx.cfg.member(g.member), g.seed, g.count, opts, &attempts);
      entry["generated"] = maps.size();
      entry["attempts"] = attempts;
      for (std::size_t i = 0; i < maps.size(); ++i) {
        taus.push_back(ctx.fam.add(maps[i], name + "_" + std::to_string(i)));
      }
      if (static_cast<int>(maps.size()) < g.count) {
        entry["error"] = {{"code", "ToleranceUnreachable"},
                          {"message", "generator produced fewer transverse cubics than requested"}};
        return false;
      }
    }
  }
  long worst = 0;
  json values = json::array();
  for (const auto& tau : taus) {
    const auto r = cocycle_check(W, ctx.fam, tau, opts);
    values.push_back({{"simplex", tau}, {"value", r.value}, {"face_counts", r.face_counts}});
    worst = std::max(worst, std::labs(r.value));
  }
  entry["simplices"] = values;
  entry["max_abs_value"] = worst;
  return worst == 0;
}

bool step_duality(Context& ctx, const json& step, json& entry) {
  const auto& W = ctx.cfg.member(step["member"].get<std::string>());
  const auto opts = ctx.cfg.transversality();
  const auto chain_name = step["chain"].get<std::string>();
  const Chain c = ctx.chain_of(chain_name);
  const bool pullback = step.value("pullback", true);
  const Chain evaluated = pullback ? retract_chain(ctx.fam, c) : c;

  long value = 0;
  std::vector<std::vector<std::string>> rows;
  json terms = json::array();
  for (std::size_t i = 0; i < evaluated.terms.size(); ++i) {
    const auto& [coef, id] = evaluated.terms[i];
    const auto r = iota_W(W, ctx.fam.record(id).map, opts);
    value += coef * r.value;
    terms.push_back({{"coefficient", coef}, {"simplex", id}, {"iota", r.value}});
    for (const auto& p : r.points) {
      std::vector<std::string> row{id, std::to_string(coef)};
      for (Eigen::Index k = 0; k < p.x.size(); ++k) row.push_back(fmt(p.x[k]));
      row.push_back(std::to_string(p.sign.value_or(0)));
      row.push_back(fmt(p.min_singular_value));
      rows.push_back(std::move(row));
    }
  }
  entry["pullback"] = pullback;
  entry["terms"] = terms;
  entry["value"] = value;
  if (ctx.csv.enabled()) {
    std::vector<std::string> header{"simplex", "coefficient"};
    for (int k = 0; k < c.dim; ++k) header.push_back("x" + std::to_string(k));
    header.push_back("sign");
    header.push_back("min_singular_value");
    entry["csv"] = ctx.csv.write("signs_" + safe_name(chain_name) + ".csv", header, rows);
  }
  bool ok = true;
  if (step.contains("expect")) {
    entry["expect"] = step["expect"];
    ok = ok && value == step["expect"].get<long>();
  }
  if (step.contains("expect_abs")) {
    entry["expect_abs"] = step["expect_abs"];
    ok = ok && std::labs(value) == step["expect_abs"].get<long>();
  }
  return ok;
}

}  // namespace

ScenarioOutcome run_scenario(const ScenarioConfig& cfg, const std::optional<std::string>& csv_dir) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  Context ctx{cfg, FiniteSingularFamily(cfg.manifold, cfg.members, cfg.retraction()), {}, CsvSink(csv_dir)};
  for (const auto& s : cfg.simplices) ctx.ids[s.id] = ctx.fam.add(s.map, s.id);

  json steps = json::array();
  json step_times = json::array();
  bool all = true;
  for (std::size_t i = 0; i < cfg.steps.size(); ++i) {
    const json& step = cfg.steps[i];
    const auto op = step["op"].get<std::string>();
    json entry = {{"index", i}, {"op", op}};
    for (const char* key : {"simplex", "member", "chain", "generator"}) {
      if (step.contains(key)) entry[key] = step[key];
    }
    const auto t0 = clock::now();
    bool ok = false;
    try {
      if (op == "check") ok = step_check(ctx, step, entry);
      else if (op == "perturb") ok = step_perturb(ctx, step, entry, i);
      else if (op == "retract") ok = step_retract(ctx, step, entry);
      else if (op == "cocycle") ok = step_cocycle(ctx, step, entry);
      else if (op == "duality") ok = step_duality(ctx, step, entry);
    } catch (const SchemaError&) {
      throw;
    } catch (const Error& e) {
      entry["error"] = {{"code", e.code()}, {"message", e.what()}};
      ok = false;
    }
    entry["passed"] = ok;
    all = all && ok;
    steps.push_back(std::move(entry));
    step_times.push_back(std::chrono::duration<double>(clock::now() - t0).count());
  }


  ScenarioOutcome out;
  out.passed = all;
  out.report = {{"schema_version", kSchemaVersion},
                {"kind", "scenario"},
                {"name", cfg.name},
                {"seed", cfg.seed},
                {"manifold", to_string(cfg.manifold->kind())},
                {"tolerances",
                 {{"tol_rank", cfg.tolerances.tol_rank},
                  {"tau_root", cfg.tolerances.tau_root},
                  {"sup_tol", cfg.tolerances.sup_tol}}},
                {"max_trials", cfg.max_trials},
                {"steps", steps},
                {"family", family_to_json(ctx.fam)},
                {"passed", all},
                {"timings",
                 {{"steps", step_times}, {"total", std::chrono::duration<double>(clock::now() - start).count()}}}};
  return out;
}

SuiteSettings suite_settings(const ScenarioConfig& cfg) {
  SuiteSettings s;
  s.seed = cfg.seed;
  s.transversality = cfg.transversality();
  s.sup_tol = cfg.tolerances.sup_tol;
  s.max_trials = cfg.max_trials;
  return s;
}

ScenarioOutcome verify_suite(const ScenarioConfig& cfg) {
  const auto s = suite_settings(cfg);
  const auto results = run_battery(s);
  ScenarioOutcome out;
  out.report = battery_report(s, results);
  out.passed = out.report["passed"].get<bool>();
  return out;
}

}  // namespace trx
