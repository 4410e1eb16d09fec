// Acceptance run: one line per criterion, thresholds fixed below.
#include "trx/battery.hpp"

#include <cmath>
#include <cstdio>
#include <string>

using namespace trx;
using nlohmann::json;

namespace {

constexpr std::uint64_t kSeed = 42;
constexpr double kExactness = 1e-10;
constexpr double kBoundaryDisplacement = 1e-12;
constexpr double kMinSingularValue = 1e-6;
constexpr double kHomotopyStart = 1e-11;
constexpr int kMaxTrials = 10;
constexpr double kEndpoint = 1e-9;
constexpr double kNaturality = 1e-9;
constexpr double kConstancy = 1e-12;
constexpr double kBarycentricMargin = 1e-6;

const CheckResult& find(const std::vector<CheckResult>& rs, const std::string& name) {
  for (const auto& r : rs) {
    if (r.name == name) return r;
  }
  std::fprintf(stderr, "missing check %s\n", name.c_str());
  std::exit(2);
}

double num(const json& m, const char* key) {
  const auto& v = m.at(key);
  return v.is_null() ? std::numeric_limits<double>::infinity() : v.get<double>();
}

int failures = 0;

void report(int id, const char* title, bool ok, const std::string& detail) {
  std::printf("criterion %d %-32s %s  %s\n", id, title, ok ? "PASS" : "FAIL", detail.c_str());
  failures += ok ? 0 : 1;
}

std::string fmt(const char* pattern, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c, d);
  return buf;
}

}  // namespace

int main() {
  SuiteSettings s;
  s.seed = kSeed;
  s.max_trials = kMaxTrials;
  const auto results = run_battery(s);

  {
    const auto& r = find(results, "corner_extension_exactness");
    const double err = num(r.metrics, "max_error");
    report(1, "corner-extension exactness", r.passed && err <= kExactness && r.seconds <= 10.0,
           fmt("max_error=%.3g runtime=%.2fs (limit 10s)", err, r.seconds));
  }
  {
    const auto& r = find(results, "restriction_telescoping");
    const double err = num(r.metrics, "max_error");
    report(2, "restriction telescoping", r.passed && err <= kExactness, fmt("max_error=%.3g", err));
  }
  {
    const auto& r = find(results, "perturbation_contract");
    bool ok = r.passed && r.seconds <= 60.0 && r.error_code.empty();
    std::string detail = r.error_code;
    if (r.error_code.empty()) {
      const double cases = num(r.metrics, "cases");
      const double trials = num(r.metrics, "max_trials_used");
      const double disp = num(r.metrics, "max_boundary_displacement");
      const double sv = num(r.metrics, "min_singular_value");
      const double start = num(r.metrics, "max_homotopy_start_error");
      ok = ok && cases == 20 && trials <= kMaxTrials && disp <= kBoundaryDisplacement && sv >= kMinSingularValue &&
           start <= kHomotopyStart;
      detail = fmt("cases=%.0f max_trials_used=%.0f boundary=%.3g min_sv=%.3g", cases, trials, disp, sv) +
               fmt(" start=%.3g runtime=%.2fs (limit 60s)", start, r.seconds);
    }
    report(3, "perturbation contract", ok, detail);
  }
  {
    const auto& r = find(results, "cocycle_zero");
    bool ok = r.passed && r.seconds <= 30.0 && r.error_code.empty();
    std::string detail = r.error_code;
    if (r.error_code.empty()) {
      const double n = num(r.metrics, "simplices");
      const double nz = num(r.metrics, "nonzero_cocycle_values");
      const double mm = num(r.metrics, "oracle_mismatches");
      ok = ok && n == 50 && nz == 0 && mm == 0;
      detail = fmt("simplices=%.0f nonzero=%.0f oracle_mismatches=%.0f runtime=%.2fs (limit 30s)", n, nz, mm,
                   r.seconds);
    }
    report(4, "cocycle zero", ok, detail);
  }
  {
    const auto& r = find(results, "torus_duality");
    bool ok = r.passed && r.seconds <= 60.0 && r.error_code.empty();
    std::string detail = r.error_code;
    if (r.error_code.empty()) {
      const double lon = num(r.metrics, "longitude");
      const double mer = num(r.metrics, "meridian_pullback");
      const double tan = num(r.metrics, "tangent_longitude_pullback");
      ok = ok && std::abs(lon) == 1 && mer == 0 && tan == lon;
      detail = fmt("longitude=%+.0f meridian=%.0f tangent_pullback=%+.0f runtime=%.2fs (limit 60s)", lon, mer, tan,
                   r.seconds);
    }
    report(5, "torus duality", ok, detail);
  }
  {
    const auto& r = find(results, "retraction_identities");
    bool ok = r.passed && r.error_code.empty();
    std::string detail = r.error_code;
    if (r.error_code.empty()) {
      const double id = num(r.metrics, "identity_failures");
      const double h0 = num(r.metrics, "H_start_error");
      const double h1 = num(r.metrics, "H_end_error");
      const double nat = num(r.metrics, "naturality_error");
      const double con = num(r.metrics, "constancy_error");
      ok = ok && id == 0 && h0 == 0.0 && h1 <= kEndpoint && nat <= kNaturality && con <= kConstancy;
      detail = fmt("p_i_failures=%.0f H(0)=%.3g H(1)=%.3g", id, h0, h1) +
               fmt(" naturality=%.3g constancy=%.3g", nat, con);
    }
    report(6, "retraction identities", ok, detail);
  }
  {
    const auto& r = find(results, "stratum_vacuity");
    bool ok = r.passed && r.error_code.empty();
    std::string detail = r.error_code;
    if (r.error_code.empty()) {
      const double b = num(r.metrics, "boundary_intersections");
      const double c = num(r.metrics, "counted_points");
      const double m = num(r.metrics, "min_barycentric");
      ok = ok && b == 0 && c > 0 && m >= kBarycentricMargin;
      detail = fmt("boundary_points=%.0f counted=%.0f min_barycentric=%.3g", b, c, m);
    }
    report(7, "stratum vacuity", ok, detail);
  }
  {
    const auto first = strip_timings(battery_report(s, results)).dump();
    const auto second = strip_timings(battery_report(s, run_battery(s))).dump();
    report(8, "determinism", first == second, fmt("report bytes=%.0f", static_cast<double>(first.size())));
  }

  std::printf("%s\n", failures == 0 ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL");
  return failures == 0 ? 0 : 1;
}
