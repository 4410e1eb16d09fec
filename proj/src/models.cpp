#include "trx/models.hpp"

#include "trx/errors.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace trx {

namespace {

constexpr int kArcDegree = 6;

// Degree-6 interpolant of a curve R -> R^4 at Chebyshev-Lobatto nodes of [0,1].
PolyMap interpolate_curve(const std::function<Vec(double)>& curve) {
  const int m = kArcDegree + 1;
  Mat V(m, m);
  Mat Y(m, 4);
  for (int k = 0; k < m; ++k) {
    const double t = 0.5 * (1.0 - std::cos(k * std::numbers::pi / kArcDegree));
    for (int p = 0; p < m; ++p) V(k, p) = std::pow(t, p);
    Y.row(k) = curve(t).transpose();
  }
  const Mat C = V.fullPivLu().solve(Y);
  std::vector<Polynomial> comps;
  for (int c = 0; c < 4; ++c) {
    std::vector<Term> terms;
    for (int p = 0; p < m; ++p) {
      Exponent e{};
      e[0] = static_cast<std::uint8_t>(p);
      terms.push_back(Term{e, C(p, c)});
    }
    comps.emplace_back(1, std::move(terms));
  }
  return PolyMap(1, std::move(comps));
}

}  // namespace

Vec torus_point(double a, double b) {
  const double r = AmbientManifold::torus_radius();
  Vec z(4);
  z << r * std::cos(a), r * std::sin(a), r * std::cos(b), r * std::sin(b);
  return z;
}

SmoothSimplexMap torus_arc(const ManifoldPtr& torus, double a0, double a1, double b0, double b1) {
  if (torus->kind() != ManifoldKind::CliffordTorus) throw SchemaError("torus arc needs the Clifford torus");
  PolyMap lift = interpolate_curve([&](double t) { return torus_point(a0 + t * (a1 - a0), b0 + t * (b1 - b0)); });
  return SmoothSimplexMap(1, torus, std::move(lift), true);
}

CornerManifold torus_meridian() {
  const int N = 4;
  PolyMap G(N, {Polynomial::variable(N, 1)});
  std::vector<Polynomial> h{Polynomial::variable(N, 0)};
  PolyMap frame(N, {Polynomial::variable(N, 1) * -1.0, Polynomial::variable(N, 0), Polynomial(N),
                    Polynomial(N)});
  return CornerManifold::level_set("meridian", std::move(G), std::move(h), {std::move(frame)});
}

std::vector<SmoothSimplexMap> longitude_arcs(const ManifoldPtr& torus, double b) {
  const double pi = std::numbers::pi;
  return {torus_arc(torus, pi / 3, pi, b, b), torus_arc(torus, pi, 5 * pi / 3, b, b),
          torus_arc(torus, 5 * pi / 3, 7 * pi / 3, b, b)};
}

std::vector<SmoothSimplexMap> meridian_arcs(const ManifoldPtr& torus, double a) {
  const double pi = std::numbers::pi;
  return {torus_arc(torus, a, a, pi / 3, pi), torus_arc(torus, a, a, pi, 5 * pi / 3),
          torus_arc(torus, a, a, 5 * pi / 3, 7 * pi / 3)};
}

SmoothSimplexMap tangent_longitude_piece(const ManifoldPtr& torus, double b) {
  const double r = AmbientManifold::torus_radius();
  const int n = 1;
  const Polynomial t = Polynomial::variable(n, 0);
  const Polynomial one = Polynomial::constant(n, 1.0);
  const Polynomial w = t * 2.0 - one;
  std::vector<Polynomial> comps{Polynomial::constant(n, r / 2) + t * (one - t) * (2 * r),
                                w * w * w * (r * std::sqrt(3.0) / 2),
                                Polynomial::constant(n, r * std::cos(b)), Polynomial::constant(n, r * std::sin(b))};
  // Endpoints land on the torus at theta_1 = -pi/3 and pi/3.
  return SmoothSimplexMap(1, torus, PolyMap(n, std::move(comps)), true);
}

PolyMap random_polymap(std::uint64_t seed, int nvars, int ncomp, int deg, double scale) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, scale);
  const auto monos = graded_monomials(nvars, deg);
  std::vector<Polynomial> comps;
  for (int c = 0; c < ncomp; ++c) {
    std::vector<Term> terms;
    for (const auto& e : monos) terms.push_back(Term{e, normal(gen)});
    comps.emplace_back(nvars, std::move(terms));
  }
  return PolyMap(nvars, std::move(comps));
}

std::vector<SmoothSimplexMap> random_transverse_cubics(const ManifoldPtr& plane, const CornerManifold& origin,
                                                       std::uint64_t seed, int count,
                                                       const TransversalityOptions& opts, int* attempts) {
  std::vector<SmoothSimplexMap> out;
  int tries = 0;
  for (std::uint64_t k = 0; static_cast<int>(out.size()) < count && tries < 50 * count; ++k) {
    ++tries;
    PolyMap lift = random_polymap(splitmix64(seed + k), 3, 2, 3, 1.0);
    // Recentre so the barycenter maps to the origin.
    const Vec shift = -lift.eval(Vec::Constant(3, 0.25));
    SmoothSimplexMap tau(3, plane, lift + PolyMap::constant(3, shift), false);
    if (is_transverse_pair(tau, origin, opts).transverse) out.push_back(std::move(tau));
  }
  if (attempts) *attempts = tries;
  return out;
}

SmoothSimplexMap plane_fold(const ManifoldPtr& plane) {
  const int n = 2;
  const Polynomial third = Polynomial::constant(n, 1.0 / 3.0);
  const Polynomial u = Polynomial::variable(n, 0) - third;
  const Polynomial v = Polynomial::variable(n, 1) - third;
  return SmoothSimplexMap(2, plane, PolyMap(n, {u, v * v}), false);
}

}  // namespace trx
