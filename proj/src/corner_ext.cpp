#include "trx/corner_ext.hpp"

#include "trx/errors.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <sstream>

namespace trx {

namespace {

// Lattice points of [0,1]^n with spacing 1/res and x_j = 0 for every j in `zero_mask`.
std::vector<Vec> corner_subgrid(int n, int res, std::uint32_t zero_mask) {
  std::vector<Vec> out;
  Vec x = Vec::Zero(n);
  auto rec = [&](auto&& self, int var) -> void {
    if (var == n) {
      out.push_back(x);
      return;
    }
    if ((zero_mask >> var) & 1u) {
      x[var] = 0.0;
      self(self, var + 1);
      return;
    }
    for (int p = 0; p <= res; ++p) {
      x[var] = static_cast<double>(p) / res;
      self(self, var + 1);
    }
  };
  rec(rec, 0);
  return out;
}

bool close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

std::vector<Vec> corner_grid(int n, int res) { return corner_subgrid(n, res, 0u); }

void check_corner_compatibility(const CornerData& data, double tol, int res) {
  if (data.k < 1 || data.k > data.n || static_cast<int>(data.faces.size()) != data.k) {
    throw SchemaError("corner data needs 1 <= k <= n and exactly k faces");
  }
  for (std::uint32_t mask = 1; mask < (1u << data.k); ++mask) {
    if (std::popcount(mask) < 2) continue;
    const int first = std::countr_zero(mask);
    for (const auto& x : corner_subgrid(data.n, res, mask)) {
      const double ref = data.faces[first].eval(x);
      for (int j = first + 1; j < data.k; ++j) {
        if (!((mask >> j) & 1u)) continue;
        const double v = data.faces[j].eval(x);
        if (!close(ref, v, tol)) {
          std::ostringstream os;
          os << "faces " << first << " and " << j << " disagree by " << std::abs(ref - v)
             << " on their common corner";
          throw IncompatibleFaces(os.str());
        }
      }
    }
  }
}

Polynomial extend_from_corner(const CornerData& data, bool check) {
  if (check) check_corner_compatibility(data);
  Polynomial F(data.n);
  for (std::uint32_t mask = 1; mask < (1u << data.k); ++mask) {
    const double sign = (std::popcount(mask) % 2 == 0) ? -1.0 : 1.0;  // -(-1)^{|J|}
    F += data.faces[std::countr_zero(mask)].zero_vars(mask) * sign;
  }
  return F;
}

CornerData corner_data_from_global(const Polynomial& g, int k) {
  CornerData d{g.nvars(), k, {}};
  for (int j = 0; j < k; ++j) d.faces.push_back(g.zero_vars(1u << j));
  return d;
}

double verify_restriction_identity(const CornerData& data, int i, const std::vector<Vec>& grid) {
  const Polynomial F = extend_from_corner(data, false);
  double worst = 0.0;
  for (const auto& x : grid) {
    Vec y = x;
    y[i] = 0.0;
    for (int j = 0; j < data.k; ++j) y[j] = std::max(y[j], 0.0);
    worst = std::max(worst, std::abs(F.eval(y) - data.faces[i].eval(y)));
  }
  return worst;
}

PolyMap boundary_interpolant(int n, const std::vector<SmoothSimplexMap>& facets) {
  if (n < 1 || static_cast<int>(facets.size()) != n + 1) {
    throw SchemaError("boundary interpolant needs n+1 facets of an n-simplex");
  }
  const int N = facets.front().lift().dim();
  int D = 1;
  for (const auto& f : facets) D = std::max(D, f.lift().degree());

  const int vars = n + 1;  // barycentric coordinates lambda_0..lambda_n
  std::vector<Polynomial> comps;
  for (int c = 0; c < N; ++c) {
    CornerData data{vars, vars, {}};
    for (int i = 0; i <= n; ++i) {
      // Face vertex k sits at simplex vertex k (k < i) or k + 1 (k >= i); the
      // face Cartesian coordinate y_k is its barycentric coordinate mu_k.
      auto lambda_index = [i](int k) { return k < i ? k : k + 1; };
      std::vector<Polynomial> subs;
      Polynomial total(vars);
      for (int k = 0; k < n; ++k) {
        total += Polynomial::variable(vars, lambda_index(k));
        if (k >= 1) subs.push_back(Polynomial::variable(vars, lambda_index(k)));
      }
      const Polynomial& q = facets[i].lift()[c];
      // Homogenize to degree D using mu_0 + ... + mu_{n-1} = 1 on the face.
      std::vector<Polynomial> total_pow{Polynomial::constant(vars, 1.0)};
      for (int p = 1; p <= D; ++p) total_pow.push_back(total_pow.back() * total);
      Polynomial hom(vars);
      for (const auto& t : q.terms()) {
        int deg = 0;
        for (auto e : t.exp) deg += e;
        const Polynomial mono = Polynomial(q.nvars(), {t}).compose(subs.empty()
                                                                       ? std::vector<Polynomial>{}
                                                                       : subs);
        // compose() on a 0-variable polynomial yields a 0-variable constant.
        const Polynomial lifted = mono.nvars() == vars ? mono : Polynomial::constant(vars, t.coeff);
        hom += lifted * total_pow[D - deg];
      }
      data.faces.push_back(hom);
    }
    check_corner_compatibility(data, 1e-9, 4);
    const Polynomial F = extend_from_corner(data, false);
    // Restrict to the slice sum(lambda) = 1 in Cartesian coordinates.
    std::vector<Polynomial> slice;
    std::vector<Term> l0{Term{Exponent{}, 1.0}};
    for (int j = 0; j < n; ++j) {
      Exponent e{};
      e[j] = 1;
      l0.push_back(Term{e, -1.0});
    }
    slice.emplace_back(n, std::move(l0));
    for (int j = 0; j < n; ++j) slice.push_back(Polynomial::variable(n, j));
    comps.push_back(F.compose(slice).pruned(kCoefficientNoise));
  }
  return PolyMap(n, std::move(comps));
}

namespace {

struct LatticeResolution {
  int fit;
  int check;
};

LatticeResolution lattice_for(int n) {
  switch (n) {
    case 1: return {40, 200};
    case 2: return {20, 40};
    case 3: return {10, 16};
    default: return {8, 10};
  }
}

double sup_distance(const SmoothSimplexMap& map, const PiecewiseMap& sigma, int res) {
  double worst = 0.0;
  for (const auto& x : simplex_lattice(sigma.dim, res)) {
    try {
      worst = std::max(worst, (map.eval(x) - sigma(x)).norm());
    } catch (const OutOfTube&) {
      return std::numeric_limits<double>::infinity();
    }
  }
  return worst;
}

double facet_distance(const SmoothSimplexMap& map, const PiecewiseMap& sigma) {
  double worst = 0.0;
  const int n = sigma.dim;
  for (int i = 0; i <= n; ++i) {
    const AffineMap face = realize_morphism(DeltaMorphism::coface(n, i));
    for (const auto& y : simplex_lattice(n - 1, 10)) {
      worst = std::max(worst, (map.eval(face(y)) - sigma.facets[i].eval(y)).norm());
    }
  }
  return worst;
}

}  // namespace

SmoothingResult smooth_rel_boundary(const PiecewiseMap& sigma, double tol) {
  if (sigma.exact) {
    return {*sigma.exact, 0.0, 0.0, -1, true};
  }
  const int n = sigma.dim;
  if (n < 1) throw SchemaError("smoothing needs n >= 1");
  if (static_cast<int>(sigma.facets.size()) != n + 1) throw SchemaError("smoothing needs n+1 facets");
  const bool curved = sigma.ambient->kind() != ManifoldKind::Euclidean;
  const int N = sigma.ambient->ambient_dim();

  const PolyMap E = boundary_interpolant(n, sigma.facets);
  const Polynomial bump = barycentric_bump(n);
  const auto res = lattice_for(n);
  const auto fit_points = simplex_lattice(n, res.fit);

  Mat residual(static_cast<Eigen::Index>(fit_points.size()), N);
  for (std::size_t r = 0; r < fit_points.size(); ++r) {
    residual.row(static_cast<Eigen::Index>(r)) = (sigma(fit_points[r]) - E.eval(fit_points[r])).transpose();
  }

  double best = std::numeric_limits<double>::infinity();
  const int max_q = kMaxPolynomialDegree - (n + 1);
  for (int dq = -1; dq <= max_q; ++dq) {
    PolyMap lift = E;
    if (dq >= 0) {
      const auto monos = graded_monomials(n, dq);
      Mat A(residual.rows(), static_cast<Eigen::Index>(monos.size()));
      for (std::size_t r = 0; r < fit_points.size(); ++r) {
        const double b = bump.eval(fit_points[r]);
        for (std::size_t j = 0; j < monos.size(); ++j) {
          A(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) =
              b * Polynomial(n, {Term{monos[j], 1.0}}).eval(fit_points[r]);
        }
      }
      const Mat C = A.colPivHouseholderQr().solve(residual);
      std::vector<Polynomial> comps;
      for (int c = 0; c < N; ++c) {
        std::vector<Term> terms;
        for (std::size_t j = 0; j < monos.size(); ++j) {
          terms.push_back(Term{monos[j], C(static_cast<Eigen::Index>(j), c)});
        }
        comps.push_back(E[c] + bump * Polynomial(n, std::move(terms)));
      }
      lift = PolyMap(n, std::move(comps));
    }
    SmoothSimplexMap candidate(n, sigma.ambient, lift, curved);
    const double err = sup_distance(candidate, sigma, res.check);
    best = std::min(best, err);
    if (err <= tol) {
      return {candidate, err, facet_distance(candidate, sigma), dq, false};
    }
  }
  std::ostringstream os;
  os << "best sup distance " << best << " exceeds tolerance " << tol << " at residual degree "
     << max_q;
  throw ToleranceUnreachable(os.str());
}

}  // namespace trx
