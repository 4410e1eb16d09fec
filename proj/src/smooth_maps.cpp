#include "trx/smooth_maps.hpp"

#include "trx/errors.hpp"

#include <cmath>

namespace trx {

SmoothSimplexMap::SmoothSimplexMap(int dim, ManifoldPtr ambient, PolyMap lift, bool projected)
    : dim_(dim), ambient_(std::move(ambient)), lift_(std::move(lift)), projected_(projected) {
  if (!ambient_) throw SchemaError("simplex map needs an ambient manifold");
  if (lift_.nvars() != dim_) {
    if (lift_.nvars() < dim_) {
      lift_ = PolyMap(dim_, lift_.components());
    } else {
      throw SchemaError("lift has more variables than the simplex dimension");
    }
  }
  if (lift_.dim() != ambient_->ambient_dim()) throw SchemaError("lift target dimension differs from N");
  if (lift_.degree() > kMaxLiftDegree) throw SchemaError("lift degree exceeds the supported cap");
  if (ambient_->kind() == ManifoldKind::Euclidean) projected_ = false;
}

SmoothSimplexMap SmoothSimplexMap::constant(int dim, ManifoldPtr ambient, const Vec& point) {
  auto M = ambient;
  return {dim, std::move(ambient), PolyMap::constant(dim, point),
          M->kind() != ManifoldKind::Euclidean};
}

SmoothSimplexMap SmoothSimplexMap::affine(ManifoldPtr ambient, const std::vector<Vec>& vertices) {
  if (vertices.empty()) throw SchemaError("affine simplex needs vertices");
  const int n = static_cast<int>(vertices.size()) - 1;
  const int N = ambient->ambient_dim();
  std::vector<Polynomial> comps;
  for (int c = 0; c < N; ++c) {
    std::vector<Term> terms{Term{Exponent{}, vertices[0][c]}};
    for (int i = 1; i <= n; ++i) {
      Exponent e{};
      e[i - 1] = 1;
      terms.push_back(Term{e, vertices[i][c] - vertices[0][c]});
    }
    comps.emplace_back(n, std::move(terms));
  }
  const bool curved = ambient->kind() != ManifoldKind::Euclidean;
  return {n, std::move(ambient), PolyMap(n, std::move(comps)), curved};
}

Vec SmoothSimplexMap::eval_extended(const Vec& x) const {
  const Vec v = lift_.eval(x);
  return projected_ ? ambient_->project(v) : v;
}

Mat SmoothSimplexMap::jacobian_extended(const Vec& x) const {
  const Mat J = lift_.jacobian(x);
  if (!projected_) return J;
  return ambient_->project_jacobian(lift_.eval(x)) * J;
}

Vec SmoothSimplexMap::eval(const Vec& x) const {
  if (x.size() != dim_) throw SchemaError("eval: point dimension mismatch");
  return eval_extended(in_simplex(x, 0.0) ? x : collapse_to_simplex(dim_, x));
}

Mat SmoothSimplexMap::jacobian(const Vec& x) const {
  if (x.size() != dim_) throw SchemaError("jacobian: point dimension mismatch");
  return jacobian_extended(in_simplex(x, 0.0) ? x : collapse_to_simplex(dim_, x));
}

SmoothSimplexMap SmoothSimplexMap::restrict(const DeltaMorphism& beta) const {
  if (beta.target() != dim_) throw SchemaError("restrict: morphism target differs from simplex dimension");
  const AffineMap a = realize_morphism(beta);
  PolyMap composed = lift_.compose_affine(a.matrix, a.offset);
  std::vector<Polynomial> comps;
  for (const auto& c : composed.components()) comps.push_back(c.pruned(kCoefficientNoise));
  SmoothSimplexMap out(beta.source(), ambient_, PolyMap(beta.source(), std::move(comps)), projected_);
  if (perturbation_) {
    const PolyMap as_map(dim_, {perturbation_->rho});
    out.perturbation_ = PerturbationRecord{as_map.compose_affine(a.matrix, a.offset)[0],
                                           perturbation_->s, perturbation_->eps};
  }
  return out;
}

SmoothSimplexMap SmoothSimplexMap::perturbed(const Polynomial& rho, double eps, const Vec& s) const {
  SmoothSimplexMap out(dim_, ambient_, lift_.plus_scaled(rho * eps, s), projected_);
  out.perturbation_ = PerturbationRecord{rho, s, eps};
  return out;
}

double SmoothSimplexMap::max_lift_offset(int res) const {
  if (!projected_) return 0.0;
  double worst = 0.0;
  for (const auto& x : simplex_lattice(dim_, res)) {
    const Vec v = lift_.eval(x);
    worst = std::max(worst, (v - ambient_->project(v)).norm());
  }
  return worst;
}

bool SmoothSimplexMap::same_as(const SmoothSimplexMap& other, double tol) const {
  return dim_ == other.dim_ && projected_ == other.projected_ &&
         ambient_.get() == other.ambient_.get() && max_abs_diff(lift_, other.lift_) <= tol;
}

Polynomial barycentric_bump(int n) {
  // lambda_0 = 1 - sum x_i
  std::vector<Term> l0{Term{Exponent{}, 1.0}};
  for (int i = 0; i < n; ++i) {
    Exponent e{};
    e[i] = 1;
    l0.push_back(Term{e, -1.0});
  }
  Polynomial rho(n, std::move(l0));
  for (int i = 0; i < n; ++i) rho = rho * Polynomial::variable(n, i);
  return rho;
}

}  // namespace trx
