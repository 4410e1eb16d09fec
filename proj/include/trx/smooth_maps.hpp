#pragma once

#include "trx/ambient.hpp"
#include "trx/polynomial.hpp"
#include "trx/simplex_geom.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace trx {

/// Degree cap for fitted polynomials (the residual term of the smoothing fit).
inline constexpr int kMaxPolynomialDegree = 6;
/// Hard cap on lift degree; perturbation and boundary terms stack on top of
/// the fitted part.
inline constexpr int kMaxLiftDegree = 24;
/// Coefficients below this are rounding residue of affine substitution.
inline constexpr double kCoefficientNoise = 1e-15;

using ManifoldPtr = std::shared_ptr<const AmbientManifold>;

/// Book-keeping for a map produced by the tube perturbation
/// lift + rho * eps * s.
struct PerturbationRecord {
  Polynomial rho;
  Vec s;
  double eps = 0.0;
};

/// A smooth singular simplex represented as x -> pi(P(x)) where P is a
/// polynomial "lift" into R^N and pi is the nearest-point projection of the
/// ambient manifold (skipped when `projected` is false, in which case P must
/// already land in M).
///
/// Evaluation outside the simplex goes through `collapse_to_simplex`.
class SmoothSimplexMap {
 public:
  SmoothSimplexMap(int dim, ManifoldPtr ambient, PolyMap lift, bool projected);

  /// Constant map with value `point`.
  static SmoothSimplexMap constant(int dim, ManifoldPtr ambient, const Vec& point);
  /// Affine map sending vertex i to vertices[i]; projected when M is curved.
  static SmoothSimplexMap affine(ManifoldPtr ambient, const std::vector<Vec>& vertices);

  int dim() const { return dim_; }
  const AmbientManifold& ambient() const { return *ambient_; }
  const ManifoldPtr& ambient_ptr() const { return ambient_; }
  const PolyMap& lift() const { return lift_; }
  bool projected() const { return projected_; }
  const std::optional<PerturbationRecord>& perturbation() const { return perturbation_; }

  Vec eval(const Vec& x) const;
  Mat jacobian(const Vec& x) const;

  /// Evaluation of the polynomial extension without collapsing x; used by
  /// root finders that step slightly outside the simplex.
  Vec eval_extended(const Vec& x) const;
  Mat jacobian_extended(const Vec& x) const;

  Vec eval_lift(const Vec& x) const { return lift_.eval(x); }

  /// sigma o realize(beta), exact at the coefficient level.
  SmoothSimplexMap restrict(const DeltaMorphism& beta) const;

  /// pi o (lift + rho * eps * s).
  SmoothSimplexMap perturbed(const Polynomial& rho, double eps, const Vec& s) const;

  /// Largest distance from the lift to M on a lattice sample (0 when unprojected).
  double max_lift_offset(int res = 10) const;

  /// Coefficient-level equality within tol.
  bool same_as(const SmoothSimplexMap& other, double tol) const;

 private:
  int dim_;
  ManifoldPtr ambient_;
  PolyMap lift_;
  bool projected_;
  std::optional<PerturbationRecord> perturbation_;
};

/// Product of all barycentric coordinates of the n-simplex: vanishes exactly on
/// the boundary, positive inside, at most (n+1)^-(n+1) on the simplex.
Polynomial barycentric_bump(int n);

/// A continuous map on the simplex known only pointwise, together with
/// smooth maps describing it on each facet. Used for the output of the cone
/// retraction stage before smoothing.
struct PiecewiseMap {
  int dim = 0;
  ManifoldPtr ambient;
  std::function<Vec(const Vec&)> evaluate;
  /// facets[i] is the restriction along delta_i.
  std::vector<SmoothSimplexMap> facets;
  /// Set when the map is already a single smooth map.
  std::optional<SmoothSimplexMap> exact;

  Vec operator()(const Vec& x) const { return evaluate(x); }
};

}  // namespace trx
