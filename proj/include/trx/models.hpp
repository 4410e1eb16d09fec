#pragma once

#include "trx/cochain.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace trx {

/// Curve t -> (r cos a(t), r sin a(t), r cos b(t), r sin b(t)) on the Clifford
/// torus with a, b linear in t, lifted by the degree-6 interpolant at the
/// Chebyshev-Lobatto nodes and projected.
SmoothSimplexMap torus_arc(const ManifoldPtr& torus, double a0, double a1, double b0, double b1);

/// Point of the Clifford torus at angles (a, b).
Vec torus_point(double a, double b);

/// The meridian {theta_1 = 0} as {x_2 = 0, x_1 >= 0}, cooriented by d/d theta_1.
CornerManifold torus_meridian();

/// Closed chain of three arcs at constant theta_2 = b with vertices at
/// theta_1 = pi/3, pi, 5pi/3.
std::vector<SmoothSimplexMap> longitude_arcs(const ManifoldPtr& torus, double b);

/// Closed chain of three arcs at constant theta_1 = a.
std::vector<SmoothSimplexMap> meridian_arcs(const ManifoldPtr& torus, double a);

/// Longitude piece from theta_1 = -pi/3 to pi/3 whose velocity vanishes where
/// it crosses the meridian.
SmoothSimplexMap tangent_longitude_piece(const ManifoldPtr& torus, double b);

/// Lifts of the form sum over monomials of degree <= deg with coefficients
/// drawn from N(0, scale^2), one per component.
PolyMap random_polymap(std::uint64_t seed, int nvars, int ncomp, int deg, double scale);

/// Up to `count` random cubic 3-simplices in R^2 that are transverse to the
/// origin on every stratum; each is recentred so its barycenter maps to the origin.
std::vector<SmoothSimplexMap> random_transverse_cubics(const ManifoldPtr& plane, const CornerManifold& origin,
                                                       std::uint64_t seed, int count,
                                                       const TransversalityOptions& opts, int* attempts = nullptr);

/// A singular simplex in the plane that folds over the origin: transverse
/// faces, tangential interior.
SmoothSimplexMap plane_fold(const ManifoldPtr& plane);

}  // namespace trx
