#pragma once

#include "trx/polynomial.hpp"

#include <Eigen/Dense>

#include <string>

namespace trx {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class ManifoldKind { Euclidean, Sphere, CliffordTorus, LevelSet };

std::string to_string(ManifoldKind kind);

/// Orthonormal basis of T_zM, stored as the columns of `basis`.
struct TangentFrame {
  Vec base_point;
  Mat basis;  // N x m
};

/// An embedded manifold M in R^N without boundary, with a tube of radius
/// `eps_lower` on which the nearest-point projection is defined.
///
/// Presets:
///  - Euclidean(m): M = R^m, projection is the identity.
///  - Sphere(N): unit sphere S^{N-1} in R^N.
///  - CliffordTorus: product of two circles of radius 1/sqrt(2) in R^2 x R^2.
///  - LevelSet(G): regular zero set of a polynomial map G: R^N -> R^c.
///
/// Values are immutable after construction.
class AmbientManifold {
 public:
  static AmbientManifold euclidean(int m, double eps_lower = 1.0);
  static AmbientManifold sphere(int ambient_dim, double eps_lower = 0.5);
  static AmbientManifold clifford_torus(double eps_lower = 0.3);
  static AmbientManifold level_set(PolyMap G, double eps_lower);

  ManifoldKind kind() const { return kind_; }
  int ambient_dim() const { return ambient_dim_; }
  int intrinsic_dim() const { return intrinsic_dim_; }
  double eps_lower() const { return eps_lower_; }
  const PolyMap& defining_map() const { return G_; }

  /// Radius of each circle factor of the Clifford torus.
  static double torus_radius();

  bool contains(const Vec& z, double tol) const;

  /// Nearest point of M. Throws OutOfTube when dist(z, M) >= eps_lower or the
  /// level-set Newton iteration does not reach its residual target.
  Vec project(const Vec& z) const;

  /// Derivative of `project` at z (N x N).
  Mat project_jacobian(const Vec& z) const;

  TangentFrame tangent_basis(const Vec& z) const;

  /// Tubular radius at z; constant per manifold.
  double epsilon(const Vec& z) const;

  /// Euclidean distance from z to M (z must be in the tube for LevelSet).
  double distance(const Vec& z) const;

 private:
  AmbientManifold(ManifoldKind kind, int N, int m, double eps_lower, PolyMap G);

  Vec project_unchecked(const Vec& z) const;
  Vec project_level_set(const Vec& z) const;

  ManifoldKind kind_;
  int ambient_dim_;
  int intrinsic_dim_;
  double eps_lower_;
  PolyMap G_;
};

}  // namespace trx
