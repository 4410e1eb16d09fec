#pragma once

#include "trx/ambient.hpp"

#include <vector>

namespace trx {

/// Weakly order-preserving map [m] -> [n] in the simplex category.
class DeltaMorphism {
 public:
  DeltaMorphism(int target, std::vector<int> values);

  static DeltaMorphism identity(int n);
  /// delta_i : [n-1] -> [n], the injection skipping i.
  static DeltaMorphism coface(int n, int i);
  /// s_j : [n+1] -> [n], the surjection hitting j twice.
  static DeltaMorphism codegeneracy(int n, int j);
  /// Constant map [m] -> [n] with value v.
  static DeltaMorphism constant(int m, int n, int v);

  int source() const { return static_cast<int>(values_.size()) - 1; }
  int target() const { return target_; }
  const std::vector<int>& values() const { return values_; }
  int operator()(int i) const { return values_[i]; }

  bool is_injective() const;
  bool is_surjective() const;

  /// this o other
  DeltaMorphism compose(const DeltaMorphism& other) const;

  bool operator==(const DeltaMorphism&) const = default;

 private:
  int target_;
  std::vector<int> values_;
};

/// x -> matrix * x + offset.
struct AffineMap {
  Mat matrix;  // n x m
  Vec offset;  // n

  Vec operator()(const Vec& x) const { return matrix * x + offset; }
  AffineMap compose(const AffineMap& inner) const {
    return {matrix * inner.matrix, matrix * inner.offset + offset};
  }
};

/// Cartesian coordinates of vertex i of the geometric n-simplex (0 or e_i).
Vec simplex_vertex(int n, int i);

/// The unique affine map sending vertex i of the source simplex to vertex beta(i).
AffineMap realize_morphism(const DeltaMorphism& beta);

/// Barycentric coordinates (lambda_0 = 1 - sum x, lambda_i = x_i).
Vec barycentric(const Vec& x);
Vec from_barycentric(const Vec& lambda);

inline constexpr double kBoundaryTolerance = 1e-9;

bool in_simplex(const Vec& x, double tol = kBoundaryTolerance);

/// Number of barycentric coordinates of x that are <= tol: the depth k with
/// x in S^k of the simplex.
int stratum_of(int n, const Vec& x, double tol = kBoundaryTolerance);

/// Euclidean nearest point of the simplex; identity on the simplex.
Vec collapse_to_simplex(int n, const Vec& z);

/// The n+1 coface morphisms delta_0 .. delta_n.
std::vector<DeltaMorphism> enumerate_face_maps(int n);

/// Injections [n-k] -> [n] whose image misses exactly k vertices; their open
/// realizations partition S^k.
std::vector<DeltaMorphism> faces_of_codim(int n, int k);

/// Barycentric lattice with spacing 1/res (all points of the closed simplex).
std::vector<Vec> simplex_lattice(int n, int res);

}  // namespace trx
