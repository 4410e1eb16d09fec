#pragma once

#include "trx/polynomial.hpp"
#include "trx/smooth_maps.hpp"

#include <vector>

namespace trx {

/// Scalar face data on the corner [0,inf)^k x R^(n-k) of R^n: faces[j] is a
/// polynomial on R^n that is only ever evaluated on the hyperplane x_j = 0.
struct CornerData {
  int n = 0;
  int k = 0;
  std::vector<Polynomial> faces;
};

/// Points of [0,1]^n with spacing 1/res ((res+1)^n points).
std::vector<Vec> corner_grid(int n, int res = 10);

/// Checks that for every J with |J| >= 2 all f_j, j in J, agree on the
/// intersection of the H_j inside the corner. Throws IncompatibleFaces.
void check_corner_compatibility(const CornerData& data, double tol = 1e-10, int res = 10);

/// F = -sum_{J != {}} (-1)^{|J|} f_{min J} o (projection killing x_J).
/// F restricts to f_i on every W_i = {x_i = 0} within the corner.
Polynomial extend_from_corner(const CornerData& data, bool check = true);

/// Face data induced by restricting a global polynomial to the hyperplanes.
CornerData corner_data_from_global(const Polynomial& g, int k);

/// max |F - f_i| over grid points moved onto W_i (x_i = 0, corner coordinates clipped to >= 0).
double verify_restriction_identity(const CornerData& data, int i, const std::vector<Vec>& grid);

/// Polynomial lift on the n-simplex that coincides with the facet lifts on
/// every facet: the corner extension of the facet data in barycentric
/// coordinates, where the facets of the simplex are the coordinate
/// hyperplanes of the corner [0,inf)^(n+1).
PolyMap boundary_interpolant(int n, const std::vector<SmoothSimplexMap>& facets);

struct SmoothingResult {
  SmoothSimplexMap map;
  double sup_error = 0.0;     // max |map - sigma| on the check lattice
  double facet_error = 0.0;   // max |map - facet data| on facet lattices
  int residual_degree = -1;   // degree of Q, -1 when E alone sufficed
  bool unchanged = false;     // input was already smooth
};

/// Replaces a continuous map with polynomial facet data by the smooth map
/// pi o (E + (lambda_0 ... lambda_n) Q) with Q fitted by least squares,
/// raising the degree of Q until the sup distance is within `tol`.
/// Throws ToleranceUnreachable at the degree cap.
SmoothingResult smooth_rel_boundary(const PiecewiseMap& sigma, double tol);

}  // namespace trx
