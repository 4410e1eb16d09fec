#pragma once

#include "trx/retraction.hpp"

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace trx {

/// Integer chain over records of a family.
struct Chain {
  int dim = 0;
  std::vector<std::pair<long, std::string>> terms;  // (coefficient, record id)

  /// Merges repeated ids and drops zero coefficients; keeps first-seen order.
  Chain normalized() const;
  bool empty() const { return terms.empty(); }
};

/// Alternating-face boundary sum_i (-1)^i sigma o delta_i.
Chain boundary(const FiniteSingularFamily& fam, const Chain& c);

struct IotaResult {
  long value = 0;
  std::vector<IntersectionPoint> points;  // with signs
};

/// Oriented orthonormal basis (N x d) of the normal space of W inside T_zM,
/// oriented by W's coorientation frame.
Mat oriented_normal_frame(const AmbientManifold& M, const CornerManifold& W, const Vec& z, const Vec& y);

/// Signed count of sigma x_M W. Requires dim sigma = codim W and a
/// cooriented W; throws NotTransverse or NearSingularSign.
IotaResult iota_W(const CornerManifold& W, const SmoothSimplexMap& sigma, const TransversalityOptions& opts);

/// iota_W extended linearly over a chain.
long iota_W(const CornerManifold& W, const FiniteSingularFamily& fam, const Chain& c,
            const TransversalityOptions& opts);

struct CocycleCheck {
  long value = 0;                 // iota_W of the boundary, 0 for a cocycle
  std::vector<long> face_counts;  // iota_W of each face, unsigned by position
};

/// iota_W(boundary tau); tau must be transverse to W on every stratum.
CocycleCheck cocycle_check(const CornerManifold& W, const FiniteSingularFamily& fam, const std::string& tau,
                           const TransversalityOptions& opts);

/// Termwise retraction p_*(c).
Chain retract_chain(FiniteSingularFamily& fam, const Chain& c);

/// iota_W(p_*(c)).
long pullback_evaluate(const CornerManifold& W, const Chain& c, FiniteSingularFamily& fam);

/// Winding number around `center` of the closed planar curve gamma on [0,1],
/// by angle accumulation with adaptive refinement.
long winding_number(const std::function<Eigen::Vector2d(double)>& gamma, const Eigen::Vector2d& center);

/// Winding number of sigma restricted to the boundary of the 2-simplex,
/// traversed vertex 0 -> 1 -> 2 -> 0.
long boundary_winding_number(const SmoothSimplexMap& sigma, const Eigen::Vector2d& center);

}  // namespace trx
