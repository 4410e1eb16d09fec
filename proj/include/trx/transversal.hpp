#pragma once

#include "trx/smooth_maps.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace trx {

/// Member cut out of M by polynomial equations and inequalities:
/// { z in M : G(z) = 0, h_j(z) >= 0 }. The stratum of depth l is the set where
/// exactly l inequalities are active.
struct LevelSetMember {
  PolyMap G;
  std::vector<Polynomial> inequalities;
};

/// Member given as pi o psi on the cube [0,1]^d. The stratum of depth l is
/// the union of open cube faces with l coordinates pinned at 0 or 1.
struct ParametricMember {
  int domain_dim = 0;
  PolyMap psi;
  bool project = true;
};

/// One stratum of a member. For level sets `pinned` is the active inequality
/// mask; for parametric members it is the mask of coordinates fixed at an
/// endpoint, with `at_one` selecting which of those sit at 1.
struct TStratum {
  int depth = 0;
  std::uint32_t pinned = 0;
  std::uint32_t at_one = 0;
};

/// A manifold with corners mapping smoothly to M.
class CornerManifold {
 public:
  static CornerManifold level_set(std::string name, PolyMap G, std::vector<Polynomial> inequalities = {},
                                  std::vector<PolyMap> coorientation = {});
  static CornerManifold parametric(std::string name, int domain_dim, PolyMap psi, bool project,
                                   int codim_in_M, std::vector<PolyMap> coorientation = {});

  /// The point p of R^N as a level-set member, cooriented by the standard basis.
  static CornerManifold point(std::string name, const Vec& p);

  const std::string& name() const { return name_; }
  int codim_in_M() const { return codim_; }
  const std::variant<LevelSetMember, ParametricMember>& map() const { return map_; }
  const std::vector<PolyMap>& coorientation() const { return coorientation_; }
  bool cooriented() const { return !coorientation_.empty(); }

  std::vector<TStratum> strata() const;

 private:
  std::string name_;
  std::variant<LevelSetMember, ParametricMember> map_;
  int codim_ = 0;
  std::vector<PolyMap> coorientation_;
};

/// Finite stand-in for a countable collection.
using TCollection = std::vector<CornerManifold>;

struct TransversalityOptions {
  double tol_rank = 1e-6;
  double tau_root = 1e-10;
  double cluster_radius = 1e-6;
  int initial_cells = 8;
  int max_cells = 64;
  /// Upper bound on cells^(joint dimension) when escalating.
  long max_total_cells = 1L << 15;
  /// Only the open interior stratum of the simplex is examined.
  bool interior_only = false;
};

struct IntersectionPoint {
  Vec x;           // point of the simplex
  int k = 0;       // its stratum depth
  Vec y;           // cube coordinates (parametric members) or empty
  int l = 0;       // member stratum depth
  Vec z;           // common image in M
  double residual = 0.0;
  double min_singular_value = 0.0;
  std::optional<int> sign;
};

struct IntersectionReport {
  std::vector<IntersectionPoint> points;
  int newton_failures = 0;  // cells that came close but did not converge
  int cells_per_dim = 0;    // finest subdivision used
};

/// Solutions of sigma(x) = g_T(y) with x in S^k of the simplex and y in the
/// given member stratum, by subdivision plus Newton refinement, clustered.
IntersectionReport intersection_locus(const SmoothSimplexMap& sigma, int k, const CornerManifold& T,
                                      const TStratum& stratum, const TransversalityOptions& opts);

struct PairVerdict {
  bool transverse = true;
  double min_singular_value = std::numeric_limits<double>::infinity();
  IntersectionReport report;
};

/// Stratumwise tangent-span test over all (k, l) pairs.
PairVerdict is_transverse_pair(const SmoothSimplexMap& sigma, const CornerManifold& T,
                               const TransversalityOptions& opts);

struct TVerdict {
  bool transverse = true;
  double min_singular_value = std::numeric_limits<double>::infinity();
  std::vector<PairVerdict> members;
};

TVerdict is_T_transverse(const SmoothSimplexMap& sigma, const TCollection& Ts,
                         const TransversalityOptions& opts);

/// t -> pi o (lift + t * rho * eps * s): the homotopy from sigma to the
/// perturbed simplex, fixed on the boundary.
struct PerturbationHomotopy {
  SmoothSimplexMap base;
  Polynomial rho;
  double eps = 0.0;
  Vec s;

  Vec eval(double t, const Vec& x) const;
  /// Unprojected point lift(x) + t rho(x) eps s.
  Vec displaced(double t, const Vec& x) const;
};

struct PerturbResult {
  SmoothSimplexMap map;
  Vec s;
  int trials_used = 0;
  std::uint64_t trial_seed = 0;
  double eps = 0.0;
  PerturbationHomotopy homotopy;
  TVerdict verdict;  // verdict of the accepted candidate on the open simplex
  bool boundary_precondition_met = true;
};

/// Seeded random search over the open unit ball for s such that
/// pi o (sigma + rho * eps * s) is transverse on the open simplex.
/// Throws TrialsExhausted after `max_trials` rejected candidates.
PerturbResult perturb_to_transverse(const SmoothSimplexMap& sigma, const TCollection& Ts,
                                    std::uint64_t seed, int max_trials,
                                    const TransversalityOptions& opts);

/// Tangent basis (N x dim) of the member stratum at a point found by the locus finder.
Mat member_stratum_tangent(const AmbientManifold& M, const CornerManifold& T, const TStratum& stratum,
                           const Vec& z, const Vec& y);

std::uint64_t splitmix64(std::uint64_t x);

/// Uniform sample of the open unit ball in R^dim.
Vec sample_open_ball(std::uint64_t seed, int dim);

}  // namespace trx
