#pragma once

#include "trx/corner_ext.hpp"
#include "trx/transversal.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace trx {

enum class RecordStatus { Raw, Smooth, Transverse };

std::string to_string(RecordStatus status);

/// One simplex of the family. Degenerate records remember their
/// Eilenberg-Zilber factorization map = base o |collapse|.
struct SingularRecord {
  std::string id;
  int dim = 0;
  SmoothSimplexMap map;
  bool nondegenerate = true;
  std::string base_id;    // equals id when nondegenerate
  DeltaMorphism collapse;  // [dim] -> [dim of base], identity when nondegenerate
  RecordStatus status = RecordStatus::Raw;
  std::vector<std::string> faces;  // faces[i] is the record of map o delta_i
};

enum class StageKind { BoundaryRetraction, Smoothing, Transversality, Constant };

std::string to_string(StageKind kind);

class HomotopyTrack;
using TrackPtr = std::shared_ptr<const HomotopyTrack>;

/// Radial projection of [0,t_A] x simplex from (2 t_A, barycenter) onto the
/// bottom and the sides, followed by sigma on the bottom and the face tracks
/// on the sides.
struct ConeStage {
  SmoothSimplexMap sigma;
  std::vector<TrackPtr> faces;
  double t_A = 0.0;

  Vec eval(double t, const Vec& x) const;
};

/// pi((1-u) sigma'(x) + u sigma''(x)) with sigma' the cone stage at t_A.
struct SmoothingStage {
  ConeStage start;
  SmoothSimplexMap target;
  double sup_error = 0.0;
  int residual_degree = -1;

  Vec eval(double u, const Vec& x) const;
};

struct TransversalityStage {
  PerturbationHomotopy homotopy;
  std::uint64_t seed = 0;
  int trials_used = 0;

  Vec eval(double u, const Vec& x) const { return homotopy.eval(u, x); }
};

struct ConstantStage {
  SmoothSimplexMap map;

  Vec eval(double, const Vec& x) const { return map.eval(x); }
};

struct Stage {
  double a = 0.0;
  double b = 1.0;
  StageKind kind = StageKind::Constant;
  std::variant<ConeStage, SmoothingStage, TransversalityStage, ConstantStage> payload;
};

/// The scheduled homotopy h_sigma : [0,1] x simplex -> M.
class HomotopyTrack {
 public:
  /// Track of a nondegenerate simplex from its stages.
  HomotopyTrack(int dim, std::string record_id, std::vector<Stage> stages);
  /// h_base o (id x |collapse|); `start` is the degenerate simplex itself,
  /// returned verbatim at t = 0.
  HomotopyTrack(int dim, std::string record_id, TrackPtr base, const DeltaMorphism& collapse,
                SmoothSimplexMap start);

  int dim() const { return dim_; }
  const std::string& record_id() const { return record_id_; }
  /// Stage list; for a degenerate track, the stages of its base.
  const std::vector<Stage>& stages() const { return base_ ? base_->stages() : stages_; }
  bool degenerate() const { return base_ != nullptr; }

  double t_A() const { return 1.0 - 1.0 / (dim_ + 1); }
  double t_B() const { return 1.0 - 1.0 / (dim_ + 2); }

  Vec eval(double t, const Vec& x) const;

 private:
  int dim_;
  std::string record_id_;
  std::vector<Stage> stages_;
  TrackPtr base_;
  AffineMap collapse_;
  std::optional<SmoothSimplexMap> start_;
};

struct RetractionOptions {
  TransversalityOptions transversality;
  double sup_tol = 0.1;
  int max_trials = 10;
  std::uint64_t seed = 1;
};

/// x -> h_sigma(|alpha|(x), x) for alpha : [n] -> [1].
struct DiagonalSlice {
  TrackPtr track;
  AffineMap alpha;  // realization of alpha, 1 x n
  /// Set when alpha is constant, naming sigma (alpha = 0) or p(sigma) (alpha = 1).
  std::optional<std::string> record_id;

  Vec eval(const Vec& x) const;
};

/// A finite set of simplices closed under faces, with memoized tracks.
class FiniteSingularFamily {
 public:
  FiniteSingularFamily(ManifoldPtr ambient, TCollection Ts, RetractionOptions opts);

  const ManifoldPtr& ambient() const { return ambient_; }
  const TCollection& Ts() const { return Ts_; }
  const RetractionOptions& options() const { return opts_; }

  /// Adds a simplex with all its faces; returns the id of the (possibly
  /// pre-existing) record with the same coefficients.
  std::string add(const SmoothSimplexMap& map, const std::string& preferred_id = "");

  bool contains(const std::string& id) const { return index_.count(id) != 0; }
  const SingularRecord& record(const std::string& id) const;
  std::vector<std::string> ids() const;

  /// (collapse, base id) with base nondegenerate.
  std::pair<DeltaMorphism, std::string> nondeg_factorize(const std::string& id) const;

  TrackPtr build_homotopy(const std::string& id);
  bool has_track(const std::string& id) const { return memo_.count(id) != 0; }

  /// Id of p(sigma).
  std::string retract(const std::string& id);

  DiagonalSlice homotopy_H(const DeltaMorphism& alpha, const std::string& id);

  /// Largest discrepancy of h_{sigma o beta} against h_sigma o (id x |beta|), and
  /// of H(alpha x sigma) o |beta| against H(alpha o beta x sigma o beta) for
  /// every alpha, on a lattice of `samples` points per axis.
  double verify_naturality(const std::string& id, const DeltaMorphism& beta, int samples = 6);

  /// Seed of the perturbation search for a record; depends only on the
  /// family seed and the id.
  std::uint64_t record_seed(const std::string& id) const;

  /// Ids of records whose retraction has been computed, with their images.
  const std::map<std::string, std::string>& retractions() const { return retracted_; }

 private:
  std::string insert(SingularRecord rec);
  std::optional<std::string> find_same(const SmoothSimplexMap& map) const;
  std::string fresh_id(const std::string& preferred);

  ManifoldPtr ambient_;
  TCollection Ts_;
  RetractionOptions opts_;
  std::vector<SingularRecord> records_;
  std::map<std::string, std::size_t> index_;
  std::map<std::string, TrackPtr> memo_;
  std::map<std::string, std::string> retracted_;
};

/// Face coordinates of a point on facet i given its barycentric coordinates.
Vec facet_coordinates(const Vec& lambda, int i);

}  // namespace trx
