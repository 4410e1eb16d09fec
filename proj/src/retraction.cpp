#include "trx/retraction.hpp"

#include "trx/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace trx {

namespace {

constexpr double kSameTolerance = 1e-11;

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// All weakly monotone maps [n] -> [1].
std::vector<DeltaMorphism> maps_to_interval(int n) {
  std::vector<DeltaMorphism> out;
  for (int jump = 0; jump <= n + 1; ++jump) {
    std::vector<int> v(n + 1);
    for (int i = 0; i <= n; ++i) v[i] = i >= jump ? 1 : 0;
    out.emplace_back(1, std::move(v));
  }
  return out;
}

}  // namespace

std::string to_string(RecordStatus status) {
  switch (status) {
    case RecordStatus::Raw: return "raw";
    case RecordStatus::Smooth: return "smooth";
    case RecordStatus::Transverse: return "transverse";
  }
  return "?";
}

std::string to_string(StageKind kind) {
  switch (kind) {
    case StageKind::BoundaryRetraction: return "boundary_retraction";
    case StageKind::Smoothing: return "smoothing";
    case StageKind::Transversality: return "transversality";
    case StageKind::Constant: return "constant";
  }
  return "?";
}

Vec facet_coordinates(const Vec& lambda, int i) {
  const int n = static_cast<int>(lambda.size()) - 1;
  Vec y(n - 1);
  int col = 0;
  for (int k = 0; k <= n; ++k) {
    if (k == i) continue;
    if (col > 0) y[col - 1] = std::max(lambda[k], 0.0);
    ++col;
  }
  return y;
}

// ---------------------------------------------------------------------------

Vec ConeStage::eval(double t, const Vec& x) const {
  if (t <= 0.0) return sigma.eval(x);
  const int n = sigma.dim();
  const double beta = 1.0 / (n + 1);
  const Vec xi = barycentric(x);
  const double lam_b = 2.0 * t_A / (2.0 * t_A - t);
  double lam_s = std::numeric_limits<double>::infinity();
  int side = -1;
  for (int i = 0; i <= n; ++i) {
    if (xi[i] < beta) {
      const double l = xi[i] <= 0.0 ? 1.0 : beta / (beta - xi[i]);
      if (l < lam_s) {
        lam_s = l;
        side = i;
      }
    }
  }
  if (lam_b <= lam_s) {
    const Vec b = Vec::Constant(n, beta);
    return sigma.eval(b + lam_b * (x - b));
  }
  if (lam_s == 1.0) return faces[side]->eval(t, facet_coordinates(xi, side));
  const double t_side = std::clamp(2.0 * t_A - lam_s * (2.0 * t_A - t), 0.0, t_A);
  Vec y = Vec::Constant(n + 1, beta) + lam_s * (xi - Vec::Constant(n + 1, beta));
  y[side] = 0.0;
  return faces[side]->eval(t_side, facet_coordinates(y, side));
}

Vec SmoothingStage::eval(double u, const Vec& x) const {
  if (u <= 0.0) return start.eval(start.t_A, x);
  if (u >= 1.0) return target.eval(x);
  const Vec v = (1.0 - u) * start.eval(start.t_A, x) + u * target.eval(x);
  return target.projected() ? target.ambient().project(v) : v;
}

HomotopyTrack::HomotopyTrack(int dim, std::string record_id, std::vector<Stage> stages)
    : dim_(dim), record_id_(std::move(record_id)), stages_(std::move(stages)) {
  if (stages_.empty()) throw SchemaError("homotopy track needs at least one stage");
}

HomotopyTrack::HomotopyTrack(int dim, std::string record_id, TrackPtr base, const DeltaMorphism& collapse,
                             SmoothSimplexMap start)
    : dim_(dim),
      record_id_(std::move(record_id)),
      base_(std::move(base)),
      collapse_(realize_morphism(collapse)),
      start_(std::move(start)) {}

Vec HomotopyTrack::eval(double t, const Vec& x) const {
  t = std::clamp(t, 0.0, 1.0);
  const Vec p = in_simplex(x, 0.0) ? x : collapse_to_simplex(dim_, x);
  if (base_) return t == 0.0 ? start_->eval(p) : base_->eval(t, collapse_(p));
  // Breakpoints belong to the later stage; the last stage is closed.
  const Stage* st = &stages_.back();
  for (const auto& s : stages_) {
    if (t < s.b) {
      st = &s;
      break;
    }
  }
  const double u = st->b > st->a ? (t - st->a) / (st->b - st->a) : 1.0;
  return std::visit(
      [&](const auto& payload) -> Vec {
        using P = std::decay_t<decltype(payload)>;
        if constexpr (std::is_same_v<P, ConeStage>) {
          return payload.eval(t, p);
        } else {
          return payload.eval(u, p);
        }
      },
      st->payload);
}

Vec DiagonalSlice::eval(const Vec& x) const { return track->eval(alpha(x)[0], x); }

// ---------------------------------------------------------------------------

FiniteSingularFamily::FiniteSingularFamily(ManifoldPtr ambient, TCollection Ts, RetractionOptions opts)
    : ambient_(std::move(ambient)), Ts_(std::move(Ts)), opts_(opts) {
  if (!ambient_) throw SchemaError("family needs an ambient manifold");
}

const SingularRecord& FiniteSingularFamily::record(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw SchemaError("unknown simplex id '" + id + "'");
  return records_[it->second];
}

std::vector<std::string> FiniteSingularFamily::ids() const {
  std::vector<std::string> out;
  for (const auto& r : records_) out.push_back(r.id);
  return out;
}

std::optional<std::string> FiniteSingularFamily::find_same(const SmoothSimplexMap& map) const {
  for (const auto& r : records_) {
    if (r.dim == map.dim() && r.map.same_as(map, kSameTolerance)) return r.id;
  }
  return std::nullopt;
}

std::string FiniteSingularFamily::fresh_id(const std::string& preferred) {
  std::string base = preferred.empty() ? "s" + std::to_string(records_.size()) : preferred;
  std::string id = base;
  for (int k = 2; index_.count(id); ++k) id = base + "#" + std::to_string(k);
  return id;
}

std::string FiniteSingularFamily::insert(SingularRecord rec) {
  index_[rec.id] = records_.size();
  records_.push_back(std::move(rec));
  return records_.back().id;
}

std::uint64_t FiniteSingularFamily::record_seed(const std::string& id) const {
  return splitmix64(opts_.seed ^ fnv1a(id));
}

std::string FiniteSingularFamily::add(const SmoothSimplexMap& map, const std::string& preferred_id) {
  if (map.ambient_ptr() != ambient_) throw SchemaError("simplex lives on a different ambient manifold");
  if (auto existing = find_same(map)) return *existing;
  const int n = map.dim();

  bool nondegenerate = true;
  std::string base_id;
  DeltaMorphism collapse = DeltaMorphism::identity(n);
  for (int j = 0; j < n && nondegenerate; ++j) {
    const SmoothSimplexMap face = map.restrict(DeltaMorphism::coface(n, j + 1));
    if (!face.restrict(DeltaMorphism::codegeneracy(n - 1, j)).same_as(map, kSameTolerance)) continue;
    const SingularRecord& base = record(add(face));
    nondegenerate = false;
    base_id = base.base_id;
    collapse = base.collapse.compose(DeltaMorphism::codegeneracy(n - 1, j));
  }

  std::vector<std::string> faces;
  bool faces_transverse = true;
  for (int i = 0; n > 0 && i <= n; ++i) {
    faces.push_back(add(map.restrict(DeltaMorphism::coface(n, i))));
    faces_transverse = faces_transverse && record(faces.back()).status == RecordStatus::Transverse;
  }

  TransversalityOptions interior = opts_.transversality;
  interior.interior_only = true;
  const bool transverse = faces_transverse && is_T_transverse(map, Ts_, interior).transverse;

  const std::string id = fresh_id(preferred_id);
  if (nondegenerate) base_id = id;
  return insert(SingularRecord{id, n, map, nondegenerate, base_id, collapse,
                               transverse ? RecordStatus::Transverse : RecordStatus::Smooth,
                               std::move(faces)});
}

std::pair<DeltaMorphism, std::string> FiniteSingularFamily::nondeg_factorize(const std::string& id) const {
  const SingularRecord& r = record(id);
  return {r.collapse, r.base_id};
}

TrackPtr FiniteSingularFamily::build_homotopy(const std::string& id) {
  if (auto it = memo_.find(id); it != memo_.end()) return it->second;
  const SingularRecord rec = record(id);  // copy: insertions below may reallocate
  const int n = rec.dim;
  TrackPtr track;

  if (!rec.nondegenerate) {
    TrackPtr base = build_homotopy(rec.base_id);
    const std::string p_base = retracted_.at(rec.base_id);
    track = std::make_shared<HomotopyTrack>(n, id, base, rec.collapse, rec.map);
    memo_[id] = track;
    retracted_[id] = add(record(p_base).map.restrict(rec.collapse), "p(" + id + ")");
    return track;
  }

  if (rec.status == RecordStatus::Transverse) {
    track = std::make_shared<HomotopyTrack>(
        n, id, std::vector<Stage>{Stage{0.0, 1.0, StageKind::Constant, ConstantStage{rec.map}}});
    memo_[id] = track;
    retracted_[id] = id;
    return track;
  }

  const double t_A = 1.0 - 1.0 / (n + 1);
  const double t_B = 1.0 - 1.0 / (n + 2);
  std::vector<Stage> stages;
  std::vector<std::string> p_faces;
  SmoothSimplexMap to_perturb = rec.map;

  if (n > 0) {
    std::vector<TrackPtr> face_tracks;
    std::vector<SmoothSimplexMap> facet_maps;
    for (const auto& f : rec.faces) {
      face_tracks.push_back(build_homotopy(f));
      p_faces.push_back(retracted_.at(f));
      facet_maps.push_back(record(p_faces.back()).map);
    }
    ConeStage cone{rec.map, face_tracks, t_A};
    PiecewiseMap start{n, ambient_, [cone](const Vec& x) { return cone.eval(cone.t_A, x); }, facet_maps,
                       std::nullopt};
    SmoothingResult smooth = [&] {
      try {
        return smooth_rel_boundary(start, opts_.sup_tol);
      } catch (const ToleranceUnreachable& e) {
        throw ToleranceUnreachable("record '" + id + "', smoothing stage: " + e.what());
      }
    }();
    const double mid = 0.5 * (t_A + t_B);
    stages.push_back(Stage{0.0, t_A, StageKind::BoundaryRetraction, cone});
    stages.push_back(Stage{t_A, mid, StageKind::Smoothing,
                           SmoothingStage{cone, smooth.map, smooth.sup_error, smooth.residual_degree}});
    to_perturb = smooth.map;
  }

  const double trans_start = n > 0 ? 0.5 * (t_A + t_B) : 0.0;
  const std::uint64_t seed = record_seed(id);
  PerturbResult pr = [&] {
    try {
      return perturb_to_transverse(to_perturb, Ts_, seed, opts_.max_trials, opts_.transversality);
    } catch (const TrialsExhausted& e) {
      throw TrialsExhausted("record '" + id + "', transversality stage: " + e.what());
    } catch (const OutOfTube& e) {
      throw OutOfTube("record '" + id + "', transversality stage: " + e.what());
    }
  }();
  stages.push_back(Stage{trans_start, t_B, StageKind::Transversality,
                         TransversalityStage{pr.homotopy, pr.trial_seed, pr.trials_used}});
  stages.push_back(Stage{t_B, 1.0, StageKind::Constant, ConstantStage{pr.map}});
  track = std::make_shared<HomotopyTrack>(n, id, std::move(stages));
  memo_[id] = track;

  std::string p_id;
  if (auto existing = find_same(pr.map)) {
    p_id = *existing;
  } else {
    p_id = insert(SingularRecord{fresh_id("p(" + id + ")"), n, pr.map, true, "", DeltaMorphism::identity(n),
                                 RecordStatus::Transverse, p_faces});
    records_.back().base_id = p_id;
  }
  retracted_[id] = p_id;
  return track;
}

std::string FiniteSingularFamily::retract(const std::string& id) {
  build_homotopy(id);
  return retracted_.at(id);
}

DiagonalSlice FiniteSingularFamily::homotopy_H(const DeltaMorphism& alpha, const std::string& id) {
  const SingularRecord& r = record(id);
  if (alpha.target() != 1 || alpha.source() != r.dim) throw SchemaError("homotopy_H needs alpha : [n] -> [1]");
  DiagonalSlice slice{build_homotopy(id), realize_morphism(alpha), std::nullopt};
  const auto& v = alpha.values();
  if (std::all_of(v.begin(), v.end(), [](int a) { return a == 0; })) slice.record_id = id;
  if (std::all_of(v.begin(), v.end(), [](int a) { return a == 1; })) slice.record_id = retract(id);
  return slice;
}

double FiniteSingularFamily::verify_naturality(const std::string& id, const DeltaMorphism& beta, int samples) {
  const int n = record(id).dim;
  if (beta.target() != n) throw SchemaError("verify_naturality: morphism target differs from simplex dimension");
  const int m = beta.source();
  const std::string sub = add(record(id).map.restrict(beta));
  const TrackPtr outer = build_homotopy(id);
  const TrackPtr inner = build_homotopy(sub);
  const AffineMap B = realize_morphism(beta);

  std::vector<double> times;
  for (int k = 0; k <= samples; ++k) times.push_back(static_cast<double>(k) / samples);
  for (int d : {m, n}) {
    times.push_back(1.0 - 1.0 / (d + 1));
    times.push_back(1.0 - 1.0 / (d + 2));
  }
  const auto points = simplex_lattice(m, std::max(1, samples));

  double worst = 0.0;
  for (double t : times) {
    for (const auto& x : points) {
      worst = std::max(worst, (inner->eval(t, x) - outer->eval(t, B(x))).norm());
    }
  }
  for (const auto& alpha : maps_to_interval(n)) {
    const AffineMap A = realize_morphism(alpha);
    const AffineMap AB = realize_morphism(alpha.compose(beta));
    for (const auto& x : points) {
      const Vec bx = B(x);
      const Vec lhs = outer->eval(A(bx)[0], bx);
      const Vec rhs = inner->eval(AB(x)[0], x);
      worst = std::max(worst, (lhs - rhs).norm());
    }
  }
  return worst;
}

}  // namespace trx
