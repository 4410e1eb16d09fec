#include "trx/transversal.hpp"

#include "trx/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <sstream>

namespace trx {

namespace {

constexpr double kOpenMargin = 1e-9;  // distance from a stratum boundary to count as inside
constexpr double kRankTolerance = 1e-7;
constexpr int kNewtonIterations = 40;
// Converged roots keep iterating while the residual drops: at a multiple
// root Newton is only linear and an early iterate overstates the rank.
constexpr int kPolishIterations = 80;
constexpr double kNearMiss = 1e-6;

Polynomial identity_poly(int nvars, int i) { return Polynomial::variable(nvars, i); }

Mat orthonormal_columns(const Mat& A) {
  if (A.cols() == 0) return Mat(A.rows(), 0);
  Eigen::HouseholderQR<Mat> qr(A);
  return qr.householderQ() * Mat::Identity(A.rows(), A.cols());
}

// One (simplex face, member stratum) root-finding problem in joint
// coordinates v = (u, y_free).
class StratumProblem {
 public:
  StratumProblem(const SmoothSimplexMap& sigma, const DeltaMorphism& face, const CornerManifold& T,
                 const TStratum& stratum)
      : sigma_(sigma), face_(realize_morphism(face)), p_(face.source()), T_(T), stratum_(stratum) {
    if (const auto* par = std::get_if<ParametricMember>(&T_.map())) {
      for (int i = 0; i < par->domain_dim; ++i) {
        if (!((stratum_.pinned >> i) & 1u)) free_.push_back(i);
      }
    }
  }

  int p() const { return p_; }
  int q() const { return static_cast<int>(free_.size()); }
  int dim() const { return p_ + q(); }

  Vec x_of(const Vec& v) const { return face_(v.head(p_)); }

  Vec full_y(const Vec& v) const {
    const auto* par = std::get_if<ParametricMember>(&T_.map());
    if (!par) return Vec();
    Vec y(par->domain_dim);
    for (int i = 0; i < par->domain_dim; ++i) {
      if ((stratum_.pinned >> i) & 1u) y[i] = ((stratum_.at_one >> i) & 1u) ? 1.0 : 0.0;
    }
    for (int j = 0; j < q(); ++j) y[free_[j]] = v[p_ + j];
    return y;
  }

  Vec member_point(const Vec& y) const {
    const auto& par = std::get<ParametricMember>(T_.map());
    const Vec w = par.psi.eval(y);
    return par.project ? sigma_.ambient().project(w) : w;
  }

  // Residual and (optionally) Jacobian; false when evaluation leaves the tube.
  bool evaluate(const Vec& v, Vec& r, Mat* J) const {
    try {
      const Vec x = x_of(v);
      const Vec z = sigma_.eval_extended(x);
      if (const auto* ls = std::get_if<LevelSetMember>(&T_.map())) {
        const int c = ls->G.dim();
        const int a = std::popcount(stratum_.pinned);
        r.resize(c + a);
        r.head(c) = ls->G.eval(z);
        int row = c;
        for (std::size_t j = 0; j < ls->inequalities.size(); ++j) {
          if ((stratum_.pinned >> j) & 1u) r[row++] = ls->inequalities[j].eval(z);
        }
        if (J) {
          Mat D(c + a, z.size());
          D.topRows(c) = ls->G.jacobian(z);
          row = c;
          for (std::size_t j = 0; j < ls->inequalities.size(); ++j) {
            if (!((stratum_.pinned >> j) & 1u)) continue;
            for (Eigen::Index col = 0; col < z.size(); ++col) {
              D(row, col) = ls->inequalities[j].derivative(static_cast<int>(col)).eval(z);
            }
            ++row;
          }
          *J = D * sigma_.jacobian_extended(x) * face_.matrix;
        }
        return r.allFinite();
      }
      const auto& par = std::get<ParametricMember>(T_.map());
      const Vec y = full_y(v);
      const Vec w = par.psi.eval(y);
      const Vec g = par.project ? sigma_.ambient().project(w) : w;
      r = z - g;
      if (J) {
        Mat Dg = par.psi.jacobian(y);
        if (par.project) Dg = sigma_.ambient().project_jacobian(w) * Dg;
        J->resize(z.size(), dim());
        J->leftCols(p_) = sigma_.jacobian_extended(x) * face_.matrix;
        for (int j = 0; j < q(); ++j) J->col(p_ + j) = -Dg.col(free_[j]);
      }
      return r.allFinite();
    } catch (const OutOfTube&) {
      return false;
    }
  }

  bool inside_open(const Vec& v, const Vec& z) const {
    if (p_ > 0 && barycentric(v.head(p_)).minCoeff() <= kOpenMargin) return false;
    for (int j = 0; j < q(); ++j) {
      const double t = v[p_ + j];
      if (t <= kOpenMargin || t >= 1.0 - kOpenMargin) return false;
    }
    if (const auto* ls = std::get_if<LevelSetMember>(&T_.map())) {
      for (std::size_t j = 0; j < ls->inequalities.size(); ++j) {
        if ((stratum_.pinned >> j) & 1u) continue;
        if (ls->inequalities[j].eval(z) <= kOpenMargin) return false;
      }
    }
    return true;
  }

  bool in_search_box(const Vec& v) const {
    return (v.array() >= -0.5).all() && (v.array() <= 1.5).all();
  }

  // Damped Gauss-Newton from v. Returns true on convergence to tau.
  bool refine(Vec& v, double tau, double& residual, bool& near_miss) const {
    Vec r;
    Mat J;
    near_miss = false;
    if (!evaluate(v, r, &J)) return false;
    double rn = r.norm();
    if (dim() == 0) {
      residual = rn;
      return rn <= tau;
    }
    for (int it = 0; it < kNewtonIterations; ++it) {
      if (rn <= tau) {
        for (int k = 0; k < kPolishIterations; ++k) {
          const Vec step = J.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(-r);
          Vec v2 = v + step;
          Vec r2;
          Mat J2;
          if (!evaluate(v2, r2, &J2) || !(r2.norm() < rn)) break;
          v = v2;
          r = r2;
          J = J2;
          rn = r.norm();
          if (rn == 0.0 || step.norm() < 1e-16) break;
        }
        residual = rn;
        return true;
      }
      const Vec step = J.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(-r);
      bool accepted = false;
      double alpha = 1.0;
      for (int h = 0; h < 9; ++h, alpha *= 0.5) {
        Vec v2 = v + alpha * step;
        Vec r2;
        Mat J2;
        if (evaluate(v2, r2, &J2) && r2.norm() < rn) {
          v = v2;
          r = r2;
          J = J2;
          rn = r.norm();
          accepted = true;
          break;
        }
      }
      if (!accepted || !in_search_box(v)) break;
    }
    near_miss = rn < kNearMiss;
    residual = rn;
    return false;
  }

  double spanning_min_sv(const Vec& x, const Vec& z, const Vec& y) const {
    const AmbientManifold& M = sigma_.ambient();
    const int m = M.intrinsic_dim();
    const Mat B = M.tangent_basis(z).basis;
    const Mat face_dirs = orthonormal_columns(face_.matrix);
    const Mat push = p_ > 0 ? Mat(sigma_.jacobian_extended(x) * face_dirs) : Mat(z.size(), 0);
    const Mat tangent = member_stratum_tangent(M, T_, stratum_, z, y);
    Mat cols(z.size(), push.cols() + tangent.cols());
    cols << push, tangent;
    if (cols.cols() < m) return 0.0;
    const Mat S = B.transpose() * cols;  // m x cols
    Eigen::JacobiSVD<Mat> svd(S);
    return svd.singularValues()(m - 1);
  }

 private:
  const SmoothSimplexMap& sigma_;
  AffineMap face_;
  int p_;
  const CornerManifold& T_;
  TStratum stratum_;
  std::vector<int> free_;
};

void enumerate_cells(int d, int cells, const std::function<void(const Vec&)>& visit) {
  Vec c(d);
  std::vector<int> idx(d, 0);
  while (true) {
    for (int i = 0; i < d; ++i) c[i] = (idx[i] + 0.5) / cells;
    visit(c);
    int i = 0;
    while (i < d && ++idx[i] == cells) idx[i++] = 0;
    if (i == d) break;
  }
}

}  // namespace

// ---------------------------------------------------------------------------

CornerManifold CornerManifold::level_set(std::string name, PolyMap G, std::vector<Polynomial> inequalities,
                                         std::vector<PolyMap> coorientation) {
  CornerManifold T;
  T.name_ = std::move(name);
  T.codim_ = G.dim();
  for (auto& h : inequalities) {
    if (h.nvars() < G.nvars()) h = Polynomial(G.nvars(), h.terms());
  }
  if (inequalities.size() > 16) throw SchemaError("too many inequalities on a member");
  T.map_ = LevelSetMember{std::move(G), std::move(inequalities)};
  T.coorientation_ = std::move(coorientation);
  if (!T.coorientation_.empty() && static_cast<int>(T.coorientation_.size()) != T.codim_) {
    throw SchemaError("coorientation frame needs one vector per codimension");
  }
  return T;
}

CornerManifold CornerManifold::parametric(std::string name, int domain_dim, PolyMap psi, bool project,
                                          int codim_in_M, std::vector<PolyMap> coorientation) {
  if (psi.nvars() != domain_dim) throw SchemaError("parametric member: psi variable count mismatch");
  if (domain_dim > 8) throw SchemaError("parametric member: domain dimension too large");
  CornerManifold T;
  T.name_ = std::move(name);
  T.codim_ = codim_in_M;
  T.map_ = ParametricMember{domain_dim, std::move(psi), project};
  T.coorientation_ = std::move(coorientation);
  if (!T.coorientation_.empty() && static_cast<int>(T.coorientation_.size()) != T.codim_) {
    throw SchemaError("coorientation frame needs one vector per codimension");
  }
  return T;
}

CornerManifold CornerManifold::point(std::string name, const Vec& p) {
  const int N = static_cast<int>(p.size());
  std::vector<Polynomial> G;
  std::vector<PolyMap> frame;
  for (int i = 0; i < N; ++i) {
    G.push_back(identity_poly(N, i) - Polynomial::constant(N, p[i]));
    Vec e = Vec::Zero(N);
    e[i] = 1.0;
    frame.push_back(PolyMap::constant(N, e));
  }
  return level_set(std::move(name), PolyMap(N, std::move(G)), {}, std::move(frame));
}

std::vector<TStratum> CornerManifold::strata() const {
  std::vector<TStratum> out;
  if (const auto* ls = std::get_if<LevelSetMember>(&map_)) {
    const auto q = static_cast<std::uint32_t>(ls->inequalities.size());
    for (std::uint32_t mask = 0; mask < (1u << q); ++mask) {
      out.push_back({std::popcount(mask), mask, 0u});
    }
    std::stable_sort(out.begin(), out.end(), [](const TStratum& a, const TStratum& b) { return a.depth < b.depth; });
    return out;
  }
  const auto& par = std::get<ParametricMember>(map_);
  const int d = par.domain_dim;
  // Each coordinate is free, pinned at 0, or pinned at 1.
  int total = 1;
  for (int i = 0; i < d; ++i) total *= 3;
  for (int code = 0; code < total; ++code) {
    TStratum s;
    int c = code;
    for (int i = 0; i < d; ++i, c /= 3) {
      const int state = c % 3;
      if (state == 0) continue;
      s.pinned |= 1u << i;
      if (state == 2) s.at_one |= 1u << i;
    }
    s.depth = std::popcount(s.pinned);
    out.push_back(s);
  }
  std::stable_sort(out.begin(), out.end(), [](const TStratum& a, const TStratum& b) { return a.depth < b.depth; });
  return out;
}

Mat member_stratum_tangent(const AmbientManifold& M, const CornerManifold& T, const TStratum& stratum,
                           const Vec& z, const Vec& y) {
  const int N = M.ambient_dim();
  if (const auto* ls = std::get_if<LevelSetMember>(&T.map())) {
    const Mat B = M.tangent_basis(z).basis;
    const int m = static_cast<int>(B.cols());
    const int c = ls->G.dim();
    const int a = std::popcount(stratum.pinned);
    Mat D(c + a, N);
    D.topRows(c) = ls->G.jacobian(z);
    int row = c;
    for (std::size_t j = 0; j < ls->inequalities.size(); ++j) {
      if (!((stratum.pinned >> j) & 1u)) continue;
      for (int col = 0; col < N; ++col) D(row, col) = ls->inequalities[j].derivative(col).eval(z);
      ++row;
    }
    if (c + a >= m) {
      // Point stratum (or empty generically): no tangent directions.
      return Mat(N, 0);
    }
    const Mat C = D * B;
    Eigen::JacobiSVD<Mat> svd(C, Eigen::ComputeFullV);
    if (svd.singularValues()(c + a - 1) < kRankTolerance) {
      throw RankDrop("member '" + T.name() + "' stratum map is rank deficient");
    }
    return B * svd.matrixV().rightCols(m - c - a);
  }
  const auto& par = std::get<ParametricMember>(T.map());
  Mat Dg = par.psi.jacobian(y);
  if (par.project) Dg = M.project_jacobian(par.psi.eval(y)) * Dg;
  std::vector<int> free;
  for (int i = 0; i < par.domain_dim; ++i) {
    if (!((stratum.pinned >> i) & 1u)) free.push_back(i);
  }
  Mat cols(N, static_cast<Eigen::Index>(free.size()));
  for (std::size_t j = 0; j < free.size(); ++j) cols.col(static_cast<Eigen::Index>(j)) = Dg.col(free[j]);
  if (cols.cols() > 0) {
    Eigen::JacobiSVD<Mat> svd(cols);
    if (svd.singularValues()(cols.cols() - 1) < kRankTolerance) {
      throw RankDrop("member '" + T.name() + "' parametrization is rank deficient");
    }
  }
  return orthonormal_columns(cols);
}

IntersectionReport intersection_locus(const SmoothSimplexMap& sigma, int k, const CornerManifold& T,
                                      const TStratum& stratum, const TransversalityOptions& opts) {
  IntersectionReport total;
  const int n = sigma.dim();
  for (const auto& face : faces_of_codim(n, k)) {
    StratumProblem prob(sigma, face, T, stratum);
    const int d = prob.dim();
    int cells = opts.initial_cells;
    IntersectionReport rep;
    while (true) {
      rep = IntersectionReport{};
      rep.cells_per_dim = cells;
      std::vector<Vec> found;
      auto consider = [&](Vec v) {
        double residual = 0.0;
        bool near_miss = false;
        if (!prob.refine(v, opts.tau_root, residual, near_miss)) {
          if (near_miss) ++rep.newton_failures;
          return;
        }
        Vec r;
        if (!prob.evaluate(v, r, nullptr)) return;
        const Vec z = sigma.eval_extended(prob.x_of(v));
        if (!prob.inside_open(v, z)) return;
        for (const auto& w : found) {
          if ((v - w).norm() < opts.cluster_radius) return;
        }
        found.push_back(v);
        IntersectionPoint pt;
        pt.x = prob.x_of(v);
        pt.k = k;
        pt.y = prob.full_y(v);
        pt.l = stratum.depth;
        pt.z = z;
        pt.residual = r.norm();
        pt.min_singular_value = prob.spanning_min_sv(pt.x, z, pt.y);
        rep.points.push_back(std::move(pt));
      };
      if (d == 0) {
        consider(Vec());
      } else {
        const double cell = 1.0 / cells;
        enumerate_cells(d, cells, [&](const Vec& center) {
          if (prob.p() > 0 && barycentric(center.head(prob.p())).minCoeff() < -cell) return;
          consider(center);
        });
      }
      double worst = std::numeric_limits<double>::infinity();
      for (const auto& pt : rep.points) worst = std::min(worst, pt.min_singular_value);
      const bool near_tol = worst >= opts.tol_rank / 10.0 && worst <= opts.tol_rank * 10.0;
      const int next = cells * 2;
      if (!near_tol || d == 0 || next > opts.max_cells ||
          std::pow(static_cast<double>(next), d) > static_cast<double>(opts.max_total_cells)) {
        break;
      }
      cells = next;
    }
    total.points.insert(total.points.end(), rep.points.begin(), rep.points.end());
    total.newton_failures += rep.newton_failures;
    total.cells_per_dim = std::max(total.cells_per_dim, rep.cells_per_dim);
  }
  return total;
}

PairVerdict is_transverse_pair(const SmoothSimplexMap& sigma, const CornerManifold& T,
                               const TransversalityOptions& opts) {
  PairVerdict v;
  const int kmax = opts.interior_only ? 0 : sigma.dim();
  for (int k = 0; k <= kmax; ++k) {
    for (const auto& stratum : T.strata()) {
      auto rep = intersection_locus(sigma, k, T, stratum, opts);
      for (const auto& pt : rep.points) {
        v.min_singular_value = std::min(v.min_singular_value, pt.min_singular_value);
        if (pt.min_singular_value < opts.tol_rank) v.transverse = false;
      }
      v.report.points.insert(v.report.points.end(), rep.points.begin(), rep.points.end());
      v.report.newton_failures += rep.newton_failures;
      v.report.cells_per_dim = std::max(v.report.cells_per_dim, rep.cells_per_dim);
    }
  }
  return v;
}

TVerdict is_T_transverse(const SmoothSimplexMap& sigma, const TCollection& Ts,
                         const TransversalityOptions& opts) {
  TVerdict out;
  for (const auto& T : Ts) {
    auto pv = is_transverse_pair(sigma, T, opts);
    out.transverse = out.transverse && pv.transverse;
    out.min_singular_value = std::min(out.min_singular_value, pv.min_singular_value);
    out.members.push_back(std::move(pv));
  }
  return out;
}

// ---------------------------------------------------------------------------

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Vec sample_open_ball(std::uint64_t seed, int dim) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vec dir(dim);
  do {
    for (int i = 0; i < dim; ++i) dir[i] = normal(gen);
  } while (dir.norm() == 0.0);
  const double radius = std::pow(unit(gen), 1.0 / dim);  // in [0, 1)
  return radius * dir / dir.norm();
}

Vec PerturbationHomotopy::displaced(double t, const Vec& x) const {
  return base.eval_lift(x) + (t * rho.eval(x) * eps) * s;
}

Vec PerturbationHomotopy::eval(double t, const Vec& x) const {
  if (t == 0.0) return base.eval(x);
  const Vec v = displaced(t, x);
  return base.projected() ? base.ambient().project(v) : v;
}

PerturbResult perturb_to_transverse(const SmoothSimplexMap& sigma, const TCollection& Ts,
                                    std::uint64_t seed, int max_trials,
                                    const TransversalityOptions& opts) {
  const int n = sigma.dim();
  const AmbientManifold& M = sigma.ambient();
  const Polynomial rho = barycentric_bump(n);
  const Vec center = Vec::Constant(n, 1.0 / (n + 1));
  const double offset = sigma.max_lift_offset();
  const double eps = M.epsilon(sigma.eval(center)) - 1.1 * offset;
  if (!(eps > 0.0)) throw OutOfTube("lift offset leaves no room for the tube perturbation");

  bool boundary_ok = true;
  if (n >= 1) {
    for (const auto& delta : enumerate_face_maps(n)) {
      boundary_ok = boundary_ok && is_T_transverse(sigma.restrict(delta), Ts, opts).transverse;
    }
  }

  TransversalityOptions interior = opts;
  interior.interior_only = true;
  for (int trial = 0; trial < max_trials; ++trial) {
    const std::uint64_t trial_seed = splitmix64(seed + 0x632be59bd9b4e019ULL * static_cast<std::uint64_t>(trial + 1));
    const Vec s = sample_open_ball(trial_seed, M.ambient_dim());
    try {
      SmoothSimplexMap candidate = sigma.perturbed(rho, eps, s);
      if (n == 0 && candidate.projected()) {
        // A point simplex keeps its lift on M.
        candidate = SmoothSimplexMap::constant(0, sigma.ambient_ptr(), candidate.eval(Vec()));
      }
      TVerdict verdict = is_T_transverse(candidate, Ts, interior);
      if (verdict.transverse) {
        PerturbResult out{candidate, s, trial + 1, trial_seed, eps,
                          PerturbationHomotopy{sigma, rho, eps, s}, std::move(verdict), boundary_ok};
        return out;
      }
    } catch (const OutOfTube&) {
      // Candidate left the tube; count as a rejected trial.
    }
  }
  std::ostringstream os;
  os << "no transverse perturbation after " << max_trials << " trials";
  throw TrialsExhausted(os.str());
}

}  // namespace trx
