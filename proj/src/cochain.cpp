#include "trx/cochain.hpp"

#include "trx/errors.hpp"

#include <cmath>
#include <map>
#include <numbers>

namespace trx {

namespace {

constexpr double kSignFloor = 1e-9;

}  // namespace

Chain Chain::normalized() const {
  Chain out{dim, {}};
  std::map<std::string, std::size_t> slot;
  for (const auto& [coeff, id] : terms) {
    auto it = slot.find(id);
    if (it == slot.end()) {
      slot[id] = out.terms.size();
      out.terms.emplace_back(coeff, id);
    } else {
      out.terms[it->second].first += coeff;
    }
  }
  std::erase_if(out.terms, [](const auto& t) { return t.first == 0; });
  return out;
}

Chain boundary(const FiniteSingularFamily& fam, const Chain& c) {
  if (c.dim < 1) throw SchemaError("boundary needs a chain of dimension >= 1");
  Chain out{c.dim - 1, {}};
  for (const auto& [coeff, id] : c.terms) {
    const auto& faces = fam.record(id).faces;
    for (std::size_t i = 0; i < faces.size(); ++i) {
      out.terms.emplace_back(i % 2 == 0 ? coeff : -coeff, faces[i]);
    }
  }
  return out.normalized();
}

Mat oriented_normal_frame(const AmbientManifold& M, const CornerManifold& W, const Vec& z, const Vec& y) {
  const int d = W.codim_in_M();
  const Mat B = M.tangent_basis(z).basis;
  const Mat TW = member_stratum_tangent(M, W, TStratum{}, z, y);
  // Projector onto the normal space of W inside T_zM.
  Mat P = B * B.transpose();
  if (TW.cols() > 0) P -= TW * TW.transpose();
  Mat V(z.size(), d);
  for (int j = 0; j < d; ++j) V.col(j) = P * W.coorientation()[j].eval(z);
  Eigen::HouseholderQR<Mat> qr(V);
  Mat E = qr.householderQ() * Mat::Identity(z.size(), d);
  const Mat R = qr.matrixQR().topRows(d).triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j) {
    if (std::abs(R(j, j)) < kSignFloor) throw RankDrop("coorientation frame degenerates at an intersection point");
    if (R(j, j) < 0) E.col(j) *= -1.0;
  }
  return E;
}

IotaResult iota_W(const CornerManifold& W, const SmoothSimplexMap& sigma, const TransversalityOptions& opts) {
  if (!W.cooriented()) throw SchemaError("member '" + W.name() + "' has no coorientation");
  if (W.codim_in_M() != sigma.dim()) {
    throw SchemaError("signed count needs dim sigma = codim W");
  }
  PairVerdict v = is_transverse_pair(sigma, W, opts);
  if (!v.transverse) {
    throw NotTransverse("simplex is not transverse to '" + W.name() + "' (min singular value " +
                        std::to_string(v.min_singular_value) + ")");
  }
  IotaResult out;
  for (auto pt : v.report.points) {
    const Mat E = oriented_normal_frame(sigma.ambient(), W, pt.z, pt.y);
    const Mat A = E.transpose() * sigma.jacobian_extended(pt.x);
    const double det = sigma.dim() == 0 ? 1.0 : A.determinant();
    if (std::abs(det) < kSignFloor) {
      throw NearSingularSign("intersection sign determinant " + std::to_string(det) + " is too small");
    }
    pt.sign = det > 0 ? 1 : -1;
    out.value += *pt.sign;
    out.points.push_back(std::move(pt));
  }
  return out;
}

long iota_W(const CornerManifold& W, const FiniteSingularFamily& fam, const Chain& c,
            const TransversalityOptions& opts) {
  long total = 0;
  for (const auto& [coeff, id] : c.terms) total += coeff * iota_W(W, fam.record(id).map, opts).value;
  return total;
}

CocycleCheck cocycle_check(const CornerManifold& W, const FiniteSingularFamily& fam, const std::string& tau,
                           const TransversalityOptions& opts) {
  const SingularRecord& r = fam.record(tau);
  if (r.dim < 1) throw SchemaError("cocycle check needs dim tau >= 1");
  const PairVerdict v = is_transverse_pair(r.map, W, opts);
  if (!v.transverse) throw NotTransverse("tau '" + tau + "' is not transverse to '" + W.name() + "'");
  CocycleCheck out;
  for (std::size_t i = 0; i < r.faces.size(); ++i) {
    const long count = iota_W(W, fam.record(r.faces[i]).map, opts).value;
    out.face_counts.push_back(count);
    out.value += i % 2 == 0 ? count : -count;
  }
  return out;
}

Chain retract_chain(FiniteSingularFamily& fam, const Chain& c) {
  Chain out{c.dim, {}};
  for (const auto& [coeff, id] : c.terms) out.terms.emplace_back(coeff, fam.retract(id));
  return out.normalized();
}

long pullback_evaluate(const CornerManifold& W, const Chain& c, FiniteSingularFamily& fam) {
  return iota_W(W, fam, retract_chain(fam, c), fam.options().transversality);
}

long winding_number(const std::function<Eigen::Vector2d(double)>& gamma, const Eigen::Vector2d& center) {
  constexpr double kMaxStep = 0.2;  // radians per accepted segment
  constexpr int kMaxDepth = 40;
  auto angle = [&](double t) {
    const Eigen::Vector2d d = gamma(t) - center;
    if (d.norm() < 1e-12) throw NearSingularSign("curve passes through the winding center");
    return std::atan2(d.y(), d.x());
  };
  auto wrap = [](double a) {
    while (a > std::numbers::pi) a -= 2 * std::numbers::pi;
    while (a <= -std::numbers::pi) a += 2 * std::numbers::pi;
    return a;
  };
  double total = 0.0;
  auto segment = [&](auto&& self, double t0, double a0, double t1, double a1, int depth) -> void {
    const double step = wrap(a1 - a0);
    if (depth >= kMaxDepth || std::abs(step) < kMaxStep) {
      const double tm = 0.5 * (t0 + t1);
      const double am = angle(tm);
      // Accept only if the midpoint agrees with the chord direction.
      if (depth >= kMaxDepth || std::abs(wrap(am - a0)) < kMaxStep) {
        total += step;
        return;
      }
    }
    const double tm = 0.5 * (t0 + t1);
    const double am = angle(tm);
    self(self, t0, a0, tm, am, depth + 1);
    self(self, tm, am, t1, a1, depth + 1);
  };
  constexpr int kInitial = 64;
  double prev_t = 0.0;
  double prev_a = angle(0.0);
  for (int k = 1; k <= kInitial; ++k) {
    const double t = static_cast<double>(k) / kInitial;
    const double a = angle(t);
    segment(segment, prev_t, prev_a, t, a, 0);
    prev_t = t;
    prev_a = a;
  }
  return std::lround(total / (2 * std::numbers::pi));
}

long boundary_winding_number(const SmoothSimplexMap& sigma, const Eigen::Vector2d& center) {
  if (sigma.dim() != 2 || sigma.ambient().ambient_dim() != 2) {
    throw SchemaError("boundary winding number needs a 2-simplex in the plane");
  }
  const Vec v[3] = {simplex_vertex(2, 0), simplex_vertex(2, 1), simplex_vertex(2, 2)};
  auto gamma = [&](double t) -> Eigen::Vector2d {
    const double s = 3.0 * t;
    const int e = std::min(2, static_cast<int>(s));
    const double u = s - e;
    const Vec x = (1.0 - u) * v[e] + u * v[(e + 1) % 3];
    const Vec z = sigma.eval(x);
    return {z[0], z[1]};
  };
  return winding_number(gamma, center);
}

}  // namespace trx
