#include "trx/ambient.hpp"

#include "trx/errors.hpp"

#include <cmath>
#include <sstream>

namespace trx {

namespace {

constexpr double kRankTolerance = 1e-7;
constexpr double kProjectionResidual = 1e-12;
constexpr int kProjectionMaxIterations = 50;
constexpr double kFiniteDifferenceStep = 1e-6;

std::string describe(const Vec& z) {
  std::ostringstream os;
  os << "(";
  for (Eigen::Index i = 0; i < z.size(); ++i) os << (i ? ", " : "") << z[i];
  os << ")";
  return os.str();
}

}  // namespace

std::string to_string(ManifoldKind kind) {
  switch (kind) {
    case ManifoldKind::Euclidean: return "euclidean";
    case ManifoldKind::Sphere: return "sphere";
    case ManifoldKind::CliffordTorus: return "clifford_torus";
    case ManifoldKind::LevelSet: return "level_set";
  }
  return "unknown";
}

AmbientManifold::AmbientManifold(ManifoldKind kind, int N, int m, double eps_lower, PolyMap G)
    : kind_(kind), ambient_dim_(N), intrinsic_dim_(m), eps_lower_(eps_lower), G_(std::move(G)) {
  if (!(eps_lower_ > 0.0)) throw SchemaError("eps_lower must be positive");
}

AmbientManifold AmbientManifold::euclidean(int m, double eps_lower) {
  if (m < 1) throw SchemaError("Euclidean dimension must be positive");
  return AmbientManifold(ManifoldKind::Euclidean, m, m, eps_lower, {});
}

AmbientManifold AmbientManifold::sphere(int ambient_dim, double eps_lower) {
  if (ambient_dim < 2) throw SchemaError("sphere needs ambient dimension >= 2");
  if (eps_lower >= 1.0) throw SchemaError("sphere eps_lower must stay below the reach 1");
  return AmbientManifold(ManifoldKind::Sphere, ambient_dim, ambient_dim - 1, eps_lower, {});
}

double AmbientManifold::torus_radius() { return 1.0 / std::sqrt(2.0); }

AmbientManifold AmbientManifold::clifford_torus(double eps_lower) {
  if (eps_lower >= torus_radius()) throw SchemaError("torus eps_lower must stay below the reach");
  return AmbientManifold(ManifoldKind::CliffordTorus, 4, 2, eps_lower, {});
}

AmbientManifold AmbientManifold::level_set(PolyMap G, double eps_lower) {
  const int N = G.nvars();
  const int c = G.dim();
  if (c < 1 || c >= N) throw SchemaError("level set needs 1 <= c < N defining equations");
  return AmbientManifold(ManifoldKind::LevelSet, N, N - c, eps_lower, std::move(G));
}

double AmbientManifold::distance(const Vec& z) const {
  switch (kind_) {
    case ManifoldKind::Euclidean: return 0.0;
    case ManifoldKind::Sphere: return std::abs(z.norm() - 1.0);
    case ManifoldKind::CliffordTorus: {
      const double r = torus_radius();
      const double a = z.head<2>().norm() - r;
      const double b = z.tail<2>().norm() - r;
      return std::hypot(a, b);
    }
    case ManifoldKind::LevelSet: return (z - project_level_set(z)).norm();
  }
  return 0.0;
}

bool AmbientManifold::contains(const Vec& z, double tol) const {
  if (z.size() != ambient_dim_) return false;
  if (kind_ == ManifoldKind::LevelSet) {
    try {
      return (z - project(z)).norm() <= tol;
    } catch (const OutOfTube&) {
      return false;
    }
  }
  return distance(z) <= tol;
}

Vec AmbientManifold::project_unchecked(const Vec& z) const {
  switch (kind_) {
    case ManifoldKind::Euclidean: return z;
    case ManifoldKind::Sphere: return z / z.norm();
    case ManifoldKind::CliffordTorus: {
      const double r = torus_radius();
      Vec w(4);
      w.head<2>() = r * z.head<2>() / z.head<2>().norm();
      w.tail<2>() = r * z.tail<2>() / z.tail<2>().norm();
      return w;
    }
    case ManifoldKind::LevelSet: return project_level_set(z);
  }
  return z;
}

// Newton on the optimality system  w - z + DG(w)^T lambda = 0,  G(w) = 0.
Vec AmbientManifold::project_level_set(const Vec& z) const {
  const int N = ambient_dim_;
  const int c = G_.dim();
  Vec w = z;
  Vec lambda = Vec::Zero(c);
  for (int it = 0; it <= kProjectionMaxIterations; ++it) {
    const Mat DG = G_.jacobian(w);
    Vec residual(N + c);
    residual.head(N) = w - z + DG.transpose() * lambda;
    residual.tail(c) = G_.eval(w);
    if (residual.norm() < kProjectionResidual) {
      Eigen::JacobiSVD<Mat> svd(DG);
      if (svd.singularValues()(c - 1) < kRankTolerance) {
        throw RankDrop("defining map is rank deficient at " + describe(w));
      }
      return w;
    }
    if (it == kProjectionMaxIterations) break;
    Mat K = Mat::Zero(N + c, N + c);
    K.topLeftCorner(N, N).setIdentity();
    for (int i = 0; i < c; ++i) K.topLeftCorner(N, N) += lambda[i] * G_.hessian(i, w);
    K.topRightCorner(N, c) = DG.transpose();
    K.bottomLeftCorner(c, N) = DG;
    const Vec step = K.colPivHouseholderQr().solve(-residual);
    if (!step.allFinite()) break;
    w += step.head(N);
    lambda += step.tail(c);
    if ((w - z).norm() > 10.0 * eps_lower_) break;
  }
  throw OutOfTube("level-set projection did not converge from " + describe(z));
}

Vec AmbientManifold::project(const Vec& z) const {
  if (z.size() != ambient_dim_) throw SchemaError("project: point has wrong dimension");
  if (kind_ == ManifoldKind::LevelSet) {
    const Vec w = project_level_set(z);
    if ((z - w).norm() >= eps_lower_) {
      throw OutOfTube("point " + describe(z) + " is outside the tube");
    }
    return w;
  }
  const double d = distance(z);
  if (!(d < eps_lower_)) throw OutOfTube("point " + describe(z) + " is outside the tube");
  return project_unchecked(z);
}

Mat AmbientManifold::project_jacobian(const Vec& z) const {
  const int N = ambient_dim_;
  switch (kind_) {
    case ManifoldKind::Euclidean: return Mat::Identity(N, N);
    case ManifoldKind::Sphere: {
      const double n = z.norm();
      const Vec u = z / n;
      return (Mat::Identity(N, N) - u * u.transpose()) / n;
    }
    case ManifoldKind::CliffordTorus: {
      const double r = torus_radius();
      Mat J = Mat::Zero(4, 4);
      for (int block = 0; block < 2; ++block) {
        const Eigen::Vector2d p = z.segment<2>(2 * block);
        const double n = p.norm();
        const Eigen::Vector2d u = p / n;
        J.block<2, 2>(2 * block, 2 * block) = r * (Eigen::Matrix2d::Identity() - u * u.transpose()) / n;
      }
      return J;
    }
    case ManifoldKind::LevelSet: {
      Mat J(N, N);
      for (int j = 0; j < N; ++j) {
        Vec zp = z, zm = z;
        zp[j] += kFiniteDifferenceStep;
        zm[j] -= kFiniteDifferenceStep;
        J.col(j) = (project(zp) - project(zm)) / (2.0 * kFiniteDifferenceStep);
      }
      return J;
    }
  }
  return Mat::Identity(N, N);
}

TangentFrame AmbientManifold::tangent_basis(const Vec& z) const {
  const int N = ambient_dim_;
  const int m = intrinsic_dim_;
  TangentFrame frame{z, Mat(N, m)};
  switch (kind_) {
    case ManifoldKind::Euclidean:
      frame.basis = Mat::Identity(N, N);
      break;
    case ManifoldKind::Sphere: {
      Mat A(N, 1);
      A.col(0) = z / z.norm();
      Eigen::HouseholderQR<Mat> qr(A);
      const Mat Q = qr.householderQ() * Mat::Identity(N, N);
      frame.basis = Q.rightCols(N - 1);
      break;
    }
    case ManifoldKind::CliffordTorus: {
      frame.basis.setZero();
      const double n1 = z.head<2>().norm();
      const double n2 = z.tail<2>().norm();
      frame.basis(0, 0) = -z[1] / n1;
      frame.basis(1, 0) = z[0] / n1;
      frame.basis(2, 1) = -z[3] / n2;
      frame.basis(3, 1) = z[2] / n2;
      break;
    }
    case ManifoldKind::LevelSet: {
      const Mat DG = G_.jacobian(z);
      Eigen::JacobiSVD<Mat> svd(DG, Eigen::ComputeFullV);
      const int c = G_.dim();
      if (svd.singularValues()(c - 1) < kRankTolerance) {
        throw RankDrop("defining map is rank deficient at " + describe(z));
      }
      frame.basis = svd.matrixV().rightCols(N - c);
      break;
    }
  }
  return frame;
}

double AmbientManifold::epsilon(const Vec&) const { return eps_lower_; }

}  // namespace trx
