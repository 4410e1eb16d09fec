#include "trx/models.hpp"
#include "trx/polynomial.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace trx;

namespace {

Polynomial random_poly(std::mt19937_64& rng, int nvars, int deg) {
  std::normal_distribution<double> g;
  const auto monos = graded_monomials(nvars, deg);
  std::vector<double> c(monos.size());
  for (auto& v : c) v = g(rng);
  return Polynomial::from_dense(nvars, deg, c);
}

// Term-by-term evaluation with std::pow, independent of the library's evaluator.
double naive_eval(const Polynomial& p, const Eigen::VectorXd& x) {
  double s = 0;
  for (const auto& t : p.terms()) {
    double m = t.coeff;
    for (int v = 0; v < p.nvars(); ++v) m *= std::pow(x[v], t.exp[v]);
    s += m;
  }
  return s;
}

long binom(int n, int k) {
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST(Polynomial, GradedMonomialCountIsBinomial) {
  for (int n = 0; n <= 5; ++n) {
    for (int d = 0; d <= 6; ++d) {
      EXPECT_EQ(static_cast<long>(graded_monomials(n, d).size()), binom(n + d, d)) << n << " " << d;
    }
  }
}

TEST(Polynomial, GradedOrderStartsWithDocumentedPrefix) {
  const auto m = graded_monomials(2, 2);
  ASSERT_EQ(m.size(), 6u);
  const int expected[6][2] = {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
  for (int i = 0; i < 6; ++i) {
    EXPECT_EQ(m[i][0], expected[i][0]);
    EXPECT_EQ(m[i][1], expected[i][1]);
  }
}

TEST(Polynomial, DenseRoundTrip) {
  std::mt19937_64 rng(11);
  for (int n = 1; n <= 4; ++n) {
    const auto p = random_poly(rng, n, 3);
    const auto dense = p.to_dense(5);
    EXPECT_EQ(dense.size(), graded_monomials(n, 5).size());
    const auto q = Polynomial::from_dense(n, 5, dense);
    EXPECT_EQ(max_abs_diff(p, q), 0.0);
  }
}

TEST(Polynomial, EvaluationMatchesNaiveSum) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 4;
    const auto p = random_poly(rng, n, 4);
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x[i] = u(rng);
    EXPECT_NEAR(p.eval(x), naive_eval(p, x), 1e-12 * (1 + std::abs(naive_eval(p, x))));
  }
}

TEST(Polynomial, RingOperationsAgreePointwise) {
  std::mt19937_64 rng(5);
  const auto a = random_poly(rng, 3, 3);
  const auto b = random_poly(rng, 3, 2);
  Eigen::VectorXd x(3);
  x << 0.3, -0.7, 1.1;
  EXPECT_NEAR((a + b).eval(x), a.eval(x) + b.eval(x), 1e-12);
  EXPECT_NEAR((a - b).eval(x), a.eval(x) - b.eval(x), 1e-12);
  EXPECT_NEAR((a * b).eval(x), a.eval(x) * b.eval(x), 1e-11);
  EXPECT_NEAR((a * 2.5).eval(x), 2.5 * a.eval(x), 1e-12);
  EXPECT_EQ((a * b).degree(), a.degree() + b.degree());
  EXPECT_TRUE((a - a).is_zero());
}

TEST(Polynomial, DerivativeMatchesCentralDifference) {
  std::mt19937_64 rng(8);
  const auto p = random_poly(rng, 3, 4);
  Eigen::VectorXd x(3);
  x << 0.2, 0.4, -0.3;
  const double h = 1e-5;
  for (int v = 0; v < 3; ++v) {
    Eigen::VectorXd xp = x, xm = x;
    xp[v] += h;
    xm[v] -= h;
    EXPECT_NEAR(p.derivative(v).eval(x), (p.eval(xp) - p.eval(xm)) / (2 * h), 1e-7);
  }
}

TEST(Polynomial, CompositionAgreesWithNestedEvaluation) {
  std::mt19937_64 rng(13);
  const auto p = random_poly(rng, 2, 3);
  std::vector<Polynomial> subs{random_poly(rng, 3, 2), random_poly(rng, 3, 1)};
  const auto q = p.compose(subs);
  Eigen::VectorXd y(3);
  y << 0.5, -0.25, 0.75;
  Eigen::VectorXd x(2);
  x << subs[0].eval(y), subs[1].eval(y);
  EXPECT_EQ(q.nvars(), 3);
  EXPECT_NEAR(q.eval(y), p.eval(x), 1e-11);
}

TEST(Polynomial, ZeroVarsIsRestrictionToCoordinatePlane) {
  std::mt19937_64 rng(17);
  const auto p = random_poly(rng, 3, 3);
  Eigen::VectorXd x(3);
  x << 0.9, -0.4, 0.6;
  Eigen::VectorXd x0 = x;
  x0[0] = 0;
  x0[2] = 0;
  EXPECT_NEAR(p.zero_vars(0b101).eval(x), p.eval(x0), 1e-13);
}

TEST(PolyMap, JacobianAndHessianMatchFiniteDifferences) {
  const auto F = random_polymap(21, 2, 3, 3, 1.0);
  Eigen::VectorXd x(2);
  x << 0.3, 0.1;
  const double h = 1e-5;
  const auto J = F.jacobian(x);
  for (int v = 0; v < 2; ++v) {
    Eigen::VectorXd xp = x, xm = x;
    xp[v] += h;
    xm[v] -= h;
    const Eigen::VectorXd fd = (F.eval(xp) - F.eval(xm)) / (2 * h);
    EXPECT_LT((J.col(v) - fd).norm(), 1e-7);
    const Eigen::VectorXd hd = (F.jacobian(xp).row(1) - F.jacobian(xm).row(1)).transpose() / (2 * h);
    EXPECT_LT((F.hessian(1, x).col(v) - hd).norm(), 1e-6);
  }
}

TEST(PolyMap, AffineCompositionMatches) {
  const auto F = random_polymap(4, 2, 2, 3, 1.0);
  Eigen::MatrixXd A(2, 1);
  A << 1.0, -2.0;
  Eigen::VectorXd b(2);
  b << 0.5, 0.25;
  const auto G = F.compose_affine(A, b);
  Eigen::VectorXd t(1);
  t << 0.3;
  EXPECT_LT((G.eval(t) - F.eval(A * t + b)).norm(), 1e-12);
}
