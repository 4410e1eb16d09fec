#include "trx/simplex_geom.hpp"

#include "trx/errors.hpp"

#include <algorithm>
#include <numeric>

namespace trx {

DeltaMorphism::DeltaMorphism(int target, std::vector<int> values)
    : target_(target), values_(std::move(values)) {
  if (values_.empty()) throw SchemaError("Delta morphism needs a nonempty source");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] < 0 || values_[i] > target_) throw SchemaError("Delta morphism value out of range");
    if (i > 0 && values_[i] < values_[i - 1]) throw SchemaError("Delta morphism must be weakly increasing");
  }
}

DeltaMorphism DeltaMorphism::identity(int n) {
  std::vector<int> v(n + 1);
  std::iota(v.begin(), v.end(), 0);
  return {n, v};
}

DeltaMorphism DeltaMorphism::coface(int n, int i) {
  std::vector<int> v;
  for (int k = 0; k <= n; ++k) {
    if (k != i) v.push_back(k);
  }
  return {n, v};
}

DeltaMorphism DeltaMorphism::codegeneracy(int n, int j) {
  std::vector<int> v;
  for (int k = 0; k <= n + 1; ++k) v.push_back(k <= j ? k : k - 1);
  return {n, v};
}

DeltaMorphism DeltaMorphism::constant(int m, int n, int v) {
  return {n, std::vector<int>(m + 1, v)};
}

bool DeltaMorphism::is_injective() const {
  return std::adjacent_find(values_.begin(), values_.end()) == values_.end();
}

bool DeltaMorphism::is_surjective() const {
  return values_.front() == 0 && values_.back() == target_ &&
         std::adjacent_find(values_.begin(), values_.end(),
                            [](int a, int b) { return b > a + 1; }) == values_.end();
}

DeltaMorphism DeltaMorphism::compose(const DeltaMorphism& other) const {
  if (other.target() != source()) throw SchemaError("Delta morphisms are not composable");
  std::vector<int> v;
  for (int x : other.values()) v.push_back(values_[x]);
  return {target_, v};
}

Vec simplex_vertex(int n, int i) {
  Vec v = Vec::Zero(n);
  if (i > 0) v[i - 1] = 1.0;
  return v;
}

AffineMap realize_morphism(const DeltaMorphism& beta) {
  const int m = beta.source();
  const int n = beta.target();
  AffineMap f{Mat::Zero(n, m), simplex_vertex(n, beta(0))};
  for (int i = 1; i <= m; ++i) f.matrix.col(i - 1) = simplex_vertex(n, beta(i)) - f.offset;
  return f;
}

Vec barycentric(const Vec& x) {
  Vec l(x.size() + 1);
  l[0] = 1.0 - x.sum();
  l.tail(x.size()) = x;
  return l;
}

Vec from_barycentric(const Vec& lambda) { return lambda.tail(lambda.size() - 1); }

bool in_simplex(const Vec& x, double tol) { return barycentric(x).minCoeff() >= -tol; }

int stratum_of(int n, const Vec& x, double tol) {
  if (x.size() != n) throw SchemaError("stratum_of: dimension mismatch");
  const Vec l = barycentric(x);
  return static_cast<int>((l.array() <= tol).count());
}

Vec collapse_to_simplex(int n, const Vec& z) {
  if (z.size() != n) throw SchemaError("collapse_to_simplex: dimension mismatch");
  if (n == 0) return z;
  const Vec clipped = z.cwiseMax(0.0);
  if (clipped.sum() <= 1.0) return clipped;
  // Project onto {x >= 0, sum x = 1}: x_i = max(z_i - mu, 0) with sum 1.
  std::vector<double> s(z.data(), z.data() + n);
  std::sort(s.begin(), s.end(), std::greater<>());
  double cumulative = 0.0;
  double mu = 0.0;
  for (int j = 0; j < n; ++j) {
    cumulative += s[j];
    const double candidate = (cumulative - 1.0) / (j + 1);
    if (s[j] - candidate > 0.0) mu = candidate;
  }
  return (z.array() - mu).cwiseMax(0.0).matrix();
}

std::vector<DeltaMorphism> enumerate_face_maps(int n) {
  if (n < 1) throw SchemaError("face maps need n >= 1");
  std::vector<DeltaMorphism> out;
  for (int i = 0; i <= n; ++i) out.push_back(DeltaMorphism::coface(n, i));
  return out;
}

std::vector<DeltaMorphism> faces_of_codim(int n, int k) {
  std::vector<DeltaMorphism> out;
  if (k < 0 || k > n) return out;
  // Choose the n+1-k kept vertices in increasing order.
  std::vector<bool> keep(n + 1, false);
  std::fill(keep.begin(), keep.begin() + (n + 1 - k), true);
  do {
    std::vector<int> v;
    for (int i = 0; i <= n; ++i) {
      if (keep[i]) v.push_back(i);
    }
    out.emplace_back(n, v);
  } while (std::prev_permutation(keep.begin(), keep.end()));
  return out;
}

std::vector<Vec> simplex_lattice(int n, int res) {
  std::vector<Vec> out;
  Vec x = Vec::Zero(n);
  auto rec = [&](auto&& self, int var, int remaining) -> void {
    if (var == n) {
      out.push_back(x);
      return;
    }
    for (int p = 0; p <= remaining; ++p) {
      x[var] = static_cast<double>(p) / res;
      self(self, var + 1, remaining - p);
    }
  };
  rec(rec, 0, res);
  return out;
}

}  // namespace trx
