#include "trx/polynomial.hpp"

#include "trx/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace trx {

namespace {

int total_degree(const Exponent& e) {
  int d = 0;
  for (auto v : e) d += v;
  return d;
}

void check_nvars(int nvars) {
  if (nvars < 0 || nvars > kMaxVars) {
    throw SchemaError("polynomial variable count " + std::to_string(nvars) + " out of range");
  }
}

}  // namespace

Polynomial::Polynomial(int nvars) : nvars_(nvars) { check_nvars(nvars); }

Polynomial::Polynomial(int nvars, std::vector<Term> terms) : nvars_(nvars), terms_(std::move(terms)) {
  check_nvars(nvars);
  normalize();
}

Polynomial Polynomial::constant(int nvars, double c) {
  return Polynomial(nvars, {Term{Exponent{}, c}});
}

Polynomial Polynomial::variable(int nvars, int index) {
  Exponent e{};
  e[index] = 1;
  return Polynomial(nvars, {Term{e, 1.0}});
}

void Polynomial::normalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const Term& a, const Term& b) { return a.exp < b.exp; });
  std::vector<Term> merged;
  merged.reserve(terms_.size());
  for (const auto& t : terms_) {
    for (int v = nvars_; v < kMaxVars; ++v) {
      if (t.exp[v] != 0) throw SchemaError("exponent uses a variable beyond nvars");
    }
    if (!merged.empty() && merged.back().exp == t.exp) {
      merged.back().coeff += t.coeff;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const Term& t) { return t.coeff == 0.0; });
  terms_ = std::move(merged);
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& t : terms_) d = std::max(d, total_degree(t.exp));
  return d;
}

double Polynomial::coefficient(const Exponent& e) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), e,
                             [](const Term& t, const Exponent& x) { return t.exp < x; });
  return (it != terms_.end() && it->exp == e) ? it->coeff : 0.0;
}

double Polynomial::eval(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.size() < nvars_) throw SchemaError("polynomial evaluated at a point of too few coordinates");
  double sum = 0.0;
  for (const auto& t : terms_) {
    double m = t.coeff;
    for (int v = 0; v < nvars_; ++v) {
      for (int p = 0; p < t.exp[v]; ++p) m *= x[v];
    }
    sum += m;
  }
  return sum;
}

Polynomial Polynomial::derivative(int var) const {
  std::vector<Term> out;
  for (const auto& t : terms_) {
    if (t.exp[var] == 0) continue;
    Term d = t;
    d.coeff *= t.exp[var];
    d.exp[var] -= 1;
    out.push_back(d);
  }
  return Polynomial(nvars_, std::move(out));
}

Polynomial Polynomial::compose(const std::vector<Polynomial>& subs) const {
  if (static_cast<int>(subs.size()) != nvars_) throw SchemaError("compose: substitute count mismatch");
  const int out_vars = subs.empty() ? 0 : subs.front().nvars();
  // powers[v][p] = subs[v]^p
  std::vector<std::vector<Polynomial>> powers(nvars_);
  for (int v = 0; v < nvars_; ++v) {
    powers[v].push_back(Polynomial::constant(out_vars, 1.0));
  }
  Polynomial result(out_vars);
  for (const auto& t : terms_) {
    Polynomial m = Polynomial::constant(out_vars, t.coeff);
    for (int v = 0; v < nvars_; ++v) {
      while (static_cast<int>(powers[v].size()) <= t.exp[v]) {
        powers[v].push_back(powers[v].back() * subs[v]);
      }
      if (t.exp[v] > 0) m = m * powers[v][t.exp[v]];
    }
    result += m;
  }
  return result;
}

Polynomial Polynomial::zero_vars(std::uint32_t mask) const {
  std::vector<Term> out;
  for (const auto& t : terms_) {
    bool keep = true;
    for (int v = 0; v < nvars_ && keep; ++v) {
      if ((mask >> v) & 1u) keep = t.exp[v] == 0;
    }
    if (keep) out.push_back(t);
  }
  return Polynomial(nvars_, std::move(out));
}

Polynomial Polynomial::pruned(double tol) const {
  std::vector<Term> out;
  for (const auto& t : terms_) {
    if (std::abs(t.coeff) > tol) out.push_back(t);
  }
  return Polynomial(nvars_, std::move(out));
}

double Polynomial::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& t : terms_) m = std::max(m, std::abs(t.coeff));
  return m;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  std::vector<Term> all = terms_;
  all.insert(all.end(), o.terms_.begin(), o.terms_.end());
  return Polynomial(std::max(nvars_, o.nvars_), std::move(all));
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + o * -1.0; }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  std::map<Exponent, double> acc;
  for (const auto& a : terms_) {
    for (const auto& b : o.terms_) {
      Exponent e{};
      for (int v = 0; v < kMaxVars; ++v) e[v] = static_cast<std::uint8_t>(a.exp[v] + b.exp[v]);
      acc[e] += a.coeff * b.coeff;
    }
  }
  std::vector<Term> out;
  out.reserve(acc.size());
  for (const auto& [e, c] : acc) out.push_back(Term{e, c});
  return Polynomial(std::max(nvars_, o.nvars_), std::move(out));
}

Polynomial Polynomial::operator*(double s) const {
  std::vector<Term> out = terms_;
  for (auto& t : out) t.coeff *= s;
  return Polynomial(nvars_, std::move(out));
}

std::vector<Exponent> graded_monomials(int nvars, int max_degree) {
  std::vector<Exponent> out;
  for (int d = 0; d <= max_degree; ++d) {
    // Lexicographically descending exponent vectors of total degree d.
    Exponent e{};
    std::vector<Exponent> level;
    auto rec = [&](auto&& self, int var, int remaining) -> void {
      if (var == nvars - 1 || nvars == 0) {
        if (nvars == 0) {
          if (remaining == 0) level.push_back(e);
          return;
        }
        e[var] = static_cast<std::uint8_t>(remaining);
        level.push_back(e);
        e[var] = 0;
        return;
      }
      for (int p = remaining; p >= 0; --p) {
        e[var] = static_cast<std::uint8_t>(p);
        self(self, var + 1, remaining - p);
      }
      e[var] = 0;
    };
    rec(rec, 0, d);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

std::vector<double> Polynomial::to_dense(int max_degree) const {
  if (degree() > max_degree) throw SchemaError("to_dense: degree exceeds requested maximum");
  auto monos = graded_monomials(nvars_, max_degree);
  std::vector<double> out(monos.size(), 0.0);
  for (std::size_t i = 0; i < monos.size(); ++i) out[i] = coefficient(monos[i]);
  return out;
}

Polynomial Polynomial::from_dense(int nvars, int max_degree, const std::vector<double>& coeffs) {
  auto monos = graded_monomials(nvars, max_degree);
  if (monos.size() != coeffs.size()) {
    throw SchemaError("dense coefficient array has " + std::to_string(coeffs.size()) +
                      " entries, expected " + std::to_string(monos.size()));
  }
  std::vector<Term> terms;
  for (std::size_t i = 0; i < monos.size(); ++i) {
    if (coeffs[i] != 0.0) terms.push_back(Term{monos[i], coeffs[i]});
  }
  return Polynomial(nvars, std::move(terms));
}

double max_abs_diff(const Polynomial& a, const Polynomial& b) { return (a - b).max_abs_coeff(); }

// --- PolyMap ---------------------------------------------------------------

PolyMap::PolyMap(int nvars, std::vector<Polynomial> components)
    : nvars_(nvars), comps_(std::move(components)) {
  for (auto& c : comps_) {
    if (c.nvars() > nvars_) throw SchemaError("PolyMap component has too many variables");
    if (c.nvars() != nvars_) c = Polynomial(nvars_, c.terms());
  }
  partials_.resize(comps_.size());
  for (std::size_t i = 0; i < comps_.size(); ++i) {
    for (int v = 0; v < nvars_; ++v) partials_[i].push_back(comps_[i].derivative(v));
  }
}

PolyMap PolyMap::constant(int nvars, const Eigen::VectorXd& value) {
  std::vector<Polynomial> comps;
  for (Eigen::Index i = 0; i < value.size(); ++i) comps.push_back(Polynomial::constant(nvars, value[i]));
  return PolyMap(nvars, std::move(comps));
}

int PolyMap::degree() const {
  int d = 0;
  for (const auto& c : comps_) d = std::max(d, c.degree());
  return d;
}

Eigen::VectorXd PolyMap::eval(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  Eigen::VectorXd out(dim());
  for (int i = 0; i < dim(); ++i) out[i] = comps_[i].eval(x);
  return out;
}

Eigen::MatrixXd PolyMap::jacobian(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  Eigen::MatrixXd J(dim(), nvars_);
  for (int i = 0; i < dim(); ++i) {
    for (int v = 0; v < nvars_; ++v) J(i, v) = partials_[i][v].eval(x);
  }
  return J;
}

Eigen::MatrixXd PolyMap::hessian(int i, const Eigen::Ref<const Eigen::VectorXd>& x) const {
  Eigen::MatrixXd H(nvars_, nvars_);
  for (int a = 0; a < nvars_; ++a) {
    for (int b = a; b < nvars_; ++b) {
      H(a, b) = H(b, a) = partials_[i][a].derivative(b).eval(x);
    }
  }
  return H;
}

PolyMap PolyMap::compose_affine(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) const {
  if (A.rows() != nvars_ || b.size() != nvars_) throw SchemaError("compose_affine: shape mismatch");
  const int m = static_cast<int>(A.cols());
  std::vector<Polynomial> subs;
  for (int v = 0; v < nvars_; ++v) {
    std::vector<Term> terms{Term{Exponent{}, b[v]}};
    for (int j = 0; j < m; ++j) {
      Exponent e{};
      e[j] = 1;
      terms.push_back(Term{e, A(v, j)});
    }
    subs.emplace_back(m, std::move(terms));
  }
  return compose(subs);
}

PolyMap PolyMap::compose(const std::vector<Polynomial>& subs) const {
  const int m = subs.empty() ? 0 : subs.front().nvars();
  std::vector<Polynomial> out;
  for (const auto& c : comps_) out.push_back(c.compose(subs));
  return PolyMap(m, std::move(out));
}

PolyMap PolyMap::operator+(const PolyMap& o) const {
  if (dim() != o.dim()) throw SchemaError("PolyMap sum: dimension mismatch");
  std::vector<Polynomial> out;
  for (int i = 0; i < dim(); ++i) out.push_back(comps_[i] + o.comps_[i]);
  return PolyMap(std::max(nvars_, o.nvars_), std::move(out));
}

PolyMap PolyMap::plus_scaled(const Polynomial& scalar, const Eigen::VectorXd& direction) const {
  if (direction.size() != dim()) throw SchemaError("plus_scaled: direction dimension mismatch");
  std::vector<Polynomial> out;
  for (int i = 0; i < dim(); ++i) out.push_back(comps_[i] + scalar * direction[i]);
  return PolyMap(nvars_, std::move(out));
}

double max_abs_diff(const PolyMap& a, const PolyMap& b) {
  if (a.dim() != b.dim()) return std::numeric_limits<double>::infinity();
  double m = 0.0;
  for (int i = 0; i < a.dim(); ++i) m = std::max(m, max_abs_diff(a[i], b[i]));
  return m;
}

}  // namespace trx
