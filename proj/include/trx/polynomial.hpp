#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <vector>

namespace trx {

/// Upper bound on the number of variables of any polynomial in the library.
inline constexpr int kMaxVars = 8;

using Exponent = std::array<std::uint8_t, kMaxVars>;

struct Term {
  Exponent exp{};
  double coeff = 0.0;
};

/// Sparse real multivariate polynomial. Terms are kept sorted by exponent and
/// merged, so two polynomials with the same terms compare equal term by term.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(int nvars);
  Polynomial(int nvars, std::vector<Term> terms);

  static Polynomial constant(int nvars, double c);
  static Polynomial variable(int nvars, int index);

  int nvars() const { return nvars_; }
  int degree() const;
  bool is_zero() const { return terms_.empty(); }
  const std::vector<Term>& terms() const { return terms_; }
  double coefficient(const Exponent& e) const;

  double eval(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  Polynomial derivative(int var) const;

  /// Substitutes `subs[v]` for variable v. All substitutes share one variable
  /// count, which becomes the variable count of the result.
  Polynomial compose(const std::vector<Polynomial>& subs) const;

  /// Sets every variable whose bit is set in `mask` to zero.
  Polynomial zero_vars(std::uint32_t mask) const;

  /// Drops terms with |coeff| <= tol.
  Polynomial pruned(double tol) const;

  double max_abs_coeff() const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(double s) const;
  Polynomial operator-() const { return *this * -1.0; }
  Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }

  /// Coefficients in graded order (see `graded_monomials`), padded with zeros
  /// up to total degree `max_degree`.
  std::vector<double> to_dense(int max_degree) const;
  static Polynomial from_dense(int nvars, int max_degree, const std::vector<double>& coeffs);

 private:
  void normalize();

  int nvars_ = 0;
  std::vector<Term> terms_;
};

inline Polynomial operator*(double s, const Polynomial& p) { return p * s; }

/// All exponents in `nvars` variables of total degree <= max_degree, ordered by
/// total degree, then lexicographically with x1 highest (1, x1, x2, x1^2, x1x2, x2^2, ...).
std::vector<Exponent> graded_monomials(int nvars, int max_degree);

double max_abs_diff(const Polynomial& a, const Polynomial& b);

/// Vector-valued polynomial map R^nvars -> R^dim with precomputed partials.
class PolyMap {
 public:
  PolyMap() = default;
  PolyMap(int nvars, std::vector<Polynomial> components);

  static PolyMap constant(int nvars, const Eigen::VectorXd& value);

  int nvars() const { return nvars_; }
  int dim() const { return static_cast<int>(comps_.size()); }
  int degree() const;
  const Polynomial& operator[](int i) const { return comps_[i]; }
  const std::vector<Polynomial>& components() const { return comps_; }

  Eigen::VectorXd eval(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  /// dim x nvars matrix of first partials.
  Eigen::MatrixXd jacobian(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  /// Second partials of component `i` (nvars x nvars).
  Eigen::MatrixXd hessian(int i, const Eigen::Ref<const Eigen::VectorXd>& x) const;

  /// x -> this(A y + b), a map in A.cols() variables.
  PolyMap compose_affine(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) const;
  PolyMap compose(const std::vector<Polynomial>& subs) const;

  PolyMap operator+(const PolyMap& o) const;
  /// Adds `scalar * direction` componentwise.
  PolyMap plus_scaled(const Polynomial& scalar, const Eigen::VectorXd& direction) const;

 private:
  int nvars_ = 0;
  std::vector<Polynomial> comps_;
  std::vector<std::vector<Polynomial>> partials_;
};

double max_abs_diff(const PolyMap& a, const PolyMap& b);

}  // namespace trx
