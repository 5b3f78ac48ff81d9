#pragma once

#include <array>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace phh {

using Complex = std::complex<double>;
using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

/// Raised when a function is evaluated outside its domain (log or sqrt of a
/// non-positive number, division by zero).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Truncated multivariate Taylor expansion of a complex-valued function of the
/// four chart coordinates about a base point.
///
/// The coefficient stored for the monomial h^a is (d^a f)(p) / a!, so products
/// are plain truncated polynomial products and composition with a univariate
/// function is a Horner scheme in the nilpotent increment. Every jet carries
/// the order up to which its coefficients are exact; binary operations keep
/// the smaller order and differentiation lowers it by one. Constants are exact
/// to every order.
class Jet {
 public:
  static constexpr int kVars = 4;
  static constexpr int kMaxOrder = 4;
  static constexpr int kSize = 70;  // monomials of degree <= 4 in 4 variables

  using Exponents = std::array<int, kVars>;

  Jet() { c_.fill(Complex(0.0)); }
  Jet(double v) : Jet() { c_[0] = v; }  // NOLINT(google-explicit-constructor)
  Jet(Complex v) : Jet() { c_[0] = v; }  // NOLINT(google-explicit-constructor)
  Jet(int v) : Jet(static_cast<double>(v)) {}  // NOLINT(google-explicit-constructor)

  /// The coordinate function x_i expanded about `value`, exact to `order`.
  static Jet variable(int i, double value, int order);

  int order() const { return order_; }
  Complex value() const { return c_[0]; }

  /// Partial derivative d^a f at the base point (a! times the coefficient).
  Complex partial(const Exponents& a) const;
  Complex partial(int i) const;
  Complex partial(int i, int j) const;

  /// The jet of d f / d x_i, exact to order() - 1.
  Jet derivative(int i) const;

  Jet truncated(int order) const;
  Jet real() const;
  Jet imag() const;
  Jet conj() const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(const Jet& o);
  Jet& operator/=(const Jet& o);
  Jet& operator*=(Complex s);

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
  friend Jet operator*(Jet a, Complex s) { return a *= s; }
  friend Jet operator*(Complex s, Jet a) { return a *= s; }
  friend Jet operator*(Jet a, double s) { return a *= Complex(s); }
  friend Jet operator*(double s, Jet a) { return a *= Complex(s); }
  Jet operator-() const;
  Jet operator+() const { return *this; }

  friend Jet reciprocal(const Jet& x);
  friend Jet sin(const Jet& x);
  friend Jet cos(const Jet& x);
  friend Jet exp(const Jet& x);
  friend Jet log(const Jet& x);
  friend Jet sqrt(const Jet& x);
  friend Jet pow(const Jet& x, int n);

  /// Raw coefficient access in graded monomial order.
  const Complex& coeff(int index) const { return c_[index]; }
  static int count(int order);
  static const Exponents& exponents(int index);
  static int index_of(const Exponents& a);

 private:
  // Evaluate sum_k d[k]/k! * (x - x0)^k, where d[k] is the k-th derivative of
  // a univariate function at x0 = x.value().
  static Jet compose(const Jet& x, const std::array<Complex, kMaxOrder + 1>& d);

  std::array<Complex, kSize> c_;
  int order_ = kMaxOrder;
};

// Eigen's expression machinery calls these through ADL.
inline bool operator==(const Jet& a, const Jet& b) { return a.value() == b.value(); }
inline bool operator!=(const Jet& a, const Jet& b) { return !(a == b); }

using JetVec = Eigen::Matrix<Jet, 4, 1>;
using JetMat = Eigen::Matrix<Jet, 4, 4>;

/// Base-point values.
Eigen::Vector4cd values(const JetVec& v);
Eigen::Matrix4cd values(const JetMat& m);
Mat4 real_values(const JetMat& m);

/// Entrywise derivative d/dx_i.
JetMat derivative(const JetMat& m, int i);
JetVec derivative(const JetVec& v, int i);

/// Cofactor inverse and determinant, usable for both double and Jet entries.
template <typename Scalar>
Scalar determinant4(const Eigen::Matrix<Scalar, 4, 4>& m);
template <typename Scalar>
Eigen::Matrix<Scalar, 4, 4> inverse4(const Eigen::Matrix<Scalar, 4, 4>& m);

}  // namespace phh

namespace Eigen {

template <>
struct NumTraits<phh::Jet> : GenericNumTraits<phh::Jet> {
  using Real = phh::Jet;
  using NonInteger = phh::Jet;
  using Nested = phh::Jet;
  using Literal = phh::Jet;

  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 1,
    MulCost = 8
  };

  static inline Real epsilon() { return Real(std::numeric_limits<double>::epsilon()); }
  static inline Real dummy_precision() { return Real(1e-12); }
  static inline Real highest() { return Real(std::numeric_limits<double>::max()); }
  static inline Real lowest() { return Real(std::numeric_limits<double>::lowest()); }
  static inline int digits10() { return std::numeric_limits<double>::digits10; }
};

template <typename BinaryOp>
struct ScalarBinaryOpTraits<phh::Jet, double, BinaryOp> {
  using ReturnType = phh::Jet;
};
template <typename BinaryOp>
struct ScalarBinaryOpTraits<double, phh::Jet, BinaryOp> {
  using ReturnType = phh::Jet;
};

}  // namespace Eigen
