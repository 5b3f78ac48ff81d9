#pragma once

#include <array>
#include <functional>
#include <initializer_list>
#include <stdexcept>

#include "phh/fields.hpp"

namespace phh {

/// Index tuples i1 < ... < ik of a k-form are encoded as bitmasks over {0,1,2,3}.
using FormIndex = unsigned;

constexpr FormIndex form_index(std::initializer_list<int> idx) {
  FormIndex m = 0;
  for (int i : idx) m |= 1u << i;
  return m;
}
int form_degree(FormIndex mask);
/// All index masks of degree k in increasing lexicographic order
/// (for k = 2: 01, 02, 03, 12, 13, 23).
const std::vector<FormIndex>& form_basis(int k);
/// Sign of the permutation that sorts the concatenation (a, b) when the
/// index sets are disjoint; 0 otherwise.
int wedge_sign(FormIndex a, FormIndex b);

/// Coefficients of a k-form at a point, as jets: the form is
/// sum over increasing I of c[I] dx^I.
struct FormJet {
  int degree = 0;
  std::array<Jet, 16> c;

  explicit FormJet(int k = 0) : degree(k) {}
  Jet& operator[](FormIndex m) { return c[m]; }
  const Jet& operator[](FormIndex m) const { return c[m]; }
  Complex value(FormIndex m) const { return c[m].value(); }
  int order() const;
  /// Largest |coefficient| at the base point.
  double max_abs() const;
  /// Coefficient of dx^0 ^ dx^1 ^ dx^2 ^ dx^3.
  Complex top() const { return c[15].value(); }

  FormJet real() const;
  FormJet imag() const;
  FormJet conj() const;
  FormJet& operator+=(const FormJet& o);
  FormJet& operator-=(const FormJet& o);
  friend FormJet operator+(FormJet a, const FormJet& b) { return a += b; }
  friend FormJet operator-(FormJet a, const FormJet& b) { return a -= b; }
  friend FormJet operator*(const Jet& f, const FormJet& a);
  friend FormJet operator*(Complex s, const FormJet& a);
};

FormJet wedge(const FormJet& a, const FormJet& b);
/// Exterior derivative; the result is exact to one order less.
FormJet ext_d(const FormJet& a);
/// alpha(X) for a 1-form, alpha(X, Y) for a 2-form.
Jet apply(const FormJet& a, const JetVec& X);
Jet apply(const FormJet& a, const JetVec& X, const JetVec& Y);
/// Antisymmetric matrix W with W(a, b) = alpha(d_a, d_b) for a 2-form, and back.
JetMat two_form_matrix(const FormJet& a);
FormJet two_form_from_matrix(const JetMat& m);

class DegreeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Complex-valued differential form on the chart.
class FormField {
 public:
  using Fn = std::function<FormJet(const Seed&)>;

  FormField() : FormField(0, 0, [](const Seed&) { return FormJet(0); }) {}
  FormField(int degree, int depth, Fn fn);

  static FormField zero(int degree);
  /// dx^i
  static FormField dx(int i);
  /// A form with constant complex coefficients.
  static FormField constant(const FormJet& values);
  /// sum over increasing masks of coefficient fields.
  static FormField from_coefficients(int degree, const std::vector<std::pair<FormIndex, ScalarField>>& c);
  static FormField scalar(const ScalarField& f);

  FormJet operator()(const Seed& s) const;
  /// Coefficients exact to `order` derivatives at p.
  FormJet at(const Vec4& p, int order = 0) const { return (*this)(Seed::at(p, seed_order(order, depth_))); }
  int degree() const { return degree_; }
  int depth() const { return depth_; }
  ScalarField coefficient(FormIndex m) const;

  FormField real() const;
  FormField imag() const;
  FormField conj() const;

  friend FormField operator+(const FormField& a, const FormField& b);
  friend FormField operator-(const FormField& a, const FormField& b);
  friend FormField operator*(const ScalarField& f, const FormField& a);
  friend FormField operator*(Complex s, const FormField& a);
  FormField operator-() const;

 private:
  int degree_ = 0;
  int depth_ = 0;
  Fn fn_;
};

/// alpha ^ beta; throws DegreeError if the degrees sum past 4.
FormField wedge(const FormField& a, const FormField& b);
FormField ext_d(const FormField& a);

/// Hodge star with respect to g, oriented by the sign of the top coefficient
/// of `orientation`. Inner products on k-forms are Gram determinants of
/// g^{-1} on increasing index tuples, and the star is fixed by
/// alpha ^ *beta = <alpha, beta> vol_g.
FormJet hodge_star(const FormJet& a, const JetMat& g, int orientation_sign);
FormField hodge_star(const FormField& a, const MetricField& g, const FormField& orientation);
/// <alpha, beta>_g pointwise (bilinear, no conjugation).
Jet form_inner(const FormJet& a, const FormJet& b, const JetMat& ginv);
/// The 6x6 matrix of * on 2-forms in the basis form_basis(2).
Eigen::Matrix<double, 6, 6> hodge_matrix_2forms(const Mat4& g, int orientation_sign);

class DegenerateMetricError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class NotAlmostStructureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// [X, Y]^k = X^i d_i Y^k - Y^i d_i X^k; exact to one order less.
JetVec lie_bracket(const JetVec& X, const JetVec& Y);
VectorFieldOnChart lie_bracket(const VectorFieldOnChart& X, const VectorFieldOnChart& Y);

/// N(X,Y) = [JX,JY] - J[JX,Y] - J[X,JY] + eps [X,Y] at the base point, for
/// J^2 = eps Id (eps = -1 almost complex, +1 almost product).
Eigen::Vector4cd nijenhuis(const JetMat& J, const JetVec& X, const JetVec& Y, int eps);
Eigen::Vector4cd nijenhuis(const EndomorphismField& J, const VectorFieldOnChart& X, const VectorFieldOnChart& Y,
                           const Vec4& p, int eps);

/// Values of f^* alpha at p.
FormJet pullback_at(const FormField& a, const ChartMap& f, const Vec4& p);

/// Complex chart helpers, coordinates (x1, y1, x2, y2).
FormField dz(int k);      // dz_k = dx_k + i dy_k, k = 1, 2
FormField dzbar(int k);   // dx_k - i dy_k
VectorFieldOnChart d_dz(int k);     // (d/dx_k - i d/dy_k) / 2
VectorFieldOnChart d_dzbar(int k);  // (d/dx_k + i d/dy_k) / 2

}  // namespace phh
