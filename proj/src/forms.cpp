#include "phh/forms.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <vector>

namespace phh {
namespace {

std::vector<int> indices_of(FormIndex m) {
  std::vector<int> v;
  for (int i = 0; i < 4; ++i)
    if (m & (1u << i)) v.push_back(i);
  return v;
}

// Determinant of the submatrix of m with the given rows and columns.
template <typename Scalar, typename M>
Scalar minor_det(const M& m, const std::vector<int>& rows, const std::vector<int>& cols) {
  const std::size_t k = rows.size();
  if (k == 0) return Scalar(1.0);
  if (k == 1) return m(rows[0], cols[0]);
  if (k == 2) return m(rows[0], cols[0]) * m(rows[1], cols[1]) - m(rows[0], cols[1]) * m(rows[1], cols[0]);
  Scalar det(0.0);
  std::vector<int> sub_rows(rows.begin() + 1, rows.end());
  for (std::size_t j = 0; j < k; ++j) {
    std::vector<int> sub_cols;
    for (std::size_t c = 0; c < k; ++c)
      if (c != j) sub_cols.push_back(cols[c]);
    const Scalar term = m(rows[0], cols[j]) * minor_det<Scalar>(m, sub_rows, sub_cols);
    det = (j % 2 == 0) ? det + term : det - term;
  }
  return det;
}

}  // namespace

int form_degree(FormIndex mask) { return std::popcount(mask); }

const std::vector<FormIndex>& form_basis(int k) {
  static const std::array<std::vector<FormIndex>, 5> bases = [] {
    std::array<std::vector<FormIndex>, 5> b;
    for (FormIndex m = 0; m < 16; ++m) b[form_degree(m)].push_back(m);
    // Lexicographic order of the increasing index tuples.
    for (auto& v : b)
      std::sort(v.begin(), v.end(), [](FormIndex x, FormIndex y) { return indices_of(x) < indices_of(y); });
    return b;
  }();
  return bases.at(k);
}

int wedge_sign(FormIndex a, FormIndex b) {
  if (a & b) return 0;
  int inversions = 0;
  for (int i = 0; i < 4; ++i)
    if (a & (1u << i))
      for (int j = 0; j < i; ++j)
        if (b & (1u << j)) ++inversions;
  return inversions % 2 ? -1 : 1;
}

int FormJet::order() const {
  int o = Jet::kMaxOrder;
  for (FormIndex m : form_basis(degree)) o = std::min(o, c[m].order());
  return o;
}

double FormJet::max_abs() const {
  double r = 0.0;
  for (FormIndex m : form_basis(degree)) r = std::max(r, std::abs(c[m].value()));
  return r;
}

FormJet FormJet::real() const {
  FormJet r(degree);
  for (FormIndex m : form_basis(degree)) r.c[m] = c[m].real();
  return r;
}

FormJet FormJet::imag() const {
  FormJet r(degree);
  for (FormIndex m : form_basis(degree)) r.c[m] = c[m].imag();
  return r;
}

FormJet FormJet::conj() const {
  FormJet r(degree);
  for (FormIndex m : form_basis(degree)) r.c[m] = c[m].conj();
  return r;
}

FormJet& FormJet::operator+=(const FormJet& o) {
  if (o.degree != degree) throw DegreeError("form addition with mismatched degrees");
  for (FormIndex m : form_basis(degree)) c[m] += o.c[m];
  return *this;
}

FormJet& FormJet::operator-=(const FormJet& o) {
  if (o.degree != degree) throw DegreeError("form subtraction with mismatched degrees");
  for (FormIndex m : form_basis(degree)) c[m] -= o.c[m];
  return *this;
}

FormJet operator*(const Jet& f, const FormJet& a) {
  FormJet r(a.degree);
  for (FormIndex m : form_basis(a.degree)) r.c[m] = f * a.c[m];
  return r;
}

FormJet operator*(Complex s, const FormJet& a) {
  FormJet r(a.degree);
  for (FormIndex m : form_basis(a.degree)) r.c[m] = a.c[m] * s;
  return r;
}

FormJet wedge(const FormJet& a, const FormJet& b) {
  if (a.degree + b.degree > 4) throw DegreeError("wedge: degree exceeds 4");
  FormJet r(a.degree + b.degree);
  for (FormIndex ma : form_basis(a.degree))
    for (FormIndex mb : form_basis(b.degree)) {
      const int s = wedge_sign(ma, mb);
      if (s == 0) continue;
      const Jet prod = a.c[ma] * b.c[mb];
      if (s > 0)
        r.c[ma | mb] += prod;
      else
        r.c[ma | mb] -= prod;
    }
  return r;
}

FormJet ext_d(const FormJet& a) {
  if (a.degree >= 4) throw DegreeError("ext_d: degree exceeds 4");
  FormJet r(a.degree + 1);
  for (FormIndex m : form_basis(r.degree)) r.c[m] = Jet(0.0).truncated(a.order() - 1);
  for (FormIndex m : form_basis(a.degree))
    for (int i = 0; i < 4; ++i) {
      const FormIndex bit = 1u << i;
      const int s = wedge_sign(bit, m);
      if (s == 0) continue;
      const Jet di = a.c[m].derivative(i);
      if (s > 0)
        r.c[m | bit] += di;
      else
        r.c[m | bit] -= di;
    }
  return r;
}

Jet apply(const FormJet& a, const JetVec& X) {
  if (a.degree != 1) throw DegreeError("apply: expected a 1-form");
  Jet r(0.0);
  for (int i = 0; i < 4; ++i) r += a.c[1u << i] * X(i);
  return r;
}

Jet apply(const FormJet& a, const JetVec& X, const JetVec& Y) {
  if (a.degree != 2) throw DegreeError("apply: expected a 2-form");
  Jet r(0.0);
  for (FormIndex m : form_basis(2)) {
    const auto idx = indices_of(m);
    const int i = idx[0], j = idx[1];
    r += a.c[m] * (X(i) * Y(j) - X(j) * Y(i));
  }
  return r;
}

JetMat two_form_matrix(const FormJet& a) {
  if (a.degree != 2) throw DegreeError("two_form_matrix: expected a 2-form");
  JetMat W;
  for (int i = 0; i < 4; ++i) W(i, i) = Jet(0.0);
  for (FormIndex m : form_basis(2)) {
    const auto idx = indices_of(m);
    W(idx[0], idx[1]) = a.c[m];
    W(idx[1], idx[0]) = -a.c[m];
  }
  return W;
}

FormJet two_form_from_matrix(const JetMat& W) {
  FormJet r(2);
  for (FormIndex m : form_basis(2)) {
    const auto idx = indices_of(m);
    r.c[m] = W(idx[0], idx[1]);
  }
  return r;
}

FormField::FormField(int degree, int depth, Fn fn) : degree_(degree), depth_(depth), fn_(std::move(fn)) {
  if (degree < 0 || degree > 4) throw DegreeError("form degree must lie in [0, 4]");
}

FormField FormField::zero(int degree) {
  return FormField(degree, 0, [degree](const Seed&) { return FormJet(degree); });
}

FormField FormField::dx(int i) {
  return FormField(1, 0, [i](const Seed&) {
    FormJet r(1);
    r.c[1u << i] = Jet(1.0);
    return r;
  });
}

FormField FormField::constant(const FormJet& values) {
  return FormField(values.degree, 0, [values](const Seed&) { return values; });
}

FormField FormField::from_coefficients(int degree, const std::vector<std::pair<FormIndex, ScalarField>>& c) {
  int depth = 0;
  for (const auto& [m, f] : c) {
    if (form_degree(m) != degree) throw DegreeError("coefficient index does not match form degree");
    depth = std::max(depth, f.depth());
  }
  return FormField(degree, depth, [degree, c](const Seed& s) {
    FormJet r(degree);
    for (const auto& [m, f] : c) r.c[m] += f(s);
    return r;
  });
}

FormField FormField::scalar(const ScalarField& f) {
  return FormField(0, f.depth(), [f](const Seed& s) {
    FormJet r(0);
    r.c[0] = f(s);
    return r;
  });
}

FormJet FormField::operator()(const Seed& s) const { return fn_(s); }

ScalarField FormField::coefficient(FormIndex m) const {
  return ScalarField(depth_, [f = *this, m](const Seed& s) { return f(s).c[m]; });
}

FormField FormField::real() const {
  return FormField(degree_, depth_, [f = *this](const Seed& s) { return f(s).real(); });
}
FormField FormField::imag() const {
  return FormField(degree_, depth_, [f = *this](const Seed& s) { return f(s).imag(); });
}
FormField FormField::conj() const {
  return FormField(degree_, depth_, [f = *this](const Seed& s) { return f(s).conj(); });
}

FormField operator+(const FormField& a, const FormField& b) {
  if (a.degree_ != b.degree_) throw DegreeError("form addition with mismatched degrees");
  return FormField(a.degree_, std::max(a.depth_, b.depth_), [a, b](const Seed& s) { return a(s) + b(s); });
}

FormField operator-(const FormField& a, const FormField& b) {
  if (a.degree_ != b.degree_) throw DegreeError("form subtraction with mismatched degrees");
  return FormField(a.degree_, std::max(a.depth_, b.depth_), [a, b](const Seed& s) { return a(s) - b(s); });
}

FormField operator*(const ScalarField& f, const FormField& a) {
  return FormField(a.degree_, std::max(a.depth_, f.depth()), [f, a](const Seed& s) { return f(s) * a(s); });
}

FormField operator*(Complex k, const FormField& a) {
  return FormField(a.degree_, a.depth_, [k, a](const Seed& s) { return k * a(s); });
}

FormField FormField::operator-() const { return Complex(-1.0) * *this; }

FormField wedge(const FormField& a, const FormField& b) {
  if (a.degree() + b.degree() > 4) throw DegreeError("wedge: degree exceeds 4");
  return FormField(a.degree() + b.degree(), std::max(a.depth(), b.depth()),
                   [a, b](const Seed& s) { return wedge(a(s), b(s)); });
}

FormField ext_d(const FormField& a) {
  if (a.degree() >= 4) throw DegreeError("ext_d: degree exceeds 4");
  return FormField(a.degree() + 1, a.depth() + 1, [a](const Seed& s) { return ext_d(a(s)); });
}

Jet form_inner(const FormJet& a, const FormJet& b, const JetMat& ginv) {
  if (a.degree != b.degree) throw DegreeError("form_inner: mismatched degrees");
  Jet r(0.0);
  for (FormIndex I : form_basis(a.degree))
    for (FormIndex K : form_basis(b.degree))
      r += a.c[I] * b.c[K] * minor_det<Jet>(ginv, indices_of(I), indices_of(K));
  return r;
}

FormJet hodge_star(const FormJet& a, const JetMat& g, int orientation_sign) {
  const Jet det = determinant4(g);
  if (std::abs(det.value()) < 1e-14) throw DegenerateMetricError("hodge_star: metric is degenerate");
  const JetMat ginv = inverse4(g);
  const double det_sign = det.value().real() < 0 ? -1.0 : 1.0;
  const Jet vol = sqrt(det * det_sign) * static_cast<double>(orientation_sign >= 0 ? 1 : -1);

  FormJet r(4 - a.degree);
  for (FormIndex I : form_basis(a.degree)) {
    const FormIndex Ic = 15u & ~I;
    Jet inner(0.0);
    for (FormIndex K : form_basis(a.degree))
      inner += a.c[K] * minor_det<Jet>(ginv, indices_of(I), indices_of(K));
    r.c[Ic] = inner * vol * static_cast<double>(wedge_sign(I, Ic));
  }
  return r;
}

FormField hodge_star(const FormField& a, const MetricField& g, const FormField& orientation) {
  if (orientation.degree() != 4) throw DegreeError("hodge_star: orientation must be a 4-form");
  return FormField(4 - a.degree(), std::max(a.depth(), g.depth()), [a, g, orientation](const Seed& s) {
    const Complex v = orientation.at(s.point).top();
    if (std::abs(v) == 0.0) throw DegenerateMetricError("hodge_star: orientation form vanishes");
    return hodge_star(a(s), g(s), v.real() < 0 ? -1 : 1);
  });
}

Eigen::Matrix<double, 6, 6> hodge_matrix_2forms(const Mat4& g, int orientation_sign) {
  const double det = determinant4(g);
  if (std::abs(det) < 1e-14) throw DegenerateMetricError("hodge_star: metric is degenerate");
  const Mat4 ginv = inverse4(g);
  const double vol = std::sqrt(std::abs(det)) * (orientation_sign >= 0 ? 1.0 : -1.0);
  const auto& basis = form_basis(2);
  Eigen::Matrix<double, 6, 6> S = Eigen::Matrix<double, 6, 6>::Zero();
  for (int col = 0; col < 6; ++col)
    for (int row = 0; row < 6; ++row) {
      const FormIndex I = 15u & ~basis[row];
      S(row, col) = minor_det<double>(ginv, indices_of(I), indices_of(basis[col])) * vol * wedge_sign(I, basis[row]);
    }
  return S;
}

JetVec lie_bracket(const JetVec& X, const JetVec& Y) {
  JetVec Z;
  for (int k = 0; k < 4; ++k) {
    Jet z(0.0);
    for (int i = 0; i < 4; ++i) z += X(i) * Y(k).derivative(i) - Y(i) * X(k).derivative(i);
    Z(k) = z;
  }
  return Z;
}

VectorFieldOnChart lie_bracket(const VectorFieldOnChart& X, const VectorFieldOnChart& Y) {
  return VectorFieldOnChart(std::max(X.depth(), Y.depth()) + 1,
                            [X, Y](const Seed& s) { return lie_bracket(X(s), Y(s)); });
}

Eigen::Vector4cd nijenhuis(const JetMat& J, const JetVec& X, const JetVec& Y, int eps) {
  const Eigen::Matrix4cd Jv = values(J);
  const double scale = std::max(1.0, Jv.cwiseAbs().maxCoeff());
  const double res = (Jv * Jv - static_cast<double>(eps) * Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff();
  if (res > 1e-10 * scale * scale)
    throw NotAlmostStructureError("nijenhuis: J^2 != " + std::string(eps > 0 ? "+" : "-") + "Id at the point");
  const JetVec JX = J * X;
  const JetVec JY = J * Y;
  const Eigen::Vector4cd a = values(lie_bracket(JX, JY));
  const Eigen::Vector4cd b = Jv * values(lie_bracket(JX, Y));
  const Eigen::Vector4cd c = Jv * values(lie_bracket(X, JY));
  const Eigen::Vector4cd d = values(lie_bracket(X, Y));
  return a - b - c + static_cast<double>(eps) * d;
}

Eigen::Vector4cd nijenhuis(const EndomorphismField& J, const VectorFieldOnChart& X, const VectorFieldOnChart& Y,
                           const Vec4& p, int eps) {
  const Seed s = Seed::at(p, seed_order(1, std::max({J.depth(), X.depth(), Y.depth()})));
  return nijenhuis(J(s), X(s), Y(s), eps);
}

FormJet pullback_at(const FormField& a, const ChartMap& f, const Vec4& p) {
  const Mat4 D = map_jacobian(f, p);
  const FormJet aq = a.at(map_point(f, p));
  FormJet r(a.degree());
  for (FormIndex I : form_basis(a.degree())) {
    Complex v = 0.0;
    for (FormIndex J : form_basis(a.degree())) v += aq.value(J) * minor_det<double>(D, indices_of(J), indices_of(I));
    r.c[I] = Jet(v);
  }
  return r;
}

FormField dz(int k) {
  const int x = 2 * (k - 1);
  return FormField::dx(x) + Complex(0.0, 1.0) * FormField::dx(x + 1);
}

FormField dzbar(int k) {
  const int x = 2 * (k - 1);
  return FormField::dx(x) - Complex(0.0, 1.0) * FormField::dx(x + 1);
}

VectorFieldOnChart d_dz(int k) {
  Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
  v(2 * (k - 1)) = 0.5;
  v(2 * (k - 1) + 1) = Complex(0.0, -0.5);
  return VectorFieldOnChart(v);
}

VectorFieldOnChart d_dzbar(int k) {
  Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
  v(2 * (k - 1)) = 0.5;
  v(2 * (k - 1) + 1) = Complex(0.0, 0.5);
  return VectorFieldOnChart(v);
}

}  // namespace phh
