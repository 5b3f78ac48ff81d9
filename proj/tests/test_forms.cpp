#include <doctest.h>

#include <random>

#include <Eigen/LU>

#include "phh/forms.hpp"
#include "phh/surfaces.hpp"
#include "phh/walker.hpp"
#include "support.hpp"

using namespace phh;

namespace {

const Complex I(0.0, 1.0);

ScalarField field(const std::string& text, Chart chart = Chart::kReal) {
  return ScalarField::from_expression(Expression::parse(text, chart));
}

FormField random_form(std::mt19937_64& rng, int degree) {
  std::vector<std::pair<FormIndex, ScalarField>> c;
  for (FormIndex m : form_basis(degree)) c.emplace_back(m, field(oracle::random_expr(rng, 3).text));
  return FormField::from_coefficients(degree, c);
}

FormJet random_constant_form(std::mt19937_64& rng, int degree) {
  std::uniform_real_distribution<double> u(-1, 1);
  FormJet a(degree);
  for (FormIndex m : form_basis(degree)) a.c[m] = Jet(Complex(u(rng), u(rng)));
  return a;
}

Vec4 random_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1, 1);
  return {u(rng), u(rng), u(rng), u(rng)};
}

// Gram-determinant inner product of basis k-forms under g^{-1}.
double gram(const Mat4& ginv, FormIndex a, FormIndex b) {
  std::vector<int> ia, ib;
  for (int i = 0; i < 4; ++i) {
    if (a & (1u << i)) ia.push_back(i);
    if (b & (1u << i)) ib.push_back(i);
  }
  Eigen::MatrixXd m(ia.size(), ib.size());
  for (std::size_t r = 0; r < ia.size(); ++r)
    for (std::size_t c = 0; c < ib.size(); ++c) m(r, c) = ginv(ia[r], ib[c]);
  return ia.empty() ? 1.0 : m.determinant();
}

JetMat constant_jets(const Mat4& g) {
  JetMat m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = Jet(g(i, j));
  return m;
}

FormJet basis_form(FormIndex m) {
  FormJet a(form_degree(m));
  a.c[m] = Jet(1.0);
  return a;
}

}  // namespace

TEST_CASE("wedge basics") {
  const FormField dx = FormField::dx(0), dy = FormField::dx(1);
  const Vec4 p(0.1, 0.2, 0.3, 0.4);
  CHECK(wedge(dx, dx).at(p).max_abs() == 0.0);
  const FormJet w = wedge(dx, dy).at(p);
  JetVec ex = JetVec::Constant(Jet(0.0)), ey = ex;
  ex(0) = Jet(1.0);
  ey(1) = Jet(1.0);
  CHECK(apply(w, ex, ey).value() == Complex(1.0));
  CHECK(apply(w, ey, ex).value() == Complex(-1.0));
  CHECK_THROWS_AS(wedge(wedge(dx, dy), wedge(wedge(FormField::dx(2), FormField::dx(3)), dx)).at(p), DegreeError);

  const FormField dz1 = FormField::dx(0) + I * FormField::dx(1);
  const FormField dz2 = FormField::dx(2) + I * FormField::dx(3);
  const FormField zero = wedge(wedge(dz1, dz2.conj()), wedge(dz1, dz1.conj()));
  std::mt19937_64 rng(7);
  for (int k = 0; k < 10; ++k) CHECK(zero.at(random_point(rng)).max_abs() == 0.0);
  // dz ^ dzbar = -2i dx ^ dy
  const FormJet v = wedge(dz1, dz1.conj()).at(p);
  CHECK(v.value(form_index({0, 1})) == Complex(0.0, -2.0));
}

TEST_CASE("graded anticommutativity on random pairs") {
  std::mt19937_64 rng(8);
  double worst = 0;
  for (int k = 0; k < 200; ++k) {
    const int da = static_cast<int>(rng() % 5);
    const int db = static_cast<int>(rng() % (5 - da));
    const FormJet a = random_constant_form(rng, da), b = random_constant_form(rng, db);
    const double sign = (da * db) % 2 ? -1.0 : 1.0;
    const FormJet diff = wedge(a, b) - Complex(sign) * wedge(b, a);
    worst = std::max(worst, diff.max_abs());
  }
  CHECK(worst < 1e-15);
}

TEST_CASE("exterior derivative") {
  const FormField xdy = FormField::from_coefficients(1, {{form_index({1}), ScalarField::coordinate(0)}});
  const FormJet d = ext_d(xdy).at(Vec4(0.3, 0.1, -0.2, 0.5));
  for (FormIndex m : form_basis(2)) CHECK(d.value(m) == Complex(m == form_index({0, 1}) ? 1.0 : 0.0));

  std::mt19937_64 rng(9);
  double worst = 0;
  for (int k = 0; k < 50; ++k) {
    for (int degree : {1, 2}) {
      const FormField a = random_form(rng, degree);
      worst = std::max(worst, ext_d(ext_d(a)).at(random_point(rng)).max_abs());
    }
  }
  CHECK(worst < 1e-10);

  // d(dz / Im z) = dx ^ dy / y^2, which is (-1/2i) dz ^ dzbar / (Im z)^2.
  const FormField theta = FormField::from_coefficients(
      1, {{form_index({0}), field("1/y1", Chart::kComplex)}, {form_index({1}), field("i/y1", Chart::kComplex)}});
  const Vec4 p(1.0, 2.0, 0.0, 0.0);
  const FormJet dt = ext_d(theta).at(p);
  for (FormIndex m : form_basis(2)) {
    const Complex expected = m == form_index({0, 1}) ? Complex(0.25) : Complex(0.0);
    CHECK(std::abs(dt.value(m) - expected) < 1e-15);
  }
  const FormJet rhs = Complex(-1.0) / (2.0 * I) * wedge(theta, theta.conj()).at(p);
  CHECK((dt - rhs).max_abs() < 1e-15);

  CHECK_THROWS_AS(ext_d(FormField::scalar(field("ln(x)"))).at(Vec4(-1, 0, 0, 0)), DomainError);
}

TEST_CASE("Lie bracket") {
  const auto X = VectorFieldOnChart::coordinate(0);
  const auto Y = VectorFieldOnChart::from_components({ScalarField(0.0), ScalarField::coordinate(0), ScalarField(0.0), ScalarField(0.0)});
  const Vec4 p(0.4, -0.3, 0.2, 0.9);
  const Eigen::Vector4cd b = values(lie_bracket(X, Y).at(p));
  CHECK((b - Eigen::Vector4cd(0, 1, 0, 0)).norm() == 0.0);

  std::mt19937_64 rng(10);
  auto random_field = [&] {
    return VectorFieldOnChart::from_components({field(oracle::random_expr(rng, 2).text), field(oracle::random_expr(rng, 2).text),
                                                field(oracle::random_expr(rng, 2).text), field(oracle::random_expr(rng, 2).text)});
  };
  double anti = 0, self = 0, jacobi = 0;
  for (int k = 0; k < 20; ++k) {
    const auto A = random_field(), B = random_field(), C = random_field();
    const Vec4 q = random_point(rng);
    anti = std::max(anti, (values(lie_bracket(A, B).at(q)) + values(lie_bracket(B, A).at(q))).norm());
    self = std::max(self, values(lie_bracket(A, A).at(q)).norm());
    const Eigen::Vector4cd j = values(lie_bracket(A, lie_bracket(B, C)).at(q)) +
                               values(lie_bracket(B, lie_bracket(C, A)).at(q)) +
                               values(lie_bracket(C, lie_bracket(A, B)).at(q));
    jacobi = std::max(jacobi, j.norm());
  }
  CHECK(anti < 1e-12);
  CHECK(self < 1e-12);
  CHECK(jacobi < 1e-9);
}

TEST_CASE("Inoue fields satisfy [E1, E2] = -(1/2i) E2") {
  Eigen::Matrix2i N;
  N << 2, 1, 1, 1;
  const InoueFrame F = inoue_forms(make_inoue(N, 1, 0, 1, Complex(0.2, 0.5)));
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1), v(0.6, 2.0);
  for (int k = 0; k < 20; ++k) {
    const Vec4 p(u(rng), v(rng), u(rng), u(rng));
    const Eigen::Vector4cd br = values(lie_bracket(F.E1, F.E2).at(p));
    const Eigen::Vector4cd e2 = values(F.E2.at(p));
    CHECK((br + e2 / (2.0 * I)).norm() < 1e-12);
  }
}

TEST_CASE("Hodge star in neutral signature") {
  const Mat4 g = Vec4(1, 1, -1, -1).asDiagonal();
  const JetMat gj = constant_jets(g);
  const FormJet s = hodge_star(basis_form(form_index({0, 1})), gj, +1);
  for (FormIndex m : form_basis(2)) CHECK(s.value(m) == Complex(m == form_index({2, 3}) ? 1.0 : 0.0));

  FormJet vol(4);
  vol.c[15] = Jet(1.0);
  CHECK(hodge_star(vol, gj, +1).value(0) == Complex(1.0));

  const auto S = hodge_matrix_2forms(g, +1);
  CHECK((S * S - Eigen::Matrix<double, 6, 6>::Identity()).cwiseAbs().maxCoeff() < 1e-15);

  // The defining relation alpha ^ *beta = <alpha, beta> vol on random metrics,
  // with the inner product computed here from Gram determinants.
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  double worst = 0, squares = 0;
  for (int k = 0; k < 10; ++k) {
    Mat4 h = g;
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j) h(i, j) = h(j, i) = h(i, j) + u(rng);
    const Mat4 hinv = h.inverse();
    const double volc = std::sqrt(std::abs(h.determinant()));
    for (int degree = 0; degree <= 4; ++degree)
      for (FormIndex a : form_basis(degree))
        for (FormIndex b : form_basis(degree)) {
          const FormJet lhs = wedge(basis_form(a), hodge_star(basis_form(b), constant_jets(h), +1));
          worst = std::max(worst, std::abs(lhs.top() - gram(hinv, a, b) * volc));
        }
    const auto Sh = hodge_matrix_2forms(h, -1);
    squares = std::max(squares, (Sh * Sh - Eigen::Matrix<double, 6, 6>::Identity()).cwiseAbs().maxCoeff());
  }
  CHECK(worst < 1e-12);
  CHECK(squares < 1e-12);

  // <alpha, alpha> takes both signs.
  const Mat4 ginv = g.inverse();
  CHECK(gram(ginv, form_index({0, 1}), form_index({0, 1})) > 0);
  CHECK(gram(ginv, form_index({0, 2}), form_index({0, 2})) < 0);
  CHECK(form_inner(basis_form(form_index({0, 2})), basis_form(form_index({0, 2})), constant_jets(ginv)).value().real() < 0);

  CHECK_THROWS_AS(hodge_star(basis_form(form_index({0})), constant_jets(Mat4::Zero()), 1), DegenerateMetricError);
}

TEST_CASE("Nijenhuis tensor") {
  const auto C = canonical_triple();
  std::mt19937_64 rng(13);
  for (int k = 0; k < 5; ++k) {
    const Vec4 p = random_point(rng);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        CHECK(nijenhuis(EndomorphismField(C.J1), VectorFieldOnChart::coordinate(i), VectorFieldOnChart::coordinate(j), p, -1)
                  .norm() == 0.0);
  }
  CHECK_THROWS_AS(nijenhuis(EndomorphismField(C.J1), VectorFieldOnChart::coordinate(0),
                            VectorFieldOnChart::coordinate(1), Vec4::Zero(), +1),
                  NotAlmostStructureError);

  const WalkerData pc = pc_family({Expression::parse("sin(z)"), Expression::parse("z*t"), Expression::parse("cos(t)"),
                                   Expression::parse("z^2"), Expression::parse("t"), Expression::parse("exp(z)")});
  const WalkerData cubic{Expression::parse("x^3"), Expression(), Expression()};
  const AlmostPHStructure Spc = proper_structure(pc), Scubic = proper_structure(cubic);
  const std::array<int, 3> eps = {-1, 1, 1};
  double pc_max = 0;
  for (int s = 0; s < 50; ++s) {
    const Vec4 p = random_point(rng);
    for (int k = 0; k < 3; ++k)
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          pc_max = std::max(pc_max, nijenhuis(Spc.J[k], VectorFieldOnChart::coordinate(i),
                                              VectorFieldOnChart::coordinate(j), p, eps[k])
                                        .norm());
  }
  CHECK(pc_max < 1e-8);

  const Vec4 generic(0.7, -0.2, 0.3, 0.5);
  double cubic_max = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      cubic_max = std::max(cubic_max, nijenhuis(Scubic.J[0], VectorFieldOnChart::coordinate(i),
                                                VectorFieldOnChart::coordinate(j), generic, -1)
                                          .norm());
  CHECK(cubic_max > 1e-3);

  // Tensoriality and antisymmetry on a non-integrable J.
  double tens = 0, anti = 0;
  for (int k = 0; k < 10; ++k) {
    const ScalarField f = field(oracle::random_expr(rng, 3).text);
    const auto X = VectorFieldOnChart::from_components({field("1 + y"), field("z^2"), field("sin(x)"), field("t")});
    const auto Y = VectorFieldOnChart::coordinate(static_cast<int>(rng() % 4));
    const Vec4 p = random_point(rng);
    const Eigen::Vector4cd nxy = nijenhuis(Scubic.J[0], X, Y, p, -1);
    tens = std::max(tens, (nijenhuis(Scubic.J[0], f * X, Y, p, -1) - f.at(p).value() * nxy).norm());
    anti = std::max(anti, (nijenhuis(Scubic.J[0], Y, X, p, -1) + nxy).norm());
  }
  CHECK(tens < 1e-9);
  CHECK(anti < 1e-12);
}
