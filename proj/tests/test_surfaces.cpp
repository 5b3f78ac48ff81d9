#include <doctest.h>

#include <random>

#include "phh/surfaces.hpp"
#include "support.hpp"

using namespace phh;

namespace {

const Complex I(0.0, 1.0);

Eigen::Matrix2i golden() {
  Eigen::Matrix2i N;
  N << 2, 1, 1, 1;
  return N;
}

std::vector<Vec4> upper_points(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-1, 1), v(0.5, 2.0);
  std::vector<Vec4> out(n);
  for (auto& p : out) p = Vec4(u(rng), v(rng), u(rng), u(rng));
  return out;
}

std::vector<Vec4> points(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<Vec4> out(n);
  for (auto& p : out) p = Vec4(u(rng), u(rng), u(rng), u(rng));
  return out;
}

JetVec jets(const Eigen::Vector4cd& v) {
  JetVec out;
  for (int i = 0; i < 4; ++i) out(i) = Jet(v(i));
  return out;
}

// Top coefficient of 4i Omega1_0 ^ d dbar phi - (d dbar phi)^2 on dx1 dy1 dx2 dy2,
// expanded by hand: 16 Re phi_{1 2bar} + 8 det(phi_{a bbar}), plus 16 x1 phi_{2 2bar}
// for the Kodaira base form.
double ma_oracle(const oracle::Fn& phi, const Vec4& p, bool kodaira) {
  const oracle::P4 q{p(0), p(1), p(2), p(3)};
  const long double h = 1e-4L;
  auto H = [&](int i, int j) { return static_cast<double>(oracle::d2(phi, q, i, j, h)); };
  auto c = [&](int a, int b) {
    const int xa = 2 * a, ya = 2 * a + 1, xb = 2 * b, yb = 2 * b + 1;
    return 0.25 * Complex(H(xa, xb) + H(ya, yb), H(xa, yb) - H(ya, xb));
  };
  const Complex det = c(0, 0) * c(1, 1) - c(0, 1) * c(1, 0);
  double r = 16 * c(0, 1).real() + 8 * det.real();
  if (kodaira) r += 16 * p(0) * c(1, 1).real();
  return r;
}

KodairaLattice lattice() {
  KodairaLattice L;
  L.a = {Complex(0), Complex(0), Complex(1, 0), Complex(0, 1)};
  L.b = {Complex(-1), Complex(0, 1), Complex(0.5), Complex(0.25)};
  L.theta_angle = 0.3;
  return L;
}

}  // namespace

TEST_CASE("Inoue parameters") {
  const InoueParams P = make_inoue(golden(), 1, 0, 2, Complex(0.1, 0.4));
  const double alpha = (3 + std::sqrt(5.0)) / 2;
  CHECK(P.alpha == doctest::Approx(alpha).epsilon(1e-15));
  CHECK((golden().cast<double>() * P.a - alpha * P.a).norm() < 1e-14);
  CHECK((golden().cast<double>() * P.b - P.b / alpha).norm() < 1e-14);
  CHECK(P.A == doctest::Approx((P.b(0) * P.a(1) - P.b(1) * P.a(0)) / 2).epsilon(1e-15));
  CHECK(P.s == doctest::Approx(0.4 / std::log(alpha)).epsilon(1e-15));

  Eigen::Matrix2i bad_det, bad_trace;
  bad_det << 2, 1, 1, 2;
  bad_trace << 1, 1, 0, 1;
  CHECK_THROWS_AS(make_inoue(bad_det, 1, 0, 1, 0.0), ParameterError);
  CHECK_THROWS_AS(make_inoue(bad_trace, 1, 0, 1, 0.0), ParameterError);
  CHECK_THROWS_AS(make_inoue(golden(), 1, 0, 0, 0.0), ParameterError);
}

TEST_CASE("Inoue frame") {
  const InoueParams P = make_inoue(golden(), 1, 0, 1, Complex(0.2, 0.5));
  const InoueFrame F = inoue_forms(P);
  std::mt19937_64 rng(50);
  const std::array<const FormField*, 2> th = {&F.theta1, &F.theta2};
  const std::array<const VectorFieldOnChart*, 2> E = {&F.E1, &F.E2};
  for (const Vec4& p : upper_points(rng, 20))
    for (int k = 0; k < 2; ++k)
      for (int l = 0; l < 2; ++l) {
        const Eigen::Vector4cd e = values(E[l]->at(p));
        CHECK(std::abs(apply(th[k]->at(p), jets(e)).value() - Complex(k == l ? 1.0 : 0.0)) < 1e-14);
        CHECK(std::abs(apply(th[k]->at(p), jets(e.conjugate())).value()) < 1e-14);
      }

  // t = 0 at z = i: theta1 = dz, theta2 = dw - y2 dz, E1 = d/dz + y2 d/dw.
  const InoueFrame G = inoue_forms(make_inoue(golden(), 1, 0, 1, 0.0));
  const Vec4 p(0.0, 1.0, 0.3, -0.6);
  const FormJet t1 = G.theta1.at(p), t2 = G.theta2.at(p);
  CHECK(std::abs(t1.value(1) - 1.0) < 1e-15);
  CHECK(std::abs(t1.value(2) - I) < 1e-15);
  CHECK(std::abs(t2.value(1) - 0.6) < 1e-15);
  CHECK(std::abs(t2.value(2) - 0.6 * I) < 1e-15);
  CHECK(std::abs(t2.value(4) - 1.0) < 1e-15);
  CHECK(std::abs(t2.value(8) - I) < 1e-15);
  const Eigen::Vector4cd e1 = values(G.E1.at(p));
  CHECK((e1 - Eigen::Vector4cd(0.5, -0.5 * I, -0.3, 0.3 * I)).norm() < 1e-15);

  CHECK_THROWS_AS(F.theta1.at(Vec4(0, -0.5, 0, 0)), DomainError);
  CHECK_THROWS_AS(F.theta1.at(Vec4(0, 0, 0, 0)), DomainError);
}

TEST_CASE("Inoue structure equations and invariance") {
  std::mt19937_64 rng(51);
  const auto pts = upper_points(rng, 30);
  for (const Complex t : {Complex(0.0), Complex(0.2, 0.0), Complex(0.3, 0.7)}) {
    const InoueParams P = make_inoue(golden(), 1, 0, 1, t, 0.2, -0.4);
    const auto st = inoue_structure_report(P, pts);
    CHECK(st.pass());
    const auto inv = inoue_invariance_report(P, pts);
    CHECK(inv.pass());
    for (const auto& c : inv.checks()) CHECK(c.max < 1e-9);
  }
  // Generators built for Im t != 0 do not preserve the frame built with Im t = 0.
  const InoueParams P0 = make_inoue(golden(), 1, 0, 1, 0.0);
  const InoueParams P1 = make_inoue(golden(), 1, 0, 1, Complex(0, 0.7));
  const InoueFrame f0 = inoue_forms(P0);
  const auto g1 = inoue_generators(P1);
  const auto cross = form_invariance_report({{"theta2", f0.theta2}}, {{"phi0", g1[0]}}, pts);
  CHECK(cross.max("phi0*theta2") > 1e-3);

  // Explicit generator action.
  const Vec4 p(0.2, 0.9, -0.1, 0.4);
  const Vec4 q = map_point(g1[0], p);
  CHECK((q - Vec4(P1.alpha * 0.2, P1.alpha * 0.9, -0.1, 0.4 + 0.7)).norm() < 1e-14);
}

TEST_CASE("sigma obstruction") {
  std::mt19937_64 rng(52);
  const auto pts = upper_points(rng, 20);
  const InoueParams P = make_inoue(golden(), 1, 0, 1, 0.0, 0.1, 0.2);
  const auto rep = sigma_obstruction_report(P, pts);
  CHECK(rep.pass());
  CHECK(rep.max("anti_isometry_sign") == 0.0);
  CHECK(rep.max("conformal_factor+1") < 1e-9);
  CHECK_THROWS_AS(sigma_obstruction_report(make_inoue(golden(), 1, 0, 1, Complex(0.1, 0)), pts), ParameterError);
}

TEST_CASE("complex chart helpers") {
  const Vec4 p(0.3, 0.1, -0.2, 0.5);
  const FormJet w = wedge(dz(1), dzbar(1)).at(p);
  CHECK(w.value(form_index({0, 1})) == Complex(0, -2));
  for (FormIndex m : form_basis(2))
    if (m != form_index({0, 1})) CHECK(w.value(m) == Complex(0));
  for (int k = 1; k <= 2; ++k)
    for (int l = 1; l <= 2; ++l) {
      CHECK(apply(dz(k).at(p), d_dz(l).at(p)).value() == Complex(k == l ? 1.0 : 0.0));
      CHECK(apply(dzbar(k).at(p), d_dz(l).at(p)).value() == Complex(0.0));
      CHECK(apply(dzbar(k).at(p), d_dzbar(l).at(p)).value() == Complex(k == l ? 1.0 : 0.0));
    }
}

TEST_CASE("Kamada forms") {
  std::mt19937_64 rng(53);
  const auto pts = points(rng, 20);
  // (i/2) d dbar |z1|^2 = dx1 ^ dy1, and it is closed.
  const FormField k = (0.5 * I) * ddbar(Expression::parse("x1^2 + y1^2", Chart::kComplex));
  for (const Vec4& p : pts) {
    const FormJet v = k.at(p, 1);
    for (FormIndex m : form_basis(2)) CHECK(std::abs(v.value(m) - Complex(m == form_index({0, 1}) ? 1.0 : 0.0)) < 1e-14);
    CHECK(ext_d(v).max_abs() < 1e-14);
  }

  const FormTriple T = kamada_torus_forms(Expression::parse("0", Chart::kComplex));
  const Vec4 p = pts[0];
  // Im(dz1 ^ dzbar2) = dy1 ^ dx2 - dx1 ^ dy2.
  const FormJet o1 = T[0].at(p);
  CHECK(o1.value(form_index({1, 2})) == Complex(1.0));
  CHECK(o1.value(form_index({0, 3})) == Complex(-1.0));
  CHECK(o1.max_abs() == 1.0);
  // dz1 ^ dz2 real and imaginary parts.
  const FormJet o2 = T[1].at(p), o3 = T[2].at(p);
  CHECK(o2.value(form_index({0, 2})) == Complex(1.0));
  CHECK(o2.value(form_index({1, 3})) == Complex(-1.0));
  CHECK(o3.value(form_index({0, 3})) == Complex(1.0));
  CHECK(o3.value(form_index({1, 2})) == Complex(1.0));

  const KodairaLattice L = lattice();
  const FormTriple K = kamada_kodaira_forms(Expression::parse("0", Chart::kComplex), L);
  // The extra term i Re(z1) dz1 ^ dzbar1 = 2 x1 dx1 ^ dy1; Omega2 + i Omega3 is rotated by e^{0.3 i}.
  CHECK(std::abs(K[0].at(p).value(form_index({0, 1})) - 2 * p(0)) < 1e-15);
  const Complex rot = std::exp(Complex(0, 0.3));
  CHECK(std::abs(K[1].at(p).value(form_index({0, 2})) - rot.real()) < 1e-15);
  CHECK(std::abs(K[2].at(p).value(form_index({0, 2})) - rot.imag()) < 1e-15);
}

TEST_CASE("Monge-Ampere residual against the hand expansion") {
  std::mt19937_64 rng(54);
  const Vec4 p0(0.4, -0.3, 0.6, 0.2);
  CHECK(monge_ampere_residual(KamadaKind::kTorus, Expression::parse("0", Chart::kComplex), p0) == 0.0);
  CHECK(monge_ampere_residual(KamadaKind::kKodaira, Expression::parse("0", Chart::kComplex), p0) == 0.0);

  const Expression sq = Expression::parse("x2^2", Chart::kComplex);
  for (const Vec4& p : points(rng, 10)) {
    CHECK(monge_ampere_residual(KamadaKind::kTorus, sq, p) == doctest::Approx(0.0));
    CHECK(monge_ampere_residual(KamadaKind::kKodaira, sq, p) == doctest::Approx(8 * p(0)).epsilon(1e-12));
  }

  double worst = 0;
  for (int k = 0; k < 30; ++k) {
    const oracle::RandomExpr r = oracle::random_expr(rng, 4);
    const Expression phi = Expression::parse(r.text);
    for (const Vec4& p : points(rng, 3))
      for (bool kod : {false, true}) {
        const double lib = monge_ampere_residual(kod ? KamadaKind::kKodaira : KamadaKind::kTorus, phi, p);
        const double ref = ma_oracle(r.f, p, kod);
        worst = std::max(worst, std::abs(lib - ref) / std::max(1.0, std::abs(ref)));
      }
  }
  CHECK(worst < 1e-5);

  // phi = x1 x2: phi_{1 2bar} = phi_{2 1bar} = 1/4, the diagonal vanishes, residual 4 - 1/2.
  const Expression mixed = Expression::parse("x1*x2", Chart::kComplex);
  CHECK(monge_ampere_residual(KamadaKind::kTorus, mixed, p0) == doctest::Approx(3.5).epsilon(1e-12));
  // A function of z1 alone solves the equation on both surfaces.
  const Expression pull = Expression::parse("x1^4 + y1^3*x1", Chart::kComplex);
  CHECK(monge_ampere_residual(KamadaKind::kTorus, pull, p0) == doctest::Approx(0.0));
  CHECK(monge_ampere_residual(KamadaKind::kKodaira, pull, p0) == doctest::Approx(0.0));
}

TEST_CASE("Kodaira lattice") {
  const KodairaLattice L = lattice();
  const auto ok = kodaira_lattice_check(L);
  CHECK(ok.pass());
  for (const auto& c : ok.checks()) CHECK(c.max == 0.0);

  KodairaLattice bad_b = L;
  bad_b.b[0] = 1.0;
  CHECK(kodaira_lattice_check(bad_b).max("Im(a3*conj(a4))-b1") == doctest::Approx(2.0));
  CHECK_THROWS_AS(kamada_kodaira_forms(Expression::parse("0", Chart::kComplex), bad_b), LatticeError);

  KodairaLattice bad_a = L;
  bad_a.a[0] = 0.1;
  CHECK_FALSE(kodaira_lattice_check(bad_a).pass());
  CHECK_THROWS_AS(kamada_kodaira_forms(Expression::parse("0", Chart::kComplex), bad_a), LatticeError);

  // rho_i preserves the forms for phi = 0, and the explicit action matches.
  std::mt19937_64 rng(55);
  const auto pts = points(rng, 20);
  const FormTriple K = kamada_kodaira_forms(Expression::parse("0", Chart::kComplex), L);
  const auto gens = kodaira_generators(L);
  std::vector<NamedMap> maps;
  for (int i = 0; i < 4; ++i) maps.emplace_back("rho" + std::to_string(i + 1), gens[i]);
  const auto inv = form_invariance_report({{"O1", K[0]}, {"O2", K[1]}, {"O3", K[2]}}, maps, pts);
  CHECK(inv.pass());

  const Vec4 p(0.1, 0.2, 0.3, 0.4);
  const Complex z1(0.1, 0.2), z2(0.3, 0.4);
  const Complex w2 = z2 + std::conj(L.a[3]) * z1 + L.b[3];
  const Vec4 q = map_point(gens[3], p);
  CHECK((q - Vec4(z1.real(), z1.imag() + 1, w2.real(), w2.imag())).norm() < 1e-15);

  // Without the shear of z2 the x1-dependent term moves: 2 Re(a) dx1 ^ dy1.
  const auto moved = form_invariance_report({{"O1", K[0]}}, {{"T", translation(0.5, 0.0)}}, pts);
  CHECK(moved.max("T*O1") == doctest::Approx(1.0));
}

TEST_CASE("periodicity") {
  std::mt19937_64 rng(56);
  const auto pts = points(rng, 10);
  const Expression phi = Expression::parse("sin(2*pi*x1) + cos(2*pi*y2)", Chart::kComplex);
  const auto rep = periodicity_report(phi, {{"T1", translation(1.0, 0.0)}, {"T4", translation(0.0, I)}}, pts);
  CHECK(rep.pass());
  const auto half = periodicity_report(phi, {{"T", translation(0.5, 0.0)}}, pts);
  CHECK_FALSE(half.pass());
}
