#include "phh/surfaces.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/LU>

namespace phh {
namespace {

const Complex kI(0.0, 1.0);

Jet im_z(const Seed& s) {
  if (!(s.x[1].value().real() > 0.0)) throw DomainError("Inoue forms: Im z must be positive");
  return s.x[1];
}

// (Im w - s ln Im z) / Im z and its numerator.
Jet inoue_shift(const Seed& sd, double s) { return sd.x[3] - s * log(im_z(sd)); }

double form_difference(const FormJet& a, const FormJet& b) { return (a - b).max_abs(); }

ScalarField x1_field() { return ScalarField::coordinate(0); }

Eigen::Vector2d eigenvector(const Eigen::Matrix2i& N, double lambda) {
  Eigen::Vector2d v;
  if (N(0, 1) != 0)
    v = Eigen::Vector2d(N(0, 1), lambda - N(0, 0));
  else
    v = Eigen::Vector2d(lambda - N(1, 1), N(1, 0));
  v.normalize();
  if (v(0) < 0 || (v(0) == 0 && v(1) < 0)) v = -v;
  return v;
}

}  // namespace

void InoueParams::derive() {
  if (N.determinant() != 1) throw ParameterError("Inoue: det N must be 1");
  const int tr = N.trace();
  if (tr <= 2) throw ParameterError("Inoue: N must have real eigenvalues alpha > 1 (trace > 2)");
  if (r == 0) throw ParameterError("Inoue: r must be nonzero");
  alpha = (tr + std::sqrt(static_cast<double>(tr) * tr - 4.0)) / 2.0;
  a = eigenvector(N, alpha);
  b = eigenvector(N, 1.0 / alpha);
  A = (b(0) * a(1) - b(1) * a(0)) / r;
  s = t.imag() / std::log(alpha);
}

InoueParams make_inoue(const Eigen::Matrix2i& N, int p, int q, int r, Complex t, double c1, double c2) {
  InoueParams P;
  P.N = N;
  P.p = p;
  P.q = q;
  P.r = r;
  P.t = t;
  P.c1 = c1;
  P.c2 = c2;
  P.derive();
  return P;
}

InoueFrame inoue_forms(const InoueParams& P) {
  const double s = P.s;
  const ScalarField inv_y1(0, [](const Seed& sd) { return reciprocal(im_z(sd)); });
  const ScalarField shift(0, [s](const Seed& sd) { return inoue_shift(sd, s); });
  const ScalarField ratio(0, [s](const Seed& sd) { return inoue_shift(sd, s) / im_z(sd); });
  const ScalarField y1(0, [](const Seed& sd) { return im_z(sd); });
  InoueFrame f;
  f.theta1 = inv_y1 * dz(1);
  f.theta2 = dz(2) - ratio * dz(1);
  f.E1 = y1 * d_dz(1) + shift * d_dz(2);
  f.E2 = d_dz(2);
  return f;
}

InoueStructure inoue_structure(const InoueParams& P) {
  const InoueFrame f = inoue_forms(P);
  InoueStructure S;
  S.omega = wedge(f.theta1, f.theta2);
  S.forms[0] = wedge(f.theta1, f.theta2.conj()).real();
  S.forms[1] = S.omega.real();
  S.forms[2] = S.omega.imag();
  S.lee = -f.theta1.imag();
  return S;
}

VerificationReport inoue_structure_report(const InoueParams& P, std::span<const Vec4> samples, double tol) {
  const InoueFrame f = inoue_forms(P);
  const InoueStructure S = inoue_structure(P);
  std::vector<double> dual, bracket, dth1, dth2, dom, square, lee, lee_id;
  for (const Vec4& p : samples) {
    const FormJet t1 = f.theta1.at(p, 1), t2 = f.theta2.at(p, 1);
    const JetVec E1 = f.E1.at(p, 1), E2 = f.E2.at(p, 1);
    const Eigen::Matrix2cd pairing{{apply(t1, E1).value(), apply(t1, E2).value()},
                                   {apply(t2, E1).value(), apply(t2, E2).value()}};
    dual.push_back((pairing - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff());
    // [E1, E2] = -(1/2i) E2
    bracket.push_back((values(lie_bracket(E1, E2)) + values(E2) / (2.0 * kI)).cwiseAbs().maxCoeff());

    const FormJet t1b = t1.conj(), t2b = t2.conj();
    // d theta1 = (-1/2i) theta1 ^ conj theta1
    dth1.push_back(form_difference(ext_d(t1), (-1.0 / (2.0 * kI)) * wedge(t1, t1b)));
    // d theta2 = (1/2i)(theta1 ^ theta2 - theta1 ^ conj theta2 + s theta1 ^ conj theta1)
    const FormJet rhs2 = (1.0 / (2.0 * kI)) * (wedge(t1, t2) - wedge(t1, t2b) + Complex(P.s) * wedge(t1, t1b));
    dth2.push_back(form_difference(ext_d(t2), rhs2));

    const FormJet om = S.omega.at(p, 1), theta = S.lee.at(p);
    dom.push_back(form_difference(ext_d(om), wedge(theta, om)));
    for (int l = 0; l < 3; ++l) {
      const FormJet wl = S.forms[l].at(p, 1);
      lee_id.push_back(form_difference(ext_d(wl), wedge(theta, wl)));
    }
    // Omega1^2 = 1/2 theta1 ^ conj theta1 ^ theta2 ^ conj theta2
    const FormJet w1 = S.forms[0].at(p);
    square.push_back(std::abs(wedge(w1, w1).top() - 0.5 * wedge(wedge(t1, t1b), wedge(t2, t2b)).top()));

    const LeeForm L = lee_form(S.forms, p);
    Eigen::Vector4cd expected;
    for (int i = 0; i < 4; ++i) expected(i) = theta.value(1u << i);
    lee.push_back((L.theta - expected).cwiseAbs().maxCoeff());
  }
  VerificationReport rep("inoue_structure");
  rep.add("duality", dual, tol);
  rep.add("bracket_E1_E2", bracket, tol);
  rep.add("d_theta1", dth1, tol);
  rep.add("d_theta2", dth2, tol);
  rep.add("d_Omega", dom, tol);
  rep.add("dO_l-theta^O_l", lee_id, tol);
  rep.add("O1^2-volume", square, tol);
  rep.merge(check_phc_algebra(S.forms, samples, tol));
  rep.add("lee_form", lee, tol);
  return rep;
}

std::array<ChartMap, 4> inoue_generators(const InoueParams& P) {
  using Coords = std::array<Jet, 4>;
  auto out = [](const Jet& z, const Jet& w) { return Coords{z.real(), z.imag(), w.real(), w.imag()}; };
  auto zw = [](const Coords& x) { return std::pair<Jet, Jet>{x[0] + kI * x[1], x[2] + kI * x[3]}; };
  std::array<ChartMap, 4> g;
  g[0] = [=, alpha = P.alpha, t = P.t](const Coords& x) {
    const auto [z, w] = zw(x);
    return out(alpha * z, w + Jet(t));
  };
  const std::array<double, 2> c = {P.c1, P.c2};
  for (int i = 0; i < 2; ++i)
    g[i + 1] = [=, ai = P.a(i), bi = P.b(i), ci = c[i]](const Coords& x) {
      const auto [z, w] = zw(x);
      return out(z + Jet(ai), w + bi * z + Jet(ci));
    };
  g[3] = [=, A = P.A](const Coords& x) {
    const auto [z, w] = zw(x);
    return out(z, w + Jet(A));
  };
  return g;
}

VerificationReport inoue_invariance_report(const InoueParams& P, std::span<const Vec4> samples, double tol) {
  const InoueFrame f = inoue_forms(P);
  const auto gens = inoue_generators(P);
  std::vector<NamedMap> maps;
  for (int k = 0; k < 4; ++k) maps.emplace_back("phi" + std::to_string(k), gens[k]);
  return form_invariance_report({{"theta1", f.theta1}, {"theta2", f.theta2}}, maps, samples, tol);
}

ChartMap inoue_sigma() {
  return [](const std::array<Jet, 4>& x) { return std::array<Jet, 4>{x[0], x[1], -x[2], -x[3]}; };
}

VerificationReport sigma_obstruction_report(const InoueParams& P, std::span<const Vec4> samples, double form_tol,
                                            double structure_tol) {
  if (P.t != Complex(0.0)) throw ParameterError("sigma obstruction requires t = 0");
  const InoueFrame f = inoue_forms(P);
  const InoueStructure IS = inoue_structure(P);
  const AlmostPHStructure S = structure_from_forms(IS.forms, samples);
  const ChartMap sigma = inoue_sigma();
  const ChartMap sigma2 = [sigma](const std::array<Jet, 4>& x) { return sigma(sigma(x)); };

  std::vector<double> th1, th2, om1, om, inv_pt, inv_form, conf, negative;
  std::array<std::vector<double>, 3> Jres;
  for (const Vec4& p : samples) {
    th1.push_back(form_difference(pullback_at(f.theta1, sigma, p), f.theta1.at(p)));
    th2.push_back((pullback_at(f.theta2, sigma, p) + f.theta2.at(p)).max_abs());
    om1.push_back((pullback_at(IS.forms[0], sigma, p) + IS.forms[0].at(p)).max_abs());
    om.push_back((pullback_at(IS.omega, sigma, p) + IS.omega.at(p)).max_abs());
    inv_pt.push_back((map_point(sigma2, p) - p).cwiseAbs().maxCoeff());
    inv_form.push_back(std::max(form_difference(pullback_at(f.theta2, sigma2, p), f.theta2.at(p)),
                                form_difference(pullback_at(IS.omega, sigma2, p), IS.omega.at(p))));
    for (int k = 0; k < 3; ++k)
      Jres[k].push_back((pullback_endomorphism_at(S.J[k], sigma, p) - values(S.J[k].at(p))).cwiseAbs().maxCoeff());

    const ParaHypercomplexTriple T = S.triple_at(p);
    const Mat4 g = S.g.real_at(p);
    const Mat4 sg = pullback_metric_at(S.g, sigma, p).real();
    // Probe: the coordinate combination of largest |g(w, w)| / |w|^2.
    Vec4 best = Vec4::Unit(0);
    double score = -1.0;
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j)
        for (double sgn : {1.0, -1.0}) {
          Vec4 w = Vec4::Unit(i);
          if (j != i) w += sgn * Vec4::Unit(j);
          const double sc = std::abs(w.dot(g * w)) / w.squaredNorm();
          if (sc > score) {
            score = sc;
            best = w;
          }
        }
    const double lambda = conformal_factor(BilinearForm4(sg), BilinearForm4(g), T, best);
    conf.push_back(lambda + 1.0);
    negative.push_back(lambda < 0 ? 0.0 : 1.0);
  }
  VerificationReport rep("sigma_obstruction");
  rep.add("sigma*theta1-theta1", th1, form_tol);
  rep.add("sigma*theta2+theta2", th2, form_tol);
  rep.add("sigma*O1+O1", om1, form_tol);
  rep.add("sigma*Omega+Omega", om, form_tol);
  for (int k = 0; k < 3; ++k) rep.add("sigma*J" + std::to_string(k + 1) + "-J" + std::to_string(k + 1), Jres[k],
                                      structure_tol);
  rep.add("conformal_factor+1", conf, structure_tol);
  // A sigma-invariant compatible metric h would give h = f g with
  // f(sigma x) = -f(x); f is continuous and nonvanishing on a connected domain.
  rep.add("anti_isometry_sign", negative, 0.0);
  rep.add("sigma^2-id_points", inv_pt, form_tol);
  rep.add("sigma^2-id_forms", inv_form, form_tol);
  return rep;
}

FormField ddbar(const Expression& phi) {
  return FormField(2, 2, [phi](const Seed& s) {
    const Jet f = phi.evaluate(s.x);
    std::array<Jet, 4> d1;
    for (int i = 0; i < 4; ++i) d1[i] = f.derivative(i);
    auto H = [&](int i, int j) { return d1[i].derivative(j); };
    FormJet out(2);
    for (FormIndex m : form_basis(2)) out.c[m] = Jet(0.0).truncated(f.order() - 2);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        const int xa = 2 * a, ya = 2 * a + 1, xb = 2 * b, yb = 2 * b + 1;
        const Jet coeff = (H(xa, xb) + H(ya, yb) + kI * (H(xa, yb) - H(ya, xb))) * 0.25;
        // dz_a ^ dzbar_b with dz = dx + i dy, dzbar = dx - i dy.
        const std::array<std::pair<int, Complex>, 2> za = {{{xa, 1.0}, {ya, kI}}};
        const std::array<std::pair<int, Complex>, 2> zb = {{{xb, 1.0}, {yb, -kI}}};
        for (const auto& [i, ci] : za)
          for (const auto& [j, cj] : zb) {
            if (i == j) continue;
            const FormIndex m = (1u << i) | (1u << j);
            const double sign = i < j ? 1.0 : -1.0;
            out.c[m] += coeff * (ci * cj * sign);
          }
      }
    return out;
  });
}

namespace {

FormField im_dz1_dzbar2() { return wedge(dz(1), dzbar(2)).imag(); }

FormField kodaira_extra() {
  // i Re(z1) dz1 ^ dzbar1
  return x1_field() * (kI * wedge(dz(1), dzbar(1)));
}

}  // namespace

FormTriple kamada_torus_forms(const Expression& phi) {
  const FormField hol = wedge(dz(1), dz(2));
  FormTriple F;
  F[0] = im_dz1_dzbar2() + (kI / 2.0) * ddbar(phi);
  F[1] = hol.real();
  F[2] = hol.imag();
  return F;
}

VerificationReport kodaira_lattice_check(const KodairaLattice& L, double tol) {
  VerificationReport rep("kodaira_lattice");
  rep.add("a1", std::abs(L.a[0]), tol);
  rep.add("a2", std::abs(L.a[1]), tol);
  rep.add("Im(a3*conj(a4))-b1", std::abs(Complex((L.a[2] * std::conj(L.a[3])).imag()) - L.b[0]), tol);
  return rep;
}

FormTriple kamada_kodaira_forms(const Expression& phi, const KodairaLattice& L) {
  const VerificationReport check = kodaira_lattice_check(L);
  if (!check.pass()) throw LatticeError("Kodaira lattice violates a1 = a2 = 0, Im(a3 conj a4) = b1");
  const FormField hol = std::exp(kI * L.theta_angle) * wedge(dz(1), dz(2));
  FormTriple F;
  F[0] = im_dz1_dzbar2() + kodaira_extra() + (kI / 2.0) * ddbar(phi);
  F[1] = hol.real();
  F[2] = hol.imag();
  return F;
}

std::array<ChartMap, 4> kodaira_generators(const KodairaLattice& L) {
  std::array<ChartMap, 4> g;
  for (int i = 0; i < 4; ++i)
    g[i] = [ai = L.a[i], bi = L.b[i]](const std::array<Jet, 4>& x) {
      const Jet z1 = x[0] + kI * x[1], z2 = x[2] + kI * x[3];
      const Jet w1 = z1 + Jet(ai);
      const Jet w2 = z2 + std::conj(ai) * z1 + Jet(bi);
      return std::array<Jet, 4>{w1.real(), w1.imag(), w2.real(), w2.imag()};
    };
  return g;
}

double monge_ampere_residual(KamadaKind kind, const Expression& phi, const Vec4& p) {
  FormField base = im_dz1_dzbar2();
  if (kind == KamadaKind::kKodaira) base = base + kodaira_extra();
  const FormJet b = base.at(p);
  const FormJet h = ddbar(phi).at(p);
  const Complex top = (4.0 * kI * wedge(b, h) - wedge(h, h)).top();
  return top.real();
}

VerificationReport form_invariance_report(const std::vector<NamedForm>& forms, const std::vector<NamedMap>& maps,
                                          std::span<const Vec4> samples, double tol) {
  VerificationReport rep("invariance");
  for (const auto& [mname, f] : maps)
    for (const auto& [fname, alpha] : forms) {
      std::vector<double> res;
      for (const Vec4& p : samples) res.push_back(form_difference(pullback_at(alpha, f, p), alpha.at(p)));
      rep.add(mname + "*" + fname, res, tol);
    }
  return rep;
}

VerificationReport periodicity_report(const Expression& phi, const std::vector<NamedMap>& maps,
                                      std::span<const Vec4> samples, double tol) {
  VerificationReport rep("periodicity");
  for (const auto& [mname, f] : maps) {
    std::vector<double> res;
    for (const Vec4& p : samples) res.push_back(std::abs(phi.evaluate(map_point(f, p)) - phi.evaluate(p)));
    rep.add(mname + "*phi", res, tol);
  }
  return rep;
}

ChartMap translation(Complex v1, Complex v2) {
  return [v1, v2](const std::array<Jet, 4>& x) {
    return std::array<Jet, 4>{x[0] + v1.real(), x[1] + v1.imag(), x[2] + v2.real(), x[3] + v2.imag()};
  };
}

}  // namespace phh
