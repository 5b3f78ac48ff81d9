#include "phh/walker.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/LU>

namespace phh {
namespace {

Jet::Exponents exps(int x, int y, int z, int t) { return {x, y, z, t}; }

struct Coefficients {
  Jet a, b, c;
};

Coefficients coefficients(const WalkerData& d, const Seed& s) {
  return {d.a.evaluate(s.x), d.b.evaluate(s.x), d.c.evaluate(s.x)};
}

}  // namespace

MetricField walker_metric(const WalkerData& d) {
  return MetricField(0, [d](const Seed& s) {
    const auto [a, b, c] = coefficients(d, s);
    JetMat g;
    g << Jet(0.0), Jet(0.0), Jet(1.0), Jet(0.0),
         Jet(0.0), Jet(0.0), Jet(0.0), Jet(1.0),
         Jet(1.0), Jet(0.0), a, c,
         Jet(0.0), Jet(1.0), c, b;
    return g;
  });
}

MatrixField walker_frame(const WalkerData& d) {
  return MatrixField(0, [d](const Seed& s) {
    const auto [a, b, c] = coefficients(d, s);
    const Jet one(1.0), zero(0.0);
    JetMat E;
    E << (one - a) * 0.5, -c, -(one + a) * 0.5, -c,
         zero, (one - b) * 0.5, zero, -(one + b) * 0.5,
         one, zero, one, zero,
         zero, one, zero, one;
    return E;
  });
}

double walker_frame_residual(const WalkerData& d, const Vec4& p) {
  const Mat4 E = walker_frame(d).real_at(p);
  const Mat4 g = walker_metric(d).real_at(p);
  const Mat4 target = Vec4(1.0, 1.0, -1.0, -1.0).asDiagonal();
  return (E.transpose() * g * E - target).cwiseAbs().maxCoeff();
}

AlmostPHStructure proper_structure(const WalkerData& d) {
  const ParaHypercomplexTriple C = canonical_triple();
  const MatrixField E = walker_frame(d);
  AlmostPHStructure S;
  S.g = walker_metric(d);
  for (int k = 0; k < 3; ++k) {
    S.J[k] = EndomorphismField(0, [E, Ck = C[k]](const Seed& s) {
      const JetMat e = E(s);
      return JetMat(e * Ck * inverse4(e));
    });
  }
  return S;
}

WalkerData pc_family(const PCFamily& f) {
  const std::array<const Expression*, 6> parts = {&f.K, &f.P, &f.T, &f.xi, &f.eta, &f.gamma};
  const std::array<const char*, 6> names = {"K", "P", "T", "xi", "eta", "gamma"};
  for (int k = 0; k < 6; ++k)
    if (parts[k]->depends_on(0) || parts[k]->depends_on(1))
      throw ValidationError(std::string("PC family: ") + names[k] + " must depend on (z, t) only");
  const std::string K = f.K.print(), P = f.P.print(), T = f.T.print();
  WalkerData d;
  d.a = Expression::parse("x^2*" + K + " + x*" + P + " + " + f.xi.print());
  d.b = Expression::parse("y^2*" + K + " + y*" + T + " + " + f.eta.print());
  d.c = Expression::parse("x*y*" + K + " + x*" + T + "/2 + y*" + P + "/2 + " + f.gamma.print());
  return d;
}

VerificationReport pc_form_check(const WalkerData& d, std::span<const Vec4> samples, double tol) {
  const std::array<const char*, 11> names = {"a_xxx", "a_y", "b_yyy", "b_x", "b_xx", "c_xx", "c_yy",
                                             "a_xx-b_yy", "a_xx-2c_xy", "c_x-b_y/2", "c_y-a_x/2"};
  std::array<std::vector<double>, 11> res;
  for (const Vec4& p : samples) {
    const Seed s = Seed::at(p, 3);
    const auto [a, b, c] = coefficients(d, s);
    auto D = [](const Jet& f, int x, int y) { return f.partial(exps(x, y, 0, 0)).real(); };
    const std::array<double, 11> r = {
        D(a, 3, 0),          D(a, 0, 1),          D(b, 0, 3),          D(b, 1, 0),
        D(b, 2, 0),          D(c, 2, 0),          D(c, 0, 2),          D(a, 2, 0) - D(b, 0, 2),
        D(a, 2, 0) - 2 * D(c, 1, 1), D(c, 1, 0) - 0.5 * D(b, 0, 1), D(c, 0, 1) - 0.5 * D(a, 1, 0)};
    for (int k = 0; k < 11; ++k) res[k].push_back(r[k]);
  }
  VerificationReport rep("pc_form");
  for (int k = 0; k < 11; ++k) rep.add(names[k], res[k], tol);
  return rep;
}

VerificationReport hk_check(const WalkerData& d, std::span<const Vec4> samples, const HKTolerances& tol) {
  const AlmostPHStructure S = proper_structure(d);
  const FormTriple F = fundamental_forms(S);
  const std::array<const char*, 6> dnames = {"a_x", "a_y", "b_x", "b_y", "c_x", "c_y"};
  std::array<std::vector<double>, 6> dres;
  std::array<std::vector<double>, 3> closed;
  std::vector<double> null_plane, nx, ny, ric, wminus;
  for (const Vec4& p : samples) {
    const Seed s = Seed::at(p, 1);
    const auto [a, b, c] = coefficients(d, s);
    const std::array<const Jet*, 3> f = {&a, &b, &c};
    for (int k = 0; k < 3; ++k)
      for (int v = 0; v < 2; ++v) dres[2 * k + v].push_back(std::abs(f[k]->partial(v)));
    for (int l = 0; l < 3; ++l) closed[l].push_back(ext_d(F[l].at(p, 1)).max_abs());
    const CurvatureAtPoint cur = curvature_at(S.g, orientation_sign(F, p), p);
    null_plane.push_back(std::max({std::abs(cur.g(0, 0)), std::abs(cur.g(0, 1)), std::abs(cur.g(1, 1))}));
    nx.push_back(parallel_residual(cur.christoffel, 0));
    ny.push_back(parallel_residual(cur.christoffel, 1));
    ric.push_back(cur.ricci.cwiseAbs().maxCoeff());
    wminus.push_back(cur.weyl_minus_full.cwiseAbs().maxCoeff());
  }
  VerificationReport rep("hk");
  for (int k = 0; k < 6; ++k) rep.add(dnames[k], dres[k], tol.derivative);
  for (int l = 0; l < 3; ++l) rep.add("dO" + std::to_string(l + 1), closed[l], tol.closed);
  rep.add("null_plane", null_plane, tol.derivative);
  rep.add("nabla_dx", nx, tol.parallel);
  rep.add("nabla_dy", ny, tol.parallel);
  rep.add("ricci", ric, tol.curvature.ricci);
  rep.add("weyl_minus", wminus, tol.curvature.weyl);
  return rep;
}

}  // namespace phh
