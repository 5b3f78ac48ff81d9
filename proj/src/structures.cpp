#include "phh/structures.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/LU>

namespace phh {
namespace {

double max_abs(const Eigen::Matrix4cd& m) { return m.cwiseAbs().maxCoeff(); }

JetMat flat(const FormJet& omega) { return two_form_matrix(omega).transpose(); }

struct PhcResiduals {
  std::array<double, 5> r{};
  double scale = 0;
};

PhcResiduals phc_residuals(const std::array<FormJet, 3>& w) {
  const Complex s1 = wedge(w[0], w[0]).top();
  const Complex s2 = wedge(w[1], w[1]).top();
  const Complex s3 = wedge(w[2], w[2]).top();
  PhcResiduals out;
  out.r = {std::abs(-s1 - s2), std::abs(s2 - s3), std::abs(wedge(w[0], w[1]).top()),
           std::abs(wedge(w[0], w[2]).top()), std::abs(wedge(w[1], w[2]).top())};
  out.scale = std::max({std::abs(s1), std::abs(s2), std::abs(s3)});
  return out;
}

const std::array<const char*, 5> kPhcNames = {"-O1^2-O2^2", "O2^2-O3^2", "O1^O2", "O1^O3", "O2^O3"};

}  // namespace

AlmostPHStructure AlmostPHStructure::constant(const ParaHypercomplexTriple& T, const Mat4& g) {
  AlmostPHStructure S;
  S.g = MetricField(g);
  for (int k = 0; k < 3; ++k) S.J[k] = EndomorphismField(T[k]);
  return S;
}

ParaHypercomplexTriple AlmostPHStructure::triple_at(const Vec4& p) const {
  ParaHypercomplexTriple T;
  T.J1 = J[0].real_at(p);
  T.J2 = J[1].real_at(p);
  T.J3 = J[2].real_at(p);
  return T;
}

VerificationReport structure_residuals(const AlmostPHStructure& S, std::span<const Vec4> samples, double tol) {
  std::vector<double> algebra, metric;
  const Eigen::Matrix4cd I = Eigen::Matrix4cd::Identity();
  for (const Vec4& p : samples) {
    const Eigen::Matrix4cd g = values(S.g.at(p));
    const Eigen::Matrix4cd J1 = values(S.J[0].at(p)), J2 = values(S.J[1].at(p)), J3 = values(S.J[2].at(p));
    algebra.push_back(std::max({max_abs(J1 * J1 + I), max_abs(J2 * J2 - I), max_abs(J3 * J3 - I),
                                max_abs(J1 * J2 + J2 * J1), max_abs(J1 * J2 - J3)}));
    const double gs = std::max(1.0, max_abs(g));
    metric.push_back(std::max({max_abs(J1.transpose() * g * J1 - g), max_abs(J2.transpose() * g * J2 + g),
                               max_abs(J3.transpose() * g * J3 + g)}) /
                     gs);
  }
  VerificationReport r("structure");
  r.add("triple_algebra", algebra, tol);
  r.add("metric_compatibility", metric, tol);
  return r;
}

double antisymmetry_residual(const AlmostPHStructure& S, const Vec4& p) {
  const Eigen::Matrix4cd g = values(S.g.at(p));
  double r = 0.0;
  for (int k = 0; k < 3; ++k) {
    const Eigen::Matrix4cd W = values(S.J[k].at(p)).transpose() * g;
    r = std::max(r, max_abs(W + W.transpose()));
  }
  return r;
}

FormTriple fundamental_forms(const AlmostPHStructure& S) {
  FormTriple F;
  for (int k = 0; k < 3; ++k) {
    const int depth = std::max(S.g.depth(), S.J[k].depth());
    F[k] = FormField(2, depth, [g = S.g, J = S.J[k]](const Seed& s) {
      const JetMat W = J(s).transpose() * g(s);
      const Eigen::Matrix4cd v = values(W);
      if (max_abs(v + v.transpose()) > 1e-8 * std::max(1.0, max_abs(v)))
        throw CompatibilityError("fundamental form is not antisymmetric: g and J are incompatible");
      return two_form_from_matrix(W);
    });
  }
  return F;
}

FormField orientation_form(const FormTriple& F) { return Complex(-0.5) * wedge(F[0], F[0]); }

int orientation_sign(const FormTriple& F, const Vec4& p) {
  const Complex v = wedge(F[0].at(p), F[0].at(p)).top() * -0.5;
  if (std::abs(v) == 0.0) throw DegenerateFormError("orientation form vanishes");
  return v.real() < 0 ? -1 : 1;
}

VerificationReport check_phc_algebra(const FormTriple& F, std::span<const Vec4> samples, double tol) {
  std::array<std::vector<double>, 5> res;
  for (const Vec4& p : samples) {
    const auto r = phc_residuals({F[0].at(p), F[1].at(p), F[2].at(p)});
    for (int k = 0; k < 5; ++k) res[k].push_back(r.r[k]);
  }
  VerificationReport rep("phc_algebra");
  for (int k = 0; k < 5; ++k) rep.add(kPhcNames[k], res[k], tol);
  return rep;
}

LeeForm lee_form(const FormTriple& F, const Vec4& p, double tol) {
  std::array<FormJet, 3> w, dw;
  for (int l = 0; l < 3; ++l) {
    w[l] = F[l].at(p, 1);
    dw[l] = ext_d(w[l]);
  }
  const auto& b3 = form_basis(3);
  Eigen::Matrix4cd A;
  Eigen::Vector4cd rhs;
  for (int i = 0; i < 4; ++i) {
    FormJet e(1);
    e.c[1u << i] = Jet(1.0);
    const FormJet ew = wedge(e, w[0]);
    for (int row = 0; row < 4; ++row) A(row, i) = ew.value(b3[row]);
  }
  for (int row = 0; row < 4; ++row) rhs(row) = dw[0].value(b3[row]);

  Eigen::FullPivLU<Eigen::Matrix4cd> lu(A);
  const double scale = std::max(1e-300, A.cwiseAbs().maxCoeff());
  lu.setThreshold(1e-12);
  if (lu.rank() < 4 || scale < 1e-14) throw DegenerateFormError("lee_form: Omega1 is degenerate at the point");

  LeeForm out;
  out.theta = lu.solve(rhs);
  FormJet theta(1);
  for (int i = 0; i < 4; ++i) theta.c[1u << i] = Jet(out.theta(i));
  for (int l = 1; l < 3; ++l) {
    const FormJet diff = wedge(theta, w[l]) - dw[l];
    out.discrepancy = std::max(out.discrepancy, diff.max_abs());
  }
  const double ref = std::max({1.0, w[1].max_abs(), w[2].max_abs()});
  if (out.discrepancy > tol * ref)
    throw NotParaHyperhermitianError("lee_form: d Omega_l = theta ^ Omega_l is inconsistent across l (discrepancy " +
                                     std::to_string(out.discrepancy) + ")");
  return out;
}

VerificationReport hypersymplectic_check(const FormTriple& F, std::span<const Vec4> samples, double tol) {
  std::array<std::vector<double>, 3> closed;
  for (const Vec4& p : samples)
    for (int l = 0; l < 3; ++l) closed[l].push_back(ext_d(F[l].at(p, 1)).max_abs());
  VerificationReport rep("hypersymplectic");
  for (int l = 0; l < 3; ++l) rep.add("dO" + std::to_string(l + 1), closed[l], tol);
  rep.merge(check_phc_algebra(F, samples, std::min(tol, 1e-10)));
  return rep;
}

VerificationReport integrability_report(const AlmostPHStructure& S, std::span<const Vec4> samples, double tol) {
  const std::array<int, 3> eps = {-1, 1, 1};
  std::array<std::vector<double>, 3> res;
  std::array<JetVec, 4> coord;
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) coord[i](k) = Jet(i == k ? 1.0 : 0.0);
  for (const Vec4& p : samples) {
    for (int k = 0; k < 3; ++k) {
      const JetMat J = S.J[k].at(p, 1);
      double m = 0.0;
      for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) m = std::max(m, nijenhuis(J, coord[i], coord[j], eps[k]).norm());
      res[k].push_back(m);
    }
  }
  VerificationReport rep("integrability");
  for (int k = 0; k < 3; ++k) rep.add("N_J" + std::to_string(k + 1), res[k], tol);
  return rep;
}

AlmostPHStructure structure_from_forms(const FormTriple& F, std::span<const Vec4> samples, double tol) {
  for (const Vec4& p : samples) {
    const std::array<FormJet, 3> w = {F[0].at(p), F[1].at(p), F[2].at(p)};
    const auto r = phc_residuals(w);
    if (r.scale < 1e-14) throw DegenerateFormError("structure_from_forms: forms are degenerate at a sample");
    for (int k = 0; k < 5; ++k)
      if (r.r[k] > tol * r.scale)
        throw CharacterizationError(std::string("structure_from_forms: relation ") + kPhcNames[k] +
                                    " violated (residual " + std::to_string(r.r[k] / r.scale) + ")");
  }

  auto build = [F](const Seed& s) {
    const JetMat W2 = flat(F[1](s));
    const JetMat W3 = flat(F[2](s));
    if (std::abs(determinant4(W3).value()) < 1e-14)
      throw DegenerateFormError("structure_from_forms: Omega3 is degenerate");
    std::array<JetMat, 4> out;
    out[1] = inverse4(W3) * W2;                             // J1
    out[0] = -(flat(F[0](s)) * out[1]);                     // g(X,Y) = Omega1(X, J1 Y)
    out[0] = ((out[0] + out[0].transpose()) * 0.5).eval();  // symmetric part
    if (std::abs(determinant4(out[0]).value()) < 1e-14)
      throw DegenerateFormError("structure_from_forms: reconstructed metric is degenerate");
    out[2] = inverse4(out[0]) * W2;                         // J2
    out[3] = out[1] * out[2];                               // J3
    return out;
  };
  const int depth = std::max({F[0].depth(), F[1].depth(), F[2].depth()});
  AlmostPHStructure S;
  S.g = MetricField(depth, [build](const Seed& s) { return build(s)[0]; });
  for (int k = 0; k < 3; ++k) S.J[k] = EndomorphismField(depth, [build, k](const Seed& s) { return build(s)[k + 1]; });
  return S;
}

}  // namespace phh
