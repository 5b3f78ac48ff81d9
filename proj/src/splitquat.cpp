#include "phh/splitquat.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace phh {
namespace {

constexpr double kPivotTol = 1e-10;
constexpr double kCompatTol = 1e-10;

double max_abs(const Mat4& m) { return m.cwiseAbs().maxCoeff(); }

int numerical_rank(const Mat4& m) {
  Eigen::SelfAdjointEigenSolver<Mat4> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  const auto ev = es.eigenvalues().cwiseAbs();
  const double scale = ev.maxCoeff();
  if (scale == 0.0) return 0;
  int r = 0;
  for (int k = 0; k < 4; ++k)
    if (ev(k) > kPivotTol * scale) ++r;
  return r;
}

}  // namespace

ParaHypercomplexTriple ParaHypercomplexTriple::conjugated(const Mat4& P) const {
  const Mat4 Pinv = P.inverse();
  return {P * J1 * Pinv, P * J2 * Pinv, P * J3 * Pinv};
}

BilinearForm4::BilinearForm4(const Mat4& m) : entries(m), rank(numerical_rank(m)) {}

std::pair<int, int> BilinearForm4::signature() const {
  Eigen::SelfAdjointEigenSolver<Mat4> es(entries, Eigen::EigenvaluesOnly);
  const auto ev = es.eigenvalues();
  const double scale = ev.cwiseAbs().maxCoeff();
  int pos = 0, neg = 0;
  for (int k = 0; k < 4; ++k) {
    if (ev(k) > kPivotTol * scale) ++pos;
    if (ev(k) < -kPivotTol * scale) ++neg;
  }
  return {pos, neg};
}

ParaHypercomplexTriple canonical_triple() {
  ParaHypercomplexTriple T;
  // Columns are images of e1..e4.
  T.J1 << 0, -1, 0, 0,
          1, 0, 0, 0,
          0, 0, 0, -1,
          0, 0, 1, 0;
  T.J2 << 0, 0, 1, 0,
          0, 0, 0, -1,
          1, 0, 0, 0,
          0, -1, 0, 0;
  T.J3 << 0, 0, 0, 1,
          0, 0, 1, 0,
          0, 1, 0, 0,
          1, 0, 0, 0;
  return T;
}

VerificationReport verify_triple(const ParaHypercomplexTriple& T, double tol) {
  const Mat4 I = Mat4::Identity();
  VerificationReport rep("triple");
  rep.add("J1^2=-Id", max_abs(T.J1 * T.J1 + I), tol);
  rep.add("J2^2=Id", max_abs(T.J2 * T.J2 - I), tol);
  rep.add("J3^2=Id", max_abs(T.J3 * T.J3 - I), tol);
  rep.add("J1J2=-J2J1", max_abs(T.J1 * T.J2 + T.J2 * T.J1), tol);
  rep.add("J1J2=J3", max_abs(T.J1 * T.J2 - T.J3), tol);
  return rep;
}

double triple_residual(const ParaHypercomplexTriple& T) {
  double r = 0.0;
  for (const auto& c : verify_triple(T).checks()) r = std::max(r, c.max);
  return r;
}

std::array<Vec4, 2> eigenbasis(const ParaHypercomplexTriple& T, int sign) {
  const Mat4 I = Mat4::Identity();
  const double scale = std::max(1.0, max_abs(T.J2));
  if (max_abs(T.J2 * T.J2 - I) > kCompatTol * scale * scale)
    throw AlgebraError("eigenbasis: J2 is not a product structure (J2^2 != Id)");
  const Mat4 P = I + (sign >= 0 ? 1.0 : -1.0) * T.J2;

  std::array<Vec4, 2> basis;
  std::array<Vec4, 4> ortho;
  int found = 0;
  for (int j = 0; j < 4; ++j) {
    Vec4 v = P.col(j);
    const double norm0 = v.norm();
    if (norm0 == 0.0) continue;
    Vec4 r = v;
    for (int k = 0; k < found; ++k) r -= ortho[k].dot(r) * ortho[k];
    if (r.norm() <= kPivotTol * norm0) continue;
    if (found >= 2) throw AlgebraError("eigenbasis: eigenspace of J2 has dimension > 2");
    ortho[found] = r.normalized();
    basis[found] = v;
    ++found;
  }
  if (found != 2) throw AlgebraError("eigenbasis: eigenspace of J2 has dimension < 2");
  return basis;
}

PlusForm make_plus_form(const ParaHypercomplexTriple& T, double coefficient) {
  const auto b = eigenbasis(T, +1);
  return {coefficient, b[0], b[1]};
}

Mat4 plus_form_matrix(const ParaHypercomplexTriple& T, const PlusForm& h) {
  const Mat4 Pplus = 0.5 * (Mat4::Identity() + T.J2);
  Eigen::Matrix<double, 4, 2> U;
  U << h.u1, h.u2;
  // Coordinates of the V+ component in the basis (u1, u2).
  const Eigen::Matrix<double, 2, 4> L = (U.transpose() * U).inverse() * U.transpose() * Pplus;
  Eigen::Matrix2d C;
  C << 0, h.coefficient, -h.coefficient, 0;
  return L.transpose() * C * L;
}

BilinearForm4 metric_from_plus_form(const ParaHypercomplexTriple& T, const PlusForm& h) {
  if (h.coefficient == 0.0) throw DegenerateFormError("metric_from_plus_form: plus-form is degenerate (c = 0)");
  const Mat4 H = plus_form_matrix(T, h);
  const Mat4 HJ = H * T.J1;
  return BilinearForm4(2.0 * (HJ + HJ.transpose()));
}

double plus_coefficient_from_metric(const ParaHypercomplexTriple& T, const BilinearForm4& g,
                                    const std::array<Vec4, 2>& plus_basis) {
  return 0.5 * g(T.J1 * plus_basis[0], plus_basis[1]);
}

BilinearForm4 averaged_form(const BilinearForm4& g, const ParaHypercomplexTriple& T) {
  const Mat4& G = g.entries;
  return BilinearForm4(G + T.J1.transpose() * G * T.J1 - T.J2.transpose() * G * T.J2 -
                       T.J3.transpose() * G * T.J3);
}

double compatibility_residual(const Mat4& g, const ParaHypercomplexTriple& T) {
  const double scale = max_abs(g);
  if (scale == 0.0) return 0.0;
  const Mat4 G = g / scale;
  double r = max_abs(G - G.transpose());
  r = std::max(r, max_abs(T.J1.transpose() * G * T.J1 - G));
  r = std::max(r, max_abs(T.J2.transpose() * G * T.J2 + G));
  r = std::max(r, max_abs(T.J3.transpose() * G * T.J3 + G));
  return r;
}

bool is_compatible(const Mat4& g, const ParaHypercomplexTriple& T, double tol) {
  return compatibility_residual(g, T) <= tol && numerical_rank(g) == 4;
}

double conformal_factor(const BilinearForm4& g, const BilinearForm4& h, const ParaHypercomplexTriple& T,
                        const Vec4& w) {
  if (!is_compatible(g.entries, T, kCompatTol) || !is_compatible(h.entries, T, kCompatTol))
    throw CompatibilityError("conformal_factor: metric is not compatible with the triple");
  const double hww = h(w, w);
  if (std::abs(hww) <= kCompatTol * max_abs(h.entries) * w.squaredNorm())
    throw IsotropicVectorError("conformal_factor: probe vector is isotropic for h");
  const double lambda = g(w, w) / hww;
  const double scale = std::max(max_abs(g.entries), std::abs(lambda) * max_abs(h.entries));
  if (max_abs(g.entries - lambda * h.entries) > 1e-9 * scale)
    throw CompatibilityError("conformal_factor: g is not a multiple of h");
  return lambda;
}

QuaternionicFrame quaternionic_frame(const BilinearForm4& g, const ParaHypercomplexTriple& T,
                                     const Vec4& w) {
  if (!is_compatible(g.entries, T, kCompatTol))
    throw CompatibilityError("quaternionic_frame: metric is not compatible with the triple");
  const double scale = max_abs(g.entries);
  const double gww = g(w, w);
  if (std::abs(gww) <= kCompatTol * scale * w.squaredNorm())
    throw IsotropicVectorError("quaternionic_frame: w is isotropic");

  QuaternionicFrame out;
  out.frame << w, T.J1 * w, T.J2 * w, T.J3 * w;

  // A unit spacelike vector e1 gives the g-orthonormal frame e1, J1e1, J2e1, J3e1.
  Vec4 e1 = Vec4::Zero();
  bool found = false;
  for (int i = 0; i < 4 && !found; ++i)
    for (int j = i; j < 4 && !found; ++j)
      for (double s : {1.0, -1.0}) {
        Vec4 v = Vec4::Unit(i);
        if (j != i) v += s * Vec4::Unit(j);
        const double gvv = g(v, v);
        if (gvv > kCompatTol * scale * v.squaredNorm()) {
          e1 = v / std::sqrt(gvv);
          found = true;
          break;
        }
      }
  if (!found) throw CompatibilityError("quaternionic_frame: metric has no spacelike vector");
  Mat4 E;
  E << e1, T.J1 * e1, T.J2 * e1, T.J3 * e1;
  out.transition_det = (E.inverse() * out.frame).determinant();
  out.norm4 = gww * gww;
  return out;
}

}  // namespace phh
