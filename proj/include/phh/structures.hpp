#pragma once

#include <array>
#include <span>
#include <stdexcept>
#include <vector>

#include "phh/forms.hpp"
#include "phh/report.hpp"
#include "phh/splitquat.hpp"

namespace phh {

/// Metric and (J1, J2, J3) on a chart. Endomorphism columns are images of
/// the coordinate fields.
struct AlmostPHStructure {
  MetricField g;
  std::array<EndomorphismField, 3> J;
  Vec4 domain_min = Vec4::Constant(-1.0);
  Vec4 domain_max = Vec4::Constant(1.0);

  /// Constant-coefficient structure from a linear triple and compatible metric.
  static AlmostPHStructure constant(const ParaHypercomplexTriple& T, const Mat4& g);

  /// Linear triple at p (real parts).
  ParaHypercomplexTriple triple_at(const Vec4& p) const;
};

struct FormTriple {
  std::array<FormField, 3> omega;

  FormField& operator[](int i) { return omega[i]; }
  const FormField& operator[](int i) const { return omega[i]; }
};

class CharacterizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class NotParaHyperhermitianError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Residuals of J1^2 = -Id, J2^2 = J3^2 = Id, J1J2 = -J2J1 = J3 and
/// g(J1X,J1Y) = -g(J2X,J2Y) = -g(J3X,J3Y) = g(X,Y) over the samples.
VerificationReport structure_residuals(const AlmostPHStructure& S, std::span<const Vec4> samples,
                                       double tol = 1e-10);

/// Omega_i(X, Y) = g(J_i X, Y). Evaluation throws CompatibilityError when the
/// resulting matrix is not antisymmetric (relative 1e-8).
FormTriple fundamental_forms(const AlmostPHStructure& S);
/// Largest |M + M^T| of the matrices g(J_i ., .) at p.
double antisymmetry_residual(const AlmostPHStructure& S, const Vec4& p);

/// The declared orientation -Omega1^2 / 2.
FormField orientation_form(const FormTriple& F);
int orientation_sign(const FormTriple& F, const Vec4& p);

/// -Omega1^2 - Omega2^2, Omega2^2 - Omega3^2 and the mixed wedges, as
/// top-form coefficients.
VerificationReport check_phc_algebra(const FormTriple& F, std::span<const Vec4> samples, double tol = 1e-10);

struct LeeForm {
  Eigen::Vector4cd theta;  // coefficients of dx^i
  double discrepancy = 0;  // max |d Omega_l - theta ^ Omega_l| for l = 2, 3
};

/// Solves theta ^ Omega1 = d Omega1 at p and cross-checks l = 2, 3.
LeeForm lee_form(const FormTriple& F, const Vec4& p, double tol = 1e-8);

VerificationReport hypersymplectic_check(const FormTriple& F, std::span<const Vec4> samples,
                                         double tol = 1e-9);

/// Max over samples and coordinate pairs of |N_J1|, |N_J2|, |N_J3|.
VerificationReport integrability_report(const AlmostPHStructure& S, std::span<const Vec4> samples,
                                        double tol = 1e-8);

/// J1 = Omega3_flat^{-1} Omega2_flat, g(X,Y) = Omega1(X, J1 Y),
/// J2 = g_flat^{-1} Omega2_flat, J3 = J1 J2, with flat(X) = Omega(X, .).
/// The algebraic relations are checked at `samples` first (relative 1e-8).
AlmostPHStructure structure_from_forms(const FormTriple& F, std::span<const Vec4> samples, double tol = 1e-8);

}  // namespace phh
