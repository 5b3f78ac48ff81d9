#pragma once

#include <array>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "phh/expr.hpp"
#include "phh/structures.hpp"

namespace phh {

class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Inoue S+ data. The chart is (x1, y1, x2, y2) with z = x1 + i y1 (Im z > 0)
/// and w = x2 + i y2.
struct InoueParams {
  int p = 0, q = 0, r = 1;
  Complex t = 0.0;
  Eigen::Matrix2i N = Eigen::Matrix2i::Identity();
  double c1 = 0.0, c2 = 0.0;

  // Derived by derive().
  double alpha = 0.0;
  Eigen::Vector2d a = Eigen::Vector2d::Zero();  // N a = alpha a
  Eigen::Vector2d b = Eigen::Vector2d::Zero();  // N b = b / alpha
  double A = 0.0;                               // (b1 a2 - b2 a1) / r
  double s = 0.0;                               // Im t / ln alpha

  /// Validates det N = 1, tr N > 2, r != 0 and fills the derived values.
  /// Eigenvectors are unit length with a positive first nonzero entry.
  void derive();
};

InoueParams make_inoue(const Eigen::Matrix2i& N, int p, int q, int r, Complex t, double c1 = 0, double c2 = 0);

struct InoueFrame {
  FormField theta1, theta2;
  VectorFieldOnChart E1, E2;
};

/// theta1 = dz / Im z, theta2 = dw - ((Im w - s ln Im z) / Im z) dz and the
/// dual (1,0) fields E1 = (Im z) d/dz + (Im w - s ln Im z) d/dw, E2 = d/dw.
/// Evaluation at Im z <= 0 throws DomainError.
InoueFrame inoue_forms(const InoueParams& P);

struct InoueStructure {
  FormTriple forms;  // (Re(theta1 ^ conj theta2), Re Omega, Im Omega), Omega = theta1 ^ theta2
  FormField omega;   // Omega
  FormField lee;     // -Im theta1
};
InoueStructure inoue_structure(const InoueParams& P);

/// Structure-equation residuals (d theta1, d theta2, d Omega, phc algebra,
/// Lee form) over the samples.
VerificationReport inoue_structure_report(const InoueParams& P, std::span<const Vec4> samples, double tol = 1e-9);

/// Generators phi0(z,w) = (alpha z, w + t), phi_i(z,w) = (z + a_i, w + b_i z + c_i),
/// phi3(z,w) = (z, w + A) as chart maps.
std::array<ChartMap, 4> inoue_generators(const InoueParams& P);

/// |phi^* theta_k - theta_k| at each sample, for each generator.
VerificationReport inoue_invariance_report(const InoueParams& P, std::span<const Vec4> samples, double tol = 1e-9);

/// sigma(z, w) = (z, -w).
ChartMap inoue_sigma();

/// Requires t = 0. Pullback signs of theta1, theta2, Omega1, Omega; J_k
/// preserved; conformal factor of (sigma^* g, g) equal to -1.
VerificationReport sigma_obstruction_report(const InoueParams& P, std::span<const Vec4> samples,
                                            double form_tol = 1e-10, double structure_tol = 1e-9);

/// d dbar phi on the complex chart, assembled from the real Hessian:
/// phi_{z_a zbar_b} = 1/4 (phi_{x_a x_b} + phi_{y_a y_b} + i (phi_{x_a y_b} - phi_{y_a x_b})).
FormField ddbar(const Expression& phi);

FormTriple kamada_torus_forms(const Expression& phi);

struct KodairaLattice {
  std::array<Complex, 4> a{}, b{};
  double theta_angle = 0.0;
};

class LatticeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Residuals |a1|, |a2|, |Im(a3 conj a4) - b1|.
VerificationReport kodaira_lattice_check(const KodairaLattice& L, double tol = 1e-10);

/// Omega1 = Im(dz1 ^ dzbar2) + i Re(z1) dz1 ^ dzbar1 + (i/2) d dbar phi,
/// Omega2 + i Omega3 = e^{i theta} dz1 ^ dz2. Throws LatticeError on an invalid lattice.
FormTriple kamada_kodaira_forms(const Expression& phi, const KodairaLattice& L);

/// rho_i(z1, z2) = (z1 + a_i, z2 + conj(a_i) z1 + b_i).
std::array<ChartMap, 4> kodaira_generators(const KodairaLattice& L);

enum class KamadaKind { kTorus, kKodaira };

/// Top coefficient (on dx1 ^ dy1 ^ dx2 ^ dy2) of
/// 4i Omega1_0 ^ d dbar phi - d dbar phi ^ d dbar phi, where Omega1_0 is
/// Omega1 without the phi term.
double monge_ampere_residual(KamadaKind kind, const Expression& phi, const Vec4& p);

using NamedForm = std::pair<std::string, FormField>;
using NamedMap = std::pair<std::string, ChartMap>;

/// Checks "<map>*<form>": max |f^* alpha - alpha| over the samples.
VerificationReport form_invariance_report(const std::vector<NamedForm>& forms, const std::vector<NamedMap>& maps,
                                          std::span<const Vec4> samples, double tol = 1e-9);

/// Checks "<map>*phi": max |phi(f(p)) - phi(p)|.
VerificationReport periodicity_report(const Expression& phi, const std::vector<NamedMap>& maps,
                                      std::span<const Vec4> samples, double tol = 1e-9);

/// Translation of the complex chart by (v1, v2).
ChartMap translation(Complex v1, Complex v2);

}  // namespace phh
