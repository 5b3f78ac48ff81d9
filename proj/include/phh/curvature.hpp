#pragma once

#include <array>
#include <span>

#include <Eigen/Core>

#include "phh/fields.hpp"
#include "phh/report.hpp"

namespace phh {

/// Dense rank-4 array over chart indices.
struct Tensor4 {
  std::array<double, 256> v{};
  double& operator()(int a, int b, int c, int d) { return v[((a * 4 + b) * 4 + c) * 4 + d]; }
  double operator()(int a, int b, int c, int d) const { return v[((a * 4 + b) * 4 + c) * 4 + d]; }
  double max_abs() const;
};

/// christoffel[k](i, j) = Gamma^k_ij.
using Christoffel = std::array<Mat4, 4>;

/// Conventions:
///   Gamma^k_ij = 1/2 g^kl (d_i g_jl + d_j g_il - d_l g_ij)
///   R^l_ijk    = d_i Gamma^l_jk - d_j Gamma^l_ik + Gamma^l_im Gamma^m_jk - Gamma^l_jm Gamma^m_ik,
///                so R(d_i, d_j) d_k = R^l_ijk d_l
///   Ric_jk     = R^i_ijk (positive on round spheres), s = g^jk Ric_jk
///   R_ijkl     = g_lm R^m_ijk
///   W          = Rm + 1/2 (Ric - s g / 6) (KN) g, with
///                (h (KN) k)_ijkl = h_ik k_jl + h_jl k_ik - h_il k_jk - h_jk k_il
struct CurvatureAtPoint {
  Mat4 g, ginv;
  Christoffel christoffel;
  Tensor4 riemann;  // R^l_ijk stored at (l, i, j, k)
  Tensor4 riemann_lower;  // R_ijkl
  Mat4 ricci;
  double scalar = 0;
  Tensor4 weyl;  // W_ijkl
  /// Weyl operator on 2-forms in the basis 01, 02, 03, 12, 13, 23:
  /// (W w)_ij = sum_{k<l} W_ij^kl w_kl.
  Eigen::Matrix<double, 6, 6> weyl_operator;
  /// P+ W P+ and P- W P- with P+- = (I +- *) / 2, and the same operators as
  /// 3x3 blocks on bases of the eigenspaces of *.
  Eigen::Matrix<double, 6, 6> weyl_plus_full, weyl_minus_full;
  Eigen::Matrix3d weyl_plus, weyl_minus;
};

Christoffel christoffel(const MetricField& g, const Vec4& p);
Tensor4 riemann(const MetricField& g, const Vec4& p);
std::pair<Mat4, double> ricci(const MetricField& g, const Vec4& p);

struct WeylSplit {
  Eigen::Matrix3d plus, minus;
  double norm_plus = 0, norm_minus = 0;  // max |entry| of P+- W P+-
};
WeylSplit weyl_split(const MetricField& g, int orientation_sign, const Vec4& p);

/// Everything above from one evaluation of the metric 2-jet.
CurvatureAtPoint curvature_at(const MetricField& g, int orientation_sign, const Vec4& p);

/// Curvature from metric values and first and second derivatives:
/// dg[i] = d_i g, ddg[i][j] = d_i d_j g.
CurvatureAtPoint curvature_from_derivatives(const Mat4& g, const std::array<Mat4, 4>& dg,
                                            const std::array<std::array<Mat4, 4>, 4>& ddg,
                                            int orientation_sign);

/// max |nabla_i g_jk| at p.
double metric_compatibility_residual(const MetricField& g, const Vec4& p);
/// max_k,i |Gamma^k_{i c}|: the size of nabla (d/dx_c) at p.
double parallel_residual(const Christoffel& G, int c);
/// max_k |g^ij nabla_i Ric_jk - 1/2 d_k s| (needs third derivatives of g).
double contracted_bianchi_residual(const MetricField& g, const Vec4& p);
/// Largest violation of R_ijkl = -R_jikl = -R_ijlk = R_klij and the first Bianchi identity.
double riemann_symmetry_residual(const CurvatureAtPoint& c);
double weyl_trace_residual(const CurvatureAtPoint& c);

struct CurvatureTolerances {
  double riemann = 1e-8;
  double ricci = 1e-8;
  double scalar = 1e-8;
  double weyl = 1e-8;
};

/// Max |R|, |Ric|, |s|, |W-|, |W+| over the samples. The flags record which
/// of flat / Ricci-flat / self-dual hold at the tolerances.
struct CurvatureReport {
  VerificationReport report;
  bool flat = false;
  bool ricci_flat = false;
  bool self_dual = false;
};

using OrientationFn = std::function<int(const Vec4&)>;
CurvatureReport curvature_report(const MetricField& g, const OrientationFn& orientation,
                                 std::span<const Vec4> samples, const CurvatureTolerances& tol = {});

}  // namespace phh
