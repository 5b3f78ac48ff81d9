#include "phh/curvature.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/LU>

#include "phh/forms.hpp"

namespace phh {
namespace {

struct JetChristoffel {
  std::array<JetMat, 4> G;  // G[k](i, j)
};

// Gamma as jets exact to one order less than g.
JetChristoffel christoffel_jets(const JetMat& g) {
  const JetMat ginv = inverse4(g);
  std::array<JetMat, 4> dg;
  for (int i = 0; i < 4; ++i) dg[i] = derivative(g, i);
  JetChristoffel out;
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j) {
        Jet s(0.0);
        for (int l = 0; l < 4; ++l) s += ginv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
        out.G[k](i, j) = s * 0.5;
        out.G[k](j, i) = out.G[k](i, j);
      }
  return out;
}

// Ricci tensor as jets exact to two orders less than g.
JetMat ricci_jets(const JetMat& g) {
  const JetChristoffel C = christoffel_jets(g);
  JetMat Ric;
  for (int j = 0; j < 4; ++j)
    for (int k = j; k < 4; ++k) {
      Jet s(0.0);
      for (int i = 0; i < 4; ++i) {
        s += C.G[i](j, k).derivative(i) - C.G[i](i, k).derivative(j);
        for (int m = 0; m < 4; ++m) s += C.G[i](i, m) * C.G[m](j, k) - C.G[i](j, m) * C.G[m](i, k);
      }
      Ric(j, k) = s;
      Ric(k, j) = s;
    }
  return Ric;
}

CurvatureAtPoint finish(CurvatureAtPoint c, int orientation_sign) {
  // Lowered Riemann, Ricci, scalar.
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          double s = 0.0;
          for (int m = 0; m < 4; ++m) s += c.g(l, m) * c.riemann(m, i, j, k);
          c.riemann_lower(i, j, k, l) = s;
        }
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k) {
      double s = 0.0;
      for (int i = 0; i < 4; ++i) s += c.riemann(i, i, j, k);
      c.ricci(j, k) = s;
    }
  c.scalar = (c.ginv.cwiseProduct(c.ricci)).sum();

  // Weyl tensor.
  const Mat4 A = 0.5 * (c.ricci - c.scalar / 6.0 * c.g);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          const double kn = A(i, k) * c.g(j, l) + A(j, l) * c.g(i, k) - A(i, l) * c.g(j, k) - A(j, k) * c.g(i, l);
          c.weyl(i, j, k, l) = c.riemann_lower(i, j, k, l) + kn;
        }

  // Operator on 2-forms: W_ij^kl = g^ka g^lb W_ijab.
  const auto& basis = form_basis(2);
  auto pair_of = [](FormIndex m) {
    std::array<int, 2> p{};
    int n = 0;
    for (int i = 0; i < 4; ++i)
      if (m & (1u << i)) p[n++] = i;
    return p;
  };
  for (int row = 0; row < 6; ++row) {
    const auto [i, j] = pair_of(basis[row]);
    for (int col = 0; col < 6; ++col) {
      const auto [k, l] = pair_of(basis[col]);
      double s = 0.0;
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) s += c.ginv(k, a) * c.ginv(l, b) * c.weyl(i, j, a, b);
      c.weyl_operator(row, col) = s;
    }
  }

  const Eigen::Matrix<double, 6, 6> S = hodge_matrix_2forms(c.g, orientation_sign);
  const Eigen::Matrix<double, 6, 6> I = Eigen::Matrix<double, 6, 6>::Identity();
  for (int sign : {1, -1}) {
    const Eigen::Matrix<double, 6, 6> P = 0.5 * (I + sign * S);
    const Eigen::Matrix<double, 6, 6> W = P * c.weyl_operator * P;
    // Basis of the eigenspace: greedy pivot columns of P.
    Eigen::Matrix<double, 6, 3> V = Eigen::Matrix<double, 6, 3>::Zero();
    int found = 0;
    for (int col = 0; col < 6 && found < 3; ++col) {
      Eigen::Matrix<double, 6, 1> v = P.col(col);
      Eigen::Matrix<double, 6, 1> r = v;
      for (int q = 0; q < found; ++q) r -= V.col(q).dot(r) / V.col(q).squaredNorm() * V.col(q);
      if (r.norm() > 1e-10 * std::max(1.0, v.norm())) V.col(found++) = v;
    }
    Eigen::Matrix3d block = Eigen::Matrix3d::Zero();
    if (found == 3) block = (V.transpose() * V).inverse() * (V.transpose() * c.weyl_operator * V);
    if (sign > 0) {
      c.weyl_plus_full = W;
      c.weyl_plus = block;
    } else {
      c.weyl_minus_full = W;
      c.weyl_minus = block;
    }
  }
  return c;
}

}  // namespace

double Tensor4::max_abs() const {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

Christoffel christoffel(const MetricField& g, const Vec4& p) {
  const JetMat gj = g.at(p, 1);
  if (std::abs(determinant4(gj).value()) < 1e-14) throw DegenerateMetricError("christoffel: singular metric");
  const JetChristoffel C = christoffel_jets(gj);
  Christoffel out;
  for (int k = 0; k < 4; ++k) out[k] = real_values(C.G[k]);
  return out;
}

CurvatureAtPoint curvature_at(const MetricField& g, int orientation_sign, const Vec4& p) {
  const JetMat gj = g.at(p, 2);
  if (std::abs(determinant4(gj).value()) < 1e-14) throw DegenerateMetricError("curvature: singular metric");
  const JetChristoffel C = christoffel_jets(gj);
  CurvatureAtPoint c;
  c.g = real_values(gj);
  c.ginv = c.g.inverse();
  for (int k = 0; k < 4; ++k) c.christoffel[k] = real_values(C.G[k]);
  for (int l = 0; l < 4; ++l)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) {
          double s = C.G[l](j, k).partial(i).real() - C.G[l](i, k).partial(j).real();
          for (int m = 0; m < 4; ++m)
            s += c.christoffel[l](i, m) * c.christoffel[m](j, k) - c.christoffel[l](j, m) * c.christoffel[m](i, k);
          c.riemann(l, i, j, k) = s;
        }
  return finish(c, orientation_sign);
}

CurvatureAtPoint curvature_from_derivatives(const Mat4& g, const std::array<Mat4, 4>& dg,
                                            const std::array<std::array<Mat4, 4>, 4>& ddg, int orientation_sign) {
  CurvatureAtPoint c;
  c.g = g;
  c.ginv = g.inverse();
  // d_m g^kl = -g^ka (d_m g_ab) g^bl
  std::array<Mat4, 4> dginv;
  for (int m = 0; m < 4; ++m) dginv[m] = -c.ginv * dg[m] * c.ginv;
  // Gamma and d_m Gamma.
  std::array<std::array<Mat4, 4>, 4> dG;  // dG[m][k](i,j)
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        double s = 0.0;
        for (int l = 0; l < 4; ++l) s += c.ginv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
        c.christoffel[k](i, j) = 0.5 * s;
        for (int m = 0; m < 4; ++m) {
          double t = 0.0;
          for (int l = 0; l < 4; ++l)
            t += dginv[m](k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j)) +
                 c.ginv(k, l) * (ddg[m][i](j, l) + ddg[m][j](i, l) - ddg[m][l](i, j));
          dG[m][k](i, j) = 0.5 * t;
        }
      }
  for (int l = 0; l < 4; ++l)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) {
          double s = dG[i][l](j, k) - dG[j][l](i, k);
          for (int m = 0; m < 4; ++m)
            s += c.christoffel[l](i, m) * c.christoffel[m](j, k) - c.christoffel[l](j, m) * c.christoffel[m](i, k);
          c.riemann(l, i, j, k) = s;
        }
  return finish(c, orientation_sign);
}

Tensor4 riemann(const MetricField& g, const Vec4& p) { return curvature_at(g, 1, p).riemann; }

std::pair<Mat4, double> ricci(const MetricField& g, const Vec4& p) {
  const CurvatureAtPoint c = curvature_at(g, 1, p);
  return {c.ricci, c.scalar};
}

WeylSplit weyl_split(const MetricField& g, int orientation_sign, const Vec4& p) {
  const CurvatureAtPoint c = curvature_at(g, orientation_sign, p);
  return {c.weyl_plus, c.weyl_minus, c.weyl_plus_full.cwiseAbs().maxCoeff(),
          c.weyl_minus_full.cwiseAbs().maxCoeff()};
}

double metric_compatibility_residual(const MetricField& g, const Vec4& p) {
  const JetMat gj = g.at(p, 1);
  const Mat4 gv = real_values(gj);
  const Christoffel G = christoffel(g, p);
  double r = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) {
        double s = gj(j, k).partial(i).real();
        for (int m = 0; m < 4; ++m) s -= G[m](i, j) * gv(m, k) + G[m](i, k) * gv(j, m);
        r = std::max(r, std::abs(s));
      }
  return r;
}

double parallel_residual(const Christoffel& G, int c) {
  double r = 0.0;
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i) r = std::max(r, std::abs(G[k](i, c)));
  return r;
}

double contracted_bianchi_residual(const MetricField& g, const Vec4& p) {
  const JetMat gj = g.at(p, 3);
  const JetMat Ric = ricci_jets(gj);  // exact to order 1
  const Mat4 ginv = real_values(gj).inverse();
  const JetMat ginvj = inverse4(gj);
  const JetChristoffel C = christoffel_jets(gj);
  Jet s(0.0);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) s += ginvj(a, b) * Ric(a, b);
  double r = 0.0;
  for (int k = 0; k < 4; ++k) {
    double div = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        double nabla = Ric(j, k).partial(i).real();
        for (int m = 0; m < 4; ++m)
          nabla -= C.G[m](i, j).value().real() * Ric(m, k).value().real() +
                   C.G[m](i, k).value().real() * Ric(j, m).value().real();
        div += ginv(i, j) * nabla;
      }
    r = std::max(r, std::abs(div - 0.5 * s.partial(k).real()));
  }
  return r;
}

double riemann_symmetry_residual(const CurvatureAtPoint& c) {
  const Tensor4& R = c.riemann_lower;
  double r = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          r = std::max({r, std::abs(R(i, j, k, l) + R(j, i, k, l)), std::abs(R(i, j, k, l) + R(i, j, l, k)),
                        std::abs(R(i, j, k, l) - R(k, l, i, j)),
                        std::abs(R(i, j, k, l) + R(j, k, i, l) + R(k, i, j, l))});
        }
  return r;
}

double weyl_trace_residual(const CurvatureAtPoint& c) {
  return std::max(std::abs(c.weyl_plus.trace()), std::abs(c.weyl_minus.trace()));
}

CurvatureReport curvature_report(const MetricField& g, const OrientationFn& orientation,
                                 std::span<const Vec4> samples, const CurvatureTolerances& tol) {
  std::vector<double> R, Ric, s, Wm, Wp;
  for (const Vec4& p : samples) {
    const CurvatureAtPoint c = curvature_at(g, orientation(p), p);
    R.push_back(c.riemann_lower.max_abs());
    Ric.push_back(c.ricci.cwiseAbs().maxCoeff());
    s.push_back(c.scalar);
    Wm.push_back(c.weyl_minus_full.cwiseAbs().maxCoeff());
    Wp.push_back(c.weyl_plus_full.cwiseAbs().maxCoeff());
  }
  CurvatureReport out;
  out.report = VerificationReport("curvature");
  out.report.add("riemann", R, tol.riemann);
  out.report.add("ricci", Ric, tol.ricci);
  out.report.add("scalar", s, tol.scalar);
  out.report.add("weyl_minus", Wm, tol.weyl);
  out.report.add("weyl_plus", Wp, tol.weyl);
  out.flat = out.report.check("riemann").pass;
  out.ricci_flat = out.report.check("ricci").pass && out.report.check("scalar").pass;
  out.self_dual = out.report.check("weyl_minus").pass;
  return out;
}

}  // namespace phh
