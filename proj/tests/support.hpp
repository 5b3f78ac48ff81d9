#pragma once

// Independent reference computations for the unit tests. Nothing here calls
// into the library's numerics.

#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using LD = long double;
using P4 = std::array<LD, 4>;
using Fn = std::function<LD(const P4&)>;
using MatL = Eigen::Matrix<LD, 4, 4>;
using MetricFn = std::function<MatL(const P4&)>;

// Split quaternions as real 2x2 matrices: 1 -> I, j1 -> [[0,-1],[1,0]],
// j2 -> diag(1,-1), j3 = j1 j2.
inline Eigen::Matrix2d sq_matrix(double r, double i, double s, double t) {
  Eigen::Matrix2d J1, J2, J3;
  J1 << 0, -1, 1, 0;
  J2 << 1, 0, 0, -1;
  J3 = J1 * J2;
  return r * Eigen::Matrix2d::Identity() + i * J1 + s * J2 + t * J3;
}

// Coefficients back from a 2x2 matrix in that basis.
inline std::array<double, 4> sq_coeffs(const Eigen::Matrix2d& m) {
  return {(m(0, 0) + m(1, 1)) / 2, (m(1, 0) - m(0, 1)) / 2, (m(0, 0) - m(1, 1)) / 2, (m(0, 1) + m(1, 0)) / 2};
}

inline P4 shifted(P4 p, int i, LD h) {
  p[i] += h;
  return p;
}

inline LD d1(const Fn& f, const P4& p, int i, LD h) {
  return (f(shifted(p, i, h)) - f(shifted(p, i, -h))) / (2 * h);
}

inline LD d2(const Fn& f, const P4& p, int i, int j, LD h) {
  if (i == j) return (f(shifted(p, i, h)) - 2 * f(p) + f(shifted(p, i, -h))) / (h * h);
  const P4 pp = shifted(shifted(p, i, h), j, h), pm = shifted(shifted(p, i, h), j, -h);
  const P4 mp = shifted(shifted(p, i, -h), j, h), mm = shifted(shifted(p, i, -h), j, -h);
  return (f(pp) - f(pm) - f(mp) + f(mm)) / (4 * h * h);
}

// Curvature of a metric from central differences of its entries:
// Gamma^k_ij, R^l_ijk = d_i Gamma^l_jk - d_j Gamma^l_ik + Gamma^l_im Gamma^m_jk - Gamma^l_jm Gamma^m_ik,
// Ric_jk = R^i_ijk.
struct Curvature {
  std::array<MatL, 4> gamma;              // gamma[k](i, j)
  std::array<std::array<MatL, 4>, 4> R;   // R[l][i](j, k)
  MatL ricci;
  LD scalar = 0;
};

inline Curvature fd_curvature(const MetricFn& g, const P4& p, LD h) {
  const MatL g0 = g(p);
  const MatL gi = g0.inverse();
  std::array<MatL, 4> dg;
  std::array<std::array<MatL, 4>, 4> ddg;
  for (int a = 0; a < 4; ++a) {
    dg[a] = (g(shifted(p, a, h)) - g(shifted(p, a, -h))) / (2 * h);
    for (int b = 0; b < 4; ++b) {
      if (a == b) {
        ddg[a][b] = (g(shifted(p, a, h)) - 2 * g0 + g(shifted(p, a, -h))) / (h * h);
      } else {
        ddg[a][b] = (g(shifted(shifted(p, a, h), b, h)) - g(shifted(shifted(p, a, h), b, -h)) -
                     g(shifted(shifted(p, a, -h), b, h)) + g(shifted(shifted(p, a, -h), b, -h))) /
                    (4 * h * h);
      }
    }
  }
  // Lowered Christoffel symbols and their derivatives.
  auto low = [&](int l, int i, int j) { return (dg[i](j, l) + dg[j](i, l) - dg[l](i, j)) / 2; };
  auto dlow = [&](int m, int l, int i, int j) { return (ddg[m][i](j, l) + ddg[m][j](i, l) - ddg[m][l](i, j)) / 2; };
  Curvature c;
  for (int k = 0; k < 4; ++k) {
    c.gamma[k].setZero();
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int l = 0; l < 4; ++l) c.gamma[k](i, j) += gi(k, l) * low(l, i, j);
  }
  // d_m Gamma^k_ij = d_m(g^kl) low_lij + g^kl d_m low_lij, d_m g^-1 = -g^-1 (d_m g) g^-1.
  std::array<std::array<MatL, 4>, 4> dgamma;  // dgamma[m][k](i, j)
  for (int m = 0; m < 4; ++m) {
    const MatL dgi = -gi * dg[m] * gi;
    for (int k = 0; k < 4; ++k) {
      dgamma[m][k].setZero();
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          for (int l = 0; l < 4; ++l) dgamma[m][k](i, j) += dgi(k, l) * low(l, i, j) + gi(k, l) * dlow(m, l, i, j);
    }
  }
  for (int l = 0; l < 4; ++l)
    for (int i = 0; i < 4; ++i) {
      c.R[l][i].setZero();
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) {
          LD v = dgamma[i][l](j, k) - dgamma[j][l](i, k);
          for (int m = 0; m < 4; ++m) v += c.gamma[l](i, m) * c.gamma[m](j, k) - c.gamma[l](j, m) * c.gamma[m](i, k);
          c.R[l][i](j, k) = v;
        }
    }
  c.ricci.setZero();
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k)
      for (int i = 0; i < 4; ++i) c.ricci(j, k) += c.R[i][i](j, k);
  c.scalar = (gi.cwiseProduct(c.ricci)).sum();
  return c;
}

// A random expression in the chart variables together with an independent
// long double evaluator. Every subexpression stays in the domain of its
// functions on [-1, 1]^4.
struct RandomExpr {
  std::string text;
  Fn f;
};

inline std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "(%.17g)", v);
  return buf;
}

inline RandomExpr random_expr(std::mt19937_64& rng, int depth) {
  static const char* names[4] = {"x", "y", "z", "t"};
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  if (depth == 0 || rng() % 4 == 0) {
    if (rng() % 3 == 0) {
      const double c = u(rng);
      return {num(c), [c](const P4&) { return static_cast<LD>(c); }};
    }
    const int v = static_cast<int>(rng() % 4);
    return {names[v], [v](const P4& p) { return p[v]; }};
  }
  const RandomExpr a = random_expr(rng, depth - 1);
  switch (rng() % 9) {
    case 0: {
      const RandomExpr b = random_expr(rng, depth - 1);
      return {"(" + a.text + " + " + b.text + ")", [fa = a.f, fb = b.f](const P4& p) { return fa(p) + fb(p); }};
    }
    case 1: {
      const RandomExpr b = random_expr(rng, depth - 1);
      return {"(" + a.text + " - " + b.text + ")", [fa = a.f, fb = b.f](const P4& p) { return fa(p) - fb(p); }};
    }
    case 2: {
      const RandomExpr b = random_expr(rng, depth - 1);
      return {"(" + a.text + " * " + b.text + ")", [fa = a.f, fb = b.f](const P4& p) { return fa(p) * fb(p); }};
    }
    case 3: {
      const RandomExpr b = random_expr(rng, depth - 1);
      return {"(" + a.text + " / (2 + sin(" + b.text + ")))",
              [fa = a.f, fb = b.f](const P4& p) { return fa(p) / (2 + std::sin(fb(p))); }};
    }
    case 4:
      return {"sin(" + a.text + ")", [fa = a.f](const P4& p) { return std::sin(fa(p)); }};
    case 5:
      return {"cos(" + a.text + ")", [fa = a.f](const P4& p) { return std::cos(fa(p)); }};
    case 6:
      return {"exp(sin(" + a.text + "))", [fa = a.f](const P4& p) { return std::exp(std::sin(fa(p))); }};
    case 7:
      return {"ln(2 + cos(" + a.text + "))", [fa = a.f](const P4& p) { return std::log(2 + std::cos(fa(p))); }};
    default:
      return {"sqrt(1 + (" + a.text + ")^2)", [fa = a.f](const P4& p) { return std::sqrt(1 + fa(p) * fa(p)); }};
  }
}

// A random smooth neutral metric: diag(1, 1, -1, -1) plus small trigonometric
// perturbations, as expression strings and as a long double function.
struct RandomMetric {
  std::array<std::array<std::string, 4>, 4> text;
  MetricFn g;
};

inline RandomMetric random_metric(std::mt19937_64& rng, double amplitude = 0.15) {
  static const char* names[4] = {"x", "y", "z", "t"};
  std::uniform_real_distribution<double> amp(-amplitude, amplitude), k(-1.2, 1.2), ph(-1.0, 1.0);
  struct Entry {
    double base, a, phase;
    std::array<double, 4> k;
  };
  std::array<std::array<Entry, 4>, 4> E{};
  RandomMetric m;
  const double diag[4] = {1, 1, -1, -1};
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) {
      Entry e{i == j ? diag[i] : 0.0, amp(rng), ph(rng), {k(rng), k(rng), k(rng), k(rng)}};
      E[i][j] = E[j][i] = e;
      std::string arg = num(e.phase);
      for (int v = 0; v < 4; ++v) arg += " + " + num(e.k[v]) + "*" + names[v];
      m.text[i][j] = m.text[j][i] = num(e.base) + " + " + num(e.a) + "*sin(" + arg + ")";
    }
  m.g = [E](const P4& p) {
    MatL g;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        const Entry& e = E[i][j];
        LD arg = e.phase;
        for (int v = 0; v < 4; ++v) arg += e.k[v] * p[v];
        g(i, j) = e.base + e.a * std::sin(arg);
      }
    return g;
  };
  return m;
}

inline std::vector<P4> random_points(std::mt19937_64& rng, int n, LD lo = -1, LD hi = 1) {
  std::uniform_real_distribution<double> u(static_cast<double>(lo), static_cast<double>(hi));
  std::vector<P4> out(n);
  for (auto& p : out) p = {u(rng), u(rng), u(rng), u(rng)};
  return out;
}

}  // namespace oracle
