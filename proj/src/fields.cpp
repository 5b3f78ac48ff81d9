#include "phh/fields.hpp"

#include <algorithm>
#include <stdexcept>

#include <Eigen/LU>

namespace phh {

Seed Seed::at(const Vec4& p, int order) {
  Seed s;
  s.point = p;
  s.order = order;
  for (int i = 0; i < 4; ++i) s.x[i] = Jet::variable(i, p(i), order);
  return s;
}

int seed_order(int order, int depth) {
  const int n = order + depth;
  if (n > Jet::kMaxOrder)
    throw std::out_of_range("field evaluation needs " + std::to_string(n) + " derivative orders (max " +
                            std::to_string(Jet::kMaxOrder) + ")");
  return n;
}

ScalarField::ScalarField(Complex c) : depth_(0), fn_([c](const Seed&) { return Jet(c); }) {}

ScalarField ScalarField::coordinate(int i) {
  return ScalarField(0, [i](const Seed& s) { return s.x[i]; });
}

ScalarField ScalarField::from_expression(Expression e) {
  return ScalarField(0, [e = std::move(e)](const Seed& s) { return e.evaluate(s.x); });
}

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  return ScalarField(std::max(a.depth_, b.depth_), [a, b](const Seed& s) { return a(s) + b(s); });
}
ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  return ScalarField(std::max(a.depth_, b.depth_), [a, b](const Seed& s) { return a(s) - b(s); });
}
ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  return ScalarField(std::max(a.depth_, b.depth_), [a, b](const Seed& s) { return a(s) * b(s); });
}
ScalarField operator/(const ScalarField& a, const ScalarField& b) {
  return ScalarField(std::max(a.depth_, b.depth_), [a, b](const Seed& s) { return a(s) / b(s); });
}
ScalarField ScalarField::operator-() const {
  return ScalarField(depth_, [f = *this](const Seed& s) { return -f(s); });
}

VectorFieldOnChart::VectorFieldOnChart(const Eigen::Vector4cd& constant)
    : depth_(0), fn_([constant](const Seed&) {
        JetVec v;
        for (int i = 0; i < 4; ++i) v(i) = Jet(constant(i));
        return v;
      }) {}

VectorFieldOnChart VectorFieldOnChart::from_components(const std::array<ScalarField, 4>& c) {
  int depth = 0;
  for (const auto& f : c) depth = std::max(depth, f.depth());
  return VectorFieldOnChart(depth, [c](const Seed& s) {
    JetVec v;
    for (int i = 0; i < 4; ++i) v(i) = c[i](s);
    return v;
  });
}

VectorFieldOnChart VectorFieldOnChart::coordinate(int i) {
  return VectorFieldOnChart(Eigen::Vector4cd::Unit(i));
}

VectorFieldOnChart operator*(const ScalarField& f, const VectorFieldOnChart& X) {
  return VectorFieldOnChart(std::max(f.depth(), X.depth_), [f, X](const Seed& s) {
    const Jet a = f(s);
    JetVec v = X(s);
    for (int i = 0; i < 4; ++i) v(i) = a * v(i);
    return v;
  });
}

VectorFieldOnChart operator+(const VectorFieldOnChart& a, const VectorFieldOnChart& b) {
  return VectorFieldOnChart(std::max(a.depth_, b.depth_), [a, b](const Seed& s) {
    JetVec v = a(s);
    const JetVec w = b(s);
    for (int i = 0; i < 4; ++i) v(i) += w(i);
    return v;
  });
}

MatrixField::MatrixField(const Mat4& constant) : MatrixField(Eigen::Matrix4cd(constant.cast<Complex>())) {}

MatrixField::MatrixField(const Eigen::Matrix4cd& constant)
    : depth_(0), fn_([constant](const Seed&) {
        JetMat m;
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j) m(i, j) = Jet(constant(i, j));
        return m;
      }) {}

MatrixField MatrixField::from_entries(const std::array<std::array<ScalarField, 4>, 4>& e) {
  int depth = 0;
  for (const auto& row : e)
    for (const auto& f : row) depth = std::max(depth, f.depth());
  return MatrixField(depth, [e](const Seed& s) {
    JetMat m;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) m(i, j) = e[i][j](s);
    return m;
  });
}

MatrixField operator*(const MatrixField& a, const MatrixField& b) {
  return MatrixField(std::max(a.depth_, b.depth_), [a, b](const Seed& s) -> JetMat { return a(s) * b(s); });
}

VectorFieldOnChart operator*(const MatrixField& J, const VectorFieldOnChart& X) {
  return VectorFieldOnChart(std::max(J.depth_, X.depth()), [J, X](const Seed& s) -> JetVec { return J(s) * X(s); });
}

Vec4 map_point(const ChartMap& f, const Vec4& p) {
  const auto y = f(Seed::at(p, 0).x);
  Vec4 q;
  for (int i = 0; i < 4; ++i) q(i) = y[i].value().real();
  return q;
}

Mat4 map_jacobian(const ChartMap& f, const Vec4& p) {
  const auto y = f(Seed::at(p, 1).x);
  Mat4 D;
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 4; ++i) D(j, i) = y[j].partial(i).real();
  return D;
}

Eigen::Matrix4cd pullback_endomorphism_at(const EndomorphismField& J, const ChartMap& f, const Vec4& p) {
  const Mat4 D = map_jacobian(f, p);
  const Eigen::Matrix4cd Jq = values(J.at(map_point(f, p)));
  return D.inverse().cast<Complex>() * Jq * D.cast<Complex>();
}

Eigen::Matrix4cd pullback_metric_at(const MetricField& g, const ChartMap& f, const Vec4& p) {
  const Mat4 D = map_jacobian(f, p);
  const Eigen::Matrix4cd gq = values(g.at(map_point(f, p)));
  return D.transpose().cast<Complex>() * gq * D.cast<Complex>();
}

}  // namespace phh
