#pragma once

#include <array>
#include <functional>

#include "phh/expr.hpp"
#include "phh/jet.hpp"

namespace phh {

/// Identity jets of the chart coordinates at a point. Fields are always
/// evaluated on seeds, so a jet's derivative index i is d/dx_i of the chart.
struct Seed {
  Vec4 point = Vec4::Zero();
  int order = 0;
  std::array<Jet, 4> x;

  static Seed at(const Vec4& p, int order);
};

/// Seed order needed to obtain `order` exact derivatives from a field that
/// itself consumes `depth` orders.
int seed_order(int order, int depth);

/// Complex-valued function on the chart. `depth` is the number of derivative
/// orders the field consumes internally (e.g. 2 for a Hessian coefficient).
class ScalarField {
 public:
  using Fn = std::function<Jet(const Seed&)>;

  ScalarField() : ScalarField(Complex(0.0)) {}
  ScalarField(Complex c);  // NOLINT(google-explicit-constructor)
  ScalarField(double c) : ScalarField(Complex(c)) {}  // NOLINT(google-explicit-constructor)
  ScalarField(int depth, Fn fn) : depth_(depth), fn_(std::move(fn)) {}

  static ScalarField coordinate(int i);
  static ScalarField from_expression(Expression e);

  Jet operator()(const Seed& s) const { return fn_(s); }
  Jet at(const Vec4& p, int order = 0) const { return fn_(Seed::at(p, seed_order(order, depth_))); }
  int depth() const { return depth_; }

  friend ScalarField operator+(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator-(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator*(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator/(const ScalarField& a, const ScalarField& b);
  ScalarField operator-() const;

 private:
  int depth_ = 0;
  Fn fn_;
};

/// Complex vector field on the chart.
class VectorFieldOnChart {
 public:
  using Fn = std::function<JetVec(const Seed&)>;

  VectorFieldOnChart() : VectorFieldOnChart(Eigen::Vector4cd(Eigen::Vector4cd::Zero())) {}
  explicit VectorFieldOnChart(const Eigen::Vector4cd& constant);
  VectorFieldOnChart(int depth, Fn fn) : depth_(depth), fn_(std::move(fn)) {}
  static VectorFieldOnChart from_components(const std::array<ScalarField, 4>& c);
  /// Coordinate field d/dx_i.
  static VectorFieldOnChart coordinate(int i);

  JetVec operator()(const Seed& s) const { return fn_(s); }
  JetVec at(const Vec4& p, int order = 0) const { return fn_(Seed::at(p, seed_order(order, depth_))); }
  int depth() const { return depth_; }

  /// f X
  friend VectorFieldOnChart operator*(const ScalarField& f, const VectorFieldOnChart& X);
  friend VectorFieldOnChart operator+(const VectorFieldOnChart& a, const VectorFieldOnChart& b);

 private:
  int depth_ = 0;
  Fn fn_;
};

/// Field of 4x4 matrices: a (1,1)-tensor (endomorphism, columns are images of
/// the coordinate fields) or a (0,2)-tensor such as a metric.
class MatrixField {
 public:
  using Fn = std::function<JetMat(const Seed&)>;

  MatrixField() : MatrixField(Mat4(Mat4::Zero())) {}
  explicit MatrixField(const Mat4& constant);
  explicit MatrixField(const Eigen::Matrix4cd& constant);
  MatrixField(int depth, Fn fn) : depth_(depth), fn_(std::move(fn)) {}
  static MatrixField from_entries(const std::array<std::array<ScalarField, 4>, 4>& e);

  JetMat operator()(const Seed& s) const { return fn_(s); }
  JetMat at(const Vec4& p, int order = 0) const { return fn_(Seed::at(p, seed_order(order, depth_))); }
  Mat4 real_at(const Vec4& p) const { return real_values(at(p)); }
  int depth() const { return depth_; }

  /// Pointwise product (composition of endomorphisms).
  friend MatrixField operator*(const MatrixField& a, const MatrixField& b);
  friend VectorFieldOnChart operator*(const MatrixField& J, const VectorFieldOnChart& X);

 private:
  int depth_ = 0;
  Fn fn_;
};

using EndomorphismField = MatrixField;
using MetricField = MatrixField;

/// Smooth map between charts, acting on coordinate jets so that its
/// derivative follows from a seed.
using ChartMap = std::function<std::array<Jet, 4>(const std::array<Jet, 4>&)>;

/// Value and Jacobian of a chart map at p.
Vec4 map_point(const ChartMap& f, const Vec4& p);
Mat4 map_jacobian(const ChartMap& f, const Vec4& p);

/// (f^* J)(p) = Df^{-1} J(f(p)) Df.
Eigen::Matrix4cd pullback_endomorphism_at(const EndomorphismField& J, const ChartMap& f, const Vec4& p);
/// (f^* g)(p) = Df^T g(f(p)) Df.
Eigen::Matrix4cd pullback_metric_at(const MetricField& g, const ChartMap& f, const Vec4& p);

}  // namespace phh
