#pragma once

#include <span>
#include <stdexcept>

#include "phh/curvature.hpp"
#include "phh/expr.hpp"
#include "phh/structures.hpp"

namespace phh {

/// Walker metric data over (x, y, z, t).
struct WalkerData {
  Expression a, b, c;
};

/// PC family building blocks, functions of (z, t) only.
struct PCFamily {
  Expression K, P, T, xi, eta, gamma;
};

class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Rows (0,0,1,0), (0,0,0,1), (1,0,a,c), (0,1,c,b).
MetricField walker_metric(const WalkerData& d);

/// Frame e1..e4 as columns, in (x, y, z, t) components:
///   e1 = ((1-a)/2, 0, 1, 0), e2 = (-c, (1-b)/2, 0, 1),
///   e3 = (-(1+a)/2, 0, 1, 0), e4 = (-c, -(1+b)/2, 0, 1).
MatrixField walker_frame(const WalkerData& d);
/// max |g(e_a, e_b) - diag(1, 1, -1, -1)| at p.
double walker_frame_residual(const WalkerData& d, const Vec4& p);

/// The structure with J_k e = canonical action on the frame.
AlmostPHStructure proper_structure(const WalkerData& d);

/// a = x^2 K + x P + xi, b = y^2 K + y T + eta, c = x y K + x T / 2 + y P / 2 + gamma.
WalkerData pc_family(const PCFamily& f);

/// Shape residuals certifying the PC form at the samples.
VerificationReport pc_form_check(const WalkerData& d, std::span<const Vec4> samples, double tol = 1e-9);

struct HKTolerances {
  double derivative = 1e-9;
  double closed = 1e-9;
  double parallel = 1e-8;
  CurvatureTolerances curvature;
};

/// x/y-independence of a, b, c, closedness of the fundamental forms,
/// parallel null fields d/dx, d/dy, and Ricci and W- of the metric.
VerificationReport hk_check(const WalkerData& d, std::span<const Vec4> samples, const HKTolerances& tol = {});

}  // namespace phh
