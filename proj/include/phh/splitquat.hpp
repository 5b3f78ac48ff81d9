#pragma once

#include <array>
#include <stdexcept>

#include <Eigen/Core>

#include "phh/jet.hpp"
#include "phh/report.hpp"

namespace phh {

/// Split quaternion r + i j1 + s j2 + t j3 with j1^2 = -1, j2^2 = j3^2 = +1
/// and j1 j2 = -j2 j1 = j3.
template <typename Scalar>
struct SplitQuaternion {
  Scalar r{0}, i{0}, s{0}, t{0};

  static SplitQuaternion one() { return {Scalar(1), Scalar(0), Scalar(0), Scalar(0)}; }
  static SplitQuaternion j1() { return {Scalar(0), Scalar(1), Scalar(0), Scalar(0)}; }
  static SplitQuaternion j2() { return {Scalar(0), Scalar(0), Scalar(1), Scalar(0)}; }
  static SplitQuaternion j3() { return {Scalar(0), Scalar(0), Scalar(0), Scalar(1)}; }

  SplitQuaternion conjugate() const { return {r, -i, -s, -t}; }
  /// q * conj(q) = r^2 + i^2 - s^2 - t^2 (the split norm, indefinite).
  Scalar norm2() const { return r * r + i * i - s * s - t * t; }

  friend SplitQuaternion operator+(const SplitQuaternion& p, const SplitQuaternion& q) {
    return {p.r + q.r, p.i + q.i, p.s + q.s, p.t + q.t};
  }
  friend SplitQuaternion operator-(const SplitQuaternion& p, const SplitQuaternion& q) {
    return {p.r - q.r, p.i - q.i, p.s - q.s, p.t - q.t};
  }
  friend SplitQuaternion operator*(const SplitQuaternion& p, const SplitQuaternion& q) {
    return sq_mul(p, q);
  }
};

/// Product of split quaternions.
template <typename Scalar>
SplitQuaternion<Scalar> sq_mul(const SplitQuaternion<Scalar>& p, const SplitQuaternion<Scalar>& q) {
  // j2 j3 = -j1, j3 j2 = j1, j3 j1 = j2, j1 j3 = -j2.
  return {p.r * q.r - p.i * q.i + p.s * q.s + p.t * q.t,
          p.r * q.i + p.i * q.r - p.s * q.t + p.t * q.s,
          p.r * q.s + p.s * q.r - p.i * q.t + p.t * q.i,
          p.r * q.t + p.t * q.r + p.i * q.s - p.s * q.i};
}

using SplitQuaterniond = SplitQuaternion<double>;

/// Linear (J1, J2, J3) on R^4 as 4x4 matrices; column k is the image of e_k.
struct ParaHypercomplexTriple {
  Mat4 J1 = Mat4::Zero();
  Mat4 J2 = Mat4::Zero();
  Mat4 J3 = Mat4::Zero();

  const Mat4& operator[](int k) const { return k == 0 ? J1 : (k == 1 ? J2 : J3); }
  /// P T P^{-1}
  ParaHypercomplexTriple conjugated(const Mat4& P) const;
};

/// Symmetric bilinear form on R^4. Degenerate forms are legal values; `rank`
/// records the numerical rank (eigenvalues above 1e-10 of the largest).
struct BilinearForm4 {
  Mat4 entries = Mat4::Zero();
  int rank = 0;

  BilinearForm4() = default;
  explicit BilinearForm4(const Mat4& m);

  double operator()(const Vec4& x, const Vec4& y) const { return x.dot(entries * y); }
  bool degenerate() const { return rank < 4; }
  /// Number of positive and negative eigenvalues.
  std::pair<int, int> signature() const;
};

/// The skew form h on V+ with h(u1, u2) = coefficient, extended by zero on V-.
struct PlusForm {
  double coefficient = 0.0;
  Vec4 u1 = Vec4::Zero();
  Vec4 u2 = Vec4::Zero();
};

struct QuaternionicFrame {
  Mat4 frame;                 // columns w, J1 w, J2 w, J3 w
  double transition_det = 0;  // det of the change of basis to a g-orthonormal frame
  double norm4 = 0;           // g(w, w)^2
};

class AlgebraError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class DegenerateFormError : public AlgebraError {
 public:
  using AlgebraError::AlgebraError;
};
class IsotropicVectorError : public AlgebraError {
 public:
  using AlgebraError::AlgebraError;
};
class CompatibilityError : public AlgebraError {
 public:
  using AlgebraError::AlgebraError;
};

/// J1 e1 = e2, J1 e3 = e4, J2 e1 = e3, J2 e2 = -e4, J3 e1 = e4, J3 e2 = e3,
/// completed by the algebra relations.
ParaHypercomplexTriple canonical_triple();

/// Max-entry residuals of J1^2 + I, J2^2 - I, J3^2 - I, J1 J2 + J2 J1, J1 J2 - J3.
VerificationReport verify_triple(const ParaHypercomplexTriple& T, double tol = 1e-12);
double triple_residual(const ParaHypercomplexTriple& T);

/// Basis of the (sign)-eigenspace of J2, taken from the columns of I + sign J2
/// in pivot order.
std::array<Vec4, 2> eigenbasis(const ParaHypercomplexTriple& T, int sign);

/// The plus-form on the canonical V+ basis returned by eigenbasis(T, +1).
PlusForm make_plus_form(const ParaHypercomplexTriple& T, double coefficient);

/// Skew 4x4 matrix H with h(X, Y) = X^T H Y for the zero-extended plus-form.
Mat4 plus_form_matrix(const ParaHypercomplexTriple& T, const PlusForm& h);

/// Compatible metric g(X, Y) = 2 (h(X, J1 Y) + h(Y, J1 X)), normalised so that
/// h(A, B) = g(J1 A, B) / 2 on V+.
BilinearForm4 metric_from_plus_form(const ParaHypercomplexTriple& T, const PlusForm& h);

/// h(A, B) = g(J1 A, B) / 2 restricted to V+, as the coefficient on the V+
/// basis of `h` (the inverse of metric_from_plus_form).
double plus_coefficient_from_metric(const ParaHypercomplexTriple& T, const BilinearForm4& g,
                                    const std::array<Vec4, 2>& plus_basis);

/// g(X,Y) + g(J1X,J1Y) - g(J2X,J2Y) - g(J3X,J3Y). May be degenerate.
BilinearForm4 averaged_form(const BilinearForm4& g, const ParaHypercomplexTriple& T);

/// Largest entry of the compatibility residuals for a unit-normalised form.
double compatibility_residual(const Mat4& g, const ParaHypercomplexTriple& T);
bool is_compatible(const Mat4& g, const ParaHypercomplexTriple& T, double tol = 1e-10);

/// lambda = g(w, w) / h(w, w), verified to satisfy g = lambda h entrywise.
double conformal_factor(const BilinearForm4& g, const BilinearForm4& h, const ParaHypercomplexTriple& T,
                        const Vec4& w);

QuaternionicFrame quaternionic_frame(const BilinearForm4& g, const ParaHypercomplexTriple& T,
                                     const Vec4& w);

}  // namespace phh
