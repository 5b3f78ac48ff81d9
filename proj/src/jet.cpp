#include "phh/jet.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace phh {
namespace {

struct MonomialTables {
  std::array<Jet::Exponents, Jet::kSize> exps{};
  std::array<int, 625> lookup{};  // base-5 encoding of exponents -> index
  std::array<int, Jet::kMaxOrder + 2> count{};
  // Products c[k] += a[i] * b[j], sorted by degree of k.
  struct Triple {
    int i, j, k;
  };
  std::vector<Triple> triples;
  std::array<std::size_t, Jet::kMaxOrder + 1> triples_end{};
  // shift[i][m]: index of monomial m + e_i, or -1 beyond kMaxOrder.
  std::array<std::array<int, Jet::kSize>, Jet::kVars> shift{};

  static int key(const Jet::Exponents& a) { return a[0] + 5 * a[1] + 25 * a[2] + 125 * a[3]; }
  static int degree(const Jet::Exponents& a) { return a[0] + a[1] + a[2] + a[3]; }

  MonomialTables() {
    lookup.fill(-1);
    int n = 0;
    for (int d = 0; d <= Jet::kMaxOrder; ++d) {
      for (int a0 = d; a0 >= 0; --a0)
        for (int a1 = d - a0; a1 >= 0; --a1)
          for (int a2 = d - a0 - a1; a2 >= 0; --a2) {
            const Jet::Exponents e{a0, a1, a2, d - a0 - a1 - a2};
            exps[n] = e;
            lookup[key(e)] = n;
            ++n;
          }
      count[d] = n;
    }
    count[Jet::kMaxOrder + 1] = n;

    for (int i = 0; i < Jet::kSize; ++i)
      for (int j = 0; j < Jet::kSize; ++j) {
        Jet::Exponents s{};
        for (int v = 0; v < Jet::kVars; ++v) s[v] = exps[i][v] + exps[j][v];
        if (degree(s) <= Jet::kMaxOrder) triples.push_back({i, j, lookup[key(s)]});
      }
    std::stable_sort(triples.begin(), triples.end(), [&](const Triple& x, const Triple& y) {
      return degree(exps[x.k]) < degree(exps[y.k]);
    });
    for (int d = 0; d <= Jet::kMaxOrder; ++d) {
      triples_end[d] = static_cast<std::size_t>(
          std::partition_point(triples.begin(), triples.end(),
                               [&](const Triple& t) { return degree(exps[t.k]) <= d; }) -
          triples.begin());
    }

    for (int v = 0; v < Jet::kVars; ++v)
      for (int m = 0; m < Jet::kSize; ++m) {
        Jet::Exponents e = exps[m];
        ++e[v];
        shift[v][m] = degree(e) <= Jet::kMaxOrder ? lookup[key(e)] : -1;
      }
  }
};

const MonomialTables& tables() {
  static const MonomialTables t;
  return t;
}

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

}  // namespace

int Jet::count(int order) { return tables().count[std::clamp(order, 0, kMaxOrder)]; }

const Jet::Exponents& Jet::exponents(int index) { return tables().exps[index]; }

int Jet::index_of(const Exponents& a) {
  for (int v : a)
    if (v < 0 || v > kMaxOrder) return -1;
  return tables().lookup[MonomialTables::key(a)];
}

Jet Jet::variable(int i, double value, int order) {
  Jet x(value);
  x.order_ = std::clamp(order, 0, kMaxOrder);
  if (x.order_ >= 1) {
    Exponents e{};
    e[i] = 1;
    x.c_[index_of(e)] = 1.0;
  }
  return x;
}

Complex Jet::partial(const Exponents& a) const {
  const int idx = index_of(a);
  if (idx < 0 || MonomialTables::degree(a) > order_)
    throw std::out_of_range("jet: derivative beyond tracked order");
  double scale = 1.0;
  for (int v : a) scale *= factorial(v);
  return c_[idx] * scale;
}

Complex Jet::partial(int i) const {
  Exponents a{};
  ++a[i];
  return partial(a);
}

Complex Jet::partial(int i, int j) const {
  Exponents a{};
  ++a[i];
  ++a[j];
  return partial(a);
}

Jet Jet::derivative(int i) const {
  if (order_ < 1) throw std::out_of_range("jet: cannot differentiate an order-0 jet");
  const auto& t = tables();
  Jet r;
  r.order_ = order_ - 1;
  const int n = count(r.order_);
  for (int m = 0; m < n; ++m) {
    const int up = t.shift[i][m];
    r.c_[m] = c_[up] * static_cast<double>(t.exps[m][i] + 1);
  }
  return r;
}

Jet Jet::truncated(int order) const {
  Jet r = *this;
  r.order_ = std::clamp(std::min(order, order_), 0, kMaxOrder);
  std::fill(r.c_.begin() + count(r.order_), r.c_.end(), Complex(0.0));
  return r;
}

Jet Jet::real() const {
  Jet r = *this;
  for (auto& c : r.c_) c = c.real();
  return r;
}

Jet Jet::imag() const {
  Jet r = *this;
  for (auto& c : r.c_) c = c.imag();
  return r;
}

Jet Jet::conj() const {
  Jet r = *this;
  for (auto& c : r.c_) c = std::conj(c);
  return r;
}

Jet& Jet::operator+=(const Jet& o) {
  order_ = std::min(order_, o.order_);
  const int n = count(order_);
  for (int m = 0; m < n; ++m) c_[m] += o.c_[m];
  std::fill(c_.begin() + n, c_.end(), Complex(0.0));
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  order_ = std::min(order_, o.order_);
  const int n = count(order_);
  for (int m = 0; m < n; ++m) c_[m] -= o.c_[m];
  std::fill(c_.begin() + n, c_.end(), Complex(0.0));
  return *this;
}

Jet& Jet::operator*=(Complex s) {
  const int n = count(order_);
  for (int m = 0; m < n; ++m) c_[m] *= s;
  return *this;
}

Jet& Jet::operator*=(const Jet& o) { return *this = *this * o; }
Jet& Jet::operator/=(const Jet& o) { return *this = *this / o; }

Jet Jet::operator-() const {
  Jet r = *this;
  const int n = count(order_);
  for (int m = 0; m < n; ++m) r.c_[m] = -r.c_[m];
  return r;
}

namespace {

bool is_constant(const std::array<Complex, Jet::kSize>& c, int n) {
  for (int m = 1; m < n; ++m)
    if (c[m] != Complex(0.0)) return false;
  return true;
}

// Plain complex product; std::complex's operator* takes a slow path for
// infinities that never occur here.
inline void fma_into(Complex& r, const Complex& x, const Complex& y) {
  r = {r.real() + x.real() * y.real() - x.imag() * y.imag(), r.imag() + x.real() * y.imag() + x.imag() * y.real()};
}

}  // namespace

Jet operator*(const Jet& a, const Jet& b) {
  const auto& t = tables();
  Jet r;
  r.order_ = std::min(a.order_, b.order_);
  const int n = Jet::count(r.order_);
  if (is_constant(a.c_, n) || is_constant(b.c_, n)) {
    const bool a_const = is_constant(a.c_, n);
    const Complex s = a_const ? a.c_[0] : b.c_[0];
    const auto& o = a_const ? b.c_ : a.c_;
    for (int m = 0; m < n; ++m) fma_into(r.c_[m], o[m], s);
    return r;
  }
  const std::size_t end = t.triples_end[r.order_];
  for (std::size_t k = 0; k < end; ++k) {
    const auto& tr = t.triples[k];
    fma_into(r.c_[tr.k], a.c_[tr.i], b.c_[tr.j]);
  }
  return r;
}

Jet Jet::compose(const Jet& x, const std::array<Complex, kMaxOrder + 1>& d) {
  Jet h = x;
  h.c_[0] = 0.0;
  const int n = x.order_;
  Jet r(d[n] / factorial(n));
  for (int k = n - 1; k >= 0; --k) {
    r = r * h;
    r.c_[0] += d[k] / factorial(k);
  }
  r.order_ = n;
  return r;
}

namespace {

bool nonpositive_real(Complex v) {
  return std::abs(v.imag()) <= 1e-14 * std::abs(v) && v.real() <= 0.0;
}

}  // namespace

Jet reciprocal(const Jet& x) {
  const Complex a = x.value();
  if (a == Complex(0.0)) throw DomainError("division by zero");
  std::array<Complex, Jet::kMaxOrder + 1> d{};
  Complex p = 1.0 / a;
  double sign = 1.0;
  for (int k = 0; k <= Jet::kMaxOrder; ++k) {
    d[k] = sign * factorial(k) * p;
    p /= a;
    sign = -sign;
  }
  return Jet::compose(x, d);
}

Jet sin(const Jet& x) {
  const Complex s = std::sin(x.value()), c = std::cos(x.value());
  return Jet::compose(x, {s, c, -s, -c, s});
}

Jet cos(const Jet& x) {
  const Complex s = std::sin(x.value()), c = std::cos(x.value());
  return Jet::compose(x, {c, -s, -c, s, c});
}

Jet exp(const Jet& x) {
  const Complex e = std::exp(x.value());
  return Jet::compose(x, {e, e, e, e, e});
}

Jet log(const Jet& x) {
  const Complex a = x.value();
  if (a == Complex(0.0) || nonpositive_real(a)) throw DomainError("logarithm of a non-positive number");
  const Complex r = 1.0 / a;
  return Jet::compose(x, {std::log(a), r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r});
}

Jet sqrt(const Jet& x) {
  const Complex a = x.value();
  if (a == Complex(0.0) || nonpositive_real(a)) throw DomainError("square root of a non-positive number");
  const Complex s = std::sqrt(a);
  const Complex s3 = s * s * s;
  const Complex s5 = s3 * s * s;
  const Complex s7 = s5 * s * s;
  return Jet::compose(x, {s, 0.5 / s, -0.25 / s3, 0.375 / s5, -0.9375 / s7});
}

Jet pow(const Jet& x, int n) {
  if (n < 0) return reciprocal(pow(x, -n));
  Jet result(1.0);
  Jet base = x;
  bool first = true;
  while (n > 0) {
    if (n & 1) {
      result = first ? base : result * base;
      first = false;
    }
    n >>= 1;
    if (n > 0) base = base * base;
  }
  if (first) return Jet(1.0);
  return result;
}

Eigen::Vector4cd values(const JetVec& v) {
  Eigen::Vector4cd r;
  for (int i = 0; i < 4; ++i) r(i) = v(i).value();
  return r;
}

Eigen::Matrix4cd values(const JetMat& m) {
  Eigen::Matrix4cd r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r(i, j) = m(i, j).value();
  return r;
}

Mat4 real_values(const JetMat& m) { return values(m).real(); }

JetMat derivative(const JetMat& m, int i) {
  JetMat r;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) r(a, b) = m(a, b).derivative(i);
  return r;
}

JetVec derivative(const JetVec& v, int i) {
  JetVec r;
  for (int a = 0; a < 4; ++a) r(a) = v(a).derivative(i);
  return r;
}

namespace {

template <typename Scalar>
Scalar det3(const Eigen::Matrix<Scalar, 4, 4>& m, int skip_row, int skip_col) {
  int rows[3], cols[3];
  for (int i = 0, r = 0, c = 0; i < 4; ++i) {
    if (i != skip_row) rows[r++] = i;
    if (i != skip_col) cols[c++] = i;
  }
  auto e = [&](int i, int j) -> const Scalar& { return m(rows[i], cols[j]); };
  return e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1)) -
         e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0)) +
         e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0));
}

}  // namespace

template <typename Scalar>
Scalar determinant4(const Eigen::Matrix<Scalar, 4, 4>& m) {
  Scalar det(0.0);
  for (int j = 0; j < 4; ++j) {
    const Scalar term = m(0, j) * det3(m, 0, j);
    det = (j % 2 == 0) ? det + term : det - term;
  }
  return det;
}

template <typename Scalar>
Eigen::Matrix<Scalar, 4, 4> inverse4(const Eigen::Matrix<Scalar, 4, 4>& m) {
  Eigen::Matrix<Scalar, 4, 4> cof;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const Scalar minor = det3(m, i, j);
      cof(i, j) = ((i + j) % 2 == 0) ? minor : Scalar(-minor);
    }
  Scalar det(0.0);
  for (int j = 0; j < 4; ++j) det = det + m(0, j) * cof(0, j);
  const Scalar inv_det = Scalar(1.0) / det;
  Eigen::Matrix<Scalar, 4, 4> r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r(i, j) = cof(j, i) * inv_det;
  return r;
}

template double determinant4<double>(const Mat4&);
template Jet determinant4<Jet>(const JetMat&);
template Mat4 inverse4<double>(const Mat4&);
template JetMat inverse4<Jet>(const JetMat&);

}  // namespace phh
