// Copyright 2026 The slcq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Small dense complex linear algebra: just enough for d <= ~16 state vectors
// and operators, a Hermitian eigen-solver and exact unitary exponentials.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace slcq {

using Complex = std::complex<double>;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kUnitaryTol = 1e-10;
inline constexpr double kNormTol = 1e-10;

class ComplexVector {
 public:
  ComplexVector() = default;
  explicit ComplexVector(std::size_t n) : data_(n, Complex{0.0, 0.0}) {}
  ComplexVector(std::initializer_list<Complex> init) : data_(init) {}
  explicit ComplexVector(std::vector<Complex> values) : data_(std::move(values)) {}

  static ComplexVector basis(std::size_t n, std::size_t k) {
    ComplexVector v(n);
    v[k] = 1.0;
    return v;
  }

  std::size_t size() const noexcept { return data_.size(); }
  Complex& operator[](std::size_t i) { return data_[i]; }
  const Complex& operator[](std::size_t i) const { return data_[i]; }

  std::span<const Complex> entries() const noexcept { return data_; }
  auto begin() const noexcept { return data_.begin(); }
  auto end() const noexcept { return data_.end(); }

  double norm() const {
    double s = 0.0;
    for (const auto& z : data_) s += std::norm(z);
    return std::sqrt(s);
  }

  bool is_normalized(double tol = kNormTol) const { return std::abs(norm() - 1.0) <= tol; }

  ComplexVector normalized() const {
    const double n = norm();
    if (n == 0.0) throw std::invalid_argument("cannot normalize a zero vector");
    ComplexVector out(*this);
    for (auto& z : out.data_) z /= n;
    return out;
  }

  ComplexVector& operator+=(const ComplexVector& o) {
    require_same(o);
    for (std::size_t i = 0; i < size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  ComplexVector& operator-=(const ComplexVector& o) {
    require_same(o);
    for (std::size_t i = 0; i < size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  ComplexVector& operator*=(Complex s) {
    for (auto& z : data_) z *= s;
    return *this;
  }

  friend ComplexVector operator+(ComplexVector a, const ComplexVector& b) { return a += b; }
  friend ComplexVector operator-(ComplexVector a, const ComplexVector& b) { return a -= b; }
  friend ComplexVector operator*(Complex s, ComplexVector a) { return a *= s; }

  bool operator==(const ComplexVector&) const = default;

 private:
  void require_same(const ComplexVector& o) const {
    if (o.size() != size()) throw std::invalid_argument("vector dimension mismatch");
  }

  std::vector<Complex> data_;
};

/// Row-major square complex matrix.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t n) : n_(n), data_(n * n, Complex{0.0, 0.0}) {}
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) : n_(rows.size()) {
    data_.reserve(n_ * n_);
    for (const auto& r : rows) {
      if (r.size() != n_) throw std::invalid_argument("matrix rows must form a square");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix diagonal(std::span<const double> d) {
    ComplexMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t dim() const noexcept { return n_; }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * n_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * n_ + c]; }

  ComplexMatrix adjoint() const {
    ComplexMatrix out(n_);
    for (std::size_t r = 0; r < n_; ++r)
      for (std::size_t c = 0; c < n_; ++c) out(c, r) = std::conj((*this)(r, c));
    return out;
  }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    require_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    require_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  ComplexMatrix& operator*=(Complex s) {
    for (auto& z : data_) z *= s;
    return *this;
  }

  /// this += s * o, without a temporary.
  void add_scaled(const ComplexMatrix& o, Complex s) {
    require_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += s * o.data_[i];
  }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    a.require_same(b);
    const std::size_t n = a.n_;
    ComplexMatrix out(n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t k = 0; k < n; ++k) {
        const Complex ark = a(r, k);
        if (ark == Complex{}) continue;
        for (std::size_t c = 0; c < n; ++c) out(r, c) += ark * b(k, c);
      }
    return out;
  }

  friend ComplexVector operator*(const ComplexMatrix& a, const ComplexVector& v) {
    if (v.size() != a.n_) throw std::invalid_argument("matrix-vector dimension mismatch");
    ComplexVector out(a.n_);
    for (std::size_t r = 0; r < a.n_; ++r) {
      Complex s{};
      for (std::size_t c = 0; c < a.n_; ++c) s += a(r, c) * v[c];
      out[r] = s;
    }
    return out;
  }

  /// A^dagger * v.
  ComplexVector adjoint_times(const ComplexVector& v) const {
    if (v.size() != n_) throw std::invalid_argument("matrix-vector dimension mismatch");
    ComplexVector out(n_);
    for (std::size_t r = 0; r < n_; ++r) {
      const Complex vr = v[r];
      for (std::size_t c = 0; c < n_; ++c) out[c] += std::conj((*this)(r, c)) * vr;
    }
    return out;
  }

  bool operator==(const ComplexMatrix&) const = default;

  double max_abs() const {
    double m = 0.0;
    for (const auto& z : data_) m = std::max(m, std::abs(z));
    return m;
  }

  /// max_ij |A_ij - A*_ji|
  double hermitian_defect() const {
    double m = 0.0;
    for (std::size_t r = 0; r < n_; ++r)
      for (std::size_t c = r; c < n_; ++c)
        m = std::max(m, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
    return m;
  }

  /// max_ij |(A^dagger A - I)_ij|
  double unitary_defect() const {
    double m = 0.0;
    for (std::size_t r = 0; r < n_; ++r)
      for (std::size_t c = 0; c < n_; ++c) {
        Complex s{};
        for (std::size_t k = 0; k < n_; ++k) s += std::conj((*this)(k, r)) * (*this)(k, c);
        if (r == c) s -= 1.0;
        m = std::max(m, std::abs(s));
      }
    return m;
  }

  bool is_hermitian(double tol = kHermitianTol) const { return hermitian_defect() <= tol; }
  bool is_unitary(double tol = kUnitaryTol) const { return unitary_defect() <= tol; }

 private:
  void require_same(const ComplexMatrix& o) const {
    if (o.n_ != n_) throw std::invalid_argument("matrix dimension mismatch");
  }

  std::size_t n_ = 0;
  std::vector<Complex> data_;
};

/// <a|b>, conjugate-linear in a.
inline Complex inner_product(const ComplexVector& a, const ComplexVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("inner_product: dimension mismatch");
  Complex s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).max_abs(); }

/// H = V diag(values) V^dagger, values ascending, V unitary.
struct HermitianEigen {
  std::vector<double> values;
  ComplexMatrix vectors;

  ComplexMatrix reconstruct() const {
    const std::size_t n = values.size();
    ComplexMatrix out(n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) {
        Complex s{};
        for (std::size_t k = 0; k < n; ++k) s += vectors(r, k) * values[k] * std::conj(vectors(c, k));
        out(r, c) = s;
      }
    return out;
  }
};

/// Cyclic complex Jacobi. Each rotation zeroes one off-diagonal pair; sweeps
/// repeat until the off-diagonal mass is at round-off level.
inline HermitianEigen eig_hermitian(const ComplexMatrix& h) {
  const std::size_t n = h.dim();
  const double defect = h.hermitian_defect();
  if (defect > kHermitianTol * std::max(1.0, h.max_abs()))
    throw std::invalid_argument("eig_hermitian: matrix is not Hermitian (defect " + std::to_string(defect) + ")");

  ComplexMatrix a = h;
  for (std::size_t i = 0; i < n; ++i) a(i, i) = a(i, i).real();
  ComplexMatrix v = ComplexMatrix::identity(n);

  auto off_norm2 = [&] {
    double s = 0.0;
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = r + 1; c < n; ++c) s += std::norm(a(r, c));
    return s;
  };
  double scale2 = 0.0;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) scale2 += std::norm(a(r, c));
  const double stop2 = scale2 * 1e-34;

  for (int sweep = 0; sweep < 64 && off_norm2() > stop2; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double r = std::abs(apq);
        if (r == 0.0) continue;
        const Complex phase = apq / r;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = 0.5 * std::atan2(2.0 * r, aqq - app);
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        // G = I except G_pp = c, G_pq = s*phase, G_qp = -s*conj(phase), G_qq = c.
        const Complex gpq = s * phase;
        const Complex gqp = -s * std::conj(phase);
        for (std::size_t k = 0; k < n; ++k) {  // a <- a G
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = akp * c + akq * gqp;
          a(k, q) = akp * gpq + akq * c;
        }
        for (std::size_t k = 0; k < n; ++k) {  // a <- G^dagger a
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = c * apk + std::conj(gqp) * aqk;
          a(q, k) = std::conj(gpq) * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {  // v <- v G
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = vkp * c + vkq * gqp;
          v(k, q) = vkp * gpq + vkq * c;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  HermitianEigen out{std::vector<double>(n), ComplexMatrix(n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
  }
  return out;
}

/// V diag(exp(-i tau lambda)) V^dagger for a precomputed eigensystem.
inline ComplexMatrix expm_unitary(const HermitianEigen& e, double tau) {
  const std::size_t n = e.values.size();
  std::vector<Complex> phases(n);
  for (std::size_t k = 0; k < n; ++k) phases[k] = std::polar(1.0, -tau * e.values[k]);
  ComplexMatrix out(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      Complex s{};
      for (std::size_t k = 0; k < n; ++k) s += e.vectors(r, k) * phases[k] * std::conj(e.vectors(c, k));
      out(r, c) = s;
    }
  return out;
}

/// exp(-i tau H) for Hermitian H.
inline ComplexMatrix expm_unitary(const ComplexMatrix& h, double tau) { return expm_unitary(eig_hermitian(h), tau); }

}  // namespace slcq
