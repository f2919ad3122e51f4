// Copyright 2026 The jtrotter Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "jtrotter/error.hpp"

namespace jtrotter {

using Complex = std::complex<double>;

enum class NormKind { Frobenius, Operator2 };

inline const char* to_string(NormKind kind) {
  return kind == NormKind::Frobenius ? "frobenius" : "operator";
}

/// Dense square complex matrix, row-major.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;

  /// Zero matrix of the given dimension.
  explicit ComplexMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim) {
    if (dim == 0) throw UsageError("ComplexMatrix: dimension must be positive");
  }

  ComplexMatrix(std::size_t dim, std::vector<Complex> entries)
      : dim_(dim), entries_(std::move(entries)) {
    if (dim == 0) throw UsageError("ComplexMatrix: dimension must be positive");
    if (entries_.size() != dim * dim) {
      throw UsageError("ComplexMatrix: expected " + std::to_string(dim * dim) +
                       " entries, got " + std::to_string(entries_.size()));
    }
    require_finite("ComplexMatrix");
  }

  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
      : dim_(rows.size()) {
    if (dim_ == 0) throw UsageError("ComplexMatrix: dimension must be positive");
    entries_.reserve(dim_ * dim_);
    for (const auto& row : rows) {
      if (row.size() != dim_) throw UsageError("ComplexMatrix: rows must form a square");
      entries_.insert(entries_.end(), row.begin(), row.end());
    }
    require_finite("ComplexMatrix");
  }

  static ComplexMatrix identity(std::size_t dim) {
    ComplexMatrix out(dim);
    for (std::size_t i = 0; i < dim; ++i) out(i, i) = 1.0;
    return out;
  }

  std::size_t dim() const { return dim_; }
  bool empty() const { return dim_ == 0; }

  Complex& operator()(std::size_t r, std::size_t c) { return entries_[r * dim_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const {
    return entries_[r * dim_ + c];
  }

  std::span<const Complex> entries() const { return entries_; }
  std::span<Complex> entries() { return entries_; }

  bool all_finite() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const Complex& z) {
      return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
  }

  void require_finite(const char* where) const {
    if (!all_finite()) throw UsageError(std::string(where) + ": non-finite entries");
  }

  ComplexMatrix adjoint() const {
    ComplexMatrix out(dim_);
    for (std::size_t r = 0; r < dim_; ++r)
      for (std::size_t c = 0; c < dim_; ++c) out(c, r) = std::conj((*this)(r, c));
    return out;
  }

  Complex trace() const {
    Complex sum = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) sum += (*this)(i, i);
    return sum;
  }

  ComplexMatrix& operator+=(const ComplexMatrix& other) {
    check_same_dim(other, "mat_add");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
    return *this;
  }

  ComplexMatrix& operator-=(const ComplexMatrix& other) {
    check_same_dim(other, "mat_sub");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
    return *this;
  }

  ComplexMatrix& operator*=(Complex s) {
    for (auto& e : entries_) e *= s;
    return *this;
  }

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

  void check_same_dim(const ComplexMatrix& other, const char* where) const {
    if (dim_ != other.dim_) {
      throw UsageError(std::string(where) + ": dimension mismatch (" + std::to_string(dim_) +
                       " vs " + std::to_string(other.dim_) + ")");
    }
  }

 private:
  std::size_t dim_ = 0;
  std::vector<Complex> entries_;
};

inline ComplexMatrix mat_add(ComplexMatrix a, const ComplexMatrix& b) {
  a += b;
  return a;
}

inline ComplexMatrix mat_mul(const ComplexMatrix& a, const ComplexMatrix& b) {
  a.check_same_dim(b, "mat_mul");
  const std::size_t n = a.dim();
  ComplexMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

inline ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
inline ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
inline ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
inline ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  return mat_mul(a, b);
}

/// Matrix-vector product.
inline std::vector<Complex> mat_vec(const ComplexMatrix& a, std::span<const Complex> v) {
  if (v.size() != a.dim()) throw UsageError("apply: vector length does not match dimension");
  std::vector<Complex> out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) out[i] += a(i, j) * v[j];
  return out;
}

namespace detail {

inline double one_norm(const ComplexMatrix& a) {
  double best = 0.0;
  for (std::size_t c = 0; c < a.dim(); ++c) {
    double col = 0.0;
    for (std::size_t r = 0; r < a.dim(); ++r) col += std::abs(a(r, c));
    best = std::max(best, col);
  }
  return best;
}

// Solves lhs * X = rhs by LU with partial pivoting.
inline ComplexMatrix lu_solve(ComplexMatrix lhs, ComplexMatrix rhs) {
  const std::size_t n = lhs.dim();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(lhs(r, col)) > std::abs(lhs(pivot, col))) pivot = r;
    if (lhs(pivot, col) == Complex{}) throw UsageError("lu_solve: singular matrix");
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) {
        std::swap(lhs(col, c), lhs(pivot, c));
        std::swap(rhs(col, c), rhs(pivot, c));
      }
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const Complex f = lhs(r, col) / lhs(col, col);
      if (f == Complex{}) continue;
      for (std::size_t c = col; c < n; ++c) lhs(r, c) -= f * lhs(col, c);
      for (std::size_t c = 0; c < n; ++c) rhs(r, c) -= f * rhs(col, c);
    }
  }
  for (std::size_t col = n; col-- > 0;) {
    for (std::size_t c = 0; c < n; ++c) {
      Complex acc = rhs(col, c);
      for (std::size_t k = col + 1; k < n; ++k) acc -= lhs(col, k) * rhs(k, c);
      rhs(col, c) = acc / lhs(col, col);
    }
  }
  return rhs;
}

inline double vector_norm(std::span<const Complex> v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

// Largest eigenvalue of a Hermitian positive semidefinite matrix by cyclic
// complex Jacobi rotations; accurate to roundoff for any spectral gap.
inline double dominant_psd_eigenvalue(ComplexMatrix g) {
  const std::size_t n = g.dim();
  double scale = 0.0;
  for (const auto& z : g.entries()) scale += std::norm(z);
  if (scale == 0.0) return 0.0;
  constexpr int kMaxSweeps = 64;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(g(p, q));
    if (off <= 1e-34 * scale) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double b = std::abs(g(p, q));
        if (b == 0.0) continue;
        // J = diag(1, e^{-iφ}) R with R the real rotation for [[a, b], [b, d]].
        const Complex phase = std::conj(g(p, q)) / b;
        const double theta = (g(q, q).real() - g(p, p).real()) / (2.0 * b);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::hypot(theta, 1.0));
        const double c = 1.0 / std::hypot(t, 1.0);
        const double sn = t * c;
        const Complex jpp = c, jpq = sn, jqp = -sn * phase, jqq = c * phase;
        for (std::size_t k = 0; k < n; ++k) {
          const Complex gkp = g(k, p), gkq = g(k, q);
          g(k, p) = gkp * jpp + gkq * jqp;
          g(k, q) = gkp * jpq + gkq * jqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex gpk = g(p, k), gqk = g(q, k);
          g(p, k) = std::conj(jpp) * gpk + std::conj(jqp) * gqk;
          g(q, k) = std::conj(jpq) * gpk + std::conj(jqq) * gqk;
        }
        g(p, q) = g(q, p) = 0.0;
        g(p, p) = g(p, p).real();
        g(q, q) = g(q, q).real();
      }
    }
  }
  double lambda = 0.0;
  for (std::size_t i = 0; i < n; ++i) lambda = std::max(lambda, g(i, i).real());
  return lambda;
}

}  // namespace detail

/// Frobenius norm or operator 2-norm (largest singular value).
inline double norm(const ComplexMatrix& a, NormKind kind) {
  if (kind == NormKind::Frobenius) {
    double s = 0.0;
    for (const auto& z : a.entries()) s += std::norm(z);
    return std::sqrt(s);
  }
  return std::sqrt(detail::dominant_psd_eigenvalue(mat_mul(a.adjoint(), a)));
}

inline constexpr double kDefaultHermitianTol = 1e-12;

inline bool is_hermitian(const ComplexMatrix& a, double tol = kDefaultHermitianTol) {
  for (std::size_t r = 0; r < a.dim(); ++r)
    for (std::size_t c = r; c < a.dim(); ++c)
      if (std::abs(a(r, c) - std::conj(a(c, r))) > tol) return false;
  return true;
}

/// Matrix exponential: scaling and squaring around the degree-13 diagonal
/// Padé approximant (Higham 2005 coefficients and threshold).
inline ComplexMatrix mat_exp(const ComplexMatrix& a) {
  if (a.empty()) throw UsageError("mat_exp: empty matrix");
  a.require_finite("mat_exp");
  constexpr std::array<double, 14> b = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
      1187353796428800.0,  129060195264000.0,   10559470521600.0,
      670442572800.0,      33522128640.0,       1323241920.0,
      40840800.0,          960960.0,            16380.0,
      182.0,               1.0};
  constexpr double kTheta13 = 5.371920351148152;

  const std::size_t n = a.dim();
  const double a1 = detail::one_norm(a);
  int squarings = 0;
  if (a1 > kTheta13) squarings = static_cast<int>(std::ceil(std::log2(a1 / kTheta13)));
  const ComplexMatrix as = a * Complex(std::ldexp(1.0, -squarings));

  const auto id = ComplexMatrix::identity(n);
  const auto a2 = mat_mul(as, as);
  const auto a4 = mat_mul(a2, a2);
  const auto a6 = mat_mul(a4, a2);

  auto u_inner = mat_mul(a6, a6 * Complex(b[13]) + a4 * Complex(b[11]) + a2 * Complex(b[9])) +
                 a6 * Complex(b[7]) + a4 * Complex(b[5]) + a2 * Complex(b[3]) + id * Complex(b[1]);
  const auto u = mat_mul(as, u_inner);
  const auto v = mat_mul(a6, a6 * Complex(b[12]) + a4 * Complex(b[10]) + a2 * Complex(b[8])) +
                 a6 * Complex(b[6]) + a4 * Complex(b[4]) + a2 * Complex(b[2]) + id * Complex(b[0]);

  auto r = detail::lu_solve(v - u, v + u);
  for (int i = 0; i < squarings; ++i) r = mat_mul(r, r);
  r.require_finite("mat_exp result");
  return r;
}

namespace pauli {

inline ComplexMatrix x() { return {{0.0, 1.0}, {1.0, 0.0}}; }
inline ComplexMatrix y() { return {{0.0, Complex(0.0, -1.0)}, {Complex(0.0, 1.0), 0.0}}; }
inline ComplexMatrix z() { return {{1.0, 0.0}, {0.0, -1.0}}; }

}  // namespace pauli

}  // namespace jtrotter
