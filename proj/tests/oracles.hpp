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

// Independent reference implementations used only by the tests.

#include <cstddef>
#include <random>

#include <Eigen/Dense>

#include "jtrotter/linalg.hpp"

namespace jtrotter::testing {

using EMat = Eigen::MatrixXcd;

inline EMat to_eigen(const ComplexMatrix& a) {
  EMat m(a.dim(), a.dim());
  for (std::size_t r = 0; r < a.dim(); ++r)
    for (std::size_t c = 0; c < a.dim(); ++c) m(r, c) = a(r, c);
  return m;
}

inline ComplexMatrix from_eigen(const EMat& m) {
  ComplexMatrix a(static_cast<std::size_t>(m.rows()));
  for (std::size_t r = 0; r < a.dim(); ++r)
    for (std::size_t c = 0; c < a.dim(); ++c) a(r, c) = m(r, c);
  return a;
}

/// exp(s·H) for Hermitian H and complex s, by diagonalization.
inline ComplexMatrix hermitian_exp(const ComplexMatrix& h, Complex s) {
  Eigen::SelfAdjointEigenSolver<EMat> es(to_eigen(h));
  const auto& v = es.eigenvectors();
  EMat vd = v;
  for (Eigen::Index i = 0; i < vd.cols(); ++i) vd.col(i) *= std::exp(s * es.eigenvalues()(i));
  return from_eigen(vd.lazyProduct(v.adjoint()));
}

/// Largest singular value via Eigen's SVD.
inline double operator_norm(const ComplexMatrix& a) {
  Eigen::JacobiSVD<EMat> svd(to_eigen(a));
  return svd.singularValues()(0);
}

/// sqrt of the largest eigenvalue of A*A via a dense Hermitian eigensolver.
inline double gram_norm(const ComplexMatrix& a) {
  const EMat m = to_eigen(a);
  Eigen::SelfAdjointEigenSolver<EMat> es(m.adjoint().lazyProduct(m));
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

inline ComplexMatrix naive_mul(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) {
      Complex s = 0.0;
      for (std::size_t k = 0; k < a.dim(); ++k) s += a(i, k) * b(k, j);
      out(i, j) = s;
    }
  return out;
}

inline ComplexMatrix random_matrix(std::size_t dim, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  ComplexMatrix a(dim);
  for (auto& e : a.entries()) e = Complex(n(rng), n(rng));
  return a;
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i)
    m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
  return m;
}

}  // namespace jtrotter::testing
