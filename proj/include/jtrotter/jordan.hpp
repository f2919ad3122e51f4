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

// Special Jordan algebra over ComplexMatrix: A∘B = (AB + BA) / 2.

#include "jtrotter/linalg.hpp"

namespace jtrotter {

/// A matrix read with Jordan-algebra semantics; no extra data.
using JordanElement = ComplexMatrix;

/// A∘B = (AB + BA) / 2. Bit-identical under argument swap.
inline JordanElement jordan_product(const JordanElement& a, const JordanElement& b) {
  a.check_same_dim(b, "jordan_product");
  return (mat_mul(a, b) + mat_mul(b, a)) * Complex(0.5);
}

/// {A,B,C} = (A∘B)∘C + (B∘C)∘A − (C∘A)∘B, built from Jordan products only.
/// In the special realization this equals (ABC + CBA) / 2.
inline JordanElement triple_product(const JordanElement& a, const JordanElement& b,
                                    const JordanElement& c) {
  a.check_same_dim(b, "triple_product");
  a.check_same_dim(c, "triple_product");
  return jordan_product(jordan_product(a, b), c) + jordan_product(jordan_product(b, c), a) -
         jordan_product(jordan_product(c, a), b);
}

/// U_{A,C}(B) = {A,B,C}.
inline JordanElement u_op(const JordanElement& a, const JordanElement& c, const JordanElement& b) {
  return triple_product(a, b, c);
}

/// U_A(B) = {A,B,A}.
inline JordanElement u_op(const JordanElement& a, const JordanElement& b) {
  return triple_product(a, b, a);
}

/// M_A(B) = A∘B.
inline JordanElement m_op(const JordanElement& a, const JordanElement& b) {
  return jordan_product(a, b);
}

/// A^k. Powers of a single element are unambiguous in a power-associative
/// algebra, so this uses binary exponentiation with the associative product.
inline JordanElement jordan_power(const JordanElement& a, unsigned k) {
  auto result = JordanElement::identity(a.dim());
  auto base = a;
  while (k > 0) {
    if (k & 1U) result = mat_mul(result, base);
    k >>= 1U;
    if (k > 0) base = mat_mul(base, base);
  }
  return result;
}

}  // namespace jtrotter
