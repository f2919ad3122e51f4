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
#include <concepts>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "jtrotter/error.hpp"
#include "jtrotter/jordan.hpp"
#include "jtrotter/linalg.hpp"

namespace jtrotter {

/// Ordered decomposition A_1 ... A_m of a generator, with cached operator
/// norms and Hermiticity flags.
class TermList {
 public:
  explicit TermList(std::vector<ComplexMatrix> terms) : terms_(std::move(terms)) {
    if (terms_.empty()) throw UsageError("TermList: at least one term required");
    for (const auto& t : terms_) {
      if (t.empty()) throw UsageError("TermList: empty matrix");
      t.check_same_dim(terms_.front(), "TermList");
      norms_.push_back(norm(t, NormKind::Operator2));
      hermitian_.push_back(is_hermitian(t));
    }
  }

  TermList(std::initializer_list<ComplexMatrix> terms)
      : TermList(std::vector<ComplexMatrix>(terms)) {}

  std::size_t size() const { return terms_.size(); }
  std::size_t dim() const { return terms_.front().dim(); }
  const ComplexMatrix& operator[](std::size_t k) const { return terms_[k]; }
  std::span<const ComplexMatrix> terms() const { return terms_; }

  /// Operator 2-norms, one per term.
  std::span<const double> norms() const { return norms_; }
  bool hermitian(std::size_t k) const { return hermitian_[k]; }
  bool all_hermitian() const {
    return std::all_of(hermitian_.begin(), hermitian_.end(), [](bool h) { return h; });
  }

  ComplexMatrix sum() const {
    auto s = terms_.front();
    for (std::size_t k = 1; k < terms_.size(); ++k) s += terms_[k];
    return s;
  }

 private:
  std::vector<ComplexMatrix> terms_;
  std::vector<double> norms_;
  std::vector<bool> hermitian_;
};

enum class FormulaKind { GExact, J1Assoc, J2, S2, QS2, Q3, S3Suzuki, NonSymRec, SymRec };

/// Whether recursive constructors enforce their order conditions.
enum class CoefficientCheck { kEnforce, kSkip };

/// Claimed order of the exact evolution.
inline constexpr int kExactOrder = std::numeric_limits<int>::max();

namespace detail {

template <class Scalar>
bool negligible(const Scalar& x) {
  if constexpr (std::is_floating_point_v<Scalar>) {
    return std::abs(x) <= 1e-12;
  } else {
    return x == Scalar(0);
  }
}

template <class Scalar>
Scalar ipow(const Scalar& x, int n) {
  Scalar r(1);
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

}  // namespace detail

/// Immutable description of a product-formula approximant. Coefficients are
/// `double` for numeric evaluation or exact rationals for the symbolic engine.
template <class Scalar>
class BasicFormulaSpec {
 public:
  using Ptr = std::shared_ptr<const BasicFormulaSpec>;

  struct Stage {
    Scalar coefficient;
    Ptr child;
  };

  static BasicFormulaSpec exact() { return {FormulaKind::GExact, kExactOrder}; }
  static BasicFormulaSpec j1() { return {FormulaKind::J1Assoc, 1}; }
  static BasicFormulaSpec j2() { return {FormulaKind::J2, 2}; }
  static BasicFormulaSpec s2() { return {FormulaKind::S2, 2}; }
  static BasicFormulaSpec qs2() { return {FormulaKind::QS2, 2}; }

  /// Q3 = (2/3) S2 + (2/3) S2~ − (1/3) J2 for two terms.
  static BasicFormulaSpec q3() {
    return q3_weighted(Scalar(2) / Scalar(3), Scalar(2) / Scalar(3), Scalar(-1) / Scalar(3));
  }

  /// Q3 with arbitrary weights; only the default weights give order 3.
  static BasicFormulaSpec q3_weighted(Scalar s2, Scalar s2_swapped, Scalar j2) {
    BasicFormulaSpec spec{FormulaKind::Q3, 3};
    spec.weights_ = {std::move(s2), std::move(s2_swapped), std::move(j2)};
    return spec;
  }

  /// Fourth-order Suzuki composition S2(u z) S2(v z) S2(u z) with
  /// u = 1/(2 − 2^{1/3}), v = −2^{1/3} u, as an associative matrix product.
  static BasicFormulaSpec s3()
    requires std::floating_point<Scalar>
  {
    const Scalar cbrt2 = std::cbrt(Scalar(2));
    const Scalar u = Scalar(1) / (Scalar(2) - cbrt2);
    const Scalar v = -cbrt2 * u;
    auto child = std::make_shared<const BasicFormulaSpec>(s2());
    BasicFormulaSpec spec{FormulaKind::S3Suzuki, 4};
    spec.stages_ = {{u, child}, {v, child}, {u, child}};
    return spec;
  }

  /// Left-nested Jordan composition [(Q(c1 z)∘Q(c2 z))∘…]∘Q(cr z) targeting
  /// order n. Enforced conditions: Σc = 1, Σc^n = 0, every child of order ≥ n−1.
  static BasicFormulaSpec nonsymmetric(std::vector<Stage> stages, int n,
                                       CoefficientCheck check = CoefficientCheck::kEnforce) {
    if (stages.empty()) throw UsageError("nonsymmetric: at least one stage required");
    for (const auto& s : stages)
      if (!s.child) throw UsageError("nonsymmetric: null child");
    if (check == CoefficientCheck::kEnforce) {
      Scalar sum(0), power_sum(0);
      for (const auto& s : stages) {
        sum += s.coefficient;
        power_sum += detail::ipow(s.coefficient, n);
        if (s.child->order() < n - 1) {
          throw UsageError("nonsymmetric: child order " + std::to_string(s.child->order()) +
                           " is below n-1 = " + std::to_string(n - 1));
        }
      }
      if (!detail::negligible(Scalar(sum - Scalar(1))) || !detail::negligible(power_sum)) {
        throw UsageError("nonsymmetric: coefficients violate sum c = 1, sum c^" +
                         std::to_string(n) + " = 0");
      }
    }
    BasicFormulaSpec spec{FormulaKind::NonSymRec, n};
    spec.construction_order_ = n;
    spec.stages_ = std::move(stages);
    return spec;
  }

  /// Nested triple-product sandwich {Q(dl z)…{Q(d2 z) Q(d1 z) Q(d2 z)}…Q(dl z)}
  /// targeting order n. Enforced: d1 + 2Σd = 1, d1^n + 2Σd^n = 0, child order
  /// ≥ n−1. Odd n gains one order, so the claimed order is n+1 then.
  static BasicFormulaSpec symmetric(std::vector<Scalar> d, Ptr child, int n,
                                    CoefficientCheck check = CoefficientCheck::kEnforce) {
    if (d.empty()) throw UsageError("symmetric: at least one coefficient required");
    if (!child) throw UsageError("symmetric: null child");
    if (check == CoefficientCheck::kEnforce) {
      Scalar sum = d.front(), power_sum = detail::ipow(d.front(), n);
      for (std::size_t j = 1; j < d.size(); ++j) {
        sum += Scalar(2) * d[j];
        power_sum += Scalar(2) * detail::ipow(d[j], n);
      }
      if (child->order() < n - 1) {
        throw UsageError("symmetric: child order " + std::to_string(child->order()) +
                         " is below n-1 = " + std::to_string(n - 1));
      }
      if (!detail::negligible(Scalar(sum - Scalar(1))) || !detail::negligible(power_sum)) {
        throw UsageError("symmetric: coefficients violate d1 + 2 sum d = 1, d1^" +
                         std::to_string(n) + " + 2 sum d^" + std::to_string(n) + " = 0");
      }
    }
    BasicFormulaSpec spec{FormulaKind::SymRec, n % 2 == 1 ? n + 1 : n};
    spec.construction_order_ = n;
    for (auto& dj : d) spec.stages_.push_back({std::move(dj), child});
    return spec;
  }

  FormulaKind kind() const { return kind_; }
  /// Claimed approximation order.
  int order() const { return order_; }
  /// The n of the order conditions for recursive kinds, 0 otherwise.
  int construction_order() const { return construction_order_; }
  std::span<const Stage> stages() const { return stages_; }
  /// Q3 combination weights (S2, swapped S2, J2); empty for other kinds.
  std::span<const Scalar> weights() const { return weights_; }

  /// J1 and S3 are plain associative matrix products, not Jordan compositions.
  bool associative() const {
    return kind_ == FormulaKind::J1Assoc || kind_ == FormulaKind::S3Suzuki;
  }

  std::string name() const {
    switch (kind_) {
      case FormulaKind::GExact: return "exact";
      case FormulaKind::J1Assoc: return "j1";
      case FormulaKind::J2: return "j2";
      case FormulaKind::S2: return "s2";
      case FormulaKind::QS2: return "qs2";
      case FormulaKind::Q3: return "q3";
      case FormulaKind::S3Suzuki: return "s3";
      case FormulaKind::NonSymRec:
        return "nonsym[n=" + std::to_string(construction_order_) + ",r=" +
               std::to_string(stages_.size()) + "](" + stages_.front().child->name() + ")";
      case FormulaKind::SymRec:
        return "sym[n=" + std::to_string(construction_order_) + ",l=" +
               std::to_string(stages_.size()) + "](" + stages_.front().child->name() + ")";
    }
    return "?";
  }

  /// Same tree with every coefficient mapped through `f`; order conditions
  /// are not re-checked.
  template <class To, class F>
  BasicFormulaSpec<To> map_coefficients(F&& f) const {
    BasicFormulaSpec<To> out(kind_, order_);
    out.construction_order_ = construction_order_;
    for (const auto& w : weights_) out.weights_.push_back(f(w));
    // Shared children stay shared after mapping.
    std::vector<std::pair<const BasicFormulaSpec*, typename BasicFormulaSpec<To>::Ptr>> seen;
    for (const auto& s : stages_) {
      typename BasicFormulaSpec<To>::Ptr mapped;
      for (const auto& [orig, m] : seen)
        if (orig == s.child.get()) mapped = m;
      if (!mapped) {
        mapped = std::make_shared<const BasicFormulaSpec<To>>(
            s.child->template map_coefficients<To>(f));
        seen.emplace_back(s.child.get(), mapped);
      }
      out.stages_.push_back({f(s.coefficient), mapped});
    }
    return out;
  }

 private:
  template <class>
  friend class BasicFormulaSpec;

  BasicFormulaSpec(FormulaKind kind, int order) : kind_(kind), order_(order) {}

  FormulaKind kind_;
  int order_;
  int construction_order_ = 0;
  std::vector<Stage> stages_;
  std::vector<Scalar> weights_;
};

using FormulaSpec = BasicFormulaSpec<double>;
using FormulaStage = FormulaSpec::Stage;

// ---------------------------------------------------------------------------
// Direct constructors. Every one approximates G(z) = exp(z ΣA_k).

inline ComplexMatrix eval_g(Complex z, const TermList& terms) {
  return mat_exp(terms.sum() * z);
}

/// J2(z) = M_{exp(zA_m)} ⋯ M_{exp(zA_2)}(exp(zA_1)): innermost exp(zA_1).
inline ComplexMatrix eval_j2(Complex z, const TermList& terms) {
  auto acc = mat_exp(terms[0] * z);
  for (std::size_t k = 1; k < terms.size(); ++k) acc = m_op(mat_exp(terms[k] * z), acc);
  return acc;
}

/// S2(z) = U_{exp(zA_m/2)} ⋯ U_{exp(zA_2/2)}(exp(zA_1)).
inline ComplexMatrix eval_s2(Complex z, const TermList& terms) {
  auto acc = mat_exp(terms[0] * z);
  for (std::size_t k = 1; k < terms.size(); ++k) acc = u_op(mat_exp(terms[k] * (z * 0.5)), acc);
  return acc;
}

/// Q_{S2}(z) = U_{e^{zA_2p}, e^{zA_2p+1}} ⋯ U_{e^{zA_2}, e^{zA_3}}(e^{zA_1}); m must be odd.
inline ComplexMatrix eval_qs2(Complex z, const TermList& terms) {
  if (terms.size() % 2 == 0) {
    throw UsageError("eval_qs2: needs an odd number of terms, got " + std::to_string(terms.size()));
  }
  auto acc = mat_exp(terms[0] * z);
  for (std::size_t k = 1; k + 1 < terms.size(); k += 2)
    acc = u_op(mat_exp(terms[k] * z), mat_exp(terms[k + 1] * z), acc);
  return acc;
}

/// Associative product exp(zA_1) exp(zA_2) ⋯ exp(zA_m).
inline ComplexMatrix eval_j1_product(Complex z, const TermList& terms) {
  auto acc = mat_exp(terms[0] * z);
  for (std::size_t k = 1; k < terms.size(); ++k) acc = mat_mul(acc, mat_exp(terms[k] * z));
  return acc;
}

inline ComplexMatrix eval_q3_weighted(Complex z, const ComplexMatrix& a, const ComplexMatrix& b,
                                      double w_s2, double w_s2_swapped, double w_j2) {
  a.check_same_dim(b, "eval_q3");
  const auto ea = mat_exp(a * z);
  const auto eb = mat_exp(b * z);
  const auto s2 = u_op(mat_exp(a * (z * 0.5)), eb);          // U_{exp(zA/2)}(exp(zB))
  const auto s2_swapped = u_op(mat_exp(b * (z * 0.5)), ea);  // U_{exp(zB/2)}(exp(zA))
  const auto j2 = jordan_product(ea, eb);
  return s2 * Complex(w_s2) + s2_swapped * Complex(w_s2_swapped) + j2 * Complex(w_j2);
}

/// Q3(z) = (2/3) U_{e^{zA/2}}(e^{zB}) + (2/3) U_{e^{zB/2}}(e^{zA}) − (1/3) e^{zA}∘e^{zB}.
inline ComplexMatrix eval_q3(Complex z, const ComplexMatrix& a, const ComplexMatrix& b) {
  return eval_q3_weighted(z, a, b, 2.0 / 3.0, 2.0 / 3.0, -1.0 / 3.0);
}

/// J1(t) = exp(−itA) exp(−itB).
inline ComplexMatrix eval_j1(double t, const ComplexMatrix& a, const ComplexMatrix& b) {
  a.check_same_dim(b, "eval_j1");
  const Complex z(0.0, -t);
  return mat_mul(mat_exp(a * z), mat_exp(b * z));
}

/// Left-nested Jordan product of the stage evaluations at c_j z.
/// Order conditions are the caller's concern (see FormulaSpec::nonsymmetric).
inline ComplexMatrix compose_nonsymmetric(std::span<const FormulaStage> stages, Complex z,
                                          const TermList& terms);

/// Nested triple-product sandwich of `child` evaluated at d_j z.
inline ComplexMatrix compose_symmetric(std::span<const double> d, const FormulaSpec& child,
                                       Complex z, const TermList& terms);

inline ComplexMatrix evaluate(const FormulaSpec& spec, Complex z, const TermList& terms) {
  switch (spec.kind()) {
    case FormulaKind::GExact: return eval_g(z, terms);
    case FormulaKind::J1Assoc: return eval_j1_product(z, terms);
    case FormulaKind::J2: return eval_j2(z, terms);
    case FormulaKind::S2: return eval_s2(z, terms);
    case FormulaKind::QS2: return eval_qs2(z, terms);
    case FormulaKind::Q3: {
      if (terms.size() != 2) throw UsageError("q3: defined for exactly two terms");
      const auto w = spec.weights();
      return eval_q3_weighted(z, terms[0], terms[1], w[0], w[1], w[2]);
    }
    case FormulaKind::S3Suzuki: {
      const auto st = spec.stages();
      auto acc = evaluate(*st[0].child, z * st[0].coefficient, terms);
      for (std::size_t j = 1; j < st.size(); ++j)
        acc = mat_mul(acc, evaluate(*st[j].child, z * st[j].coefficient, terms));
      return acc;
    }
    case FormulaKind::NonSymRec: return compose_nonsymmetric(spec.stages(), z, terms);
    case FormulaKind::SymRec: {
      std::vector<double> d;
      for (const auto& s : spec.stages()) d.push_back(s.coefficient);
      return compose_symmetric(d, *spec.stages().front().child, z, terms);
    }
  }
  throw UsageError("evaluate: unknown formula kind");
}

inline ComplexMatrix compose_nonsymmetric(std::span<const FormulaStage> stages, Complex z,
                                          const TermList& terms) {
  if (stages.empty()) throw UsageError("compose_nonsymmetric: no stages");
  auto acc = evaluate(*stages[0].child, z * stages[0].coefficient, terms);
  for (std::size_t j = 1; j < stages.size(); ++j)
    acc = jordan_product(acc, evaluate(*stages[j].child, z * stages[j].coefficient, terms));
  return acc;
}

inline ComplexMatrix compose_symmetric(std::span<const double> d, const FormulaSpec& child,
                                       Complex z, const TermList& terms) {
  if (d.empty()) throw UsageError("compose_symmetric: no coefficients");
  auto acc = evaluate(child, z * d[0], terms);
  for (std::size_t j = 1; j < d.size(); ++j) acc = u_op(evaluate(child, z * d[j], terms), acc);
  return acc;
}

/// S3(t) with the −it convention and A as the outer half-step:
/// S2(z) = e^{zA/2} e^{zB} e^{zA/2}, S3 = S2(uz) S2(vz) S2(uz), z = −it.
inline ComplexMatrix eval_s3(double t, const ComplexMatrix& a, const ComplexMatrix& b) {
  return evaluate(FormulaSpec::s3(), Complex(0.0, -t), TermList{b, a});
}

/// [step(z_total / n)]^n.
inline ComplexMatrix n_step_evolution(const FormulaSpec& formula, const TermList& terms,
                                      Complex z_total, unsigned n) {
  if (n == 0) throw UsageError("n_step_evolution: n must be positive");
  return jordan_power(evaluate(formula, z_total / static_cast<double>(n), terms), n);
}

// ---------------------------------------------------------------------------
// Coefficient solvers for the minimal recursions.

struct SymmetricCoefficients {
  double d1;  // middle
  double d2;  // outer pair
};

namespace detail {

inline double suzuki_outer(int n, const char* who) {
  if (n < 3) throw UsageError(std::string(who) + ": n must be at least 3");
  if (n % 2 == 0) {
    throw UnsupportedError(std::string(who) + ": no real solution of the minimal system for even n=" +
                           std::to_string(n) + "; even orders come from the symmetric order boost");
  }
  return 1.0 / (2.0 - std::pow(2.0, 1.0 / n));
}

}  // namespace detail

/// l = 2: d2 = 1/(2 − 2^{1/n}), d1 = 1 − 2 d2, so d1 + 2 d2 = 1 and d1^n + 2 d2^n = 0.
inline SymmetricCoefficients solve_symmetric_coeffs(int n) {
  const double d2 = detail::suzuki_outer(n, "solve_symmetric_coeffs");
  return {1.0 - 2.0 * d2, d2};
}

/// r = 3 with c1 = c3: c1 = 1/(2 − 2^{1/n}), c2 = 1 − 2 c1.
inline std::array<double, 3> solve_nonsymmetric_coeffs(int n) {
  const double c = detail::suzuki_outer(n, "solve_nonsymmetric_coeffs");
  return {c, 1.0 - 2.0 * c, c};
}

/// Q~_{n} built from `child` with the l = 2 solved coefficients for odd n.
inline FormulaSpec symmetric_from(const FormulaSpec& child, int n) {
  const auto d = solve_symmetric_coeffs(n);
  return FormulaSpec::symmetric({d.d1, d.d2}, std::make_shared<const FormulaSpec>(child), n);
}

/// Q_n built from `child` with the r = 3 solved coefficients for odd n.
inline FormulaSpec nonsymmetric_from(const FormulaSpec& child, int n) {
  const auto c = solve_nonsymmetric_coeffs(n);
  auto ptr = std::make_shared<const FormulaSpec>(child);
  return FormulaSpec::nonsymmetric({{c[0], ptr}, {c[1], ptr}, {c[2], ptr}}, n);
}

/// Q~_4 (= Q~_3 by the order boost) from S2.
inline FormulaSpec qtilde4() { return symmetric_from(FormulaSpec::s2(), 3); }

}  // namespace jtrotter
