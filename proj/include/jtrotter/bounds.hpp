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

// Closed-form error bounds, empirical error metrics and the single-qubit
// closed-form evolution.

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "jtrotter/error.hpp"
#include "jtrotter/linalg.hpp"

namespace jtrotter {

namespace detail {

inline double norm_sum(std::span<const double> norms) {
  double s = 0.0;
  for (double x : norms) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw UsageError("bound: norms must be finite and >= 0");
    s += x;
  }
  return s;
}

inline void require_positive_n(unsigned n) {
  if (n == 0) throw UsageError("bound: n must be positive");
}

}  // namespace detail

/// ‖exp(ΣA) − [J2(1/n)]^n‖ ≤ (ΣA)^3 exp(Σ‖A‖) / (3n²).
inline double bound_j2_nstep(unsigned n, std::span<const double> norms) {
  detail::require_positive_n(n);
  const double s = detail::norm_sum(norms);
  const double nn = static_cast<double>(n);
  return s * s * s * std::exp(s) / (3.0 * nn * nn);
}

/// ‖exp(tΣA) − Q_S2(t)‖ ≤ (3^p + 1)/6 |t|^3 s^3 exp(|t| s), with 2p+1 terms.
inline double bound_qs2(double t, unsigned p, std::span<const double> norms) {
  if (norms.size() != 2 * static_cast<std::size_t>(p) + 1) {
    throw UsageError("bound_qs2: expected 2p+1 = " + std::to_string(2 * p + 1) + " norms, got " +
                     std::to_string(norms.size()));
  }
  const double s = detail::norm_sum(norms);
  const double at = std::abs(t);
  return (std::pow(3.0, p) + 1.0) / 6.0 * at * at * at * s * s * s * std::exp(at * s);
}

/// ‖exp(tΣA) − S2(t)‖ ≤ (3^{m−1} + 1)/6 |t|^3 s^3 exp(|t| s).
inline double bound_s2(double t, unsigned m, std::span<const double> norms) {
  if (m == 0 || norms.size() != m) throw UsageError("bound_s2: m must equal the number of norms");
  const double s = detail::norm_sum(norms);
  const double at = std::abs(t);
  return (std::pow(3.0, m - 1) + 1.0) / 6.0 * at * at * at * s * s * s * std::exp(at * s);
}

/// Self-adjoint terms: ‖exp(iΣA) − [J2(i/n)]^n‖ ≤ s^3 exp(s/n) / (3n²).
inline double bound_j2_unitary(unsigned n, std::span<const double> norms) {
  detail::require_positive_n(n);
  const double s = detail::norm_sum(norms);
  const double nn = static_cast<double>(n);
  return s * s * s * std::exp(s / nn) / (3.0 * nn * nn);
}

/// Self-adjoint terms: ‖exp(iΣA) − [S2(i/n)]^n‖ ≤ (3^{m−1}+1)/(6n²) s^3 exp(s/n).
inline double bound_s2_unitary(unsigned n, unsigned m, std::span<const double> norms) {
  detail::require_positive_n(n);
  if (m == 0 || norms.size() != m) {
    throw UsageError("bound_s2_unitary: m must equal the number of norms");
  }
  const double s = detail::norm_sum(norms);
  const double nn = static_cast<double>(n);
  return (std::pow(3.0, m - 1) + 1.0) / (6.0 * nn * nn) * s * s * s * std::exp(s / nn);
}

/// ‖exp(t(A+B)) − Q3(t)‖ ≤ (2/9) |t|^4 (‖A‖+‖B‖)^4 exp(|t|(‖A‖+‖B‖)).
inline double bound_q3(double t, double norm_a, double norm_b) {
  const double norms[] = {norm_a, norm_b};
  const double s = detail::norm_sum(norms);
  const double x = std::abs(t) * s;
  return 2.0 / 9.0 * x * x * x * x * std::exp(x);
}

/// One empirical-vs-theoretical comparison. `ratio` is present iff `bound` is.
struct ErrorReport {
  double empirical = 0.0;
  std::optional<double> bound;
  std::optional<double> ratio;
  NormKind norm_kind = NormKind::Operator2;
  std::string formula;
  unsigned n_steps = 1;
  double t = 0.0;

  static ErrorReport make(double empirical, std::optional<double> bound, NormKind kind,
                          std::string formula, unsigned n_steps, double t) {
    ErrorReport r{empirical, bound, std::nullopt, kind, std::move(formula), n_steps, t};
    if (bound) {
      if (*bound > 0.0) {
        r.ratio = empirical / *bound;
      } else {
        r.ratio = empirical == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
      }
    }
    return r;
  }

  bool dominated() const { return !ratio || *ratio <= 1.0; }
};

inline double empirical_unitary_error(const ComplexMatrix& approx, const ComplexMatrix& exact,
                                      NormKind kind) {
  return norm(approx - exact, kind);
}

/// ‖approx ψ0 − exact ψ0‖ for a unit vector ψ0.
inline double state_error(const ComplexMatrix& approx, const ComplexMatrix& exact,
                          std::span<const Complex> psi0) {
  approx.check_same_dim(exact, "state_error");
  if (psi0.size() != approx.dim()) throw UsageError("state_error: state dimension mismatch");
  if (std::abs(detail::vector_norm(psi0) - 1.0) > 1e-12) {
    throw UsageError("state_error: initial state is not normalized");
  }
  const auto a = mat_vec(approx, psi0);
  const auto e = mat_vec(exact, psi0);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - e[i]);
  return std::sqrt(s);
}

/// exp(−itH) for H = αZ + βX:
/// cos(tω) I − (i/ω) sin(tω) H with ω = sqrt(α² + β²); I when ω = 0.
inline ComplexMatrix exact_single_qubit(double t, double alpha, double beta) {
  const double omega = std::hypot(alpha, beta);
  if (omega == 0.0) return ComplexMatrix::identity(2);
  const double c = std::cos(t * omega);
  const Complex k(0.0, -std::sin(t * omega) / omega);
  return ComplexMatrix{{c + k * alpha, k * beta}, {k * beta, c - k * alpha}};
}

/// exp(−itH) for a Hermitian 2×2 H from its eigendecomposition
/// H = h0 I + r n·σ, eigenvalues h0 ± r with projectors (I ± n·σ)/2.
inline ComplexMatrix exact_two_level_evolution(const ComplexMatrix& h, double t) {
  if (h.dim() != 2) throw UsageError("exact_two_level_evolution: H must be 2x2");
  if (!is_hermitian(h)) throw UsageError("exact_two_level_evolution: H must be Hermitian");
  const double h0 = 0.5 * (h(0, 0).real() + h(1, 1).real());
  const double hz = 0.5 * (h(0, 0).real() - h(1, 1).real());
  const double hx = h(1, 0).real();
  const double hy = h(1, 0).imag();
  const double r = std::sqrt(hx * hx + hy * hy + hz * hz);
  const Complex phase = std::exp(Complex(0.0, -t * h0));
  if (r == 0.0) return ComplexMatrix::identity(2) * phase;
  const Complex ep = std::exp(Complex(0.0, -t * (h0 + r)));
  const Complex em = std::exp(Complex(0.0, -t * (h0 - r)));
  const double nx = hx / r, ny = hy / r, nz = hz / r;
  // n·σ = [[nz, nx − i ny], [nx + i ny, −nz]]
  const Complex plus = 0.5 * (ep + em);
  const Complex minus = 0.5 * (ep - em);
  return ComplexMatrix{{plus + minus * nz, minus * Complex(nx, -ny)},
                       {minus * Complex(nx, ny), plus - minus * nz}};
}

struct OrderSample {
  double x;    // step size t, or step count n
  double err;
};

/// Least-squares slope of log(err) against log(x).
inline double fit_order(std::span<const OrderSample> samples) {
  if (samples.size() < 5) throw UsageError("fit_order: at least 5 points required");
  constexpr double kFloor = 10.0 * std::numeric_limits<double>::epsilon();
  double sx = 0.0, sy = 0.0;
  for (const auto& s : samples) {
    if (!(s.x > 0.0)) throw UsageError("fit_order: abscissae must be positive");
    if (!(s.err > kFloor) || !std::isfinite(s.err)) {
      throw UnsupportedError("fit_order: error " + std::to_string(s.err) +
                             " at x=" + std::to_string(s.x) +
                             " is at the floating-point floor; adjust the range");
    }
    sx += std::log(s.x);
    sy += std::log(s.err);
  }
  const double n = static_cast<double>(samples.size());
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& s : samples) {
    const double dx = std::log(s.x) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(s.err) - my);
  }
  if (sxx == 0.0) throw UsageError("fit_order: abscissae must not all coincide");
  return sxy / sxx;
}

/// n log-spaced points from 10^lo to 10^hi inclusive.
inline std::vector<double> log_space(double lo_exp, double hi_exp, std::size_t n) {
  if (n < 2) throw UsageError("log_space: need at least 2 points");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = std::pow(10.0, lo_exp + (hi_exp - lo_exp) * static_cast<double>(i) / (n - 1));
  return out;
}

/// Hermitian matrix with i.i.d. complex standard normal entries, symmetrized
/// and rescaled to the given operator norm.
template <class Rng>
ComplexMatrix random_hermitian(std::size_t dim, double target_norm, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix r(dim);
  for (auto& e : r.entries()) e = Complex(normal(rng), normal(rng));
  ComplexMatrix h = (r + r.adjoint()) * Complex(0.5);
  const double n = norm(h, NormKind::Operator2);
  if (n > 0.0) h *= Complex(target_norm / n);
  // Exact Hermiticity after rescaling.
  for (std::size_t i = 0; i < dim; ++i) h(i, i) = h(i, i).real();
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = i + 1; j < dim; ++j) h(j, i) = std::conj(h(i, j));
  return h;
}

}  // namespace jtrotter
