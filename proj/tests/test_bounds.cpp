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

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "jtrotter/bounds.hpp"
#include "jtrotter/formulas.hpp"
#include "oracles.hpp"

namespace jtrotter {
namespace {

const double kE = std::numbers::e;

double op(const ComplexMatrix& a) { return norm(a, NormKind::Operator2); }

TEST(BoundJ2NStep, Values) {
  const double one[] = {1.0};
  EXPECT_NEAR(bound_j2_nstep(1, one), kE / 3.0, 1e-15);
  EXPECT_NEAR(bound_j2_nstep(1, one), 0.906093942819681, 1e-12);
  EXPECT_DOUBLE_EQ(bound_j2_nstep(4, one) / bound_j2_nstep(2, one), 0.25);
  EXPECT_THROW(bound_j2_nstep(0, one), UsageError);
  const double negative[] = {-1.0};
  EXPECT_THROW(bound_j2_nstep(1, negative), UsageError);
}

TEST(BoundJ2NStep, SingleTermIsExact) {
  std::mt19937_64 rng(1);
  const auto a = random_hermitian(4, 0.8, rng);
  const TermList terms{a};
  for (unsigned n : {1u, 2u, 4u, 8u, 16u, 32u, 64u}) {
    const double err = op(n_step_evolution(FormulaSpec::j2(), terms, 1.0, n) - eval_g(1.0, terms));
    EXPECT_LT(err, 1e-13);
    EXPECT_LE(err, bound_j2_nstep(n, terms.norms()));
  }
}

TEST(BoundQS2, Values) {
  const double n3[] = {1.0, 1.0, 1.0};
  EXPECT_EQ(bound_qs2(0.0, 1, n3), 0.0);
  EXPECT_NEAR(bound_qs2(1.0, 1, n3), 4.0 / 6.0 * 27.0 * std::exp(3.0), 1e-10);
  EXPECT_NEAR(bound_qs2(1.0, 1, n3), 361.54, 0.01);
  EXPECT_EQ(bound_qs2(-1.0, 1, n3), bound_qs2(1.0, 1, n3));
  EXPECT_THROW(bound_qs2(1.0, 2, n3), UsageError);
}

TEST(BoundS2, Values) {
  const double n2[] = {1.0, 1.0};
  EXPECT_NEAR(bound_s2(1.0, 2, n2), 4.0 / 6.0 * 8.0 * kE * kE, 1e-12);
  EXPECT_NEAR(bound_s2(1.0, 2, n2), 39.41, 0.01);
  EXPECT_THROW(bound_s2(1.0, 3, n2), UsageError);
}

TEST(BoundS2, SingleTermIsExact) {
  std::mt19937_64 rng(2);
  const TermList terms{random_hermitian(3, 1.0, rng)};
  for (double t : {0.1, 0.5, 1.0}) {
    const double err = op(eval_s2(t, terms) - eval_g(t, terms));
    EXPECT_EQ(err, 0.0);
    EXPECT_LE(err, bound_s2(t, 1, terms.norms()));
  }
}

TEST(BoundJ2Unitary, Values) {
  const double one[] = {1.0};
  const double two[] = {1.0, 1.0};
  EXPECT_DOUBLE_EQ(bound_j2_unitary(1, one), bound_j2_nstep(1, one));
  EXPECT_NEAR(bound_j2_unitary(10, two), 8.0 / 300.0 * std::exp(0.2), 1e-15);
  EXPECT_NEAR(bound_j2_unitary(10, two), 0.03257, 1e-5);
}

TEST(BoundS2Unitary, Values) {
  const double zero[] = {0.0, 0.0};
  const double two[] = {1.0, 1.0};
  EXPECT_EQ(bound_s2_unitary(3, 2, zero), 0.0);
  EXPECT_NEAR(bound_s2_unitary(10, 2, two), 4.0 / 6.0 * 8.0 / 100.0 * std::exp(0.2), 1e-15);
  EXPECT_NEAR(bound_s2_unitary(10, 2, two), 0.06514, 1e-5);
  EXPECT_THROW(bound_s2_unitary(10, 3, two), UsageError);
}

TEST(BoundQ3, Values) {
  EXPECT_EQ(bound_q3(0.0, 1.0, 1.0), 0.0);
  EXPECT_NEAR(bound_q3(1.0, 0.5, 0.5), 2.0 / 9.0 * kE, 1e-15);
  EXPECT_NEAR(bound_q3(1.0, 0.5, 0.5), 0.60406, 1e-5);
}

TEST(Bounds, MonotoneInNormsAndTime) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    std::array<double, 3> a{u(rng), u(rng), u(rng)};
    auto b = a;
    b[i % 3] += u(rng);
    const double t = u(rng), t2 = t + u(rng);
    const unsigned n = 1 + i % 7;
    EXPECT_LE(bound_j2_nstep(n, a), bound_j2_nstep(n, b));
    EXPECT_LE(bound_j2_unitary(n, a), bound_j2_unitary(n, b));
    EXPECT_LE(bound_s2_unitary(n, 3, a), bound_s2_unitary(n, 3, b));
    EXPECT_LE(bound_qs2(t, 1, a), bound_qs2(t, 1, b));
    EXPECT_LE(bound_qs2(t, 1, a), bound_qs2(-t2, 1, a));
    EXPECT_LE(bound_s2(t, 3, a), bound_s2(t, 3, b));
    EXPECT_LE(bound_s2(t, 3, a), bound_s2(t2, 3, a));
    EXPECT_LE(bound_q3(t, a[0], a[1]), bound_q3(t, b[0], b[1]));
    EXPECT_LE(bound_q3(t, a[0], a[1]), bound_q3(-t2, a[0], a[1]));
  }
}

TEST(ErrorReport, RatioPresentIffBound) {
  const auto r = ErrorReport::make(0.1, 0.4, NormKind::Operator2, "j2", 4, 1.0);
  ASSERT_TRUE(r.ratio);
  EXPECT_DOUBLE_EQ(*r.ratio, 0.25);
  EXPECT_TRUE(r.dominated());
  const auto none = ErrorReport::make(0.1, std::nullopt, NormKind::Frobenius, "q3", 1, 0.2);
  EXPECT_FALSE(none.ratio);
  EXPECT_EQ(none.norm_kind, NormKind::Frobenius);
  const auto zero = ErrorReport::make(0.0, 0.0, NormKind::Operator2, "s2", 1, 0.0);
  EXPECT_EQ(*zero.ratio, 0.0);
  EXPECT_FALSE(ErrorReport::make(2.0, 1.0, NormKind::Operator2, "s2", 1, 0.0).dominated());
}

TEST(EmpiricalError, Examples) {
  const auto u = exact_single_qubit(0.4, 1.0, 1.0);
  EXPECT_EQ(empirical_unitary_error(u, u, NormKind::Frobenius), 0.0);
  const auto j1 = eval_j1(0.9, pauli::z(), pauli::z() * Complex(-0.5));
  EXPECT_LT(empirical_unitary_error(j1, exact_single_qubit(0.9, 0.5, 0.0), NormKind::Frobenius),
            1e-14);
  EXPECT_THROW(empirical_unitary_error(u, ComplexMatrix(3), NormKind::Frobenius), UsageError);
}

TEST(StateError, Examples) {
  const std::array<Complex, 2> psi0{Complex(1.0), Complex(0.0)};
  const auto exact = exact_single_qubit(0.5, 1.0, 1.0);
  EXPECT_EQ(state_error(exact, exact, psi0), 0.0);

  const auto a = pauli::z(), b = pauli::x();
  const double e_j1 = state_error(eval_j1(0.5, a, b), exact, psi0);
  const double e_q3 = state_error(eval_q3(Complex(0.0, -0.5), a, b), exact, psi0);
  EXPECT_GT(e_j1, e_q3);

  const auto zero = ComplexMatrix(2);
  for (double t : {0.1, 1.0, 7.0}) {
    const Complex z(0.0, -t);
    const auto ex = exact_single_qubit(t, 1.0, 0.0);
    EXPECT_LT(state_error(eval_j1(t, a, zero), ex, psi0), 1e-12);
    EXPECT_LT(state_error(eval_q3(z, a, zero), ex, psi0), 1e-12);
    EXPECT_LT(state_error(eval_s3(t, a, zero), ex, psi0), 1e-12);
  }

  const std::array<Complex, 2> unnormalized{Complex(1.0), Complex(1.0)};
  EXPECT_THROW(state_error(exact, exact, unnormalized), UsageError);
  const std::array<Complex, 3> wrong{Complex(1.0), Complex(0.0), Complex(0.0)};
  EXPECT_THROW(state_error(exact, exact, wrong), UsageError);
}

TEST(ExactSingleQubit, Examples) {
  EXPECT_LT(op(exact_single_qubit(std::numbers::pi, 1.0, 0.0) + ComplexMatrix::identity(2)), 1e-15);
  EXPECT_EQ(exact_single_qubit(0.0, 1.0, 1.0), ComplexMatrix::identity(2));
  EXPECT_EQ(exact_single_qubit(3.0, 0.0, 0.0), ComplexMatrix::identity(2));
  const auto h = pauli::z() + pauli::x();
  EXPECT_LT(op(exact_single_qubit(0.7, 1.0, 1.0) - mat_exp(h * Complex(0.0, -0.7))), 1e-13);
}

TEST(ExactSingleQubit, AgreesWithMatExpOnGrid) {
  for (int i = 0; i < 100; ++i) {
    const double t = 0.1 * (i % 10) + 0.05 * i;
    const double alpha = -2.0 + 0.04 * i;
    const double beta = 1.5 - 0.03 * (i % 17);
    const auto h = pauli::z() * Complex(alpha) + pauli::x() * Complex(beta);
    EXPECT_LT(op(exact_single_qubit(t, alpha, beta) - mat_exp(h * Complex(0.0, -t))), 1e-12);
  }
}

TEST(ExactTwoLevel, MatchesEigendecomposition) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 100; ++i) {
    const auto h = random_hermitian(2, 0.5 + 0.1 * i, rng) +
                   ComplexMatrix::identity(2) * Complex(0.3 * (i % 5));
    const double t = 0.2 + 0.05 * i;
    EXPECT_LT(op(exact_two_level_evolution(h, t) - testing::hermitian_exp(h, Complex(0.0, -t))),
              1e-12);
  }
  EXPECT_EQ(exact_two_level_evolution(ComplexMatrix(2), 1.0), ComplexMatrix::identity(2));
  EXPECT_THROW(exact_two_level_evolution(pauli::z() * Complex(0.0, 1.0), 1.0), UsageError);
  EXPECT_THROW(exact_two_level_evolution(ComplexMatrix::identity(3), 1.0), UsageError);
}

TEST(FitOrder, SyntheticPowerLaws) {
  std::vector<OrderSample> cube, quartic;
  for (double t : log_space(-3.0, -1.0, 9)) {
    cube.push_back({t, t * t * t});
    quartic.push_back({t, 5.0 * t * t * t * t});
  }
  EXPECT_NEAR(fit_order(cube), 3.0, 1e-9);
  EXPECT_NEAR(fit_order(quartic), 4.0, 1e-9);
}

TEST(FitOrder, Errors) {
  std::vector<OrderSample> few{{0.1, 1.0}, {0.2, 2.0}, {0.3, 3.0}, {0.4, 4.0}};
  EXPECT_THROW(fit_order(few), UsageError);
  std::vector<OrderSample> zeros;
  for (double t : log_space(-2.0, -1.0, 6)) zeros.push_back({t, 0.0});
  EXPECT_THROW(fit_order(zeros), UnsupportedError);
}

TEST(FitOrder, Q3EndToEnd) {
  const TermList xy{pauli::x(), pauli::y()};
  std::vector<OrderSample> s;
  for (double t : log_space(-2.5, -1.0, 14)) {
    const Complex z(0.0, -t);
    s.push_back({t, norm(eval_q3(z, xy[0], xy[1]) - eval_g(z, xy), NormKind::Frobenius)});
  }
  EXPECT_NEAR(fit_order(s), 4.0, 0.2);
}

TEST(LogSpace, Endpoints) {
  const auto v = log_space(-2.5, -1.0, 14);
  ASSERT_EQ(v.size(), 14u);
  EXPECT_NEAR(v.front(), std::pow(10.0, -2.5), 1e-18);
  EXPECT_NEAR(v.back(), 0.1, 1e-16);
  EXPECT_THROW(log_space(0, 1, 1), UsageError);
}

TEST(RandomHermitian, ExactlyHermitianWithTargetNorm) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    const auto h = random_hermitian(4, 0.25 + 0.01 * i, rng);
    EXPECT_TRUE(is_hermitian(h, 0.0));
    EXPECT_NEAR(testing::operator_norm(h), 0.25 + 0.01 * i, 1e-12);
  }
}

}  // namespace
}  // namespace jtrotter
