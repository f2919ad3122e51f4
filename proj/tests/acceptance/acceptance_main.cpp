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

// Acceptance suite: one [PASS]/[FAIL] line per criterion; exit status 0 iff
// all pass. Tolerances are fixed here, independent of the CLI defaults.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "jtrotter/experiments.hpp"
#include "oracles.hpp"

namespace {

using namespace jtrotter;

constexpr double kVerifySeconds = 10.0;
constexpr double kSlopeTol = 0.2;
constexpr double kSlopeTolOrder5 = 0.3;
constexpr double kAxisTol = 1e-10;
constexpr double kDiagonalLo = 3.6;
constexpr double kDiagonalHi = 4.05;
constexpr double kFidelityWindow = 0.5;
constexpr double kSmallTError = 1e-3;
constexpr double kInverseTol = 1e-11;
constexpr double kOracleTol = 1e-12;

struct Outcome {
  bool passed = true;
  std::string detail;
  void fail(const std::string& why) {
    if (passed) detail = why;
    passed = false;
  }
};

int failures = 0;

void report(int id, const char* title, const Outcome& o) {
  std::printf("[%s] %d. %s%s%s\n", o.passed ? "PASS" : "FAIL", id, title,
              o.detail.empty() ? "" : ": ", o.detail.c_str());
  std::fflush(stdout);
  failures += !o.passed;
}

double op(const ComplexMatrix& a) { return norm(a, NormKind::Operator2); }

Outcome exact_order_verification() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  const auto rep = run_verify_taylor(RunConfig{});
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const std::vector<std::string> required{
      "J2 = G, m=2", "S2 = G, m=2", "J2 = G, m=3",  "S2 = G, m=3",
      "QS2 = G, m=3", "J2 = G, m=5", "S2 = G, m=5", "QS2 = G, m=5",
      "Q3 = G",       "Q3 != G at degree 4",        "T°3 = 2/3 Ts3 + 2/3 T~s3 - 1/3 Tj3"};
  for (const auto& name : required) {
    bool found = false;
    for (const auto& c : rep.claims) {
      if (c.claim != name) continue;
      found = true;
      if (!c.passed) o.fail(name + " failed (" + c.detail + ")");
    }
    if (!found) o.fail("missing claim " + name);
  }
  if (!rep.all_passed()) o.fail("some verify-taylor claim failed");
  for (const auto& c : rep.claims)
    if (c.claim.rfind("J2", 0) == 0 && c.degree != 2) o.fail("order-2 claims not checked at degree 2");
  if (secs >= kVerifySeconds) o.fail("runtime " + format_double(secs) + " s");
  if (o.passed) {
    o.detail = std::to_string(rep.claims.size()) + " claims in " + format_double(secs) + " s";
  }
  return o;
}

Outcome bound_dominance() {
  Outcome o;
  RunConfig cfg;
  cfg.samples = 200;
  const auto rows = run_bounds(cfg);
  double worst = 0.0;
  for (const auto& id : bound_theorems()) {
    std::size_t n = 0;
    for (const auto& r : rows) {
      if (r.theorem != id) continue;
      ++n;
      worst = std::max(worst, r.ratio);
      if (!(r.empirical <= r.bound)) {
        o.fail(id + " sample " + std::to_string(r.sample) + " ratio " + format_double(r.ratio));
      }
    }
    const std::size_t per = id.find("nstep") != std::string::npos || id.find("unitary") != std::string::npos
                                ? kBoundSteps.size()
                                : kBoundTimes.size();
    if (n != 200 * per) o.fail(id + ": expected " + std::to_string(200 * per) + " rows");
  }
  if (o.passed) o.detail = std::to_string(rows.size()) + " rows, max ratio " + format_double(worst);
  return o;
}

Outcome nstep_convergence() {
  Outcome o;
  const TermList xy{pauli::x(), pauli::y()};
  const auto exact = eval_g(1.0, xy);
  std::vector<OrderSample> s;
  for (unsigned n = 2; n <= 128; ++n) {
    s.push_back({double(n), op(n_step_evolution(FormulaSpec::j2(), xy, 1.0, n) - exact)});
  }
  const double slope = fit_order(s);
  if (std::abs(slope + 2.0) > kSlopeTol) o.fail("slope " + format_double(slope));
  o.detail = "slope " + format_double(slope) + " over n=2..128";
  return o;
}

Outcome single_step_orders() {
  Outcome o;
  const TermList xy{pauli::x(), pauli::y()};
  struct Case {
    const char* name;
    FormulaSpec spec;
    double target, tol;
  };
  const Case cases[] = {{"j2", FormulaSpec::j2(), 3, kSlopeTol},
                        {"s2", FormulaSpec::s2(), 3, kSlopeTol},
                        {"q3", FormulaSpec::q3(), 4, kSlopeTol},
                        {"s3", FormulaSpec::s3(), 5, kSlopeTolOrder5},
                        {"qtilde4", qtilde4(), 5, kSlopeTolOrder5}};
  std::string summary;
  for (const auto& c : cases) {
    std::vector<OrderSample> s;
    for (double t : log_space(-2.5, -1.0, 14)) {
      const Complex z(0.0, -t);
      s.push_back({t, norm(evaluate(c.spec, z, xy) - eval_g(z, xy), NormKind::Frobenius)});
    }
    const double slope = fit_order(s);
    if (std::abs(slope - c.target) > c.tol) {
      o.fail(std::string(c.name) + " slope " + format_double(slope));
    }
    summary += std::string(summary.empty() ? "" : ", ") + c.name + " " + format_double(slope);
  }
  if (o.passed) o.detail = summary;
  return o;
}

Outcome contour_claim() {
  Outcome o;
  const auto r = run_contour(RunConfig{});
  const std::size_t s3 = 0, q3 = 1;  // default columns
  if (r.formulas != std::vector<FormulaId>{FormulaId::S3, FormulaId::Q3}) o.fail("default columns");

  const auto direct = contour_point({FormulaId::S3, FormulaId::Q3}, 4.0, 4.0);
  if (!(direct[1] < direct[0])) o.fail("at (4,4) err_q3 >= err_s3");

  double axis = 0.0;
  std::size_t axis_nodes = 0;
  for (std::size_t i = 0; i < r.td1.size(); ++i)
    for (std::size_t j = 0; j < r.td2.size(); ++j)
      if (std::abs(r.td1[i]) < 1e-12 || std::abs(r.td2[j]) < 1e-12) {
        ++axis_nodes;
        axis = std::max({axis, r.error(i, j, s3), r.error(i, j, q3)});
      }
  if (axis_nodes != 2 * r.td1.size() - 1) o.fail("axes are not grid lines");
  if (!(axis < kAxisTol)) o.fail("axis error " + format_double(axis));

  std::size_t diag_nodes = 0;
  for (std::size_t i = 0; i < r.td1.size(); ++i) {
    const double td = std::abs(r.td1[i]);
    if (td < kDiagonalLo || td > kDiagonalHi) continue;
    ++diag_nodes;
    if (!(r.error(i, i, q3) < r.error(i, i, s3))) {
      o.fail("diagonal td=" + format_double(r.td1[i]) + ": q3 not below s3");
    }
  }
  if (diag_nodes == 0) o.fail("no diagonal nodes near |td| = 4");
  if (o.passed) {
    o.detail = "(4,4): err_s3 " + format_double(direct[0]) + ", err_q3 " + format_double(direct[1]) +
               "; axis max " + format_double(axis) + "; " + std::to_string(diag_nodes) +
               " diagonal nodes with q3 < s3";
  }
  return o;
}

Outcome fidelity_claim() {
  Outcome o;
  const auto r = run_fidelity(RunConfig{});
  const std::vector<FormulaId> expected{FormulaId::J1, FormulaId::S2, FormulaId::S3, FormulaId::Q3};
  if (r.formulas != expected) o.fail("default columns");
  std::size_t window = 0;
  for (std::size_t k = 0; k < r.t.size() && r.t[k] <= kFidelityWindow; ++k) {
    ++window;
    const auto& e = r.eps[k];
    if (!(e[0] >= e[1] && e[1] >= e[3])) o.fail("ordering fails at t=" + format_double(r.t[k]));
    if (k > 0)
      for (std::size_t f = 0; f < 4; ++f)
        if (e[f] < r.eps[k - 1][f]) o.fail("not monotone toward t=0 at t=" + format_double(r.t[k]));
  }
  if (window == 0) o.fail("no samples in (0, 0.5]");
  for (std::size_t f = 0; f < 4; ++f)
    if (!(r.eps[0][f] < kSmallTError)) o.fail("smallest-t error not small");
  if (o.passed) o.detail = std::to_string(window) + " points in (0, 0.5]";
  return o;
}

Outcome invertibility() {
  Outcome o;
  std::mt19937_64 rng(4242);
  const TermList terms{random_hermitian(4, 1.0, rng), random_hermitian(4, 1.0, rng)};
  const TermList xy{pauli::x(), pauli::y()};
  const FormulaSpec qt2 = FormulaSpec::s2();
  const FormulaSpec qt4 = qtilde4();
  double worst = 0.0;
  for (const auto* list : {&terms, &xy})
    for (const auto* q : {&qt2, &qt4})
      for (double t : {0.1, 0.3, 1.0})
        for (Complex z : {Complex(t), Complex(0.0, -t)}) {
          const auto prod = evaluate(*q, z, *list) * evaluate(*q, -z, *list);
          const auto id = ComplexMatrix::identity(list->dim());
          worst = std::max(worst, op(prod - id));
        }
  if (!(worst < kInverseTol)) o.fail("max deviation " + format_double(worst));
  o.detail = "max deviation " + format_double(worst);
  return o;
}

Outcome oracle_agreement() {
  Outcome o;
  double qubit = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double t = 0.1 * i;
    const double alpha = std::cos(0.37 * i), beta = std::sin(0.61 * i);
    const auto h = pauli::z() * Complex(alpha) + pauli::x() * Complex(beta);
    qubit = std::max(qubit, op(exact_single_qubit(t, alpha, beta) - mat_exp(h * Complex(0.0, -t))));
  }
  double eig = 0.0;
  std::mt19937_64 rng(8);
  for (int i = 0; i < 100; ++i) {
    const auto h = random_hermitian(4, 0.5 + 0.05 * i, rng);
    eig = std::max(eig, op(mat_exp(h * Complex(0.0, -1.0)) -
                           testing::hermitian_exp(h, Complex(0.0, -1.0))));
  }
  if (!(qubit < kOracleTol)) o.fail("closed form vs mat_exp " + format_double(qubit));
  if (!(eig < kOracleTol)) o.fail("mat_exp vs eigendecomposition " + format_double(eig));
  o.detail = "closed form " + format_double(qubit) + ", eigendecomposition " + format_double(eig);
  return o;
}

template <class F>
Outcome guarded(F&& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    Outcome o;
    o.fail(std::string("exception: ") + e.what());
    return o;
  }
}

}  // namespace

int main() {
  report(1, "exact order verification", guarded(exact_order_verification));
  report(2, "bound dominance", guarded(bound_dominance));
  report(3, "n-step convergence of J2", guarded(nstep_convergence));
  report(4, "single-step orders", guarded(single_step_orders));
  report(5, "contour figure claim", guarded(contour_claim));
  report(6, "fidelity figure claim", guarded(fidelity_claim));
  report(7, "symmetric invertibility", guarded(invertibility));
  report(8, "oracle agreement", guarded(oracle_agreement));
  std::printf("%d/8 criteria passed\n", 8 - failures);
  return failures == 0 ? 0 : 1;
}
