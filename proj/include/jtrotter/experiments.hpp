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

// Drivers behind the command-line subcommands. Every driver returns plain
// result structs; CSV and report formatting live in separate writers so the
// acceptance binary and the tests can inspect results directly.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <functional>
#include <mutex>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "jtrotter/bounds.hpp"
#include "jtrotter/error.hpp"
#include "jtrotter/formulas.hpp"
#include "jtrotter/linalg.hpp"
#include "jtrotter/symbolic.hpp"

namespace jtrotter {

inline constexpr std::uint64_t kDefaultSeed = 1234567;

struct RunConfig {
  std::uint64_t seed = kDefaultSeed;
  std::string out;  // empty: standard output
  std::size_t grid = 201;
  double d1_min = -2.0 * std::numbers::pi;
  double d1_max = 2.0 * std::numbers::pi;
  double d2_min = -2.0 * std::numbers::pi;
  double d2_max = 2.0 * std::numbers::pi;
  std::optional<double> t_min;
  std::optional<double> t_max;
  std::optional<std::size_t> points;
  std::vector<std::string> formulas;  // empty: subcommand default
  std::optional<NormKind> norm;       // empty: subcommand default
  unsigned jobs = 0;                  // 0: hardware concurrency
  std::size_t samples = 200;
  double alpha = 1.0;
  double beta = 1.0;
  int degree = 6;
  std::optional<double> q3_mutation;  // S2 weights w, J2 weight 1 − 2w
};

/// "%.17g": round-trips every double.
inline std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Runs fn(0..n-1) on up to `jobs` threads. Results must be written to
/// index-addressed slots so output order never depends on scheduling.
inline void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, n));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < jobs; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += jobs) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(mu);
          if (!failure) failure = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

// ---------------------------------------------------------------------------
// Formula identifiers.

enum class FormulaId { J1, J2, S2, QS2, Q3, S3, QTilde4 };

inline FormulaId parse_formula_id(const std::string& s) {
  if (s == "j1") return FormulaId::J1;
  if (s == "j2") return FormulaId::J2;
  if (s == "s2") return FormulaId::S2;
  if (s == "qs2") return FormulaId::QS2;
  if (s == "q3") return FormulaId::Q3;
  if (s == "s3") return FormulaId::S3;
  if (s == "qtilde4") return FormulaId::QTilde4;
  throw UsageError("unknown formula '" + s + "' (expected j1,j2,s2,qs2,q3,s3,qtilde4)");
}

inline const char* to_string(FormulaId id) {
  switch (id) {
    case FormulaId::J1: return "j1";
    case FormulaId::J2: return "j2";
    case FormulaId::S2: return "s2";
    case FormulaId::QS2: return "qs2";
    case FormulaId::Q3: return "q3";
    case FormulaId::S3: return "s3";
    case FormulaId::QTilde4: return "qtilde4";
  }
  return "?";
}

inline FormulaSpec spec_for(FormulaId id) {
  switch (id) {
    case FormulaId::J1: return FormulaSpec::j1();
    case FormulaId::J2: return FormulaSpec::j2();
    case FormulaId::S2: return FormulaSpec::s2();
    case FormulaId::QS2: return FormulaSpec::qs2();
    case FormulaId::Q3: return FormulaSpec::q3();
    case FormulaId::S3: return FormulaSpec::s3();
    case FormulaId::QTilde4: return qtilde4();
  }
  throw UsageError("spec_for: unknown formula");
}

/// Approximation of exp(z(A + B)). Symmetric splittings put A on the outside
/// (e^{zA/2} e^{zB} e^{zA/2} for S2), J1 is e^{zA} e^{zB}.
inline ComplexMatrix evolve_pair(FormulaId id, Complex z, const ComplexMatrix& a,
                                 const ComplexMatrix& b) {
  switch (id) {
    case FormulaId::QS2: throw UsageError("qs2 needs an odd number of terms; not defined for a pair");
    case FormulaId::S2:
    case FormulaId::S3:
    case FormulaId::QTilde4: return evaluate(spec_for(id), z, TermList{b, a});
    default: return evaluate(spec_for(id), z, TermList{a, b});
  }
}

// ---------------------------------------------------------------------------
// verify-taylor

struct ClaimResult {
  std::string claim;
  int degree = 0;
  bool passed = false;
  std::string detail;  // witness or multiplier on failure / for information
};

struct VerifyReport {
  std::vector<ClaimResult> claims;
  bool all_passed() const {
    return std::all_of(claims.begin(), claims.end(), [](const auto& c) { return c.passed; });
  }
};

namespace detail {

inline std::string describe(const Witness& w) {
  return "witness degree " + std::to_string(w.degree) + " word " + w.word.str() + " delta " +
         w.delta.str();
}

inline std::string describe(const ParametricWitness& w) {
  return "witness degree " + std::to_string(w.degree) + " word " + w.word.str() +
         " residue " + w.remainder.str();
}

inline ClaimResult agreement_claim(std::string claim, const TruncatedSeries& f,
                                   const TruncatedSeries& g, int k) {
  const auto r = verify_order(f, g, k);
  return {std::move(claim), k, r.agrees, r.witness ? describe(*r.witness) : ""};
}

/// Passes iff f and g differ somewhere at exactly degree k (order is sharp).
inline ClaimResult sharpness_claim(std::string claim, const TruncatedSeries& f,
                                   const TruncatedSeries& g, int k) {
  const auto r = verify_order(f, g, k);
  const bool sharp = !r.agrees && r.witness->degree == k;
  return {std::move(claim), k, sharp, r.witness ? describe(*r.witness) : "no difference"};
}

inline ClaimResult parametric_claim(std::string claim, const ParametricOrderCheck& r,
                                    bool expect_agree) {
  const bool ok = expect_agree ? r.agrees : (!r.agrees && r.witness->degree == r.checked_degree);
  return {std::move(claim), r.checked_degree, ok,
          r.witness ? describe(*r.witness) : (expect_agree ? "" : "no difference")};
}

}  // namespace detail

/// Exact free-algebra checks of every order claim. Each agreement check runs
/// at min(claimed order, cfg.degree); sharpness checks run only when the
/// degree cap reaches the first failing degree.
inline VerifyReport run_verify_taylor(const RunConfig& cfg) {
  if (cfg.degree < 0 || cfg.degree > 8) throw UsageError("--degree must be in 0..8");
  const int cap = cfg.degree;
  VerifyReport rep;
  auto& out = rep.claims;
  using R = RationalFormulaSpec;
  const auto cap_at = [cap](int k) { return std::min(k, cap); };

  // Second-order constructors.
  for (std::size_t m : {2u, 3u, 5u}) {
    const int k = cap_at(2);
    const auto g = symbolic_formula(R::exact(), m, k);
    const auto ms = std::to_string(m);
    out.push_back(detail::agreement_claim("J2 = G, m=" + ms, symbolic_formula(R::j2(), m, k), g, k));
    out.push_back(detail::agreement_claim("S2 = G, m=" + ms, symbolic_formula(R::s2(), m, k), g, k));
    if (m % 2 == 1) {
      out.push_back(
          detail::agreement_claim("QS2 = G, m=" + ms, symbolic_formula(R::qs2(), m, k), g, k));
    }
  }

  // Third-order combination.
  const R q3 = cfg.q3_mutation ? [&] {
    const auto w = exact_rational(*cfg.q3_mutation);
    if (!w) throw UsageError("--q3-mutation must be a simple rational");
    return R::q3_weighted(*w, *w, Rational(1) - Rational(2) * *w);
  }()
                               : R::q3();
  {
    const int k = cap_at(3);
    out.push_back(detail::agreement_claim("Q3 = G", symbolic_formula(q3, 2, k),
                                          symbolic_formula(R::exact(), 2, k), k));
    if (cap >= 4) {
      out.push_back(detail::sharpness_claim("Q3 != G at degree 4", symbolic_formula(q3, 2, 4),
                                            symbolic_formula(R::exact(), 2, 4), 4));
    }
  }

  // Third-order Taylor identity T°3 = (2/3)Ts3 + (2/3)T~s3 − (1/3)Tj3, and
  // each T is the Taylor polynomial of its formula.
  if (cap >= 3) {
    const auto t = third_order_taylor();
    const auto rhs = t.s2 * Rational(2, 3) + t.s2_swapped * Rational(2, 3) - t.j2 * Rational(1, 3);
    out.push_back(detail::agreement_claim("T°3 = 2/3 Ts3 + 2/3 T~s3 - 1/3 Tj3", t.exact, rhs, 3));
    const std::vector<std::size_t> swap{1, 0};
    out.push_back(detail::agreement_claim("T°3 is the cubic Taylor polynomial of G",
                                          symbolic_formula(R::exact(), 2, 3), t.exact, 3));
    out.push_back(detail::agreement_claim(
        "Ts3 is the cubic Taylor polynomial of U_{exp(tA/2)}(exp(tB))",
        relabel(symbolic_formula(R::s2(), 2, 3), swap), t.s2, 3));
    out.push_back(detail::agreement_claim(
        "T~s3 is the cubic Taylor polynomial of U_{exp(tB/2)}(exp(tA))",
        symbolic_formula(R::s2(), 2, 3), t.s2_swapped, 3));
    out.push_back(detail::agreement_claim("Tj3 is the cubic Taylor polynomial of exp(tA)∘exp(tB)",
                                          symbolic_formula(R::j2(), 2, 3), t.j2, 3));
  }

  // Recursions at the irrational solved coefficients, decided exactly in
  // Q(2^{1/3}).
  const auto minpoly3 = order_condition_polynomial(3);
  {
    const int k = cap_at(3);
    auto fam = nonsymmetric_family(R::j2(), 3, 2, k);
    out.push_back(detail::parametric_claim(
        "nonsymmetric Q3 from J2 with c=(u,1-2u,u), u=1/(2-2^{1/3}): = G",
        verify_parametric_order(fam, symbolic_formula(R::exact(), 2, k), minpoly3, k), true));
  }
  {
    const int k = cap_at(4);
    auto fam = symmetric_family(R::s2(), 3, 2, k);
    out.push_back(detail::parametric_claim(
        "symmetric Q~3 from S2 with d=(1-2u,u), u=1/(2-2^{1/3}): = G (order boost to 4)",
        verify_parametric_order(fam, symbolic_formula(R::exact(), 2, k), minpoly3, k), true));
    if (cap >= 5) {
      auto fam5 = symmetric_family(R::s2(), 3, 2, 5);
      out.push_back(detail::parametric_claim(
          "symmetric Q~3 from S2: != G at degree 5",
          verify_parametric_order(fam5, symbolic_formula(R::exact(), 2, 5), minpoly3, 5), false));
    }
  }

  // A rational r=4 solution of sum c = 1, sum c^3 = 0.
  {
    const int k = cap_at(3);
    auto child = std::make_shared<const R>(R::j2());
    const auto spec = R::nonsymmetric({{Rational(1, 2), child},
                                       {Rational(2, 3), child},
                                       {Rational(5, 6), child},
                                       {Rational(-1), child}},
                                      3);
    out.push_back(detail::agreement_claim("nonsymmetric Q3 from J2 with c=(1/2,2/3,5/6,-1): = G",
                                          symbolic_formula(spec, 2, k),
                                          symbolic_formula(R::exact(), 2, k), k));
  }

  // Order-condition mechanism: the degree-3 residual of a composition with
  // sum c = 1 is (sum of cubed coefficients)·(P3 − G3).
  if (cap >= 3) {
    const auto g3 = extract_degree(symbolic_formula(R::exact(), 2, 3), 3);
    const auto mechanism = [&](const char* name, const R& child, bool symmetric) {
      const auto p3 = extract_degree(symbolic_formula(child, 2, 3), 3);
      const auto reference = p3 - g3;
      bool ok = true;
      std::string detail;
      for (const Rational& u : {Rational(1, 3), Rational(1, 2), Rational(2, 5), Rational(-1, 4)}) {
        const Rational mid = Rational(1) - Rational(2) * u;
        auto ptr = std::make_shared<const R>(child);
        const R spec = symmetric
                           ? R::symmetric({mid, u}, ptr, 3, CoefficientCheck::kSkip)
                           : R::nonsymmetric({{u, ptr}, {mid, ptr}, {u, ptr}}, 3,
                                             CoefficientCheck::kSkip);
        const Rational cubes = Rational(2) * u * u * u + mid * mid * mid;
        const auto residual = extract_degree(symbolic_formula(spec, 2, 3), 3) - g3;
        const auto beta = proportionality_factor(residual, reference);
        if (!beta || *beta != cubes || residual.is_zero()) {
          ok = false;
          detail = "u=" + u.str() + ": multiplier " + (beta ? beta->str() : "none") +
                   ", expected " + cubes.str();
          break;
        }
      }
      out.push_back({name, 3, ok, detail});
    };
    mechanism("nonsymmetric residual_3 = (sum c^3)(P3 - G3), child J2", R::j2(), false);
    mechanism("symmetric residual_3 = (d1^3 + 2 d2^3)(P3 - G3), child S2", R::s2(), true);
  }

  // Symmetric compositions are time-reversible for any coefficients.
  {
    const int k = cap;
    auto ptr = std::make_shared<const R>(R::s2());
    const auto spec =
        R::symmetric({Rational(3, 7), Rational(2, 7)}, ptr, 3, CoefficientCheck::kSkip);
    const auto f = symbolic_formula(spec, 2, k);
    out.push_back(detail::agreement_claim("Q~(t) Q~(-t) = I, d=(3/7,2/7)",
                                          series_mul(f, time_scale(f, Rational(-1))),
                                          TruncatedSeries::unit(2, k), k));
  }
  return rep;
}

inline void write_verify_report(const VerifyReport& rep, std::ostream& os) {
  for (const auto& c : rep.claims) {
    os << (c.passed ? "[PASS] " : "[FAIL] ") << c.claim << " (through degree " << c.degree << ")";
    if (!c.detail.empty()) os << ": " << c.detail;
    os << '\n';
  }
  std::size_t passed = 0;
  for (const auto& c : rep.claims) passed += c.passed;
  os << passed << "/" << rep.claims.size() << " claims passed\n";
}

// ---------------------------------------------------------------------------
// bounds

struct BoundRow {
  std::string theorem;
  std::size_t sample = 0;
  double t_or_n = 0.0;
  double empirical = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
};

inline const std::vector<std::string>& bound_theorems() {
  static const std::vector<std::string> ids{"j2-nstep",   "s2",         "qs2",
                                            "j2-unitary", "s2-unitary", "q3"};
  return ids;
}

inline constexpr std::array<unsigned, 7> kBoundSteps{1, 2, 4, 8, 16, 32, 64};
inline constexpr std::array<double, 3> kBoundTimes{0.1, 0.5, 1.0};
inline constexpr std::size_t kBoundDim = 4;

/// Monte-Carlo comparison of every bound evaluator against the measured
/// operator-norm error. Sample s of theorem k is drawn from its own stream
/// seeded by (seed, k, s).
inline std::vector<BoundRow> run_bounds(const RunConfig& cfg) {
  const auto& ids = bound_theorems();
  const std::size_t total = ids.size() * cfg.samples;
  std::vector<std::vector<BoundRow>> slots(total);
  parallel_for(total, cfg.jobs, [&](std::size_t idx) {
    const std::size_t th = idx / cfg.samples;
    const std::size_t sample = idx % cfg.samples;
    const std::string& id = ids[th];
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                      static_cast<std::uint32_t>(th), static_cast<std::uint32_t>(sample)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::size_t m = 1 + sample % 3;
    if (id == "qs2") m = sample % 2 == 0 ? 3 : 5;
    if (id == "q3") m = 2;
    std::vector<ComplexMatrix> terms;
    std::vector<double> norms;
    for (std::size_t k = 0; k < m; ++k) {
      const double target = 1.0 - unit(rng);  // (0, 1]
      terms.push_back(random_hermitian(kBoundDim, target, rng));
      norms.push_back(norm(terms.back(), NormKind::Operator2));
    }
    const TermList list(terms);
    auto& rows = slots[idx];
    const auto push = [&](double x, double empirical, double bound) {
      const auto rep = ErrorReport::make(empirical, bound, NormKind::Operator2, id, 1, x);
      rows.push_back({id, sample, x, empirical, bound, *rep.ratio});
    };

    if (id == "j2-nstep" || id == "j2-unitary" || id == "s2-unitary") {
      const bool unitary = id != "j2-nstep";
      const Complex z = unitary ? Complex(0.0, 1.0) : Complex(1.0);
      const auto formula = id == "s2-unitary" ? FormulaSpec::s2() : FormulaSpec::j2();
      const auto exact = eval_g(z, list);
      for (unsigned n : kBoundSteps) {
        const double err =
            empirical_unitary_error(n_step_evolution(formula, list, z, n), exact, NormKind::Operator2);
        const double b = id == "j2-nstep"     ? bound_j2_nstep(n, norms)
                         : id == "j2-unitary" ? bound_j2_unitary(n, norms)
                                              : bound_s2_unitary(n, static_cast<unsigned>(m), norms);
        push(n, err, b);
      }
    } else {
      for (double t : kBoundTimes) {
        const Complex z(t);
        const auto exact = eval_g(z, list);
        double err = 0.0, b = 0.0;
        if (id == "s2") {
          err = empirical_unitary_error(eval_s2(z, list), exact, NormKind::Operator2);
          b = bound_s2(t, static_cast<unsigned>(m), norms);
        } else if (id == "qs2") {
          err = empirical_unitary_error(eval_qs2(z, list), exact, NormKind::Operator2);
          b = bound_qs2(t, static_cast<unsigned>((m - 1) / 2), norms);
        } else {
          err = empirical_unitary_error(eval_q3(z, terms[0], terms[1]), exact, NormKind::Operator2);
          b = bound_q3(t, norms[0], norms[1]);
        }
        push(t, err, b);
      }
    }
  });
  std::vector<BoundRow> rows;
  for (auto& s : slots)
    for (auto& r : s) rows.push_back(std::move(r));
  return rows;
}

inline void write_bounds_csv(const std::vector<BoundRow>& rows, std::ostream& os) {
  os << "theorem,sample,t_or_n,empirical,bound,ratio\n";
  for (const auto& r : rows) {
    os << r.theorem << ',' << r.sample << ',' << format_double(r.t_or_n) << ','
       << format_double(r.empirical) << ',' << format_double(r.bound) << ','
       << format_double(r.ratio) << '\n';
  }
}

struct BoundSummary {
  std::string theorem;
  std::size_t rows = 0;
  double max_ratio = 0.0;
  std::size_t violations = 0;
};

inline std::vector<BoundSummary> summarize_bounds(const std::vector<BoundRow>& rows) {
  std::vector<BoundSummary> out;
  for (const auto& id : bound_theorems()) {
    BoundSummary s{id};
    for (const auto& r : rows) {
      if (r.theorem != id) continue;
      ++s.rows;
      s.max_ratio = std::max(s.max_ratio, r.ratio);
      s.violations += !(r.ratio <= 1.0);
    }
    out.push_back(s);
  }
  return out;
}

// ---------------------------------------------------------------------------
// contour: H = d1 X + d2 Y at t = 1, so the axes are t·d1 and t·d2.

struct ContourResult {
  std::vector<FormulaId> formulas;
  std::vector<double> td1, td2;
  std::vector<double> errors;  // [(i * td2.size() + j) * formulas.size() + f]

  double error(std::size_t i, std::size_t j, std::size_t f) const {
    return errors[(i * td2.size() + j) * formulas.size() + f];
  }
};

inline std::vector<FormulaId> parse_formula_list(const std::vector<std::string>& names,
                                                 std::vector<FormulaId> fallback) {
  if (names.empty()) return fallback;
  std::vector<FormulaId> out;
  for (const auto& n : names) out.push_back(parse_formula_id(n));
  return out;
}

/// Frobenius error of each formula against the eigendecomposition-exact
/// evolution of H = td1 X + td2 Y over unit time.
inline std::vector<double> contour_point(const std::vector<FormulaId>& formulas, double td1,
                                         double td2) {
  const auto a = pauli::x() * Complex(td1);
  const auto b = pauli::y() * Complex(td2);
  const auto exact = exact_two_level_evolution(a + b, 1.0);
  std::vector<double> out;
  for (auto id : formulas)
    out.push_back(norm(evolve_pair(id, Complex(0.0, -1.0), a, b) - exact, NormKind::Frobenius));
  return out;
}

inline std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i)
    g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return g;
}

inline ContourResult run_contour(const RunConfig& cfg) {
  if (cfg.grid < 2) throw UsageError("--grid must be at least 2");
  if (!(cfg.d1_min < cfg.d1_max) || !(cfg.d2_min < cfg.d2_max)) {
    throw UsageError("contour ranges must satisfy min < max");
  }
  for (double v : {cfg.d1_min, cfg.d1_max, cfg.d2_min, cfg.d2_max})
    if (!std::isfinite(v)) throw UsageError("contour ranges must be finite");
  ContourResult r;
  r.formulas = parse_formula_list(cfg.formulas, {FormulaId::S3, FormulaId::Q3});
  for (auto id : r.formulas)
    if (id == FormulaId::QS2) throw UsageError("qs2 is not defined for the two-term contour");
  r.td1 = linear_grid(cfg.d1_min, cfg.d1_max, cfg.grid);
  r.td2 = linear_grid(cfg.d2_min, cfg.d2_max, cfg.grid);
  const std::size_t nf = r.formulas.size();
  r.errors.assign(cfg.grid * cfg.grid * nf, 0.0);
  parallel_for(cfg.grid, cfg.jobs, [&](std::size_t i) {
    for (std::size_t j = 0; j < cfg.grid; ++j) {
      const auto e = contour_point(r.formulas, r.td1[i], r.td2[j]);
      std::copy(e.begin(), e.end(), r.errors.begin() + (i * cfg.grid + j) * nf);
    }
  });
  return r;
}

inline void write_contour_csv(const ContourResult& r, std::ostream& os) {
  os << "td1,td2";
  for (auto id : r.formulas) os << ",err_" << to_string(id);
  os << '\n';
  for (std::size_t i = 0; i < r.td1.size(); ++i) {
    for (std::size_t j = 0; j < r.td2.size(); ++j) {
      os << format_double(r.td1[i]) << ',' << format_double(r.td2[j]);
      for (std::size_t f = 0; f < r.formulas.size(); ++f) os << ',' << format_double(r.error(i, j, f));
      os << '\n';
    }
  }
}

struct ContourCheck {
  std::string name;
  bool passed;
  std::string detail;
};

inline constexpr double kAxisTolerance = 1e-10;

/// Figure claims: q3 beats s3 at (4, 4) and at the diagonal nodes nearest
/// td = ±4, and every formula is exact along both axes.
inline std::vector<ContourCheck> check_contour(const ContourResult& r) {
  std::vector<ContourCheck> out;
  double axis_max = 0.0;
  for (std::size_t i = 0; i < r.td1.size(); ++i)
    for (std::size_t j = 0; j < r.td2.size(); ++j)
      if (r.td1[i] == 0.0 || r.td2[j] == 0.0 || std::abs(r.td1[i]) < 1e-14 ||
          std::abs(r.td2[j]) < 1e-14)
        for (std::size_t f = 0; f < r.formulas.size(); ++f) axis_max = std::max(axis_max, r.error(i, j, f));
  out.push_back({"errors along both axes < 1e-10", axis_max < kAxisTolerance,
                 "max " + format_double(axis_max)});

  const auto pos = [&](FormulaId id) -> std::optional<std::size_t> {
    auto it = std::find(r.formulas.begin(), r.formulas.end(), id);
    if (it == r.formulas.end()) return std::nullopt;
    return static_cast<std::size_t>(it - r.formulas.begin());
  };
  const auto s3 = pos(FormulaId::S3), q3 = pos(FormulaId::Q3);
  if (!s3 || !q3) return out;

  const auto direct = contour_point({FormulaId::S3, FormulaId::Q3}, 4.0, 4.0);
  out.push_back({"err_q3 < err_s3 at (4, 4)", direct[1] < direct[0],
                 "err_s3 " + format_double(direct[0]) + ", err_q3 " + format_double(direct[1])});

  for (double target : {4.0, -4.0}) {
    const auto nearest = [&](const std::vector<double>& g) {
      std::size_t best = 0;
      for (std::size_t k = 1; k < g.size(); ++k)
        if (std::abs(g[k] - target) < std::abs(g[best] - target)) best = k;
      return best;
    };
    const std::size_t i = nearest(r.td1), j = nearest(r.td2);
    const double es = r.error(i, j, *s3), eq = r.error(i, j, *q3);
    out.push_back({"err_q3 < err_s3 at grid node nearest (" + format_double(target) + ", " +
                       format_double(target) + ")",
                   eq < es,
                   "node (" + format_double(r.td1[i]) + ", " + format_double(r.td2[j]) +
                       "): err_s3 " + format_double(es) + ", err_q3 " + format_double(eq)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// fidelity: H = alpha Z + beta X, psi0 = |0>.

struct FidelityResult {
  std::vector<FormulaId> formulas;
  std::vector<double> t;
  std::vector<std::vector<double>> eps;  // eps[k][f]
};

inline FidelityResult run_fidelity(const RunConfig& cfg) {
  const double t_min = cfg.t_min.value_or(0.0);
  const double t_max = cfg.t_max.value_or(10.0);
  const std::size_t points = cfg.points.value_or(500);
  if (!(t_min >= 0.0) || !(t_max > t_min) || !std::isfinite(t_max)) {
    throw UsageError("fidelity needs 0 <= t-min < t-max");
  }
  if (points < 1) throw UsageError("--points must be positive");
  FidelityResult r;
  r.formulas = parse_formula_list(
      cfg.formulas, {FormulaId::J1, FormulaId::S2, FormulaId::S3, FormulaId::Q3});
  for (auto id : r.formulas)
    if (id == FormulaId::QS2) throw UsageError("qs2 is not defined for the two-term fidelity run");
  const auto a = pauli::z() * Complex(cfg.alpha);
  const auto b = pauli::x() * Complex(cfg.beta);
  const std::array<Complex, 2> psi0{Complex(1.0), Complex(0.0)};
  r.t.resize(points);
  r.eps.resize(points);
  parallel_for(points, cfg.jobs, [&](std::size_t k) {
    const double t = t_min + (t_max - t_min) * static_cast<double>(k + 1) / static_cast<double>(points);
    r.t[k] = t;
    const auto exact = exact_single_qubit(t, cfg.alpha, cfg.beta);
    for (auto id : r.formulas)
      r.eps[k].push_back(state_error(evolve_pair(id, Complex(0.0, -t), a, b), exact, psi0));
  });
  return r;
}

inline void write_fidelity_csv(const FidelityResult& r, std::ostream& os) {
  os << 't';
  for (auto id : r.formulas) os << ",eps_" << to_string(id);
  os << '\n';
  for (std::size_t k = 0; k < r.t.size(); ++k) {
    os << format_double(r.t[k]);
    for (double e : r.eps[k]) os << ',' << format_double(e);
    os << '\n';
  }
}

inline constexpr double kFidelityWindow = 0.5;
inline constexpr double kFidelityExactFloor = 1e-12;

/// On t ∈ (0, 0.5]: eps_j1 ≥ eps_s2 ≥ eps_q3 pointwise, and each curve is
/// nondecreasing in t (so it decays monotonically as t → 0). When every
/// error is at rounding level only that fact is checked.
inline std::vector<ContourCheck> check_fidelity(const FidelityResult& r) {
  std::vector<ContourCheck> out;
  const auto pos = [&](FormulaId id) -> std::optional<std::size_t> {
    auto it = std::find(r.formulas.begin(), r.formulas.end(), id);
    if (it == r.formulas.end()) return std::nullopt;
    return static_cast<std::size_t>(it - r.formulas.begin());
  };
  std::size_t window = 0;
  while (window < r.t.size() && r.t[window] <= kFidelityWindow) ++window;

  // Commuting terms: every formula is exact up to rounding.
  double largest = 0.0;
  for (const auto& row : r.eps)
    for (double e : row) largest = std::max(largest, e);
  if (largest < kFidelityExactFloor) {
    out.push_back({"all errors < 1e-12 (commuting terms)", true, "max " + format_double(largest)});
    return out;
  }

  const auto j1 = pos(FormulaId::J1), s2 = pos(FormulaId::S2), q3 = pos(FormulaId::Q3);
  if (j1 && s2 && q3) {
    std::size_t bad = 0;
    std::string first;
    for (std::size_t k = 0; k < window; ++k) {
      const auto& e = r.eps[k];
      if (!(e[*j1] >= e[*s2] && e[*s2] >= e[*q3])) {
        if (bad++ == 0) first = " first at t=" + format_double(r.t[k]);
      }
    }
    out.push_back({"eps_j1 >= eps_s2 >= eps_q3 on (0, 0.5]", window > 0 && bad == 0,
                   std::to_string(window) + " points, " + std::to_string(bad) + " violations" +
                       first});
  }
  for (std::size_t f = 0; f < r.formulas.size(); ++f) {
    std::size_t bad = 0;
    for (std::size_t k = 1; k < window; ++k) bad += r.eps[k][f] < r.eps[k - 1][f];
    out.push_back({std::string("eps_") + to_string(r.formulas[f]) + " decreases to 0 as t -> 0",
                   window > 1 && bad == 0,
                   "smallest-t value " + (r.eps.empty() ? std::string("n/a") : format_double(r.eps[0][f])) +
                       ", " + std::to_string(bad) + " non-monotone steps"});
  }
  return out;
}

// ---------------------------------------------------------------------------
// slope

struct SlopeResult {
  std::string formula;
  double slope = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  NormKind norm = NormKind::Frobenius;
  std::vector<OrderSample> samples;
  bool near_floor = false;  // some error below 1e-12
  bool passed() const { return std::abs(slope - target) <= tolerance; }
};

inline constexpr double kSlopeTolerance = 0.2;
inline constexpr double kSlopeToleranceOrder5 = 0.3;
inline constexpr double kSlopeWarnFloor = 1e-12;
inline constexpr unsigned kNStepMin = 2;
inline constexpr unsigned kNStepMax = 128;

/// Fitted error slope of a formula. Single-step formulas: ‖F(−it) − G(−it)‖
/// against t on H = X + Y (X + Y + Z for qs2), target order + 1.
/// "j2-nstep": ‖G(1) − [J2(1/n)]^n‖ against n ∈ 2..128, target −2.
inline SlopeResult run_slope(const std::string& formula, const RunConfig& cfg) {
  SlopeResult r;
  r.formula = formula;
  if (formula == "j2-nstep") {
    r.target = -2.0;
    r.tolerance = kSlopeTolerance;
    r.norm = cfg.norm.value_or(NormKind::Operator2);
    const TermList terms{pauli::x(), pauli::y()};
    const auto exact = eval_g(Complex(1.0), terms);
    for (unsigned n = kNStepMin; n <= kNStepMax; ++n) {
      const auto approx = n_step_evolution(FormulaSpec::j2(), terms, Complex(1.0), n);
      r.samples.push_back({static_cast<double>(n), norm(approx - exact, r.norm)});
    }
  } else {
    const auto id = parse_formula_id(formula);
    const auto spec = spec_for(id);
    r.target = spec.order() + 1.0;
    r.tolerance = r.target >= 5.0 ? kSlopeToleranceOrder5 : kSlopeTolerance;
    r.norm = cfg.norm.value_or(NormKind::Frobenius);
    const double t_lo = cfg.t_min.value_or(std::pow(10.0, -2.5));
    const double t_hi = cfg.t_max.value_or(0.1);
    if (!(t_lo > 0.0) || !(t_hi > t_lo)) throw UsageError("slope needs 0 < t-min < t-max");
    const std::size_t points = cfg.points.value_or(14);
    const auto ts = log_space(std::log10(t_lo), std::log10(t_hi), points);
    const TermList terms = id == FormulaId::QS2 ? TermList{pauli::x(), pauli::y(), pauli::z()}
                                                : TermList{pauli::x(), pauli::y()};
    for (double t : ts) {
      const Complex z(0.0, -t);
      const auto approx = id == FormulaId::QS2 ? evaluate(spec, z, terms)
                                               : evolve_pair(id, z, terms[0], terms[1]);
      r.samples.push_back({t, norm(approx - eval_g(z, terms), r.norm)});
    }
  }
  for (const auto& s : r.samples) r.near_floor |= s.err < kSlopeWarnFloor;
  r.slope = fit_order(r.samples);
  return r;
}

}  // namespace jtrotter
