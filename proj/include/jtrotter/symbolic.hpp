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

// Exact truncated series in the free associative algebra on m generators.
// The time variable is tracked by word length, so exp(c t A_k) is the series
// Σ_j c^j/j! A_k^j and a formula's Taylor coefficient of t^d is its degree-d
// homogeneous component.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "jtrotter/error.hpp"
#include "jtrotter/formulas.hpp"

namespace jtrotter {

using Rational = boost::multiprecision::cpp_rational;

inline std::string to_string(const Rational& q) { return q.str(); }

/// Monomial in the free algebra; the empty word is the unit.
struct Word {
  std::vector<std::uint8_t> letters;

  std::size_t degree() const { return letters.size(); }

  /// Degree-major, then lexicographic.
  friend bool operator<(const Word& a, const Word& b) {
    if (a.letters.size() != b.letters.size()) return a.letters.size() < b.letters.size();
    return a.letters < b.letters;
  }
  friend bool operator==(const Word&, const Word&) = default;

  friend Word operator+(const Word& a, const Word& b) {
    Word w;
    w.letters.reserve(a.letters.size() + b.letters.size());
    w.letters.insert(w.letters.end(), a.letters.begin(), a.letters.end());
    w.letters.insert(w.letters.end(), b.letters.begin(), b.letters.end());
    return w;
  }

  std::string str() const {
    if (letters.empty()) return "1";
    std::string s;
    for (auto g : letters) s.push_back(static_cast<char>('A' + g));
    return s;
  }

  /// Parses "AB", "ABA", "1" (unit).
  static Word parse(const std::string& s) {
    Word w;
    if (s == "1") return w;
    for (char ch : s) {
      if (ch < 'A' || ch > 'Z') throw UsageError("Word::parse: bad letter in '" + s + "'");
      w.letters.push_back(static_cast<std::uint8_t>(ch - 'A'));
    }
    return w;
  }
};

/// Polynomial in m noncommuting generators with exact rational coefficients,
/// truncated above `max_degree`. Zero coefficients are never stored.
class TruncatedSeries {
 public:
  using Terms = std::map<Word, Rational>;

  TruncatedSeries(std::size_t generators, int max_degree)
      : generators_(generators), max_degree_(max_degree) {
    if (generators == 0 || generators > 26) {
      throw UsageError("TruncatedSeries: generator count must be in 1..26");
    }
    if (max_degree < 0) throw UsageError("TruncatedSeries: max_degree must be >= 0");
  }

  static TruncatedSeries unit(std::size_t generators, int max_degree) {
    TruncatedSeries s(generators, max_degree);
    s.add_term(Word{}, Rational(1));
    return s;
  }

  /// The degree-1 series of generator g.
  static TruncatedSeries generator(std::size_t generators, int max_degree, std::size_t g) {
    TruncatedSeries s(generators, max_degree);
    s.add_term(Word{{static_cast<std::uint8_t>(g)}}, Rational(1));
    return s;
  }

  std::size_t generators() const { return generators_; }
  int max_degree() const { return max_degree_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  Rational coefficient(const Word& w) const {
    auto it = terms_.find(w);
    return it == terms_.end() ? Rational(0) : it->second;
  }
  Rational coefficient(const std::string& w) const { return coefficient(Word::parse(w)); }

  /// Adds c·w; words beyond max_degree are dropped (explicit truncation).
  void add_term(const Word& w, const Rational& c) {
    for (auto g : w.letters)
      if (g >= generators_) throw UsageError("TruncatedSeries: generator index out of range");
    if (static_cast<int>(w.degree()) > max_degree_ || c == 0) return;
    auto [it, inserted] = terms_.try_emplace(w, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  TruncatedSeries& operator+=(const TruncatedSeries& o) {
    check_compatible(o);
    lower_max_degree(o.max_degree_);
    for (const auto& [w, c] : o.terms_) add_term(w, c);
    return *this;
  }

  TruncatedSeries& operator-=(const TruncatedSeries& o) {
    check_compatible(o);
    lower_max_degree(o.max_degree_);
    for (const auto& [w, c] : o.terms_) add_term(w, -c);
    return *this;
  }

  TruncatedSeries& operator*=(const Rational& s) {
    if (s == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [w, c] : terms_) c *= s;
    return *this;
  }

  friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
    return a.generators_ == b.generators_ && a.max_degree_ == b.max_degree_ && a.terms_ == b.terms_;
  }

  void check_compatible(const TruncatedSeries& o) const {
    if (generators_ != o.generators_) {
      throw UsageError("TruncatedSeries: generator count mismatch (" + std::to_string(generators_) +
                       " vs " + std::to_string(o.generators_) + ")");
    }
  }

  /// Drops every word above `d` and lowers the declared truncation degree.
  void lower_max_degree(int d) {
    if (d >= max_degree_) return;
    max_degree_ = d;
    for (auto it = terms_.begin(); it != terms_.end();) {
      it = static_cast<int>(it->first.degree()) > d ? terms_.erase(it) : std::next(it);
    }
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [w, c] : terms_) {
      if (!first) os << " + ";
      first = false;
      os << c.str() << "*" << w.str();
    }
    return os.str();
  }

 private:
  std::size_t generators_;
  int max_degree_;
  Terms terms_;
};

inline TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
inline TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
inline TruncatedSeries operator*(TruncatedSeries a, const Rational& s) { return a *= s; }
inline TruncatedSeries operator*(const Rational& s, TruncatedSeries a) { return a *= s; }

inline TruncatedSeries series_add(const TruncatedSeries& f, const TruncatedSeries& g) {
  return f + g;
}
inline TruncatedSeries series_scale(const TruncatedSeries& f, const Rational& s) { return f * s; }

/// Associative product, truncated at the smaller max degree.
inline TruncatedSeries series_mul(const TruncatedSeries& f, const TruncatedSeries& g) {
  f.check_compatible(g);
  const int d = std::min(f.max_degree(), g.max_degree());
  TruncatedSeries out(f.generators(), d);
  for (const auto& [wf, cf] : f.terms()) {
    if (static_cast<int>(wf.degree()) > d) break;
    for (const auto& [wg, cg] : g.terms()) {
      if (static_cast<int>(wf.degree() + wg.degree()) > d) break;
      out.add_term(wf + wg, cf * cg);
    }
  }
  return out;
}

inline TruncatedSeries operator*(const TruncatedSeries& f, const TruncatedSeries& g) {
  return series_mul(f, g);
}

/// f∘g = (fg + gf)/2.
inline TruncatedSeries series_jordan(const TruncatedSeries& f, const TruncatedSeries& g) {
  return (series_mul(f, g) + series_mul(g, f)) * Rational(1, 2);
}

/// {f,g,h} in the special form (fgh + hgf)/2.
inline TruncatedSeries series_triple(const TruncatedSeries& f, const TruncatedSeries& g,
                                     const TruncatedSeries& h) {
  return (series_mul(series_mul(f, g), h) + series_mul(series_mul(h, g), f)) * Rational(1, 2);
}

/// {f,g,h} = (f∘g)∘h + (g∘h)∘f − (h∘f)∘g, from Jordan products only.
inline TruncatedSeries series_triple_composed(const TruncatedSeries& f, const TruncatedSeries& g,
                                              const TruncatedSeries& h) {
  return series_jordan(series_jordan(f, g), h) + series_jordan(series_jordan(g, h), f) -
         series_jordan(series_jordan(h, f), g);
}

/// exp(c t A_gen) = Σ_{k ≤ max_degree} c^k/k! A_gen^k.
inline TruncatedSeries series_exp(const Rational& c, std::size_t gen, std::size_t generators,
                                  int max_degree) {
  if (gen >= generators) throw UsageError("series_exp: generator index out of range");
  TruncatedSeries out(generators, max_degree);
  Word w;
  Rational coeff(1);
  for (int k = 0; k <= max_degree; ++k) {
    out.add_term(w, coeff);
    w.letters.push_back(static_cast<std::uint8_t>(gen));
    coeff = coeff * c / Rational(k + 1);
  }
  return out;
}

/// exp(x) for a series with zero constant term.
inline TruncatedSeries series_exp(const TruncatedSeries& x) {
  if (x.coefficient(Word{}) != 0) throw UsageError("series_exp: constant term must vanish");
  auto out = TruncatedSeries::unit(x.generators(), x.max_degree());
  auto power = out;
  for (int k = 1; k <= x.max_degree(); ++k) {
    power = series_mul(power, x) * Rational(1, k);
    out += power;
  }
  return out;
}

/// f evaluated at c·t: each degree-k coefficient scales by c^k.
inline TruncatedSeries time_scale(const TruncatedSeries& f, const Rational& c) {
  TruncatedSeries out(f.generators(), f.max_degree());
  std::vector<Rational> powers{Rational(1)};
  for (const auto& [w, coeff] : f.terms()) {
    while (powers.size() <= w.degree()) powers.push_back(powers.back() * c);
    out.add_term(w, coeff * powers[w.degree()]);
  }
  return out;
}

/// Renames generator g to perm[g].
inline TruncatedSeries relabel(const TruncatedSeries& f, const std::vector<std::size_t>& perm) {
  if (perm.size() != f.generators()) throw UsageError("relabel: permutation size mismatch");
  TruncatedSeries out(f.generators(), f.max_degree());
  for (const auto& [w, c] : f.terms()) {
    Word r;
    for (auto g : w.letters) r.letters.push_back(static_cast<std::uint8_t>(perm.at(g)));
    out.add_term(r, c);
  }
  return out;
}

/// All (word, coefficient) pairs of degree exactly n.
inline TruncatedSeries extract_degree(const TruncatedSeries& f, int n) {
  if (n < 0 || n > f.max_degree()) throw UsageError("extract_degree: degree outside the series");
  TruncatedSeries out(f.generators(), f.max_degree());
  for (const auto& [w, c] : f.terms())
    if (static_cast<int>(w.degree()) == n) out.add_term(w, c);
  return out;
}

inline TruncatedSeries truncate(TruncatedSeries f, int d) {
  f.lower_max_degree(d);
  return f;
}

// ---------------------------------------------------------------------------
// Order checks.

struct Witness {
  int degree;
  Word word;
  Rational delta;  // coefficient of f minus coefficient of g
};

struct OrderCheck {
  bool agrees = true;
  int checked_degree = 0;
  std::optional<Witness> witness;
};

/// True iff f and g agree exactly through degree k; otherwise reports the
/// first differing word in degree-major order.
inline OrderCheck verify_order(const TruncatedSeries& f, const TruncatedSeries& g, int k) {
  f.check_compatible(g);
  if (k > f.max_degree() || k > g.max_degree()) {
    throw UsageError("verify_order: degree " + std::to_string(k) + " exceeds a truncation degree");
  }
  const auto diff = truncate(f, k) - truncate(g, k);
  OrderCheck out;
  out.checked_degree = k;
  if (!diff.is_zero()) {
    const auto& [w, c] = *diff.terms().begin();
    out.agrees = false;
    out.witness = Witness{static_cast<int>(w.degree()), w, c};
  }
  return out;
}

/// β with f = β g exactly, if one exists (g must be nonzero).
inline std::optional<Rational> proportionality_factor(const TruncatedSeries& f,
                                                      const TruncatedSeries& g) {
  f.check_compatible(g);
  if (g.is_zero()) return std::nullopt;
  const auto& [w0, c0] = *g.terms().begin();
  const Rational beta = f.coefficient(w0) / c0;
  if (f - g * beta == TruncatedSeries(f.generators(), std::min(f.max_degree(), g.max_degree()))) {
    return beta;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Formula series.

using RationalFormulaSpec = BasicFormulaSpec<Rational>;

namespace detail {

inline TruncatedSeries symbolic_formula_impl(
    const RationalFormulaSpec& spec, std::size_t m, int d,
    std::unordered_map<const RationalFormulaSpec*, TruncatedSeries>& memo) {
  auto child_series = [&](const RationalFormulaSpec::Ptr& child) -> const TruncatedSeries& {
    auto it = memo.find(child.get());
    if (it == memo.end())
      it = memo.emplace(child.get(), symbolic_formula_impl(*child, m, d, memo)).first;
    return it->second;
  };
  auto ex = [&](const Rational& c, std::size_t k) { return series_exp(c, k, m, d); };
  const Rational half(1, 2);

  switch (spec.kind()) {
    case FormulaKind::GExact: {
      TruncatedSeries sum(m, d);
      for (std::size_t k = 0; k < m; ++k) sum += TruncatedSeries::generator(m, d, k);
      return series_exp(sum);
    }
    case FormulaKind::J1Assoc: {
      auto acc = ex(1, 0);
      for (std::size_t k = 1; k < m; ++k) acc = series_mul(acc, ex(1, k));
      return acc;
    }
    case FormulaKind::J2: {
      auto acc = ex(1, 0);
      for (std::size_t k = 1; k < m; ++k) acc = series_jordan(ex(1, k), acc);
      return acc;
    }
    case FormulaKind::S2: {
      auto acc = ex(1, 0);
      for (std::size_t k = 1; k < m; ++k) {
        const auto outer = ex(half, k);
        acc = series_triple(outer, acc, outer);
      }
      return acc;
    }
    case FormulaKind::QS2: {
      if (m % 2 == 0) throw UsageError("qs2: needs an odd number of generators");
      auto acc = ex(1, 0);
      for (std::size_t k = 1; k + 1 < m; k += 2) acc = series_triple(ex(1, k), acc, ex(1, k + 1));
      return acc;
    }
    case FormulaKind::Q3: {
      if (m != 2) throw UsageError("q3: defined for exactly two generators");
      const auto w = spec.weights();
      const auto s2 = series_triple(ex(half, 0), ex(1, 1), ex(half, 0));
      const auto s2_swapped = series_triple(ex(half, 1), ex(1, 0), ex(half, 1));
      const auto j2 = series_jordan(ex(1, 0), ex(1, 1));
      return s2 * w[0] + s2_swapped * w[1] + j2 * w[2];
    }
    case FormulaKind::S3Suzuki: {
      const auto st = spec.stages();
      auto acc = time_scale(child_series(st[0].child), st[0].coefficient);
      for (std::size_t j = 1; j < st.size(); ++j)
        acc = series_mul(acc, time_scale(child_series(st[j].child), st[j].coefficient));
      return acc;
    }
    case FormulaKind::NonSymRec: {
      const auto st = spec.stages();
      auto acc = time_scale(child_series(st[0].child), st[0].coefficient);
      for (std::size_t j = 1; j < st.size(); ++j)
        acc = series_jordan(acc, time_scale(child_series(st[j].child), st[j].coefficient));
      return acc;
    }
    case FormulaKind::SymRec: {
      const auto st = spec.stages();
      auto acc = time_scale(child_series(st[0].child), st[0].coefficient);
      for (std::size_t j = 1; j < st.size(); ++j) {
        const auto outer = time_scale(child_series(st[j].child), st[j].coefficient);
        acc = series_triple(outer, acc, outer);
      }
      return acc;
    }
  }
  throw UsageError("symbolic_formula: unknown formula kind");
}

}  // namespace detail

/// Series of an approximant on m free generators, truncated at max_degree.
inline TruncatedSeries symbolic_formula(const RationalFormulaSpec& spec, std::size_t m,
                                        int max_degree) {
  std::unordered_map<const RationalFormulaSpec*, TruncatedSeries> memo;
  return detail::symbolic_formula_impl(spec, m, max_degree, memo);
}

/// The exact rational equal to x, if x round-trips from a fraction with
/// denominator at most 10^6.
inline std::optional<Rational> exact_rational(double x) {
  if (!std::isfinite(x)) return std::nullopt;
  // Continued-fraction convergents.
  long long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double r = x;
  for (int i = 0; i < 64; ++i) {
    const double a = std::floor(r);
    if (std::abs(a) > 1e15) break;
    const long long ai = static_cast<long long>(a);
    const long long h2 = ai * h1 + h0, k2 = ai * k1 + k0;
    if (k2 > 1000000) break;
    h0 = h1; h1 = h2; k0 = k1; k1 = k2;
    const Rational q(h1, k1);
    if (static_cast<double>(q) == x) return q;
    const double frac = r - a;
    if (frac == 0.0) break;
    r = 1.0 / frac;
  }
  return std::nullopt;
}

/// Rational copy of a numeric formula; throws UnsupportedError on irrational
/// (non-round-tripping) coefficients such as 1/(2 − 2^{1/3}).
inline RationalFormulaSpec to_rational_spec(const FormulaSpec& spec) {
  return spec.map_coefficients<Rational>([](double x) {
    auto q = exact_rational(x);
    if (!q) {
      std::ostringstream os;
      os.precision(17);
      os << "symbolic_formula: coefficient " << x
         << " is not an exact rational; use the parametric order check";
      throw UnsupportedError(os.str());
    }
    return *q;
  });
}

inline TruncatedSeries symbolic_formula(const FormulaSpec& spec, std::size_t m, int max_degree) {
  return symbolic_formula(to_rational_spec(spec), m, max_degree);
}

/// Third-order Taylor polynomials of exp(t(A+B)), S2 = U_{e^{tA/2}}(e^{tB}),
/// S2~ = U_{e^{tB/2}}(e^{tA}) and J2 = e^{tA}∘e^{tB}, written out from their
/// closed forms (A = generator 0, B = generator 1).
struct ThirdOrderTaylor {
  TruncatedSeries exact;       // T^o_3
  TruncatedSeries s2;          // T^s_3
  TruncatedSeries s2_swapped;  // T~^s_3
  TruncatedSeries j2;          // T^j_3
};

inline ThirdOrderTaylor third_order_taylor() {
  const int d = 3;
  const auto a = TruncatedSeries::generator(2, d, 0);
  const auto b = TruncatedSeries::generator(2, d, 1);
  const auto sum = a + b;
  const auto head =
      TruncatedSeries::unit(2, d) + sum + series_mul(sum, sum) * Rational(1, 2);
  const auto cubes = (series_mul(a, series_mul(a, a)) + series_mul(b, series_mul(b, b))) *
                     Rational(1, 6);
  const auto sq = [](const TruncatedSeries& x) { return series_jordan(x, x); };
  const auto ab = series_jordan(a, b);
  const auto ba = series_jordan(b, a);
  ThirdOrderTaylor t{
      head + series_mul(sum, series_mul(sum, sum)) * Rational(1, 6),
      head + cubes + (series_jordan(a, sq(b)) + series_jordan(ab, a)) * Rational(1, 2),
      head + cubes + (series_jordan(b, sq(a)) + series_jordan(ba, b)) * Rational(1, 2),
      head + cubes + (series_jordan(a, sq(b)) + series_jordan(sq(a), b)) * Rational(1, 2),
  };
  return t;
}

// ---------------------------------------------------------------------------
// Exact checks at irrational coefficients.
//
// A family of approximants whose coefficients are affine in one parameter u
// has word coefficients that are polynomials in u of degree at most the word
// length. Interpolating them over rational sample points and reducing modulo
// the minimal polynomial of the intended (irrational) u decides exactly
// whether the identity holds at that u.

/// Dense univariate polynomial, coefficients in ascending degree.
class RationalPolynomial {
 public:
  RationalPolynomial() = default;
  explicit RationalPolynomial(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

  int degree() const { return c_.empty() ? -1 : static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Rational>& coefficients() const { return c_; }

  Rational operator()(const Rational& x) const {
    Rational acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  /// Interpolating polynomial through (xs[i], ys[i]) with distinct xs.
  static RationalPolynomial interpolate(const std::vector<Rational>& xs,
                                        const std::vector<Rational>& ys) {
    if (xs.size() != ys.size() || xs.empty()) throw UsageError("interpolate: bad sample sets");
    const std::size_t n = xs.size();
    // Newton divided differences.
    std::vector<Rational> dd = ys;
    for (std::size_t j = 1; j < n; ++j)
      for (std::size_t i = n - 1; i >= j; --i) {
        dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j]);
        if (i == j) break;
      }
    std::vector<Rational> out{dd[n - 1]};
    for (std::size_t k = n - 1; k-- > 0;) {
      // out = out * (x - xs[k]) + dd[k]
      std::vector<Rational> next(out.size() + 1, Rational(0));
      for (std::size_t i = 0; i < out.size(); ++i) {
        next[i + 1] += out[i];
        next[i] -= out[i] * xs[k];
      }
      next[0] += dd[k];
      out = std::move(next);
    }
    return RationalPolynomial(std::move(out));
  }

  /// Remainder of *this divided by `mod`.
  RationalPolynomial remainder(const RationalPolynomial& mod) const {
    if (mod.is_zero()) throw UsageError("remainder: division by zero polynomial");
    std::vector<Rational> r = c_;
    const int dm = mod.degree();
    const Rational& lead = mod.c_.back();
    while (static_cast<int>(r.size()) - 1 >= dm && !r.empty()) {
      const Rational f = r.back() / lead;
      const std::size_t shift = r.size() - 1 - dm;
      for (int i = 0; i <= dm; ++i) r[shift + i] -= f * mod.c_[i];
      r.pop_back();
      while (!r.empty() && r.back() == 0) r.pop_back();
    }
    return RationalPolynomial(std::move(r));
  }

  std::string str() const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] == 0) continue;
      if (!first) os << " + ";
      first = false;
      os << c_[i].str();
      if (i > 0) os << "*u^" << i;
    }
    return os.str();
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<Rational> c_;
};

/// 2u^n + (1 − 2u)^n: the order condition of both minimal recursions
/// (c = (u, 1−2u, u) and d = (1−2u, u)). Irreducible over Q, with root
/// u = 1/(2 − 2^{1/n}).
inline RationalPolynomial order_condition_polynomial(int n) {
  if (n < 1) throw UsageError("order_condition_polynomial: n must be positive");
  // (1 − 2u)^n by repeated multiplication.
  std::vector<Rational> p{Rational(1)};
  for (int i = 0; i < n; ++i) {
    std::vector<Rational> next(p.size() + 1, Rational(0));
    for (std::size_t k = 0; k < p.size(); ++k) {
      next[k] += p[k];
      next[k + 1] -= Rational(2) * p[k];
    }
    p = std::move(next);
  }
  p[n] += Rational(2);
  return RationalPolynomial(std::move(p));
}

struct ParametricWitness {
  int degree;
  Word word;
  RationalPolynomial remainder;  // nonzero: the coefficient difference mod the minimal polynomial
};

struct ParametricOrderCheck {
  bool agrees = true;
  int checked_degree = 0;
  std::optional<ParametricWitness> witness;
};

/// Decides whether family(u*) and target agree exactly through degree k,
/// where u* is the root of the irreducible `minimal_polynomial`.
/// `family(u)` must have coefficients affine in u.
inline ParametricOrderCheck verify_parametric_order(
    const std::function<TruncatedSeries(const Rational&)>& family, const TruncatedSeries& target,
    const RationalPolynomial& minimal_polynomial, int k) {
  // Degree-w words need w+1 samples; one extra sample validates the fit.
  std::vector<Rational> xs;
  std::vector<TruncatedSeries> samples;
  for (int i = 0; i <= k + 1; ++i) {
    xs.emplace_back(Rational(i + 2, 7));
    samples.push_back(truncate(family(xs.back()), k));
  }
  const auto t = truncate(target, k);
  std::map<Word, bool> words;
  for (const auto& s : samples)
    for (const auto& [w, c] : s.terms()) words[w] = true;
  for (const auto& [w, c] : t.terms()) words[w] = true;

  ParametricOrderCheck out;
  out.checked_degree = k;
  for (const auto& [w, unused] : words) {
    std::vector<Rational> ys;
    for (const auto& s : samples) ys.push_back(s.coefficient(w) - t.coefficient(w));
    const std::vector<Rational> fit_x(xs.begin(), xs.end() - 1);
    const std::vector<Rational> fit_y(ys.begin(), ys.end() - 1);
    const auto poly = RationalPolynomial::interpolate(fit_x, fit_y);
    if (poly(xs.back()) != ys.back()) {
      throw UsageError("verify_parametric_order: family is not affine in its parameter");
    }
    auto rem = poly.remainder(minimal_polynomial);
    if (!rem.is_zero()) {
      out.agrees = false;
      out.witness = ParametricWitness{static_cast<int>(w.degree()), w, std::move(rem)};
      return out;
    }
  }
  return out;
}

/// Q_n from `child` with c = (u, 1−2u, u), as a rational family in u.
inline std::function<TruncatedSeries(const Rational&)> nonsymmetric_family(
    RationalFormulaSpec child, int n, std::size_t m, int max_degree) {
  auto ptr = std::make_shared<const RationalFormulaSpec>(std::move(child));
  return [ptr, n, m, max_degree](const Rational& u) {
    const auto spec = RationalFormulaSpec::nonsymmetric(
        {{u, ptr}, {Rational(1) - Rational(2) * u, ptr}, {u, ptr}}, n, CoefficientCheck::kSkip);
    return symbolic_formula(spec, m, max_degree);
  };
}

/// Q~_n from `child` with d = (1−2u, u), as a rational family in u.
inline std::function<TruncatedSeries(const Rational&)> symmetric_family(
    RationalFormulaSpec child, int n, std::size_t m, int max_degree) {
  auto ptr = std::make_shared<const RationalFormulaSpec>(std::move(child));
  return [ptr, n, m, max_degree](const Rational& u) {
    const auto spec = RationalFormulaSpec::symmetric({Rational(1) - Rational(2) * u, u}, ptr, n,
                                                     CoefficientCheck::kSkip);
    return symbolic_formula(spec, m, max_degree);
  };
}

}  // namespace jtrotter
