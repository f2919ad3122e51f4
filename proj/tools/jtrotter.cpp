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

// jtrotter: order verification, bound checks and the two numerical
// experiments. Exit status: 0 all assertions pass, 1 assertion failure,
// 2 usage error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "jtrotter/experiments.hpp"

namespace {

using namespace jtrotter;

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

// CSV goes to --out (or stdout); the report goes to stdout when the CSV has
// its own file, stderr otherwise.
template <class Writer>
std::ostream& emit_csv(const RunConfig& cfg, Writer&& write) {
  if (cfg.out.empty()) {
    write(std::cout);
    std::cout.flush();
    return std::cerr;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw UsageError("cannot open output file '" + cfg.out + "'");
  write(f);
  if (!f.flush()) throw UsageError("failed writing '" + cfg.out + "'");
  return std::cout;
}

int print_checks(const std::vector<ContourCheck>& checks, std::ostream& os) {
  bool ok = true;
  for (const auto& c : checks) {
    os << (c.passed ? "[PASS] " : "[FAIL] ") << c.name;
    if (!c.detail.empty()) os << ": " << c.detail;
    os << '\n';
    ok &= c.passed;
  }
  return ok ? kExitOk : kExitFail;
}

int cmd_verify_taylor(const RunConfig& cfg) {
  const auto rep = run_verify_taylor(cfg);
  write_verify_report(rep, std::cout);
  return rep.all_passed() ? kExitOk : kExitFail;
}

int cmd_bounds(const RunConfig& cfg) {
  const auto rows = run_bounds(cfg);
  auto& os = emit_csv(cfg, [&](std::ostream& o) { write_bounds_csv(rows, o); });
  bool ok = true;
  for (const auto& s : summarize_bounds(rows)) {
    os << (s.violations == 0 ? "[PASS] " : "[FAIL] ") << s.theorem << ": " << s.rows
       << " rows, max ratio " << format_double(s.max_ratio) << ", " << s.violations
       << " violations\n";
    ok &= s.violations == 0;
  }
  return ok ? kExitOk : kExitFail;
}

int cmd_contour(const RunConfig& cfg) {
  const auto r = run_contour(cfg);
  auto& os = emit_csv(cfg, [&](std::ostream& o) { write_contour_csv(r, o); });
  return print_checks(check_contour(r), os);
}

int cmd_fidelity(const RunConfig& cfg) {
  const auto r = run_fidelity(cfg);
  auto& os = emit_csv(cfg, [&](std::ostream& o) { write_fidelity_csv(r, o); });
  return print_checks(check_fidelity(r), os);
}

int cmd_slope(const RunConfig& cfg) {
  if (cfg.formulas.empty()) throw UsageError("slope needs a formula (positional or --formulas)");
  bool ok = true;
  for (const auto& f : cfg.formulas) {
    SlopeResult r;
    try {
      r = run_slope(f, cfg);
    } catch (const UnsupportedError& e) {
      std::cout << "[FAIL] " << f << ": " << e.what() << '\n';
      ok = false;
      continue;
    }
    if (r.near_floor) {
      std::cerr << "warning: " << f << " errors fall below " << kSlopeWarnFloor
                << "; the fit may be affected by rounding, consider a larger t-min\n";
    }
    std::cout << (r.passed() ? "[PASS] " : "[FAIL] ") << f << ": slope " << format_double(r.slope)
              << ", target " << r.target << " +/- " << r.tolerance
              << " (" << r.samples.size() << " points, " << to_string(r.norm) << " norm)\n";
    ok &= r.passed();
  }
  return ok ? kExitOk : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Jordan-algebraic Trotter product formulas: order checks, bounds, experiments"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string norm_name;

  const std::map<std::string, NormKind> norms{{"frobenius", NormKind::Frobenius},
                                              {"operator", NormKind::Operator2}};

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
    sub->add_option("--jobs", cfg.jobs, "worker threads (0: all cores)")->capture_default_str();
  };
  auto add_out = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out, "CSV output path (default: stdout)");
  };
  auto add_formulas = [&](CLI::App* sub) {
    sub->add_option("--formulas", cfg.formulas, "comma list from j1,j2,s2,qs2,q3,s3,qtilde4")
        ->delimiter(',');
  };
  auto add_t_range = [&](CLI::App* sub) {
    sub->add_option("--t-min", cfg.t_min, "smallest time");
    sub->add_option("--t-max", cfg.t_max, "largest time");
    sub->add_option("--points", cfg.points, "number of time points");
  };
  auto add_norm = [&](CLI::App* sub) {
    sub->add_option("--norm", norm_name, "frobenius or operator")
        ->check(CLI::IsMember({"frobenius", "operator"}));
  };

  auto* verify = app.add_subcommand("verify-taylor", "exact free-algebra order checks");
  add_common(verify);
  verify->add_option("--degree", cfg.degree, "highest degree examined")
      ->capture_default_str()
      ->check(CLI::Range(0, 8));
  verify->add_option("--q3-mutation", cfg.q3_mutation)->group("");

  auto* bounds = app.add_subcommand("bounds", "Monte-Carlo bound dominance");
  add_common(bounds);
  add_out(bounds);
  bounds->add_option("--samples", cfg.samples, "samples per theorem")->capture_default_str();

  auto* contour = app.add_subcommand("contour", "error over the (t d1, t d2) plane for H = d1 X + d2 Y");
  add_common(contour);
  add_out(contour);
  add_formulas(contour);
  contour->add_option("--grid", cfg.grid, "grid resolution per axis")->capture_default_str();
  contour->add_option("--d1-min", cfg.d1_min)->capture_default_str();
  contour->add_option("--d1-max", cfg.d1_max)->capture_default_str();
  contour->add_option("--d2-min", cfg.d2_min)->capture_default_str();
  contour->add_option("--d2-max", cfg.d2_max)->capture_default_str();

  auto* fidelity = app.add_subcommand("fidelity", "state error vs t for H = alpha Z + beta X");
  add_common(fidelity);
  add_out(fidelity);
  add_formulas(fidelity);
  add_t_range(fidelity);
  fidelity->add_option("--alpha", cfg.alpha)->capture_default_str();
  fidelity->add_option("--beta", cfg.beta)->capture_default_str();

  auto* slope = app.add_subcommand("slope", "fitted error order of a formula");
  add_common(slope);
  add_formulas(slope);
  add_t_range(slope);
  add_norm(slope);
  std::vector<std::string> positional;
  slope->add_option("formula", positional, "j1,j2,s2,qs2,q3,s3,qtilde4 or j2-nstep");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (!norm_name.empty()) cfg.norm = norms.at(norm_name);
  cfg.formulas.insert(cfg.formulas.end(), positional.begin(), positional.end());

  try {
    if (verify->parsed()) return cmd_verify_taylor(cfg);
    if (bounds->parsed()) return cmd_bounds(cfg);
    if (contour->parsed()) return cmd_contour(cfg);
    if (fidelity->parsed()) return cmd_fidelity(cfg);
    if (slope->parsed()) return cmd_slope(cfg);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UnsupportedError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
