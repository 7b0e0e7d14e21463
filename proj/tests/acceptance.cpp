// One PASS/FAIL line per acceptance criterion. Exit status is nonzero when
// a criterion fails, unless it is listed with --expect-fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "stablerisk/cconv.hpp"
#include "stablerisk/harness.hpp"

using namespace stablerisk;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

// Criteria named in `expected` are known to fail; they still print FAIL but
// only an unexpected result changes the exit status.
struct Report {
  int failed = 0;
  int unexpected = 0;
  std::vector<std::string> expected;

  void line(const char* name, bool passed, const std::string& detail) {
    const bool xfail = std::find(expected.begin(), expected.end(), name) != expected.end();
    std::printf("%s %s: %s%s\n", passed ? "PASS" : "FAIL", name, detail.c_str(),
                xfail ? (passed ? " (expected to fail)" : " (expected failure)") : "");
    std::fflush(stdout);
    if (!passed) ++failed;
    if (passed == xfail) ++unexpected;
  }
};

std::string fmt(const char* f, double a = 0, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

std::size_t alpha_index(double alpha) {
  const auto& a = reference::kAlphas;
  return static_cast<std::size_t>(std::find(a.begin(), a.end(), alpha) - a.begin());
}

void write_csv(const std::filesystem::path& path, const std::vector<SRCell>& cells) {
  std::ofstream out(path);
  out << kCsvHeader << '\n';
  for (const auto& c : cells) out << csv_row(c) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::size_t draws = 1'000'000;
  std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
  std::uint64_t seed = 20240601;
  std::string csv_dir;
  app.add_option("--draws", draws, "Monte Carlo draws per cell");
  app.add_option("--threads", threads, "Worker threads");
  app.add_option("--seed", seed, "Master seed");
  app.add_option("--csv-dir", csv_dir, "Write the simulated tables here");
  Report report;
  app.add_option("--expect-fail", report.expected, "Criterion known to fail; repeatable");
  CLI11_PARSE(app, argc, argv);

  constexpr double kPi = std::numbers::pi;
  std::printf("draws %zu, threads %zu, seed %llu\n", draws, threads, static_cast<unsigned long long>(seed));

  // 1. Independence row of the Gaussian table.
  {
    const auto start = Clock::now();
    std::vector<SimulationConfig> cells;
    for (double a : reference::kAlphas) {
      SimulationConfig c;
      c.n_draws = draws;
      c.marginal = standard_symmetric(a);
      c.copula = CopulaSpec::independence();
      c.master_seed = seed;
      c.stream_id = 7;
      cells.push_back(c);
    }
    const auto out = run_cell_grid(cells, threads);
    const double elapsed = seconds_since(start);
    double worst_rel = 0.0;
    bool ok = elapsed < 120.0;
    for (const auto& c : out) {
      const double rel = std::abs(c.sr / sr_analytic_independent(c.alpha, 0.05) - 1.0);
      ok = ok && c.ok() && rel <= (c.alpha == 0.2 ? 0.10 : 0.03);
      if (c.alpha > 0.2) worst_rel = std::max(worst_rel, rel);
    }
    report.line("independence_row", ok,
                fmt("alpha=0.2 rel err %.4f (limit 0.10), others max %.4f (limit 0.03), %.1f s (limit 120 s)",
                    std::abs(out[0].sr / sr_analytic_independent(0.2, 0.05) - 1.0), worst_rel, elapsed));
  }

  // Tables 1-5 by Monte Carlo; shared by the next criteria.
  const char* presets[] = {"table1", "table2", "table3", "table4", "table5"};
  std::vector<std::vector<SRCell>> tables;
  std::vector<std::vector<SimulationConfig>> table_configs;
  const auto tables_start = Clock::now();
  for (const char* name : presets) {
    auto spec = preset(name);
    spec.n_draws = draws;
    spec.master_seed = seed;
    const auto t0 = Clock::now();
    table_configs.push_back(build_cells(spec));
    tables.push_back(run_cell_grid(table_configs.back(), threads));
    std::printf("  %s: %zu cells in %.1f s\n", name, tables.back().size(), seconds_since(t0));
    std::fflush(stdout);
    if (!csv_dir.empty()) {
      std::filesystem::create_directories(csv_dir);
      write_csv(std::filesystem::path(csv_dir) / (std::string(name) + ".csv"), tables.back());
    }
  }
  const double tables_seconds = seconds_since(tables_start);

  // 2. Gaussian copula, Gaussian margins.
  {
    const auto& t1 = tables[0];
    double worst = 0.0;
    bool ok = true;
    for (const auto& c : t1) {
      if (c.alpha != 2.0) continue;
      const double exact = std::sqrt(2.0 + 2.0 * std::sin(kPi * c.tau / 2.0)) / 2.0;
      ok = ok && c.ok();
      worst = std::max(worst, std::abs(c.sr - exact));
    }
    report.line("gaussian_closed_form", ok && worst <= 0.01, fmt("max |SR - closed form| %.4f (limit 0.01)", worst));
  }

  // 3. Full tables.
  {
    std::size_t compared = 0, missed = 0;
    std::string detail;
    for (std::size_t i = 0; i < tables.size(); ++i) {
      const auto cmp = compare_with_reference(reference::kTables[i], tables[i]);
      compared += cmp.compared;
      missed += cmp.failures.size();
      for (const auto& f : cmp.failures) {
        std::printf("  miss %s tau %s alpha %g: %.4f vs printed %.4f (tolerance %.4f)\n", cmp.family.c_str(),
                    std::string(f.tau).c_str(), f.alpha, f.simulated, f.printed, f.tolerance);
      }
    }
    // Negative Clayton rows: the native copula against the rotated one used by the preset.
    try {
      SimulationConfig c;
      c.n_draws = 10'000;
      c.marginal = standard_symmetric(2.0);
      c.engine = Engine::Cconv;
      c.copula = tau_to_param(CopulaFamily::Clayton, -0.3);
      const double native = super_additivity_ratio(c).sr;
      c.copula = tau_to_param(CopulaFamily::ClaytonRotated, -0.3);
      const double rotated = super_additivity_ratio(c).sr;
      std::printf("INFO clayton tau -0.3 alpha 2: native %.4f, rotated %.4f, printed 0.5240\n", native, rotated);
    } catch (const std::exception& e) {
      std::printf("INFO clayton rotation check failed: %s\n", e.what());
    }
    const bool ok = missed == 0 && tables_seconds < 7200.0;
    report.line("tables_reproduction", ok,
                fmt("%.0f of %.0f cells within max(5%%, 3 combined SE) or SR <= 1e-3, %.0f s (limit 7200 s)",
                    static_cast<double>(compared - missed), static_cast<double>(compared), tables_seconds));
  }

  // 4. Calibration rows.
  {
    std::size_t rows = 0, bad = 0;
    for (const auto& t : reference::kTables) {
      rows += t.rows.size();
      for (const auto& m : calibration_mismatches(t)) {
        std::printf("  %s\n", m.c_str());
        ++bad;
      }
    }
    report.line("calibration_rows", bad == 0,
                fmt("%.0f rows, %.0f mismatches at printed precision", static_cast<double>(rows),
                    static_cast<double>(bad)));
  }

  // 5. Tail dependence.
  {
    std::vector<CopulaSpec> closed;
    for (double th : {0.5, 1.0, 2.0}) closed.push_back(CopulaSpec::clayton(th));
    for (double th : {1.5, 2.0, 4.0}) closed.push_back(CopulaSpec::gumbel(th));
    for (int nu : {1, 5}) {
      for (double rho : {0.0, 0.5}) closed.push_back(CopulaSpec::student_t(rho, nu));
    }
    double worst = 0.0, zero = 0.0;
    bool ok = true;
    try {
      for (const auto& c : closed) {
        const auto exact = tail_dependence_closed(c), est = tail_dependence_limit(c);
        worst = std::max({worst, std::abs(exact.lambda_upper - est.lambda_upper),
                          std::abs(exact.lambda_lower - est.lambda_lower)});
      }
      const auto seq = extended_tail_sequence();
      for (const auto& c : {CopulaSpec::gaussian(0.5), CopulaSpec::gaussian(0.9), CopulaSpec::frank(5.0),
                            CopulaSpec::frank(38.28), CopulaSpec::frank(-5.0)}) {
        const auto est = tail_dependence_limit(c, seq);
        zero = std::max({zero, std::abs(est.lambda_upper), std::abs(est.lambda_lower)});
      }
    } catch (const std::exception& e) {
      std::printf("  %s\n", e.what());
      ok = false;
    }
    report.line("tail_dependence", ok && worst <= 1e-3 && zero <= 1e-2,
                fmt("closed-form families max error %.3g (limit 1e-3), gaussian/frank max %.3g (limit 1e-2)",
                    worst, zero));
  }

  // 6. C-convolution.
  {
    bool ok = true;
    double oracle = 0.0, mixture = 0.0, distance = 0.0;
    try {
      for (double a : {0.5, 1.0, 1.5, 2.0}) {
        const auto p = standard_symmetric(a);
        const auto sum = iid_sum_params(p, p);
        const ConvolvedDistribution cd(Marginal::from_stable(p), Marginal::from_stable(p),
                                       CopulaSpec::independence());
        for (int i = 0; i < 200; ++i) {
          const double t = quantile(sum, 0.001 + 0.998 * i / 199.0);
          oracle = std::max(oracle, std::abs(cd.cdf(t) - cdf(sum, t)));
        }
      }
      const auto m = Marginal::from_stable(standard_symmetric(1.0));
      std::vector<double> grid;
      for (int i = 0; i < 50; ++i) grid.push_back(-20.0 + 40.0 * i / 49.0);
      for (double lambda : {0.0, 0.5, 1.0}) {
        mixture = std::max(mixture, mixture_decomposition_check(m, m, CopulaSpec::clayton(2.0),
                                                                CopulaSpec::independence(), lambda, grid));
      }

      std::vector<SimulationConfig> cells;
      std::vector<CopulaSpec> copulas = {CopulaSpec::independence()};
      for (auto f : {CopulaFamily::Gaussian, CopulaFamily::StudentT, CopulaFamily::Frank, CopulaFamily::Clayton,
                     CopulaFamily::Gumbel}) {
        copulas.push_back(tau_to_param(f, 0.3, 5));
      }
      std::uint64_t stream = 900;
      for (const auto& c : copulas) {
        for (double a : {0.5, 1.0, 1.5, 2.0}) {
          SimulationConfig mc;
          mc.n_draws = draws;
          mc.marginal = standard_symmetric(a);
          mc.copula = c;
          mc.master_seed = seed;
          mc.stream_id = stream;
          auto qd = mc;
          qd.engine = Engine::Cconv;
          cells.push_back(mc);
          cells.push_back(qd);
        }
        ++stream;
      }
      const auto out = run_cell_grid(cells, threads);
      for (std::size_t i = 0; i < out.size(); i += 2) {
        ok = ok && out[i].ok() && out[i + 1].ok();
        distance = std::max(distance, std::abs(out[i].sr - out[i + 1].sr) / out[i].sr_std_error);
      }
    } catch (const std::exception& e) {
      std::printf("  %s\n", e.what());
      ok = false;
    }
    ok = ok && oracle <= 1e-5 && mixture <= 1e-6 && distance <= 3.0;
    report.line("cconv_oracle", ok,
                fmt("independence sup error %.3g (limit 1e-5), mixture deviation %.3g (limit 1e-6), "
                    "Monte Carlo vs quadrature max %.2f SE (limit 3)",
                    oracle, mixture, distance));
  }

  // 7. Sign structure on every table grid. A Monte Carlo SR within 3 SE of 1
  // does not resolve the sign; those cells are decided by quadrature.
  {
    std::size_t checked = 0, violations = 0, by_quadrature = 0;
    for (std::size_t i = 0; i < tables.size(); ++i) {
      const auto& table = reference::kTables[i];
      for (std::size_t k = 0; k < tables[i].size(); ++k) {
        const auto& c = tables[i][k];
        // tau = +-1 are the Frechet bounds, where SR is 1 or 0 identically.
        const bool interior = std::abs(c.tau) < 1.0;
        const bool positive = interior && c.tau >= 0.01 && c.alpha <= 0.9;
        const bool negative = interior && c.tau <= -0.01 && c.alpha >= 1.1;
        if (!positive && !negative) continue;
        ++checked;
        double sr = c.sr;
        const char* engine = "monte carlo";
        if (c.ok() && std::abs(sr - 1.0) <= 3.0 * c.sr_std_error && c.alpha >= 0.3) {
          auto cfg = table_configs[i][k];
          cfg.engine = Engine::Cconv;
          try {
            sr = super_additivity_ratio(cfg).sr;
            engine = "quadrature";
            ++by_quadrature;
          } catch (const std::exception& e) {
            std::printf("  quadrature failed for %s tau %g alpha %g: %s\n", c.family.c_str(), c.tau, c.alpha,
                        e.what());
          }
        }
        const bool holds = c.ok() && (positive ? sr > 1.0 : sr < 1.0);
        if (holds) continue;
        ++violations;
        std::string printed = "-";
        for (const auto& row : table.rows) {
          if (std::abs(std::stod(std::string(row.tau)) - c.tau) < 1e-9) {
            printed = std::string(row.sr[alpha_index(c.alpha)]);
          }
        }
        std::printf("  violation %s tau %g alpha %g: SR %.6f by %s (MC %.4f, se %.4f), printed %s\n",
                    c.family.c_str(), c.tau, c.alpha, sr, engine, c.sr, c.sr_std_error, printed.c_str());
      }
    }
    report.line("sign_structure", violations == 0,
                fmt("%.0f of %.0f cells violate SR > 1 (tau >= 0.01, alpha <= 0.9) or SR < 1 "
                    "(tau <= -0.01, alpha >= 1.1); %.0f signs decided by quadrature",
                    static_cast<double>(violations), static_cast<double>(checked),
                    static_cast<double>(by_quadrature)));
  }

  // 8. Figure 1: heavier tail dependence lowers SR at alpha = 0.2.
  {
    auto spec = preset("fig1");
    spec.n_draws = draws;
    spec.master_seed = seed;
    spec.alphas = {0.2};
    std::vector<CopulaSeries> keep;
    for (const auto& s : spec.copulas) {
      if (s.label == "gaussian" || s.label == "student_t_nu1") keep.push_back(s);
    }
    spec.copulas = keep;
    const auto cells = run_cell_grid(build_cells(spec), threads);
    const std::size_t points = cells.size() / 2;
    double worst = -1e300;
    bool ok = true;
    for (std::size_t i = 0; i < points; ++i) {
      const auto& g = cells[i];
      const auto& t = cells[points + i];
      ok = ok && g.ok() && t.ok();
      const double se = std::hypot(g.sr_std_error, t.sr_std_error);
      const double excess = t.sr - g.sr;
      if (excess > 2.0 * se) {
        ok = false;
        std::printf("  tau %g: student_t(nu=1) %.4f above gaussian %.4f by %.1f SE\n", g.tau, t.sr, g.sr,
                    excess / se);
      }
      if (se > 0.0) worst = std::max(worst, excess / se);
    }
    report.line("figure1_ordering", ok,
                fmt("student_t(nu=1) <= gaussian + 2 SE at %.0f tau points, max excess %.2f SE",
                    static_cast<double>(points), worst));
  }

  // Figure 2 deep-tail scan: informational only.
  {
    auto spec = preset("fig2");
    spec.n_draws = draws;
    spec.master_seed = seed;
    spec.copulas.resize(1);
    const auto cells = run_cell_grid(build_cells(spec), threads);
    const std::size_t rows = spec.copulas[0].rows.size();
    for (std::size_t k = 0; k < spec.q_levels.size(); ++k) {
      std::size_t descents = 0;
      for (std::size_t r = 1; r < rows; ++r) {
        if (cells[k * rows + r].sr < cells[k * rows + r - 1].sr) ++descents;
      }
      std::printf("INFO figure2_scan: gaussian copula, q %g: SR decreases at %zu of %zu tau steps\n",
                  spec.q_levels[k], descents, rows - 1);
    }
  }

  std::printf("%d criteria failed, %d unexpected results\n", report.failed, report.unexpected);
  return report.unexpected == 0 ? 0 : 1;
}
