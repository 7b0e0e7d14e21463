#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "stablerisk/errors.hpp"
#include "stablerisk/risk.hpp"

using namespace stablerisk;

namespace {

SimulationConfig cell(const CopulaSpec& c, double alpha, std::size_t n = 200'000) {
  SimulationConfig cfg;
  cfg.n_draws = n;
  cfg.marginal = standard_symmetric(alpha);
  cfg.copula = c;
  cfg.master_seed = 99;
  return cfg;
}

}  // namespace

TEST_SUITE("risk") {
  TEST_CASE("empirical VaR takes the ceil((1 - q) n)-th order statistic") {
    std::vector<double> ramp(10'000);
    for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = static_cast<double>(ramp.size() - i);
    CHECK(empirical_var(ramp, 0.05).value == 9500.0);
    CHECK(empirical_var(ramp, 0.01).value == 9900.0);
    CHECK(empirical_var(ramp, 0.05).method == QuantileMethod::MonteCarlo);
    CHECK_THROWS_AS(empirical_var(std::vector<double>(100, 1.0), 0.05), DomainError);
    CHECK_THROWS_AS(empirical_var(ramp, 0.5), DomainError);
  }

  TEST_CASE("empirical VaR of Cauchy and Gaussian draws") {
    RandomStream rng(3, 0);
    const auto c = sample(StableParams::make(1.0), 1'000'000, rng);
    const auto ec = empirical_var(c, 0.05);
    CHECK(std::abs(ec.value - std::tan(0.45 * std::numbers::pi)) < 3 * ec.std_error);
    const auto g = sample(StableParams::make(2.0), 1'000'000, rng);
    const auto eg = empirical_var(g, 0.05);
    CHECK(std::abs(eg.value - 2.3262) < 3 * eg.std_error);
    // Asymptotic standard error sqrt(q (1 - q) / n) / f(x) with the exact density.
    const double f = std::exp(-0.25 * 2.3262 * 2.3262) / std::sqrt(4 * std::numbers::pi);
    CHECK(eg.std_error == doctest::Approx(std::sqrt(0.05 * 0.95 / 1e6) / f).epsilon(0.1));
  }

  TEST_CASE("simulated sums are deterministic and comonotone sums double") {
    const auto cfg = cell(CopulaSpec::comonotone(), 0.7, 20'000);
    const auto a = simulate_sum_sample(cfg), b = simulate_sum_sample(cfg);
    CHECK(a == b);
    RandomStream rng(cfg.master_seed, cfg.stream_id);
    const auto pairs = sample_pair(cfg.copula, 5, rng);
    for (std::size_t i = 0; i < 5; ++i) CHECK(a[i] == doctest::Approx(2.0 * quantile(cfg.marginal, pairs[i].u)).epsilon(1e-8));
  }

  TEST_CASE("analytic single VaR") {
    const auto lower = analytic_single_var(StableParams::make(1.0), 0.05, LossTail::Lower);
    const auto upper = analytic_single_var(StableParams::make(1.0), 0.05, LossTail::Upper);
    CHECK(lower.value == doctest::Approx(std::tan(0.45 * std::numbers::pi)).epsilon(1e-10));
    CHECK(upper.value == doctest::Approx(lower.value).epsilon(1e-10));
    CHECK(lower.method == QuantileMethod::Analytic);
    const auto skew = StableParams::make(1.5, 0.8);
    CHECK(analytic_single_var(skew, 0.05, LossTail::Lower).value == doctest::Approx(-quantile(skew, 0.05)));
  }

  TEST_CASE("independent ratio") {
    CHECK(sr_analytic_independent(0.2, 0.05) == doctest::Approx(16.0));
    CHECK(sr_analytic_independent(2.0, 0.05) == doctest::Approx(std::sqrt(0.5)));
    for (double alpha : {0.5, 1.0, 1.6}) {
      const auto c = super_additivity_ratio(cell(CopulaSpec::independence(), alpha));
      CAPTURE(alpha);
      CHECK(std::abs(c.sr - sr_analytic_independent(alpha, 0.05)) < 4 * c.sr_std_error);
    }
  }

  TEST_CASE("ratio bookkeeping") {
    const auto c = super_additivity_ratio(cell(CopulaSpec::gaussian(0.3), 1.3));
    CHECK(c.ok());
    CHECK(c.sr == doctest::Approx(c.var_sum.value / (2.0 * c.var_single.value)));
    CHECK(c.sr_std_error == doctest::Approx(c.var_sum.std_error / (2.0 * c.var_single.value)));
    CHECK(c.tau == doctest::Approx(2.0 / std::numbers::pi * std::asin(0.3)));
    CHECK(c.n_draws == 200'000);
  }

  TEST_CASE("Frechet bounds") {
    auto q = cell(CopulaSpec::comonotone(), 0.6);
    q.engine = Engine::Cconv;
    CHECK(super_additivity_ratio(q).sr == doctest::Approx(1.0).epsilon(1e-9));
    const auto mc = super_additivity_ratio(cell(CopulaSpec::comonotone(), 1.4));
    CHECK(std::abs(mc.sr - 1.0) < 3 * mc.sr_std_error);
    CHECK(std::abs(super_additivity_ratio(cell(CopulaSpec::countermonotone(), 0.9)).sr) < 1e-3);
  }

  TEST_CASE("Gaussian copula with Gaussian margins") {
    for (double tau : {-0.7, 0.0, 0.3, 0.9}) {
      const auto c = super_additivity_ratio(cell(tau_to_param(CopulaFamily::Gaussian, tau), 2.0));
      CHECK(std::abs(c.sr - std::sqrt(2.0 + 2.0 * std::sin(std::numbers::pi * tau / 2.0)) / 2.0) < 0.01);
    }
  }

  TEST_CASE("Monte Carlo and quadrature agree") {
    for (double alpha : {0.6, 1.3}) {
      auto mc = cell(CopulaSpec::clayton(1.5), alpha, 1'000'000);
      auto qd = mc;
      qd.engine = Engine::Cconv;
      const auto a = super_additivity_ratio(mc), b = super_additivity_ratio(qd);
      CHECK(std::abs(a.sr - b.sr) < 3 * a.sr_std_error);
      CHECK(b.var_sum.method == QuantileMethod::CconvQuadrature);
    }
  }

  TEST_CASE("grid results do not depend on threads and keep order") {
    std::vector<SimulationConfig> cells;
    for (double a : {0.4, 1.1}) {
      for (double th : {-0.5, 2.0}) {
        auto c = cell(CopulaSpec::clayton(th), a, 20'000);
        c.stream_id = static_cast<std::uint64_t>(th * 10 + 100);
        c.cell_id = cells.size();
        cells.push_back(c);
      }
    }
    auto bad = cells.front();
    bad.q = 0.7;
    bad.cell_id = cells.size();
    cells.push_back(bad);
    const auto one = run_cell_grid(cells, 1), three = run_cell_grid(cells, 3);
    REQUIRE(one.size() == cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
      CHECK(one[i].cell_id == i);
      CHECK(one[i].status == three[i].status);
      if (one[i].ok()) CHECK(one[i].sr == three[i].sr);
    }
    CHECK_FALSE(one.back().ok());
    CHECK(std::isnan(one.back().sr));
  }

  TEST_CASE("config validation") {
    auto c = cell(CopulaSpec::independence(), 1.0, 100);
    CHECK_THROWS_AS(c.validate(), DomainError);
    c.n_draws = 20'000;
    c.q = 0.0;
    CHECK_THROWS_AS(c.validate(), DomainError);
  }
}
