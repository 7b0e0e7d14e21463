#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "stablerisk/cconv.hpp"
#include "stablerisk/errors.hpp"
#include "stablerisk/risk.hpp"

using namespace stablerisk;

namespace {

Marginal cauchy() { return Marginal::from_stable(StableParams::make(1.0)); }

double empirical_cdf(const std::vector<double>& sorted, double t) {
  return static_cast<double>(std::upper_bound(sorted.begin(), sorted.end(), t) - sorted.begin()) / sorted.size();
}

}  // namespace

TEST_SUITE("cconv") {
  TEST_CASE("independent Cauchy sum is Cauchy with scale 2") {
    const ConvolvedDistribution cd(cauchy(), cauchy(), CopulaSpec::independence());
    CHECK(cd.cdf(0.0) == doctest::Approx(0.5).epsilon(1e-12));
    for (double t = -40.0; t <= 40.0; t += 0.8) {
      CHECK(std::abs(cd.cdf(t) - (0.5 + std::atan(t / 2.0) / std::numbers::pi)) < 1e-5);
    }
    CHECK(cd.quantile(0.75) == doctest::Approx(2.0).epsilon(1e-9));
  }

  TEST_CASE("independent sums match the closed-form sum law") {
    for (double alpha : {0.5, 1.0, 1.5, 2.0}) {
      const auto p = standard_symmetric(alpha);
      const auto sum = iid_sum_params(p, p);
      const ConvolvedDistribution cd(Marginal::from_stable(p), Marginal::from_stable(p), CopulaSpec::independence());
      double worst = 0.0, prev = 0.0;
      for (int i = 0; i < 200; ++i) {
        const double t = quantile(sum, 0.001 + 0.998 * i / 199.0);
        const double f = cd.cdf(t);
        worst = std::max(worst, std::abs(f - cdf(sum, t)));
        CHECK(f >= prev - 1e-6);
        prev = f;
      }
      CAPTURE(alpha);
      CHECK(worst < 1e-5);
    }
  }

  TEST_CASE("degenerate copulas") {
    const ConvolvedDistribution como(cauchy(), cauchy(), CopulaSpec::comonotone());
    CHECK(como.quantile(0.95) == doctest::Approx(2.0 * std::tan(0.45 * std::numbers::pi)).epsilon(1e-10));
    CHECK(como.cdf(2.0) == doctest::Approx(0.75).epsilon(1e-12));
    const ConvolvedDistribution counter(cauchy(), cauchy(), CopulaSpec::countermonotone());
    CHECK(counter.cdf(-1e-9) == 0.0);
    CHECK(counter.cdf(1e-9) == 1.0);
    CHECK(counter.quantile(0.3) == 0.0);
    const auto wide = Marginal::from_stable(StableParams::make(1.0, 0.0, 3.0));
    const ConvolvedDistribution mixed_scale(wide, cauchy(), CopulaSpec::countermonotone());
    // X + Y = 2 X' with X' standard Cauchy.
    CHECK(mixed_scale.quantile(0.9) == doctest::Approx(2.0 * std::tan(0.4 * std::numbers::pi)).epsilon(1e-9));
  }

  TEST_CASE("radially symmetric copulas give a symmetric sum") {
    for (const auto& c : {CopulaSpec::gaussian(0.4), CopulaSpec::frank(-3.0), CopulaSpec::student_t(0.2, 3)}) {
      const ConvolvedDistribution cd(cauchy(), cauchy(), c);
      CHECK(std::abs(cd.quantile(0.5)) < 1e-7);
    }
  }

  TEST_CASE("mixture closure") {
    std::vector<double> grid;
    for (int i = 0; i < 50; ++i) grid.push_back(-20.0 + 40.0 * i / 49.0);
    const auto a = CopulaSpec::clayton(2.0), b = CopulaSpec::independence();
    CHECK(mixture_decomposition_check(cauchy(), cauchy(), a, b, 0.5, grid) < 1e-6);
    CHECK(mixture_decomposition_check(cauchy(), cauchy(), a, b, 0.0, grid) == 0.0);
    CHECK(mixture_decomposition_check(cauchy(), cauchy(), a, b, 1.0, grid) == 0.0);
    CHECK(mixture_decomposition_check(cauchy(), cauchy(), CopulaSpec::comonotone(), b, 0.3, grid) < 1e-6);
  }

  TEST_CASE("Clayton theta = 2 against simulated sums") {
    SimulationConfig cfg;
    cfg.n_draws = 1'000'000;
    cfg.marginal = StableParams::make(1.0);
    cfg.copula = CopulaSpec::clayton(2.0);
    cfg.master_seed = 5;
    auto sums = simulate_sum_sample(cfg);
    std::sort(sums.begin(), sums.end());
    const ConvolvedDistribution cd(cauchy(), cauchy(), cfg.copula);
    double worst = 0.0;
    for (double t = -30.0; t <= 30.0; t += 1.5) worst = std::max(worst, std::abs(cd.cdf(t) - empirical_cdf(sums, t)));
    CHECK(worst < 0.002);
  }

  TEST_CASE("copula of X and X + Y") {
    const ConvolvedDistribution ind(cauchy(), cauchy(), CopulaSpec::independence());
    CHECK(ind.copula_of_x_and_sum(0.3, 1.0) == doctest::Approx(0.3));
    CHECK(ind.copula_of_x_and_sum(1.0, 0.6) == doctest::Approx(0.6));
    const ConvolvedDistribution como(cauchy(), cauchy(), CopulaSpec::comonotone());
    CHECK(como.copula_of_x_and_sum(0.4, 0.4) == doctest::Approx(0.4));

    // Empirical copula of (X, X + Y) at (0.5, 0.5).
    RandomStream rng(6, 0);
    const auto p = StableParams::make(1.0);
    const std::size_t n = 1'000'000;
    std::vector<double> x(n), s(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = sample_one(p, rng);
      s[i] = x[i] + sample_one(p, rng);
    }
    std::vector<double> xs = x, ss = s;
    std::nth_element(xs.begin(), xs.begin() + n / 2, xs.end());
    std::nth_element(ss.begin(), ss.begin() + n / 2, ss.end());
    const double mx = xs[n / 2], ms = ss[n / 2];
    std::size_t both = 0;
    for (std::size_t i = 0; i < n; ++i) both += x[i] <= mx && s[i] <= ms;
    CHECK(std::abs(ind.copula_of_x_and_sum(0.5, 0.5) - static_cast<double>(both) / n) < 0.003);
  }

  TEST_CASE("argument checks") {
    const ConvolvedDistribution cd(cauchy(), cauchy(), CopulaSpec::independence());
    CHECK_THROWS_AS(cd.quantile(0.0), DomainError);
    CHECK_THROWS_AS(cd.cdf(std::nan("")), DomainError);
    CHECK_THROWS_AS(cd.copula_of_x_and_sum(1.2, 0.5), DomainError);
    CHECK_THROWS_AS(ConvolvedDistribution(cauchy(), cauchy(), CopulaSpec::independence(), 4), DomainError);
  }
}
