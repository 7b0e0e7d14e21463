#include <doctest.h>

#include <cmath>
#include <numbers>

#include "stablerisk/errors.hpp"
#include "stablerisk/stable.hpp"
#include "stablerisk/stats.hpp"

using namespace stablerisk;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_SUITE("stable") {
  TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(StableParams::make(0.0), DomainError);
    CHECK_THROWS_AS(StableParams::make(2.1), DomainError);
    CHECK_THROWS_AS(StableParams::make(1.0, 1.5), DomainError);
    CHECK_THROWS_AS(StableParams::make(1.0, 0.0, 0.0), DomainError);
    CHECK(StableParams::make(2.0, 0.7).beta == 0.0);
  }

  TEST_CASE("characteristic function") {
    const auto g = characteristic_function(StableParams::make(2.0, 0.0, std::sqrt(0.5)), 1.0);
    CHECK(g.real() == doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
    CHECK(std::abs(g.imag()) < 1e-15);
    const auto c = characteristic_function(StableParams::make(1.0), 2.0);
    CHECK(c.real() == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
    const auto l = characteristic_function(StableParams::make(0.5, 1.0), 1.0);
    const auto expect = std::exp(std::complex<double>(-1.0, 1.0));
    CHECK(std::abs(l - expect) < 1e-14);
  }

  TEST_CASE("closed-form densities and distribution functions") {
    const auto levy = StableParams::make(0.5, 1.0);
    const auto cauchy = StableParams::make(1.0);
    CHECK(pdf(levy, 1.0) == doctest::Approx(0.24197072451914337).epsilon(1e-12));
    CHECK(pdf(levy, -1.0) == 0.0);
    CHECK(pdf(cauchy, 0.0) == doctest::Approx(1.0 / kPi).epsilon(1e-14));
    CHECK(cdf(cauchy, 1.0) == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(cdf(StableParams::make(2.0, 0.0, std::sqrt(0.5)), 0.0) == doctest::Approx(0.5));
    CHECK(cdf(levy, 0.5) == doctest::Approx(std::erfc(1.0)).epsilon(1e-12));
  }

  TEST_CASE("numeric densities against characteristic-function inversion") {
    // Reference values from Gil-Pelaez inversion at 30 digits.
    CHECK(pdf(StableParams::make(1.5), 0.0) == doctest::Approx(0.287352751452164445).epsilon(1e-10));
    CHECK(pdf(StableParams::make(1.3, -0.4), 0.7) == doctest::Approx(0.285365655934205248).epsilon(1e-10));
    CHECK(cdf(StableParams::make(1.3, -0.4), 0.7) == doctest::Approx(0.514577875197310451).epsilon(1e-10));
    CHECK(cdf(StableParams::make(1.7, 0.5), -1.2) == doctest::Approx(0.227384897035264960).epsilon(1e-10));
  }

  TEST_CASE("quantiles") {
    CHECK(quantile(StableParams::make(1.0), 0.75) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(quantile(StableParams::make(1.3, 0.0, 2.0, 0.7), 0.5) - 0.7) < 1e-12);
    // Symmetric alpha < 1: root of the convergent tail series at 40 digits.
    CHECK(quantile(standard_symmetric(0.2), 0.95) == doctest::Approx(46059.713454436007561).epsilon(1e-10));
    CHECK(quantile(standard_symmetric(0.5), 0.95) == doctest::Approx(57.304027730636510023).epsilon(1e-10));
    CHECK(quantile_upper(StableParams::make(1.0), 1e-12) == doctest::Approx(1.0 / (kPi * 1e-12)).epsilon(1e-9));
    CHECK_THROWS_AS(quantile(StableParams::make(1.0), 1.0), DomainError);
  }

  TEST_CASE("quantile inverts cdf") {
    for (double alpha : {0.3, 0.8, 1.0, 1.2, 1.9}) {
      for (double beta : {-0.7, 0.0, 0.4}) {
        const auto p = StableParams::make(alpha, beta, 1.5, -0.3);
        double prev = -INFINITY;
        for (int i = 1; i <= 99; ++i) {
          const double u = i / 100.0;
          const double x = quantile(p, u);
          CHECK(std::abs(cdf(p, x) - u) < 1e-9);
          CHECK(x > prev);
          prev = x;
        }
      }
    }
  }

  TEST_CASE("cdf and sf are complementary and monotone") {
    const auto p = StableParams::make(0.7, 0.3);
    double prev = 0.0;
    for (double x = -50.0; x <= 50.0; x += 0.5) {
      const double f = cdf(p, x);
      CHECK(f >= prev);
      CHECK(f + sf(p, x) == doctest::Approx(1.0).epsilon(1e-12));
      prev = f;
    }
  }

  TEST_CASE("quantile table matches the solver") {
    for (double alpha : {0.2, 0.5, 1.0, 1.6, 2.0}) {
      const auto p = standard_symmetric(alpha);
      const auto table = quantile_table(p);
      for (double u : {1e-9, 1e-4, 0.01, 0.3, 0.5, 0.77, 0.99, 1.0 - 1e-6}) {
        const double exact = quantile(p, u);
        CHECK(std::abs((*table)(u)-exact) <= 1e-10 * std::max(1.0, std::abs(exact)));
        CHECK(std::abs(table->interpolate(u) - exact) <= 1e-8 * std::max(1.0, std::abs(exact)));
      }
      for (double x : {-100.0, -1.0, 0.1, 3.0}) {
        CHECK(table->cdf(x) == doctest::Approx(cdf(p, x)).epsilon(1e-8));
      }
    }
  }

  TEST_CASE("affine transforms") {
    const auto p = StableParams::make(1.5, 0.5);
    CHECK(affine_transform_params(p, -1.0, 0.0) == StableParams::make(1.5, -0.5));
    CHECK(affine_transform_params(p, 1.0, 0.0) == p);
    const auto q = affine_transform_params(StableParams::make(1.0, 1.0), 2.0, 0.0);
    CHECK(q.gamma == doctest::Approx(2.0));
    CHECK(q.delta == doctest::Approx(-(2.0 / kPi) * 2.0 * std::log(2.0)));
    CHECK_THROWS_AS(affine_transform_params(p, 0.0, 1.0), DomainError);
  }

  TEST_CASE("sums of independent copies") {
    CHECK(iid_sum_params(StableParams::make(1.0), StableParams::make(1.0)) == StableParams::make(1.0, 0.0, 2.0));
    CHECK(iid_sum_params(StableParams::make(2.0), StableParams::make(2.0)).gamma == doctest::Approx(std::sqrt(2.0)));
    CHECK(iid_sum_params(standard_symmetric(0.2), standard_symmetric(0.2)).gamma == doctest::Approx(32.0));
    CHECK_THROWS_AS(iid_sum_params(standard_symmetric(1.2), standard_symmetric(1.3)), DomainError);
  }

  TEST_CASE("moment existence") {
    CHECK(moment_existence(standard_symmetric(1.5), 1.0).exists);
    CHECK_FALSE(moment_existence(standard_symmetric(1.5), 1.5).exists);
    CHECK(moment_existence(standard_symmetric(2.0), 10.0).exists);
  }

  TEST_CASE("samplers pass KS against closed forms") {
    RandomStream rng(11, 0);
    for (const auto& p : {StableParams::make(1.0), StableParams::make(0.5, 1.0), StableParams::make(1.0, 0.6),
                          StableParams::make(0.8, -0.5, 2.0, 1.0)}) {
      auto x = sample(p, 100'000, rng);
      CHECK(stats::ks_statistic(x, [&](double v) { return cdf(p, v); }) < stats::ks_critical_1pct(x.size()));
    }
  }

  TEST_CASE("Gaussian sampler moments") {
    RandomStream rng(12, 0);
    const auto x = sample(StableParams::make(2.0, 0.0, std::sqrt(0.5)), 1'000'000, rng);
    double m = 0.0, v = 0.0;
    for (double s : x) m += s;
    m /= x.size();
    for (double s : x) v += (s - m) * (s - m);
    v /= x.size() - 1;
    CHECK(std::abs(m) < 4.0 / 1000.0);
    CHECK(v == doctest::Approx(1.0).epsilon(0.02));
  }

  TEST_CASE("positive stable variates have the stable Laplace transform") {
    RandomStream rng(13, 0);
    const double a = 0.4;
    const int n = 200'000;
    double lt = 0.0;
    for (int i = 0; i < n; ++i) lt += std::exp(-std::exp(sample_log_positive_stable(a, rng)));
    CHECK(lt / n == doctest::Approx(std::exp(-1.0)).epsilon(0.01));
  }
}
