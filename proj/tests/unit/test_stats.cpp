#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "stablerisk/random_stream.hpp"
#include "stablerisk/stats.hpp"

using namespace stablerisk;

TEST_SUITE("stats") {
  TEST_CASE("KS statistic of a known sample") {
    std::vector<double> x = {0.1, 0.4, 0.7};
    // D+ = 1 - 0.7 at the last point.
    CHECK(stats::ks_statistic(x, [](double v) { return v; }) == doctest::Approx(0.3));
    CHECK(stats::ks_critical_1pct(10'000) == doctest::Approx(0.01628));
  }

  TEST_CASE("Kendall tau by merge sort agrees with the quadratic count") {
    RandomStream rng(1, 0);
    std::vector<double> x(300), y(300);
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = rng.uniform();
      y[i] = x[i] + rng.normal() * 0.3;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (std::size_t j = i + 1; j < x.size(); ++j) {
        s += ((x[i] - x[j]) * (y[i] - y[j]) > 0) ? 1.0 : -1.0;
      }
    }
    const double pairs = x.size() * (x.size() - 1) / 2.0;
    CHECK(stats::kendall_tau(x, y) == doctest::Approx(s / pairs).epsilon(1e-12));
  }

  TEST_CASE("Kendall tau with ties uses tau-b") {
    const std::vector<double> x = {1, 2, 2, 3}, y = {1, 2, 3, 3};
    // Concordant 4, discordant 0, ties in x only 1, in y only 1.
    CHECK(stats::kendall_tau(x, y) == doctest::Approx(4.0 / 5.0));
  }

  TEST_CASE("kernel density of a normal sample") {
    RandomStream rng(2, 0);
    std::vector<double> x(200'000);
    for (double& v : x) v = rng.normal();
    std::sort(x.begin(), x.end());
    const double f = stats::kernel_density_at(x, 1.0, 2000);
    CHECK(f == doctest::Approx(std::exp(-0.5) / std::sqrt(2 * M_PI)).epsilon(0.03));
  }
}
