#include "stablerisk/numerics.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/tools/roots.hpp>
#include <numbers>
#include <string>

#include "stablerisk/errors.hpp"

namespace stablerisk::numerics {

GaussLegendre gauss_legendre(std::size_t n) {
  GaussLegendre gl;
  gl.nodes.assign(n, 0.0);
  gl.weights.assign(n, 0.0);
  const std::size_t m = (n + 1) / 2;
  for (std::size_t i = 1; i <= m; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) - 0.25) /
                        (static_cast<double>(n) + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (std::size_t j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        const double jd = static_cast<double>(j);
        p1 = ((2.0 * jd - 1.0) * z * p2 - (jd - 1.0) * p3) / jd;
      }
      pp = static_cast<double>(n) * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15) break;
    }
    gl.nodes[i - 1] = -z;
    gl.nodes[n - i] = z;
    gl.weights[i - 1] = 2.0 / ((1.0 - z * z) * pp * pp);
    gl.weights[n - i] = gl.weights[i - 1];
  }
  return gl;
}

double find_root(const std::function<double(double)>& f, double lo, double hi, int bits,
                 int max_iter) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0)) {
    throw NumericalFailure("find_root: bracket [" + std::to_string(lo) + ", " +
                           std::to_string(hi) + "] does not contain a sign change");
  }
  boost::uintmax_t iters = static_cast<boost::uintmax_t>(max_iter);
  const auto r = boost::math::tools::toms748_solve(
      f, lo, hi, flo, fhi, boost::math::tools::eps_tolerance<double>(bits), iters);
  return 0.5 * (r.first + r.second);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }
double normal_sf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }
double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}
double normal_quantile(double p) {
  if (p <= 0.0) return -std::numeric_limits<double>::infinity();
  if (p >= 1.0) return std::numeric_limits<double>::infinity();
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

double student_t_cdf(int nu, double x) {
  if (std::isnan(x)) return x;
  if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
  if (nu == 1) return std::atan2(1.0, -x) / std::numbers::pi;
  const double t = std::abs(x);
  const double dnu = static_cast<double>(nu);
  const double theta = std::atan(t / std::sqrt(dnu));
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  const double c2 = c * c;
  double a;  // P(|T| < t)
  if (nu % 2 == 1) {
    double term = c, sum = c;
    for (int k = 1; k <= (nu - 3) / 2; ++k) {
      term *= c2 * (2.0 * k) / (2.0 * k + 1.0);
      sum += term;
    }
    a = 2.0 / std::numbers::pi * (theta + s * sum);
  } else {
    double term = 1.0, sum = 1.0;
    for (int k = 1; k <= (nu - 2) / 2; ++k) {
      term *= c2 * (2.0 * k - 1.0) / (2.0 * k);
      sum += term;
    }
    a = s * sum;
  }
  double tail = 0.5 * (1.0 - a);
  if (tail < 0.05) {
    tail = 0.5 * boost::math::ibeta(0.5 * dnu, 0.5, dnu / (dnu + t * t));
  }
  return x < 0 ? tail : 1.0 - tail;
}

double student_t_pdf(int nu, double x) {
  const double dnu = static_cast<double>(nu);
  const double logc = std::lgamma(0.5 * (dnu + 1.0)) - std::lgamma(0.5 * dnu) -
                      0.5 * std::log(dnu * std::numbers::pi);
  return std::exp(logc - 0.5 * (dnu + 1.0) * std::log1p(x * x / dnu));
}

double student_t_quantile(int nu, double p) {
  if (p <= 0.0) return -std::numeric_limits<double>::infinity();
  if (p >= 1.0) return std::numeric_limits<double>::infinity();
  if (nu == 1) {
    if (p < 0.5) return -1.0 / std::tan(std::numbers::pi * p);
    if (p > 0.5) return 1.0 / std::tan(std::numbers::pi * (1.0 - p));
    return 0.0;
  }
  if (nu == 2) {
    const double q = 1.0 - p;
    return (p - q) / std::sqrt(2.0 * p * q);
  }
  return boost::math::quantile(boost::math::students_t_distribution<double>(nu), p);
}

}  // namespace stablerisk::numerics
