// Evaluation of the standardized stable law.
//
// Outside the closed-form cases the distribution is computed from the
// Zolotarev integral representation (as organized by Nolan, 1997). For z > 0
// and alpha != 1,
//
//   F(z) = c1 + sign(1 - alpha)/pi * int_{-theta0}^{pi/2} exp(-g(theta)) dtheta,
//   g(theta) = z^(alpha/(alpha-1)) V(theta),
//
// and the density is alpha/(pi |alpha-1| z) * int g exp(-g). The integrals are
// taken over phi = pi/2 - theta, in logarithmic coordinates of the distance to
// the nearer end of the range, which resolves the boundary layers that carry
// the far tails and the neighbourhood of the mode. The integration is split
// where g = 1.

#include <algorithm>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "stablerisk/errors.hpp"
#include "stablerisk/numerics.hpp"
#include "stablerisk/stable.hpp"

namespace stablerisk::detail {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLn2 = std::numbers::ln2;

double log_sinh(double y) {  // y > 0
  if (y > 20.0) return y - kLn2 + std::log1p(-std::exp(-2.0 * y));
  return std::log(std::sinh(y));
}

double log_cosh(double y) {
  y = std::abs(y);
  return y - kLn2 + std::log1p(std::exp(-2.0 * y));
}

struct PhiIntegrals {
  double i1;  // int exp(-g)
  double i2;  // int 1 - exp(-g)
  double i3;  // int g exp(-g)
};

// Integrates over phi in (0, length), treating each half in logarithmic
// coordinates of the distance to its end so that boundary layers at either end
// are resolved. log_g(phi, psi) receives psi = length - phi as well, and must
// be monotone in phi; g_large_at_zero says whether g -> inf as phi -> 0.
template <class LogG>
PhiIntegrals integrate_phi(const LogG& log_g, double length, bool g_large_at_zero) {
  const double half = 0.5 * length;
  const double s_half = std::log(half);
  constexpr double kFloor = -740.0;
  constexpr double kBig = 1e6;

  // upper == false: phi = exp(s); upper == true: psi = exp(s).
  auto log_g_at = [&](bool upper, double s) {
    const double w = std::exp(s);
    const double v = upper ? log_g(length - w, w) : log_g(w, length - w);
    if (std::isnan(v)) return (upper != g_large_at_zero) ? kInf : -kInf;
    return v;
  };

  // The crossing g = 1 lies in the half on whose side log g changes sign.
  const double mid = log_g(half, half);
  const bool decreasing = g_large_at_zero;
  const bool root_upper = (mid > 0) == decreasing;
  double s_star = s_half;
  {
    // Bounded so the root finder never sees infinities.
    auto f = [&](double s) { return std::clamp(log_g_at(root_upper, s), -kBig, kBig); };
    double f_lo = f(kFloor), f_hi = f(s_half);
    if ((f_lo > 0) != (f_hi > 0) && f_hi != 0.0) {
      boost::uintmax_t iters = 100;
      auto tol = [](double a, double b) { return std::abs(a - b) < 1e-3; };
      const auto r = boost::math::tools::toms748_solve(f, kFloor, s_half, f_lo, f_hi, tol, iters);
      s_star = 0.5 * (r.first + r.second);
    } else if (f_hi != 0.0) {
      s_star = kFloor;
    }
  }

  constexpr double kRel = 1e-12;
  constexpr double kAbs = 1e-300;
  PhiIntegrals out{0.0, 0.0, 0.0};
  for (const bool upper : {false, true}) {
    auto integrand = [&](double s) {
      const double w = std::exp(s);
      const double lg = log_g_at(upper, s);
      if (lg == kInf) return std::array<double, 3>{0.0, w, 0.0};
      if (lg == -kInf) return std::array<double, 3>{w, 0.0, 0.0};
      const double g = std::exp(lg);
      return std::array<double, 3>{w * std::exp(-g), -w * std::expm1(-g), w * std::exp(lg - g)};
    };
    auto add = [&](double a, double b) {
      if (!(b > a)) return;
      const auto r = numerics::integrate<3>(integrand, a, b, kRel, kAbs, 400);
      out.i1 += r.value[0];
      out.i2 += r.value[1];
      out.i3 += r.value[2];
    };
    const double split = (upper == root_upper) ? s_star : s_half;
    const double left = split - 60.0;
    add(left, split);
    add(split, s_half);
    // Below exp(left) the integrands have settled to their limits.
    const auto rest = integrand(left);
    out.i1 += rest[0];
    out.i2 += rest[1];
    out.i3 += rest[2];
  }
  return out;
}

StandardEval reflect(const StandardEval& e) { return {e.sf, e.cdf, e.pdf, e.dcdf_dy}; }

StandardEval gaussian(double y) {
  const double z = std::sinh(y);
  StandardEval e;
  e.cdf = 0.5 * std::erfc(-0.5 * z);
  e.sf = 0.5 * std::erfc(0.5 * z);
  const double logpdf = -0.25 * z * z - std::log(2.0 * std::sqrt(kPi));
  e.pdf = std::exp(logpdf);
  e.dcdf_dy = std::exp(logpdf + log_cosh(y));
  return e;
}

StandardEval cauchy(double y) {
  const double z = std::sinh(y);
  StandardEval e;
  e.cdf = std::atan2(1.0, -z) / kPi;
  e.sf = std::atan2(1.0, z) / kPi;
  e.pdf = 1.0 / (kPi * (1.0 + z * z));
  e.dcdf_dy = 1.0 / (kPi * std::cosh(y));
  return e;
}

// S(1/2, 1, 1, 0), support z > 0.
StandardEval levy(double y) {
  if (y <= 0.0) return {0.0, 1.0, 0.0, 0.0};
  const double log_z = log_sinh(y);
  const double r = std::exp(-0.5 * (kLn2 + log_z));  // 1/sqrt(2z)
  StandardEval e;
  e.cdf = std::erfc(r);
  e.sf = std::erf(r);
  const double logpdf = -0.5 * std::log(2.0 * kPi) - 1.5 * log_z - r * r;
  e.pdf = std::exp(logpdf);
  e.dcdf_dy = std::exp(logpdf + log_cosh(y));
  return e;
}

StandardEval at_mode_origin(double alpha, double beta) {
  const double theta0 = std::atan(beta * std::tan(kPi * alpha / 2.0)) / alpha;
  const double zeta = -beta * std::tan(kPi * alpha / 2.0);
  StandardEval e;
  e.cdf = (kPi / 2.0 - theta0) / kPi;
  e.sf = (kPi / 2.0 + theta0) / kPi;
  e.pdf = std::tgamma(1.0 + 1.0 / alpha) * std::cos(theta0) /
          (kPi * std::pow(1.0 + zeta * zeta, 1.0 / (2.0 * alpha)));
  e.dcdf_dy = e.pdf;
  return e;
}

// alpha != 1, z > 0 (y > 0).
StandardEval general_positive(double alpha, double beta, double y) {
  const double log_z = log_sinh(y);
  const double theta0 = std::atan(beta * std::tan(kPi * alpha / 2.0)) / alpha;
  const double length = kPi / 2.0 + theta0;
  StandardEval e;
  if (length <= 1e-15) {
    // Totally skewed to the left with alpha < 1: no mass above zero.
    return {1.0, 0.0, 0.0, 0.0};
  }
  const double ratio = alpha / (alpha - 1.0);
  const double log_c0 = std::log(std::cos(alpha * theta0)) / (alpha - 1.0);
  const double base = ratio * log_z + log_c0;
  // c = pi - alpha * length, used to rewrite the trigonometric factors
  // without cancellation near phi -> 0.
  const double c = kPi * (1.0 - alpha / 2.0) - std::atan(beta * std::tan(kPi * alpha / 2.0));
  const double pi_minus_length = kPi / 2.0 - theta0;
  auto log_g = [&](double phi, double psi) {
    const double lsin = std::log(phi <= kPi / 2.0 ? std::sin(phi) : std::sin(pi_minus_length + psi));
    const double sin_a = alpha * psi < kPi / 2.0 ? std::sin(alpha * psi) : std::sin(c + alpha * phi);
    const double x = c + (alpha - 1.0) * phi;
    const double cos_b =
        std::abs(x) < kPi / 4.0 ? std::sin(x) : std::cos(theta0 + (alpha - 1.0) * psi);
    return base + ratio * (lsin - std::log(sin_a)) + std::log(cos_b) - lsin;
  };
  const PhiIntegrals in = integrate_phi(log_g, length, alpha < 1.0);
  if (alpha < 1.0) {
    e.cdf = (kPi / 2.0 - theta0 + in.i1) / kPi;
    e.sf = in.i2 / kPi;
  } else {
    e.sf = in.i1 / kPi;
    e.cdf = (kPi / 2.0 - theta0 + in.i2) / kPi;
  }
  const double k = alpha / (kPi * std::abs(alpha - 1.0));
  e.pdf = k * in.i3 * std::exp(-log_z);
  e.dcdf_dy = k * in.i3 / std::tanh(y);
  return e;
}

// alpha == 1, beta > 0, any z.
StandardEval alpha_one(double beta, double y) {
  y = std::clamp(y, -709.0, 709.0);
  const double z = std::sinh(y);
  const double shift = -kPi * z / (2.0 * beta);
  const double log_scale = std::log(2.0 / kPi);
  auto log_g = [&](double phi, double psi) {
    const bool low = phi < kPi / 2.0;
    // pi/2 + beta * theta, written to stay accurate as a -> 0 at beta = 1.
    const double a = low ? (kPi / 2.0) * (1.0 + beta) - beta * phi
                         : (kPi / 2.0) * (1.0 - beta) + beta * psi;
    const double sn = low ? std::sin(phi) : std::sin(psi);
    const double cs = low ? std::cos(phi) : -std::cos(psi);
    return shift + log_scale + std::log(a) - std::log(sn) + a * cs / (beta * sn);
  };
  const PhiIntegrals in = integrate_phi(log_g, kPi, true);
  StandardEval e;
  e.cdf = in.i1 / kPi;
  e.sf = in.i2 / kPi;
  e.pdf = in.i3 / (2.0 * beta);
  e.dcdf_dy = e.pdf * std::cosh(y);
  return e;
}

}  // namespace

StandardEval evaluate_standard(double alpha, double beta, double y, bool force_numeric) {
  if (alpha == 2.0 && !force_numeric) return gaussian(y);
  if (alpha == 2.0) beta = 0.0;
  if (alpha == 1.0) {
    if (beta == 0.0) return cauchy(y);
    if (beta < 0.0) return reflect(alpha_one(-beta, -y));
    return alpha_one(beta, y);
  }
  if (alpha == 0.5 && std::abs(beta) == 1.0 && !force_numeric) {
    return beta > 0 ? levy(y) : reflect(levy(-y));
  }
  if (y == 0.0) return at_mode_origin(alpha, beta);
  if (y < 0.0) return reflect(general_positive(alpha, -beta, -y));
  return general_positive(alpha, beta, y);
}

namespace {

double pareto_constant(double alpha) {
  return std::tgamma(alpha) * std::sin(kPi * alpha / 2.0) / kPi;
}

// Closed-form inverses; returns NaN when no closed form applies.
double closed_form_solution(double alpha, double beta, double p, bool upper) {
  if (alpha == 2.0) {
    const double z = 2.0 * boost::math::erfc_inv(2.0 * p);
    return std::asinh(upper ? z : -z);
  }
  if (alpha == 1.0 && beta == 0.0) {
    const double z = 1.0 / std::tan(kPi * p);
    return std::asinh(upper ? z : -z);
  }
  if (alpha == 0.5 && std::abs(beta) == 1.0) {
    // Reduce to the beta = +1 law: lower tail of beta=-1 is the upper tail of beta=+1.
    const bool upper_pos = (beta > 0) == upper;
    const double r = upper_pos ? boost::math::erf_inv(p) : boost::math::erfc_inv(p);
    double y;
    if (r < 1e-100) {
      y = -2.0 * std::log(r);
    } else {
      y = std::asinh(1.0 / (2.0 * r * r));
    }
    return beta > 0 ? y : -y;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

double solve_standard(double alpha, double beta, double p, bool upper, double y_guess,
                      bool have_guess) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("solve_standard: probability outside (0,1)");
  const double closed = closed_form_solution(alpha, beta, p, upper);
  if (!std::isnan(closed)) return closed;

  const double y_limit = (alpha == 1.0) ? 709.0 : 1e5;
  const double log_p = std::log(p);
  // r(y) = log G(y) - log p, increasing in y for the lower problem and
  // decreasing for the upper one; we work with the increasing orientation.
  auto eval = [&](double y, double& r, double& dr) {
    const StandardEval e = evaluate_standard(alpha, beta, y);
    if (upper) {
      r = log_p - std::log(e.sf);
      dr = e.dcdf_dy / e.sf;
    } else {
      r = std::log(e.cdf) - log_p;
      dr = e.dcdf_dy / e.cdf;
    }
  };

  double y = y_guess;
  if (!have_guess) {
    y = 0.0;
    if (alpha < 2.0 && p < 0.1) {
      const double c = pareto_constant(alpha) * (upper ? (1.0 + beta) : (1.0 - beta));
      if (c > 0.0) {
        const double log_z = (std::log(c) - log_p) / alpha;
        const double mag = log_z > 20.0 ? log_z + kLn2 : std::asinh(std::exp(log_z));
        y = upper ? mag : -mag;
      }
    }
  }
  y = std::clamp(y, -y_limit, y_limit);

  double r, dr;
  eval(y, r, dr);
  if (r == 0.0) return y;
  // Bracket: lo has r < 0, hi has r > 0.
  double lo = -y_limit, hi = y_limit;
  double step = 0.5 + 0.25 * std::abs(y);
  if (r < 0) {
    lo = y;
    double t = y;
    for (int i = 0; i < 60; ++i) {
      t = std::min(t + step, y_limit);
      double rt, drt;
      eval(t, rt, drt);
      if (rt >= 0) {
        hi = t;
        break;
      }
      lo = t;
      y = t;
      r = rt;
      dr = drt;
      if (t >= y_limit) return y_limit;
      step *= 2.0;
    }
  } else {
    hi = y;
    double t = y;
    for (int i = 0; i < 60; ++i) {
      t = std::max(t - step, -y_limit);
      double rt, drt;
      eval(t, rt, drt);
      if (rt <= 0) {
        lo = t;
        break;
      }
      hi = t;
      y = t;
      r = rt;
      dr = drt;
      if (t <= -y_limit) return -y_limit;
      step *= 2.0;
    }
  }

  for (int iter = 0; iter < 200; ++iter) {
    double next = y - r / dr;
    if (!std::isfinite(next) || !(dr > 0) || next <= lo || next >= hi) {
      next = 0.5 * (lo + hi);
    }
    const double dy = next - y;
    y = next;
    if (std::abs(dy) <= 1e-14 * (1.0 + std::abs(y)) || hi - lo <= 1e-14 * (1.0 + std::abs(y))) {
      return y;
    }
    eval(y, r, dr);
    if (r == 0.0) return y;
    if (r < 0) {
      lo = y;
    } else {
      hi = y;
    }
    if (std::abs(r) < 1e-15) return y;
  }
  return y;
}

}  // namespace stablerisk::detail
