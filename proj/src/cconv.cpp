#include "stablerisk/cconv.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <boost/math/tools/toms748_solve.hpp>

#include "stablerisk/errors.hpp"
#include "stablerisk/numerics.hpp"

namespace stablerisk {

namespace {

using F = CopulaFamily;

bool is_step_copula(const CopulaSpec& c) {
  if (c.family == F::Comonotone || c.family == F::Countermonotone) return true;
  if ((c.family == F::Gaussian || c.family == F::StudentT) && std::abs(c.rho) == 1.0) return true;
  return c.family == F::Clayton && c.theta == -1.0;
}

bool contains_step(const CopulaSpec& c) {
  if (c.family == F::Mixture) return contains_step(*c.first) || contains_step(*c.second);
  return is_step_copula(c);
}

bool comonotone_like(const CopulaSpec& c) {
  return c.family == F::Comonotone ||
         ((c.family == F::Gaussian || c.family == F::StudentT) && c.rho == 1.0);
}

// Root of an increasing function on (lo, hi) with an absolute-plus-relative
// stopping rule.
template <class Fn>
double increasing_root(Fn f, double lo, double hi, double scale) {
  const double flo = f(lo), fhi = f(hi);
  if (flo >= 0.0) return lo;
  if (fhi <= 0.0) return hi;
  boost::uintmax_t iters = 200;
  auto tol = [scale](double a, double b) {
    return std::abs(b - a) <= 1e-13 * std::max(scale, std::min(std::abs(a), std::abs(b)));
  };
  const auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
  return 0.5 * (r.first + r.second);
}

// u from its logit, with both u and 1 - u kept accurate.
struct LogitPoint {
  double u;
  double one_minus_u;
};

LogitPoint from_logit(double w) {
  return {1.0 / (1.0 + std::exp(-w)), 1.0 / (1.0 + std::exp(w))};
}

double quantile_at(const Marginal& m, const LogitPoint& p) {
  return p.u <= 0.5 ? m.quantile(p.u) : m.quantile_upper(p.one_minus_u);
}

}  // namespace

Marginal Marginal::from_stable(const StableParams& params) {
  auto table = quantile_table(params);
  Marginal m;
  m.cdf = [table](double x) { return table->cdf(x); };
  m.sf = [table](double x) { return table->sf(x); };
  m.quantile = [table](double p) { return table->interpolate_logit(std::log(p) - std::log1p(-p)); };
  m.quantile_upper = [table](double p) {
    return table->interpolate_logit(std::log1p(-p) - std::log(p));
  };
  m.stable = params;
  return m;
}

ConvolvedDistribution::ConvolvedDistribution(Marginal x, Marginal y, CopulaSpec copula, int nodes)
    : x_(std::move(x)), y_(std::move(y)), copula_(std::move(copula)), nodes_(nodes) {
  copula_.validate();
  if (nodes_ < 8) throw DomainError("ConvolvedDistribution: too few quadrature nodes");
  if (!x_.cdf || !x_.sf || !x_.quantile || !x_.quantile_upper || !y_.cdf || !y_.quantile) {
    throw DomainError("ConvolvedDistribution: incomplete marginal handle");
  }
  if (is_step_copula(copula_)) {
    // Validates that the closed form applies.
    degenerate_quantile(0.5);
    return;
  }
  if (contains_step(copula_)) {
    first_ = std::make_shared<const ConvolvedDistribution>(x_, y_, *copula_.first, nodes_);
    second_ = std::make_shared<const ConvolvedDistribution>(x_, y_, *copula_.second, nodes_);
    return;
  }
  y_median_ = y_.quantile(0.5);
  gl_ = numerics::gauss_legendre(static_cast<std::size_t>(nodes_));
  gl_check_ = numerics::gauss_legendre(static_cast<std::size_t>(2 * nodes_));
}

// int_0^upper D1C(w, F_Y(t - F_X^{-1}(w))) dw. The integrand changes fastest
// where t - F_X^{-1}(w) crosses the centre of Y, so the range is split there
// and each piece gets w = a + (b - a) sin^2(pi s / 2), which clusters nodes at
// both ends of the piece.
double ConvolvedDistribution::integrate(const numerics::GaussLegendre& gl, double t,
                                        double upper) const {
  constexpr double kPi = std::numbers::pi;
  const double centre = t - y_median_;
  double split = x_.cdf(centre), split_c = x_.sf(centre);
  // Pieces as (a, b, 1 - b).
  std::vector<std::array<double, 3>> pieces;
  if (split > 0.0 && split < upper) {
    pieces.push_back({0.0, split, split_c});
    pieces.push_back({split, upper, 1.0 - upper});
  } else {
    pieces.push_back({0.0, upper, 1.0 - upper});
  }
  double total = 0.0;
  for (const auto& [a, b, b_c] : pieces) {
    const double len = b - a;
    if (!(len > 0.0)) continue;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      const double s = 0.5 * (gl.nodes[i] + 1.0);
      const double sn = std::sin(0.5 * kPi * s), cs = std::cos(0.5 * kPi * s);
      const double w = a + len * sn * sn;
      const double w_c = b_c + len * cs * cs;
      if (!(w > 0.0 && w < 1.0)) continue;
      const double x = w <= 0.5 ? x_.quantile(w) : x_.quantile_upper(w_c);
      const double v = std::clamp(y_.cdf(t - x), 0.0, 1.0);
      const double weight = len * 0.5 * gl.weights[i] * 0.5 * kPi * std::sin(kPi * s);
      total += weight * conditional_cdf(copula_, w, v);
    }
  }
  return total;
}

double ConvolvedDistribution::converged_integral(double t, double upper) const {
  const double coarse = integrate(gl_, t, upper);
  const double fine = integrate(gl_check_, t, upper);
  if (!(std::abs(fine - coarse) <= kConvergenceTolerance)) {
    throw NumericalFailure("cconv: quadrature did not converge at t = " + std::to_string(t));
  }
  return fine;
}

bool ConvolvedDistribution::degenerate() const { return is_step_copula(copula_); }

// For a step copula X + Y = g(U) with g monotone (or constant), so the law of
// the sum follows from the quantiles alone.
double ConvolvedDistribution::degenerate_sum(double u, double one_minus_u) const {
  const LogitPoint p{u, one_minus_u}, flipped{one_minus_u, u};
  if (comonotone_like(copula_)) return quantile_at(x_, p) + quantile_at(y_, p);
  if (!x_.stable || !y_.stable || x_.stable->alpha != y_.stable->alpha ||
      x_.stable->beta != 0.0 || y_.stable->beta != 0.0) {
    throw DomainError(
        "countermonotone C-convolution needs symmetric stable margins with a common alpha");
  }
  // g(u) = F_X^{-1}(u) + F_Y^{-1}(1 - u) = (gx - gy) z(u) + dx + dy.
  const double gx = x_.stable->gamma, gy = y_.stable->gamma;
  if (gx == gy) return x_.stable->delta + y_.stable->delta;
  if (gx > gy) return quantile_at(x_, p) + quantile_at(y_, flipped);
  return quantile_at(x_, flipped) + quantile_at(y_, p);
}

double ConvolvedDistribution::degenerate_quantile(double u) const {
  return degenerate_sum(u, 1.0 - u);
}

double ConvolvedDistribution::degenerate_cdf(double t) const {
  if (!comonotone_like(copula_) && x_.stable->gamma == y_.stable->gamma) {
    return t >= x_.stable->delta + y_.stable->delta ? 1.0 : 0.0;
  }
  auto g = [&](double w) {
    const LogitPoint p = from_logit(w);
    return degenerate_sum(p.u, p.one_minus_u) - t;
  };
  return from_logit(increasing_root(g, -700.0, 700.0, 1.0)).u;
}

double ConvolvedDistribution::cdf(double t) const {
  if (std::isnan(t)) throw DomainError("cconv_cdf: t is NaN");
  if (degenerate()) return degenerate_cdf(t);
  if (first_) return copula_.weight * first_->cdf(t) + (1.0 - copula_.weight) * second_->cdf(t);
  return std::clamp(converged_integral(t, 1.0), 0.0, 1.0);
}

double ConvolvedDistribution::quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) throw DomainError("cconv_quantile: u outside (0, 1)");
  if (degenerate()) return degenerate_quantile(u);
  double guess = 0.0, scale = 1.0;
  if (x_.stable && y_.stable && x_.stable->alpha == y_.stable->alpha) {
    const StableParams iid = iid_sum_params(*x_.stable, *y_.stable);
    guess = stablerisk::quantile(iid, u);
    scale = iid.gamma;
  }
  constexpr double kLimit = 1e12;
  auto excess = [&](double t) { return cdf(t) - u; };
  double step = std::max(scale, 0.5 * std::abs(guess));
  double lo = guess - step, hi = guess + step;
  while (excess(lo) > 0.0) {
    step *= 2.0;
    lo = guess - step;
    if (std::abs(lo) > kLimit) throw NumericalFailure("cconv_quantile: lower bracket beyond 1e12");
  }
  step = std::max(scale, 0.5 * std::abs(guess));
  while (excess(hi) < 0.0) {
    step *= 2.0;
    hi = guess + step;
    if (std::abs(hi) > kLimit) throw NumericalFailure("cconv_quantile: upper bracket beyond 1e12");
  }
  const double root = increasing_root(excess, lo, hi, scale);
  if (!(std::abs(excess(root)) <= 1e-7)) {
    throw NumericalFailure("cconv_quantile: inversion did not reach 1e-7 in probability");
  }
  return root;
}

double ConvolvedDistribution::copula_of_x_and_sum(double u, double v) const {
  if (!(u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0)) {
    throw DomainError("copula_of_x_and_sum: arguments outside the unit square");
  }
  if (u == 0.0 || v == 0.0) return 0.0;
  if (v == 1.0) return u;
  if (u == 1.0) return v;
  if (comonotone_like(copula_)) return std::min(u, v);
  if (degenerate() || contains_step(copula_)) {
    throw DegenerateConfiguration("copula_of_x_and_sum: step copulas other than comonotone");
  }
  const double c = converged_integral(quantile(v), u);
  return std::clamp(c, std::max(0.0, u + v - 1.0), std::min(u, v));
}

double cconv_cdf(const ConvolvedDistribution& cd, double t) { return cd.cdf(t); }
double cconv_quantile(const ConvolvedDistribution& cd, double u) { return cd.quantile(u); }
double copula_of_x_and_sum(const ConvolvedDistribution& cd, double u, double v) {
  return cd.copula_of_x_and_sum(u, v);
}

double mixture_decomposition_check(const Marginal& h, const Marginal& f, const CopulaSpec& a,
                                   const CopulaSpec& b, double lambda,
                                   std::span<const double> t_grid) {
  const ConvolvedDistribution mixed(h, f, CopulaSpec::mixture(lambda, a, b));
  const ConvolvedDistribution da(h, f, a), db(h, f, b);
  double worst = 0.0;
  for (double t : t_grid) {
    const double left = mixed.cdf(t);
    const double right = lambda * da.cdf(t) + (1.0 - lambda) * db.cdf(t);
    worst = std::max(worst, std::abs(left - right));
  }
  return worst;
}

}  // namespace stablerisk
