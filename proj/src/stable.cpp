#include "stablerisk/stable.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "stablerisk/errors.hpp"

namespace stablerisk {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSnapAlphaOne = 1e-10;

double sign(double a) { return a < 0 ? -1.0 : 1.0; }

// gamma * sinh(y) + shift, saturating instead of overflowing.
double from_y(double y, double gamma, double shift) {
  if (y > 709.0) {
    const double log_x = y - std::numbers::ln2 + std::log(gamma);
    return log_x > 709.78 ? DBL_MAX : std::exp(log_x) + shift;
  }
  if (y < -709.0) {
    const double log_x = -y - std::numbers::ln2 + std::log(gamma);
    return log_x > 709.78 ? -DBL_MAX : -std::exp(log_x) + shift;
  }
  const double x = gamma * std::sinh(y) + shift;
  return std::clamp(x, -DBL_MAX, DBL_MAX);
}

double to_y(const StableParams& p, double x) {
  const double z = (x - detail::standard_shift(p)) / p.gamma;
  return std::asinh(z);
}

void check_probability(double u, const char* what) {
  if (!(u > 0.0 && u < 1.0)) throw DomainError(std::string(what) + ": probability outside (0,1)");
}

}  // namespace

StableParams StableParams::make(double alpha, double beta, double gamma, double delta) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw DomainError("stable: alpha must lie in (0, 2]");
  if (!(beta >= -1.0 && beta <= 1.0)) throw DomainError("stable: beta must lie in [-1, 1]");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw DomainError("stable: gamma must be positive");
  if (!std::isfinite(delta)) throw DomainError("stable: delta must be finite");
  if (alpha == 2.0) beta = 0.0;
  return StableParams{alpha, beta, gamma, delta};
}

StableParams standard_symmetric(double alpha) { return StableParams::make(alpha); }

MomentExistence moment_existence(const StableParams& params, double p) {
  if (!(p > 0.0)) throw DomainError("moment_existence: p must be positive");
  return {p, params.alpha == 2.0 || p < params.alpha};
}

std::complex<double> characteristic_function(const StableParams& params, double t) {
  const auto [alpha, beta, gamma, delta] = params;
  if (t == 0.0) return {1.0, 0.0};
  const double at = std::abs(t);
  const double st = sign(t);
  std::complex<double> exponent;
  if (alpha == 1.0) {
    exponent = {-gamma * at, delta * t - gamma * at * beta * st * (2.0 / kPi) * std::log(at)};
  } else {
    const double ga = std::pow(gamma * at, alpha);
    exponent = {-ga, delta * t + ga * beta * st * std::tan(kPi * alpha / 2.0)};
  }
  return std::exp(exponent);
}

double pdf(const StableParams& params, double x) {
  const double z = (x - detail::standard_shift(params)) / params.gamma;
  return detail::evaluate_standard(params.alpha, params.beta, std::asinh(z)).pdf / params.gamma;
}

double cdf(const StableParams& params, double x) {
  return detail::evaluate_standard(params.alpha, params.beta, to_y(params, x)).cdf;
}

double sf(const StableParams& params, double x) {
  return detail::evaluate_standard(params.alpha, params.beta, to_y(params, x)).sf;
}

double quantile(const StableParams& params, double u) {
  check_probability(u, "quantile");
  const bool upper = u > 0.5;
  const double p = upper ? 1.0 - u : u;
  const double y = detail::solve_standard(params.alpha, params.beta, p, upper, 0.0, false);
  return from_y(y, params.gamma, detail::standard_shift(params));
}

double quantile_upper(const StableParams& params, double p) {
  check_probability(p, "quantile_upper");
  const double y = detail::solve_standard(params.alpha, params.beta, p, true, 0.0, false);
  return from_y(y, params.gamma, detail::standard_shift(params));
}

double sample_one(const StableParams& params, RandomStream& rng) {
  const auto [alpha, beta, gamma, delta] = params;
  const double v = kPi * (rng.uniform() - 0.5);
  const double w = rng.exponential();
  if (alpha == 2.0) {
    // Same transform at alpha = 2 collapses to sqrt(2) * normal, kept for stream parity.
    return gamma * 2.0 * std::sin(v) * std::sqrt(w) + delta;
  }
  if (std::abs(alpha - 1.0) < kSnapAlphaOne) {
    const double a = kPi / 2.0 + beta * v;
    const double x =
        (2.0 / kPi) * (a * std::tan(v) - beta * std::log((kPi / 2.0) * w * std::cos(v) / a));
    return gamma * x + (2.0 / kPi) * beta * gamma * std::log(gamma) + delta;
  }
  const double t = std::tan(kPi * alpha / 2.0);
  const double b = std::atan(beta * t) / alpha;
  const double log_s = std::log1p(beta * beta * t * t) / (2.0 * alpha);
  const double num = std::sin(alpha * (v + b));
  const double log_mag = log_s + std::log(std::abs(num)) - std::log(std::cos(v)) / alpha +
                         ((1.0 - alpha) / alpha) *
                             (std::log(std::cos(v - alpha * (v + b))) - std::log(w));
  const double x = std::copysign(std::min(std::exp(log_mag), DBL_MAX), num);
  return std::clamp(gamma * x + delta, -DBL_MAX, DBL_MAX);
}

std::vector<double> sample(const StableParams& params, std::size_t n, RandomStream& rng) {
  std::vector<double> out(n);
  for (auto& x : out) x = sample_one(params, rng);
  return out;
}

double sample_log_positive_stable(double a, RandomStream& rng) {
  if (!(a > 0.0 && a <= 1.0)) throw DomainError("positive stable: index must lie in (0, 1]");
  if (a == 1.0) return 0.0;
  const double v = kPi * (rng.uniform() - 0.5);
  const double w = rng.exponential();
  const double shifted = a * (v + kPi / 2.0);
  return std::log(std::sin(shifted)) - std::log(std::cos(v)) / a +
         ((1.0 - a) / a) * (std::log(std::cos(v - shifted)) - std::log(w));
}

StableParams affine_transform_params(const StableParams& params, double a, double b) {
  if (a == 0.0) throw DomainError("affine_transform_params: scale factor must be nonzero");
  const auto [alpha, beta, gamma, delta] = params;
  const double abs_a = std::abs(a);
  double new_delta = a * delta + b;
  if (alpha == 1.0) new_delta -= (2.0 / kPi) * beta * gamma * a * std::log(abs_a);
  return StableParams::make(alpha, sign(a) * beta, abs_a * gamma, new_delta);
}

StableParams iid_sum_params(const StableParams& p1, const StableParams& p2) {
  if (p1.alpha != p2.alpha) throw DomainError("iid_sum_params: alpha must match");
  const double alpha = p1.alpha;
  const double w1 = std::pow(p1.gamma, alpha);
  const double w2 = std::pow(p2.gamma, alpha);
  const double beta = (p1.beta * w1 + p2.beta * w2) / (w1 + w2);
  return StableParams::make(alpha, beta, std::pow(w1 + w2, 1.0 / alpha), p1.delta + p2.delta);
}

namespace detail {

double standard_shift(const StableParams& params) {
  if (params.alpha == 1.0) {
    return params.delta + (2.0 / kPi) * params.beta * params.gamma * std::log(params.gamma);
  }
  return params.delta;
}

}  // namespace detail

QuantileTable::QuantileTable(const StableParams& params)
    : params_(params),
      shift_(detail::standard_shift(params)),
      step_(2.0 / static_cast<double>(kNodes - 1)),
      y_(kNodes),
      dy_(kNodes) {
  const double a = params.alpha, b = params.beta;
  const double sinh_c = std::sinh(kCentreStretch);
  auto solve_node = [&](std::size_t k, double guess, bool have_guess) {
    const double t = -1.0 + step_ * static_cast<double>(k);
    const double w = kLogitSpan * std::sinh(kCentreStretch * t) / sinh_c;
    const double dw_dt = kLogitSpan * kCentreStretch * std::cosh(kCentreStretch * t) / sinh_c;
    // Tail probability of the nearer side: 1 / (1 + exp(|w|)).
    const double p = std::exp(-std::abs(w)) / (1.0 + std::exp(-std::abs(w)));
    const double y = detail::solve_standard(a, b, p, w > 0, guess, have_guess);
    const auto e = detail::evaluate_standard(a, b, y);
    y_[k] = y;
    // du/dw = u(1-u) = p(1-p) in both halves.
    dy_[k] = p * (1.0 - p) / e.dcdf_dy * dw_dt;
    if (!std::isfinite(dy_[k])) dy_[k] = 0.0;
  };

  const std::size_t mid = kNodes / 2;
  solve_node(mid, 0.0, false);
  for (std::size_t k = mid + 1; k < kNodes; ++k) solve_node(k, y_[k - 1], true);
  for (std::size_t k = mid; k-- > 0;) solve_node(k, y_[k + 1], true);

  // Fritsch-Carlson limiter keeps the interpolant monotone.
  for (std::size_t k = 0; k + 1 < kNodes; ++k) {
    const double delta = (y_[k + 1] - y_[k]) / step_;
    if (delta == 0.0) {
      dy_[k] = dy_[k + 1] = 0.0;
      continue;
    }
    const double al = dy_[k] / delta, be = dy_[k + 1] / delta;
    const double r2 = al * al + be * be;
    if (r2 > 9.0) {
      const double tau = 3.0 / std::sqrt(r2);
      dy_[k] = tau * al * delta;
      dy_[k + 1] = tau * be * delta;
    }
  }
}

double QuantileTable::solve_outside(double u) const {
  const bool upper = u > 0.5;
  const double y = detail::solve_standard(params_.alpha, params_.beta, upper ? 1.0 - u : u,
                                          upper, 0.0, false);
  return from_y(y, params_.gamma, shift_);
}

double QuantileTable::interpolate_y(double w) const {
  const double node = std::asinh(w * std::sinh(kCentreStretch) / kLogitSpan) / kCentreStretch;
  const double t = (node + 1.0) / step_;
  const std::size_t k = std::min(static_cast<std::size_t>(t), kNodes - 2);
  const double s = t - static_cast<double>(k);
  const double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * y_[k] + (s3 - 2 * s2 + s) * step_ * dy_[k] +
         (-2 * s3 + 3 * s2) * y_[k + 1] + (s3 - s2) * step_ * dy_[k + 1];
}

double QuantileTable::interpolate(double u) const {
  check_probability(u, "QuantileTable");
  const double w = std::log(u) - std::log1p(-u);
  if (w <= -kLogitSpan || w >= kLogitSpan) return solve_outside(u);
  return from_y(interpolate_y(w), params_.gamma, shift_);
}

double QuantileTable::interpolate_logit(double w) const {
  if (std::isnan(w)) throw DomainError("QuantileTable: logit is NaN");
  if (w <= -kLogitSpan || w >= kLogitSpan) {
    const double p = 1.0 / (1.0 + std::exp(std::abs(w)));
    const double y = detail::solve_standard(params_.alpha, params_.beta, p, w > 0, 0.0, false);
    return from_y(y, params_.gamma, shift_);
  }
  return from_y(interpolate_y(w), params_.gamma, shift_);
}

double QuantileTable::refine_tail(double u, double y) const {
  const bool upper = u > 0.5;
  const double p = upper ? 1.0 - u : u;
  const auto e = detail::evaluate_standard(params_.alpha, params_.beta, y);
  double r, dr;
  if (upper) {
    r = std::log(p) - std::log(e.sf);
    dr = e.dcdf_dy / e.sf;
  } else {
    r = std::log(e.cdf) - std::log(p);
    dr = e.dcdf_dy / e.cdf;
  }
  const double next = y - r / dr;
  return std::isfinite(next) ? next : y;
}

double QuantileTable::operator()(double u) const {
  check_probability(u, "QuantileTable");
  const double w = std::log(u) - std::log1p(-u);
  if (w <= -kLogitSpan || w >= kLogitSpan) return solve_outside(u);
  double y = interpolate_y(w);
  if (u < kTailProbability || u > 1.0 - kTailProbability) y = refine_tail(u, y);
  return from_y(y, params_.gamma, shift_);
}

std::optional<double> QuantileTable::logit_of_y(double y) const {
  if (!(y > y_.front() && y < y_.back())) return std::nullopt;
  const auto it = std::upper_bound(y_.begin(), y_.end(), y);
  const std::size_t k = std::min(static_cast<std::size_t>(it - y_.begin()) - 1, kNodes - 2);
  const double y0 = y_[k], y1 = y_[k + 1], m0 = step_ * dy_[k], m1 = step_ * dy_[k + 1];
  auto h = [&](double s) {
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * m0 + (-2 * s3 + 3 * s2) * y1 +
           (s3 - s2) * m1;
  };
  auto dh = [&](double s) {
    const double s2 = s * s;
    return (6 * s2 - 6 * s) * y0 + (3 * s2 - 4 * s + 1) * m0 + (-6 * s2 + 6 * s) * y1 +
           (3 * s2 - 2 * s) * m1;
  };
  // Newton safeguarded by bisection; the limiter keeps h monotone.
  double lo = 0.0, hi = 1.0, s = y1 > y0 ? (y - y0) / (y1 - y0) : 0.0;
  for (int i = 0; i < 60 && hi - lo > 1e-15; ++i) {
    const double r = h(s) - y;
    if (r > 0) {
      hi = s;
    } else {
      lo = s;
    }
    const double d = dh(s);
    double next = d > 0 ? s - r / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - s) < 1e-15) {
      s = next;
      break;
    }
    s = next;
  }
  const double t = -1.0 + (static_cast<double>(k) + s) * step_;
  return kLogitSpan * std::sinh(kCentreStretch * t) / std::sinh(kCentreStretch);
}

double QuantileTable::cdf(double x) const {
  const double y = to_y(params_, x);
  if (const auto w = logit_of_y(y)) return 1.0 / (1.0 + std::exp(-*w));
  return detail::evaluate_standard(params_.alpha, params_.beta, y).cdf;
}

double QuantileTable::sf(double x) const {
  const double y = to_y(params_, x);
  if (const auto w = logit_of_y(y)) return 1.0 / (1.0 + std::exp(*w));
  return detail::evaluate_standard(params_.alpha, params_.beta, y).sf;
}

void QuantileTable::transform(std::span<const double> u, std::span<double> out) const {
  if (u.size() != out.size()) throw DomainError("QuantileTable::transform: size mismatch");
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = (*this)(u[i]);
}

std::shared_ptr<const QuantileTable> quantile_table(const StableParams& params) {
  using Key = std::tuple<double, double, double, double>;
  static std::mutex mutex;
  static std::map<Key, std::shared_ptr<const QuantileTable>> cache;
  const Key key{params.alpha, params.beta, params.gamma, params.delta};
  {
    std::lock_guard lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto table = std::make_shared<const QuantileTable>(params);
  std::lock_guard lock(mutex);
  return cache.emplace(key, std::move(table)).first->second;
}

}  // namespace stablerisk
