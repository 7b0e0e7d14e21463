#include "stablerisk/copula.hpp"

#include <algorithm>
#include <array>
#include <cfloat>
#include <cmath>
#include <numbers>
#include <sstream>

#include "stablerisk/errors.hpp"
#include "stablerisk/numerics.hpp"
#include "stablerisk/stable.hpp"

namespace stablerisk {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
using F = CopulaFamily;

// Keeps sampled uniforms strictly inside (0, 1).
double open_unit(double u) { return std::clamp(u, DBL_TRUE_MIN, 1.0 - 0x1.0p-53); }

bool is_comonotone(const CopulaSpec& s) {
  return s.family == F::Comonotone || ((s.family == F::Gaussian || s.family == F::StudentT) &&
                                       s.rho == 1.0);
}

bool is_countermonotone(const CopulaSpec& s) {
  return s.family == F::Countermonotone ||
         ((s.family == F::Gaussian || s.family == F::StudentT) && s.rho == -1.0) ||
         (s.family == F::Clayton && s.theta == -1.0);
}

// Effective family after folding boundary parameters into the degenerate copulas.
F effective(const CopulaSpec& s) {
  if (is_comonotone(s)) return F::Comonotone;
  if (is_countermonotone(s)) return F::Countermonotone;
  if (s.family == F::Gumbel && s.theta == 1.0) return F::Independence;
  return s.family;
}

double log_expm1(double x) { return x > 30.0 ? x + std::log1p(-std::exp(-x)) : std::log(std::expm1(x)); }

// ---- elliptical --------------------------------------------------------

double elliptical_score(const CopulaSpec& s, double w) {
  return s.family == F::Gaussian ? numerics::normal_quantile(w)
                                 : numerics::student_t_quantile(s.nu, w);
}

double elliptical_score_cdf(const CopulaSpec& s, double z) {
  return s.family == F::Gaussian ? numerics::normal_cdf(z) : numerics::student_t_cdf(s.nu, z);
}

// P(V <= v | U = u) in terms of the scores x = score(u), y = score(v).
double elliptical_conditional(const CopulaSpec& s, double x, double y) {
  const double r = s.rho;
  const double c = std::sqrt((1.0 - r) * (1.0 + r));
  if (s.family == F::Gaussian) return numerics::normal_cdf((y - r * x) / c);
  const double nu = s.nu;
  const double scale = std::sqrt((nu + x * x) / (nu + 1.0)) * c;
  return numerics::student_t_cdf(s.nu + 1, (y - r * x) / scale);
}

double elliptical_conditional_inverse(const CopulaSpec& s, double u, double p) {
  const double r = s.rho;
  const double c = std::sqrt((1.0 - r) * (1.0 + r));
  const double x = elliptical_score(s, u);
  if (s.family == F::Gaussian) {
    return numerics::normal_cdf(r * x + c * numerics::normal_quantile(p));
  }
  const double nu = s.nu;
  const double scale = std::sqrt((nu + x * x) / (nu + 1.0)) * c;
  const double y = r * x + scale * numerics::student_t_quantile(s.nu + 1, p);
  return numerics::student_t_cdf(s.nu, y);
}

// C(u, v) = int_0^u D1C(w, v) dw, with w = u e^{-x} so that the lower tail is
// resolved; the upper half uses the complement v - int_u^1.
double elliptical_cdf(const CopulaSpec& s, double u, double v) {
  const double y = elliptical_score(s, v);
  const bool upper = u > 0.5;
  const double base = upper ? 1.0 - u : u;
  auto integrand = [&](double x) {
    const double w = base * std::exp(-x);
    const double z = elliptical_score(s, w);
    return w * elliptical_conditional(s, upper ? -z : z, y);
  };
  double total = 0.0;
  for (const auto& [a, b] : {std::pair{0.0, 2.0}, {2.0, 10.0}, {10.0, 60.0}}) {
    total += numerics::integrate_scalar(integrand, a, b, 1e-12, 0.0, 200).value[0];
  }
  const double c = upper ? v - total : total;
  return std::clamp(c, std::max(0.0, u + v - 1.0), std::min(u, v));
}

// ---- Clayton -------------------------------------------------------------

// log(u^-theta + v^-theta - 1); -inf where the bracket is not positive.
double clayton_log_bracket(double theta, double u, double v) {
  const double a = -theta * std::log(u);
  const double b = -theta * std::log(v);
  const double m = std::max(a, b);
  if (m > 30.0) return m + std::log(std::exp(a - m) + std::exp(b - m) - std::exp(-m));
  const double inner = std::expm1(a) + std::expm1(b);
  if (inner <= -1.0) return kNegInf;
  return std::log1p(inner);
}

double clayton_cdf(double theta, double u, double v) {
  const double l = clayton_log_bracket(theta, u, v);
  if (l == kNegInf) return 0.0;
  return std::exp(-l / theta);
}

double clayton_conditional(double theta, double u, double v) {
  const double l = clayton_log_bracket(theta, u, v);
  if (l == kNegInf) return 0.0;
  return std::exp((-theta - 1.0) * std::log(u) - (1.0 / theta + 1.0) * l);
}

double clayton_conditional_inverse(double theta, double u, double p) {
  const double k = -theta / (1.0 + theta) * std::log(p);
  if (theta > 0.0) {
    const double log_t = -theta * std::log(u) + log_expm1(k);
    return std::exp(-numerics::softplus(log_t) / theta);
  }
  const double t = std::exp(-theta * std::log(u)) * std::expm1(k);
  return std::exp(-std::log1p(t) / theta);
}

// Rotated Clayton, theta > 0. With w = 1 - v the Clayton conditional is
// (1 + t)^(-(1 + theta) / theta), t = u^theta (w^-theta - 1).
double clayton_r90_log_t(double theta, double u, double v) {
  return theta * std::log(u) + log_expm1(-theta * std::log1p(-v));
}

double clayton_r90_conditional(double theta, double u, double v) {
  const double l = numerics::softplus(clayton_r90_log_t(theta, u, v));
  return -std::expm1(-(1.0 + 1.0 / theta) * l);
}

double clayton_r90_conditional_inverse(double theta, double u, double p) {
  const double l = -std::log1p(-p) * theta / (1.0 + theta);
  const double m = log_expm1(l) - theta * std::log(u);
  return -std::expm1(-numerics::softplus(m) / theta);
}

double clayton_r90_cdf(double theta, double u, double v) {
  const double c = u - clayton_cdf(theta, u, 1.0 - v);
  return std::clamp(c, std::max(0.0, u + v - 1.0), std::min(u, v));
}

// ---- Frank (theta > 0; negative theta by reflection) ---------------------

// log(D - AB) with A = 1-e^{-theta u}, B = 1-e^{-theta v}, D = 1-e^{-theta};
// D - AB = e^{-theta u} B + e^{-theta v}(1 - e^{-theta(1-v)}), both terms >= 0.
double frank_log_gap(double theta, double u, double v) {
  const double log_b = std::log(-std::expm1(-theta * v));
  const double t1 = -theta * u + log_b;
  const double t2 = -theta * v + std::log(-std::expm1(-theta * (1.0 - v)));
  return numerics::log_add_exp(t1, t2);
}

double frank_log_d(double theta) { return std::log(-std::expm1(-theta)); }

double frank_cdf_pos(double theta, double u, double v) {
  // C = -log1p(-AB/D)/theta; near the upper corner AB/D -> 1 and the gap
  // form keeps the precision instead.
  const double r = std::expm1(-theta * u) * std::expm1(-theta * v) / -std::expm1(-theta);
  if (r < 0.5) return -std::log1p(-r) / theta;
  return -(frank_log_gap(theta, u, v) - frank_log_d(theta)) / theta;
}

// theta < 0 with a = e^{-theta u} - 1, b = e^{-theta v} - 1, d = e^{-theta} - 1,
// all positive: C = log1p(ab/d)/|theta| and D1C = e^{-theta u} b/(d + ab).
struct FrankNegLogs {
  double a, b, d;
};

FrankNegLogs frank_neg_logs(double theta, double u, double v) {
  return {std::log(std::expm1(-theta * u)), std::log(std::expm1(-theta * v)),
          std::log(std::expm1(-theta))};
}

double frank_cdf_neg(double theta, double u, double v) {
  if (u == 0.0 || v == 0.0) return 0.0;
  const auto l = frank_neg_logs(theta, u, v);
  return numerics::softplus(l.a + l.b - l.d) / -theta;
}

double frank_conditional_neg(double theta, double u, double v) {
  if (v == 0.0) return 0.0;
  if (u == 0.0) return std::expm1(-theta * v) / std::expm1(-theta);
  const auto l = frank_neg_logs(theta, u, v);
  return std::exp(-theta * u + l.b - numerics::log_add_exp(l.d, l.a + l.b));
}

double frank_conditional_pos(double theta, double u, double v) {
  const double log_b = std::log(-std::expm1(-theta * v));
  return std::exp(-theta * u + log_b - frank_log_gap(theta, u, v));
}

double frank_conditional_inverse_pos(double theta, double u, double p) {
  const double lp = std::log(p), lq = std::log1p(-p);
  const double num = numerics::log_add_exp(lq - theta * u, lp - theta);
  const double den = numerics::log_add_exp(lp, lq - theta * u);
  return -(num - den) / theta;
}

double frank_cdf(double theta, double u, double v) {
  if (theta > 0) return frank_cdf_pos(theta, u, v);
  return frank_cdf_neg(theta, u, v);
}

double frank_conditional(double theta, double u, double v) {
  if (theta > 0) return frank_conditional_pos(theta, u, v);
  return frank_conditional_neg(theta, u, v);
}

double frank_conditional_inverse(double theta, double u, double p) {
  if (theta > 0) return frank_conditional_inverse_pos(theta, u, p);
  return 1.0 - frank_conditional_inverse_pos(-theta, u, 1.0 - p);
}

// ---- Gumbel ----------------------------------------------------------------

// A = (x^theta + y^theta)^(1/theta) for x, y >= 0.
double gumbel_a(double theta, double x, double y) {
  const double m = std::max(x, y), n = std::min(x, y);
  if (m == 0.0) return 0.0;
  return m * std::exp(std::log1p(std::pow(n / m, theta)) / theta);
}

double gumbel_cdf(double theta, double u, double v) {
  return std::exp(-gumbel_a(theta, -std::log(u), -std::log(v)));
}

double gumbel_conditional(double theta, double u, double v) {
  const double x = -std::log(u), y = -std::log(v);
  const double a = gumbel_a(theta, x, y);
  return std::exp(-a + x + (theta - 1.0) * (std::log(x) - std::log(a)));
}

double gumbel_conditional_inverse(double theta, double u, double p) {
  const double x = -std::log(u);
  // Solve h(A) = -A - (theta-1) log A = log p + h(x) for A > x. h is convex
  // and decreasing, so Newton from the left converges monotonically.
  auto h = [&](double a) { return -a - (theta - 1.0) * std::log(a); };
  const double target = std::log(p) + h(x);
  double a = x;
  for (int i = 0; i < 200; ++i) {
    const double f = h(a) - target;
    const double df = -1.0 - (theta - 1.0) / a;
    const double next = a - f / df;
    if (!(next > a)) break;
    const bool done = next - a <= 1e-16 * next;
    a = next;
    if (done) break;
  }
  // y = (A^theta - x^theta)^(1/theta)
  const double ratio = std::max(0.0, -std::expm1(theta * (std::log(x) - std::log(a))));
  const double y = a * std::exp(std::log(ratio) / theta);
  return std::exp(-y);
}

// ---- Kendall tau -----------------------------------------------------------

// int int D1X(u,v) D2Y(u,v) du dv. All families here are exchangeable, so
// D2Y(u,v) = D1Y(v,u).
double cross_integral(const CopulaSpec& x, const CopulaSpec& y);

double diagonal_integral(const CopulaSpec& x, bool anti) {
  // int_0^1 (u - X(u, u)) du, or with X(u, 1-u) when anti.
  auto f = [&](double u) { return u - copula_cdf(x, u, anti ? 1.0 - u : u); };
  double total = 0.0;
  for (const auto& [a, b] : {std::pair{0.0, 0.5}, {0.5, 1.0}}) {
    total += numerics::integrate_scalar(f, a, b, 1e-10, 1e-13, 200).value[0];
  }
  return total;
}

double cross_integral(const CopulaSpec& x, const CopulaSpec& y) {
  if (x.family == F::Mixture) {
    return x.weight * cross_integral(*x.first, y) + (1.0 - x.weight) * cross_integral(*x.second, y);
  }
  if (y.family == F::Mixture) {
    return y.weight * cross_integral(x, *y.first) + (1.0 - y.weight) * cross_integral(x, *y.second);
  }
  const F fx = effective(x), fy = effective(y);
  const bool dx = fx == F::Comonotone || fx == F::Countermonotone;
  const bool dy = fy == F::Comonotone || fy == F::Countermonotone;
  if (dx && dy) {
    if (fx == fy) return fx == F::Comonotone ? 0.0 : 0.5;
    return 0.25;
  }
  if (dx) return diagonal_integral(y, fx == F::Countermonotone);
  if (dy) return diagonal_integral(x, fy == F::Countermonotone);
  auto inner = [&](double u) {
    auto g = [&](double v) { return conditional_cdf(x, u, v) * conditional_cdf(y, v, u); };
    return numerics::integrate_scalar(g, 0.0, 1.0, 1e-10, 1e-14, 200).value[0];
  };
  return numerics::integrate_scalar(inner, 0.0, 1.0, 1e-9, 1e-13, 200).value[0];
}

// Aitken's delta-squared extrapolation of the last three terms.
double aitken(double a, double b, double c) {
  const double d = (c - b) - (b - a);
  if (std::abs(c - b) <= 1e-15 * std::max(1.0, std::abs(c)) || d == 0.0) return c;
  return c - (c - b) * (c - b) / d;
}

}  // namespace

std::string_view family_name(CopulaFamily family) {
  switch (family) {
    case F::Gaussian: return "gaussian";
    case F::StudentT: return "student_t";
    case F::Clayton: return "clayton";
    case F::ClaytonRotated: return "clayton_r90";
    case F::Frank: return "frank";
    case F::Gumbel: return "gumbel";
    case F::Independence: return "independence";
    case F::Comonotone: return "comonotone";
    case F::Countermonotone: return "countermonotone";
    case F::Mixture: return "mixture";
  }
  return "unknown";
}

std::optional<CopulaFamily> parse_family(std::string_view name) {
  for (F f : {F::Gaussian, F::StudentT, F::Clayton, F::ClaytonRotated, F::Frank, F::Gumbel,
              F::Independence, F::Comonotone, F::Countermonotone, F::Mixture}) {
    if (family_name(f) == name) return f;
  }
  if (name == "t" || name == "student") return F::StudentT;
  return std::nullopt;
}

CopulaSpec CopulaSpec::gaussian(double rho) {
  CopulaSpec s;
  s.family = F::Gaussian;
  s.rho = rho;
  s.validate();
  return s;
}

CopulaSpec CopulaSpec::student_t(double rho, int nu) {
  CopulaSpec s;
  s.family = F::StudentT;
  s.rho = rho;
  s.nu = nu;
  s.validate();
  return s;
}

CopulaSpec CopulaSpec::clayton(double theta) {
  CopulaSpec s;
  s.family = F::Clayton;
  s.theta = theta;
  s.validate();
  return s;
}

CopulaSpec CopulaSpec::clayton_rotated(double theta) {
  CopulaSpec s;
  s.family = F::ClaytonRotated;
  s.theta = theta;
  s.validate();
  return s;
}

CopulaSpec CopulaSpec::frank(double theta) {
  CopulaSpec s;
  s.family = F::Frank;
  s.theta = theta;
  s.validate();
  return s;
}

CopulaSpec CopulaSpec::gumbel(double theta) {
  CopulaSpec s;
  s.family = F::Gumbel;
  s.theta = theta;
  s.validate();
  return s;
}

CopulaSpec CopulaSpec::independence() { return CopulaSpec{}; }

CopulaSpec CopulaSpec::comonotone() {
  CopulaSpec s;
  s.family = F::Comonotone;
  return s;
}

CopulaSpec CopulaSpec::countermonotone() {
  CopulaSpec s;
  s.family = F::Countermonotone;
  return s;
}

CopulaSpec CopulaSpec::mixture(double weight, const CopulaSpec& a, const CopulaSpec& b) {
  CopulaSpec s;
  s.family = F::Mixture;
  s.weight = weight;
  s.first = std::make_shared<const CopulaSpec>(a);
  s.second = std::make_shared<const CopulaSpec>(b);
  s.validate();
  return s;
}

void CopulaSpec::validate() const {
  switch (family) {
    case F::Gaussian:
      if (!(rho >= -1.0 && rho <= 1.0)) throw DomainError("gaussian copula: rho outside [-1, 1]");
      break;
    case F::StudentT:
      if (!(rho >= -1.0 && rho <= 1.0)) throw DomainError("t copula: rho outside [-1, 1]");
      if (nu < 1) throw DomainError("t copula: nu must be a positive integer");
      break;
    case F::Clayton:
      if (!(theta >= -1.0) || theta == 0.0 || !std::isfinite(theta)) {
        throw DomainError("clayton copula: theta must lie in [-1, inf) without 0");
      }
      break;
    case F::ClaytonRotated:
      if (!(theta > 0.0) || !std::isfinite(theta)) {
        throw DomainError("rotated clayton copula: theta must be positive");
      }
      break;
    case F::Frank:
      if (theta == 0.0 || !std::isfinite(theta)) throw DomainError("frank copula: theta must be nonzero");
      break;
    case F::Gumbel:
      if (!(theta >= 1.0) || !std::isfinite(theta)) throw DomainError("gumbel copula: theta must be >= 1");
      break;
    case F::Mixture:
      if (!(weight >= 0.0 && weight <= 1.0)) throw DomainError("mixture copula: weight outside [0, 1]");
      if (!first || !second) throw DomainError("mixture copula: missing component");
      first->validate();
      second->validate();
      break;
    case F::Independence:
    case F::Comonotone:
    case F::Countermonotone:
      break;
  }
}

double CopulaSpec::parameter() const {
  switch (family) {
    case F::Gaussian:
    case F::StudentT: return rho;
    case F::Clayton:
    case F::ClaytonRotated:
    case F::Frank:
    case F::Gumbel: return theta;
    case F::Independence: return 0.0;
    case F::Comonotone: return 1.0;
    case F::Countermonotone: return -1.0;
    case F::Mixture: return weight;
  }
  return 0.0;
}

std::string CopulaSpec::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << family_name(family);
  switch (family) {
    case F::Gaussian: os << "(rho=" << rho << ")"; break;
    case F::StudentT: os << "(rho=" << rho << ",nu=" << nu << ")"; break;
    case F::Clayton:
    case F::ClaytonRotated:
    case F::Frank:
    case F::Gumbel: os << "(theta=" << theta << ")"; break;
    case F::Mixture:
      os << "(weight=" << weight << "," << first->describe() << "," << second->describe() << ")";
      break;
    default: break;
  }
  return os.str();
}

bool CopulaSpec::operator==(const CopulaSpec& o) const {
  if (family != o.family) return false;
  switch (family) {
    case F::Gaussian: return rho == o.rho;
    case F::StudentT: return rho == o.rho && nu == o.nu;
    case F::Clayton:
    case F::ClaytonRotated:
    case F::Frank:
    case F::Gumbel: return theta == o.theta;
    case F::Mixture: return weight == o.weight && *first == *o.first && *second == *o.second;
    default: return true;
  }
}

double copula_cdf(const CopulaSpec& spec, double u, double v) {
  if (!(u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0)) {
    throw DomainError("copula_cdf: arguments outside the unit square");
  }
  if (spec.family == F::Mixture) {
    return spec.weight * copula_cdf(*spec.first, u, v) +
           (1.0 - spec.weight) * copula_cdf(*spec.second, u, v);
  }
  if (u == 0.0 || v == 0.0) return 0.0;
  if (u == 1.0) return v;
  if (v == 1.0) return u;
  switch (effective(spec)) {
    case F::Independence: return u * v;
    case F::Comonotone: return std::min(u, v);
    case F::Countermonotone: return std::max(u + v - 1.0, 0.0);
    case F::Gaussian:
    case F::StudentT:
      if (spec.rho == 0.0 && spec.family == F::Gaussian) return u * v;
      return elliptical_cdf(spec, u, v);
    case F::Clayton: return clayton_cdf(spec.theta, u, v);
    case F::ClaytonRotated: return clayton_r90_cdf(spec.theta, u, v);
    case F::Frank: return frank_cdf(spec.theta, u, v);
    case F::Gumbel: return gumbel_cdf(spec.theta, u, v);
    case F::Mixture: break;
  }
  return 0.0;
}

double conditional_cdf(const CopulaSpec& spec, double u, double v) {
  if (!(u > 0.0 && u < 1.0) || !(v >= 0.0 && v <= 1.0)) {
    throw DomainError("conditional_cdf: arguments outside the domain");
  }
  if (spec.family == F::Mixture) {
    return spec.weight * conditional_cdf(*spec.first, u, v) +
           (1.0 - spec.weight) * conditional_cdf(*spec.second, u, v);
  }
  if (v == 0.0) return 0.0;
  if (v == 1.0) return 1.0;
  switch (effective(spec)) {
    case F::Independence: return v;
    case F::Comonotone: return v >= u ? 1.0 : 0.0;
    case F::Countermonotone: return v >= 1.0 - u ? 1.0 : 0.0;
    case F::Gaussian:
    case F::StudentT:
      return elliptical_conditional(spec, elliptical_score(spec, u), elliptical_score(spec, v));
    case F::Clayton: return clayton_conditional(spec.theta, u, v);
    case F::ClaytonRotated: return clayton_r90_conditional(spec.theta, u, v);
    case F::Frank: return frank_conditional(spec.theta, u, v);
    case F::Gumbel: return gumbel_conditional(spec.theta, u, v);
    case F::Mixture: break;
  }
  return 0.0;
}

double conditional_inverse(const CopulaSpec& spec, double u, double p) {
  if (!(u > 0.0 && u < 1.0) || !(p > 0.0 && p < 1.0)) {
    throw DomainError("conditional_inverse: arguments outside (0, 1)");
  }
  switch (effective(spec)) {
    case F::Independence: return p;
    case F::Comonotone: return u;
    case F::Countermonotone: return 1.0 - u;
    case F::Gaussian:
    case F::StudentT: return elliptical_conditional_inverse(spec, u, p);
    case F::Clayton: return clayton_conditional_inverse(spec.theta, u, p);
    case F::ClaytonRotated: return clayton_r90_conditional_inverse(spec.theta, u, p);
    case F::Frank: return frank_conditional_inverse(spec.theta, u, p);
    case F::Gumbel: return gumbel_conditional_inverse(spec.theta, u, p);
    case F::Mixture: break;
  }
  // Mixture: the conditional law may have atoms, so bisect for the smallest
  // v with conditional_cdf >= p.
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200 && hi - lo > 1e-16; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (conditional_cdf(spec, u, mid) >= p) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double joint_upper_tail(const CopulaSpec& spec, double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw DomainError("joint_upper_tail: s outside [0, 1]");
  if (spec.family == F::Mixture) {
    return spec.weight * joint_upper_tail(*spec.first, s) +
           (1.0 - spec.weight) * joint_upper_tail(*spec.second, s);
  }
  if (s == 0.0) return 0.0;
  switch (effective(spec)) {
    case F::Clayton: {
      const double theta = spec.theta;
      if (theta < 0.0) return 2.0 * s - 1.0 + copula_cdf(spec, 1.0 - s, 1.0 - s);
      // 1 - 2t + C(t,t) with t = 1 - s and C(t,t) = (2 t^-theta - 1)^(-1/theta).
      const double e = std::expm1(-theta * std::log1p(-s));
      return std::max(0.0, 2.0 * s + std::expm1(-std::log1p(2.0 * e) / theta));
    }
    case F::ClaytonRotated:
      return std::max(0.0, 2.0 * s - 1.0 + copula_cdf(spec, 1.0 - s, 1.0 - s));
    case F::Gumbel: {
      // C(t,t) = t^k with k = 2^(1/theta).
      const double k = std::exp2(1.0 / spec.theta);
      return std::max(0.0, 2.0 * s + std::expm1(k * std::log1p(-s)));
    }
    default:
      // The remaining families are radially symmetric.
      return copula_cdf(spec, s, s);
  }
}

UniformPair sample_pair_one(const CopulaSpec& spec, RandomStream& rng) {
  switch (effective(spec)) {
    case F::Independence: {
      const double u = rng.uniform();
      return {u, rng.uniform()};
    }
    case F::Comonotone: {
      const double u = rng.uniform();
      return {u, u};
    }
    case F::Countermonotone: {
      const double u = rng.uniform();
      return {u, 1.0 - u};
    }
    case F::Gaussian:
    case F::StudentT: {
      const double r = spec.rho;
      const double c = std::sqrt((1.0 - r) * (1.0 + r));
      const double z1 = rng.normal(), z2 = rng.normal();
      double x = z1, y = r * z1 + c * z2;
      if (spec.family == F::StudentT) {
        const double w = std::sqrt(2.0 * rng.gamma(0.5 * spec.nu) / spec.nu);
        x /= w;
        y /= w;
      }
      return {open_unit(elliptical_score_cdf(spec, x)), open_unit(elliptical_score_cdf(spec, y))};
    }
    case F::Clayton: {
      const double theta = spec.theta;
      if (theta > 0.0) {
        const double log_v = rng.log_gamma(1.0 / theta);
        const double e1 = std::log(rng.exponential()), e2 = std::log(rng.exponential());
        return {open_unit(std::exp(-numerics::softplus(e1 - log_v) / theta)),
                open_unit(std::exp(-numerics::softplus(e2 - log_v) / theta))};
      }
      const double u = rng.uniform();
      return {u, open_unit(clayton_conditional_inverse(theta, u, rng.uniform()))};
    }
    case F::ClaytonRotated: {
      const double theta = spec.theta;
      const double log_v = rng.log_gamma(1.0 / theta);
      const double e1 = std::log(rng.exponential()), e2 = std::log(rng.exponential());
      return {open_unit(std::exp(-numerics::softplus(e1 - log_v) / theta)),
              open_unit(-std::expm1(-numerics::softplus(e2 - log_v) / theta))};
    }
    case F::Frank: {
      const double u = rng.uniform();
      return {u, open_unit(frank_conditional_inverse(spec.theta, u, rng.uniform()))};
    }
    case F::Gumbel: {
      const double inv = 1.0 / spec.theta;
      const double log_v = sample_log_positive_stable(inv, rng);
      const double e1 = std::log(rng.exponential()), e2 = std::log(rng.exponential());
      return {open_unit(std::exp(-std::exp((e1 - log_v) * inv))),
              open_unit(std::exp(-std::exp((e2 - log_v) * inv)))};
    }
    case F::Mixture: {
      const bool pick_first = rng.uniform() < spec.weight;
      return sample_pair_one(pick_first ? *spec.first : *spec.second, rng);
    }
  }
  return {0.5, 0.5};
}

std::vector<UniformPair> sample_pair(const CopulaSpec& spec, std::size_t n, RandomStream& rng) {
  spec.validate();
  std::vector<UniformPair> out(n);
  for (auto& p : out) p = sample_pair_one(spec, rng);
  return out;
}

double frank_tau(double theta) {
  if (theta == 0.0) return 0.0;
  const double t = std::abs(theta);
  double tau;
  if (t < 1e-2) {
    tau = t / 9.0 - t * t * t / 900.0;
  } else {
    auto f = [](double x) { return x == 0.0 ? 1.0 : x / std::expm1(x); };
    const double integral = numerics::integrate_scalar(f, 0.0, t, 1e-14, 0.0, 200).value[0];
    const double debye = integral / t;
    tau = 1.0 - 4.0 / t * (1.0 - debye);
  }
  return theta < 0 ? -tau : tau;
}

CopulaSpec tau_to_param(CopulaFamily family, double tau, int nu) {
  if (!(tau >= -1.0 && tau <= 1.0)) throw DomainError("tau_to_param: tau outside [-1, 1]");
  if (family == F::Gumbel && tau < 0.0) throw DomainError("tau_to_param: gumbel requires tau >= 0");
  if (family == F::ClaytonRotated && tau > 0.0) {
    throw DomainError("tau_to_param: rotated clayton requires tau <= 0");
  }
  if (tau == 1.0) return CopulaSpec::comonotone();
  if (tau == -1.0) return CopulaSpec::countermonotone();
  switch (family) {
    case F::Gaussian: return CopulaSpec::gaussian(std::sin(kPi * tau / 2.0));
    case F::StudentT: return CopulaSpec::student_t(std::sin(kPi * tau / 2.0), nu);
    case F::Clayton:
      if (tau == 0.0) return CopulaSpec::independence();
      return CopulaSpec::clayton(2.0 * tau / (1.0 - tau));
    case F::ClaytonRotated:
      if (tau == 0.0) return CopulaSpec::independence();
      return CopulaSpec::clayton_rotated(-2.0 * tau / (1.0 + tau));
    case F::Gumbel: return CopulaSpec::gumbel(1.0 / (1.0 - tau));
    case F::Frank: {
      if (tau == 0.0) return CopulaSpec::independence();
      const double target = std::abs(tau);
      double hi = 1.0;
      while (frank_tau(hi) < target) hi *= 2.0;
      const double theta = numerics::find_root(
          [&](double th) { return frank_tau(th) - target; }, 0.0, hi, 52);
      return CopulaSpec::frank(tau < 0 ? -theta : theta);
    }
    case F::Independence:
      if (tau != 0.0) throw DomainError("tau_to_param: independence requires tau = 0");
      return CopulaSpec::independence();
    default: throw DomainError("tau_to_param: family has no tau parametrization");
  }
}

double param_to_tau(const CopulaSpec& spec) {
  spec.validate();
  if (spec.family == F::Mixture) return 1.0 - 4.0 * cross_integral(spec, spec);
  switch (effective(spec)) {
    case F::Independence: return 0.0;
    case F::Comonotone: return 1.0;
    case F::Countermonotone: return -1.0;
    case F::Gaussian:
    case F::StudentT: return 2.0 / kPi * std::asin(spec.rho);
    case F::Clayton: return spec.theta / (spec.theta + 2.0);
    case F::ClaytonRotated: return -spec.theta / (spec.theta + 2.0);
    case F::Gumbel: return 1.0 - 1.0 / spec.theta;
    case F::Frank: return frank_tau(spec.theta);
    case F::Mixture: break;
  }
  return 0.0;
}

TailDependence tail_dependence_closed(const CopulaSpec& spec) {
  spec.validate();
  switch (effective(spec)) {
    case F::Comonotone: return {1.0, 1.0};
    case F::Countermonotone:
    case F::Independence:
    case F::Gaussian:
    case F::ClaytonRotated:
    case F::Frank: return {0.0, 0.0};
    case F::StudentT: {
      const double nu = spec.nu, r = spec.rho;
      const double l =
          2.0 * numerics::student_t_cdf(spec.nu + 1, -std::sqrt((nu + 1.0) * (1.0 - r) / (1.0 + r)));
      return {l, l};
    }
    case F::Clayton: return {0.0, spec.theta > 0 ? std::exp2(-1.0 / spec.theta) : 0.0};
    case F::Gumbel: return {2.0 - std::exp2(1.0 / spec.theta), 0.0};
    case F::Mixture: {
      const auto a = tail_dependence_closed(*spec.first);
      const auto b = tail_dependence_closed(*spec.second);
      const double w = spec.weight;
      return {w * a.lambda_upper + (1 - w) * b.lambda_upper,
              w * a.lambda_lower + (1 - w) * b.lambda_lower};
    }
  }
  return {};
}

std::vector<double> default_tail_sequence() {
  return {1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8};
}

std::vector<double> extended_tail_sequence() {
  std::vector<double> out;
  for (double s = 1e-2; s > 1e-300; s *= s) out.push_back(s);
  return out;
}

TailDependence tail_dependence_limit(const CopulaSpec& spec, std::span<const double> distances,
                                     double tolerance) {
  spec.validate();
  if (distances.size() < 3) throw DomainError("tail_dependence_limit: need at least 3 points");
  for (std::size_t i = 0; i < distances.size(); ++i) {
    if (!(distances[i] > 0.0 && distances[i] < 1.0) || (i > 0 && distances[i] >= distances[i - 1])) {
      throw DomainError("tail_dependence_limit: distances must decrease inside (0, 1)");
    }
  }
  auto extrapolate = [&](auto ratio, const char* which) {
    std::vector<double> r;
    r.reserve(distances.size());
    for (double s : distances) r.push_back(ratio(s));
    const std::size_t n = r.size();
    const double last = aitken(r[n - 3], r[n - 2], r[n - 1]);
    if (n >= 4) {
      const double prev = aitken(r[n - 4], r[n - 3], r[n - 2]);
      if (!(std::abs(last - prev) <= tolerance)) {
        throw EstimationFailure(std::string("tail_dependence_limit: ") + which +
                                " tail estimates did not settle");
      }
    }
    return std::clamp(last, 0.0, 1.0);
  };
  TailDependence out;
  out.lambda_upper = extrapolate([&](double s) { return joint_upper_tail(spec, s) / s; }, "upper");
  out.lambda_lower = extrapolate([&](double s) { return copula_cdf(spec, s, s) / s; }, "lower");
  return out;
}

TailDependence tail_dependence_limit(const CopulaSpec& spec) {
  const auto seq = default_tail_sequence();
  return tail_dependence_limit(spec, seq);
}

}  // namespace stablerisk
