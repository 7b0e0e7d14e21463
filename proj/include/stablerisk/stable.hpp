#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "stablerisk/random_stream.hpp"

namespace stablerisk {

/// Parameters of a stable law S(alpha, beta, gamma, delta) in the
/// 1-parametrization:
///
///   E exp(itX) = exp{ i delta t - gamma^alpha |t|^alpha (1 - i beta sign(t) tan(pi alpha/2)) }
///
/// with the log-corrected form for alpha = 1. The law is discontinuous in
/// (alpha, delta) at alpha = 1 when beta != 0.
struct StableParams {
  double alpha = 2.0;
  double beta = 0.0;
  double gamma = 1.0;
  double delta = 0.0;

  /// Validating constructor. Normalizes beta to 0 when alpha == 2.
  static StableParams make(double alpha, double beta = 0.0, double gamma = 1.0,
                           double delta = 0.0);

  bool operator==(const StableParams&) const = default;
};

/// Symmetric standard law S(alpha, 0, 1, 0).
StableParams standard_symmetric(double alpha);

struct MomentExistence {
  double p;
  bool exists;
};

/// E|X|^p < inf iff p < alpha (all p when alpha == 2).
MomentExistence moment_existence(const StableParams& params, double p);

std::complex<double> characteristic_function(const StableParams& params, double t);

double pdf(const StableParams& params, double x);
double cdf(const StableParams& params, double x);
/// 1 - cdf, evaluated without cancellation in the upper tail.
double sf(const StableParams& params, double x);

/// x with cdf(x) = u, by safeguarded Newton on the log-probability.
double quantile(const StableParams& params, double u);
/// x with sf(x) = p. Equal to quantile(1 - p) but keeps full precision for
/// tiny p.
double quantile_upper(const StableParams& params, double p);

/// Chambers-Mallows-Stuck draws.
std::vector<double> sample(const StableParams& params, std::size_t n, RandomStream& rng);
double sample_one(const StableParams& params, RandomStream& rng);

/// log of a positive stable variate with Laplace transform exp(-s^a), 0 < a <= 1.
/// This is S(a, 1, cos(pi a/2)^(1/a), 0); returned in log space because for
/// small a the variate itself overflows.
double sample_log_positive_stable(double a, RandomStream& rng);

/// Parameters of aX + b.
StableParams affine_transform_params(const StableParams& params, double a, double b);

/// Parameters of X1 + X2 for independent X1, X2 sharing alpha.
StableParams iid_sum_params(const StableParams& p1, const StableParams& p2);

/// Bulk inverse-CDF transform for one parameter set.
///
/// Nodes cover logit(u) in [-40, 40], uniform in t with
/// logit(u) = 40 sinh(c t) / sinh(c) so that they also cluster around the
/// median, where the density of small-alpha laws is sharply peaked. Each node
/// stores the
/// exact quantile and its derivative, and values between nodes come from a
/// monotone cubic Hermite interpolant in asinh(x). Outside 1e-3 < u < 1 - 1e-3
/// the interpolated value is polished with a Newton step on the exact CDF, and
/// beyond the grid ends the quantile is solved from scratch.
class QuantileTable {
 public:
  static constexpr std::size_t kNodes = 4096;
  static constexpr double kLogitSpan = 40.0;
  static constexpr double kTailProbability = 1e-3;
  static constexpr double kCentreStretch = 7.0;

  explicit QuantileTable(const StableParams& params);

  const StableParams& params() const { return params_; }

  /// Quantile at u in (0, 1).
  double operator()(double u) const;
  /// Interpolated value only, without tail refinement.
  double interpolate(double u) const;
  /// Interpolated quantile at logit(u) = w, which keeps full resolution in
  /// both tails.
  double interpolate_logit(double w) const;
  void transform(std::span<const double> u, std::span<double> out) const;

  /// Distribution function from the inverted interpolant (exact beyond the
  /// grid). Cheap, with the absolute accuracy of the table.
  double cdf(double x) const;
  double sf(double x) const;

 private:
  /// logit(cdf) at y = asinh(z) for y inside the grid.
  std::optional<double> logit_of_y(double y) const;
  double interpolate_y(double w) const;
  double solve_outside(double u) const;
  double refine_tail(double u, double y_guess) const;

  StableParams params_;
  double shift_;  // x = gamma * z + shift_, z standardized
  double step_;             // node spacing in t
  std::vector<double> y_;   // asinh(z) at each node
  std::vector<double> dy_;  // d y / d t
};

/// Shared, lazily built table for the given parameters (thread safe).
std::shared_ptr<const QuantileTable> quantile_table(const StableParams& params);

namespace detail {

/// Distribution of the standardized variable z = (x - shift)/gamma evaluated
/// at y = asinh(z). All members are accurate in their own tail.
struct StandardEval {
  double cdf;
  double sf;
  double pdf;      // density in z
  double dcdf_dy;  // pdf(z) * cosh(y)
};

/// location shift such that x = gamma * z + shift for the standardized z.
double standard_shift(const StableParams& params);

/// Evaluate the standardized law at y = asinh(z). When force_numeric is set
/// the closed forms (Gaussian, Cauchy, Levy) are bypassed in favour of the
/// general integral representation (used to test one against the other).
StandardEval evaluate_standard(double alpha, double beta, double y, bool force_numeric = false);

/// Solve for y = asinh(z) with cdf (upper = false) or sf (upper = true) equal to p.
double solve_standard(double alpha, double beta, double p, bool upper, double y_guess,
                      bool have_guess);

}  // namespace detail

}  // namespace stablerisk
