#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "stablerisk/copula.hpp"
#include "stablerisk/numerics.hpp"
#include "stablerisk/stable.hpp"

namespace stablerisk {

/// A univariate law given by its distribution function and quantile. The
/// upper variants must stay accurate for arguments near 1.
struct Marginal {
  std::function<double(double)> cdf;
  std::function<double(double)> sf;
  /// x with cdf(x) = p.
  std::function<double(double)> quantile;
  /// x with sf(x) = p.
  std::function<double(double)> quantile_upper;
  /// Set for stable laws; enables the closed forms for degenerate copulas
  /// and the initial guess of the quantile search.
  std::optional<StableParams> stable;

  static Marginal from_stable(const StableParams& params);
};

/// Distribution of X + Y with X ~ marginal_x, Y ~ marginal_y joined by copula:
///
///   P(X + Y <= t) = int_0^1 D1C(w, F_Y(t - F_X^{-1}(w))) dw
///
/// evaluated by Gauss-Legendre quadrature, split where t - F_X^{-1}(w) crosses
/// the median of Y and with w = a + (b - a) sin^2(pi s / 2) on each piece. The
/// result is cross-checked against the rule with twice the nodes.
class ConvolvedDistribution {
 public:
  static constexpr int kDefaultNodes = 512;
  static constexpr double kConvergenceTolerance = 1e-5;

  ConvolvedDistribution(Marginal x, Marginal y, CopulaSpec copula, int nodes = kDefaultNodes);

  const Marginal& marginal_x() const { return x_; }
  const Marginal& marginal_y() const { return y_; }
  const CopulaSpec& copula() const { return copula_; }
  int nodes() const { return nodes_; }

  /// Throws NumericalFailure when doubling the nodes moves the value by more
  /// than kConvergenceTolerance.
  double cdf(double t) const;
  /// Quantile by bracketed root search; throws NumericalFailure when the
  /// bracket passes 1e12 in magnitude.
  double quantile(double u) const;
  /// Copula of (X, X + Y) at (u, v).
  double copula_of_x_and_sum(double u, double v) const;

 private:
  double integrate(const numerics::GaussLegendre& gl, double t, double upper) const;
  double converged_integral(double t, double upper) const;
  double degenerate_sum(double u, double one_minus_u) const;
  double degenerate_cdf(double t) const;
  double degenerate_quantile(double u) const;
  bool degenerate() const;

  Marginal x_, y_;
  CopulaSpec copula_;
  int nodes_;
  double y_median_ = 0.0;
  numerics::GaussLegendre gl_, gl_check_;
  // Components of a mixture that contains a step copula.
  std::shared_ptr<const ConvolvedDistribution> first_, second_;
};

double cconv_cdf(const ConvolvedDistribution& cd, double t);
double cconv_quantile(const ConvolvedDistribution& cd, double u);
double copula_of_x_and_sum(const ConvolvedDistribution& cd, double u, double v);

/// max over t_grid of |H *_{lambda A + (1-lambda) B} F (t) - (lambda H *_A F (t) + (1-lambda) H *_B F (t))|.
double mixture_decomposition_check(const Marginal& h, const Marginal& f, const CopulaSpec& a,
                                   const CopulaSpec& b, double lambda,
                                   std::span<const double> t_grid);

}  // namespace stablerisk
