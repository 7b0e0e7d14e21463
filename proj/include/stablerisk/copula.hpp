#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stablerisk/random_stream.hpp"

namespace stablerisk {

enum class CopulaFamily {
  Gaussian,
  StudentT,
  Clayton,
  /// Clayton rotated by 90 degrees: the law of (U, 1 - V) for (U, V) from
  /// Clayton(theta), theta > 0. Kendall tau -theta / (theta + 2).
  ClaytonRotated,
  Frank,
  Gumbel,
  Independence,
  Comonotone,
  Countermonotone,
  Mixture,
};

std::string_view family_name(CopulaFamily family);
std::optional<CopulaFamily> parse_family(std::string_view name);

/// A bivariate copula. Only the fields relevant to the family are used:
/// rho (and nu) for the elliptical families, theta for the Archimedean ones,
/// weight and the two components for a mixture weight*A + (1-weight)*B.
struct CopulaSpec {
  CopulaFamily family = CopulaFamily::Independence;
  double theta = 0.0;
  double rho = 0.0;
  int nu = 0;
  double weight = 0.0;
  std::shared_ptr<const CopulaSpec> first;
  std::shared_ptr<const CopulaSpec> second;

  static CopulaSpec gaussian(double rho);
  static CopulaSpec student_t(double rho, int nu);
  static CopulaSpec clayton(double theta);
  static CopulaSpec clayton_rotated(double theta);
  static CopulaSpec frank(double theta);
  static CopulaSpec gumbel(double theta);
  static CopulaSpec independence();
  static CopulaSpec comonotone();
  static CopulaSpec countermonotone();
  static CopulaSpec mixture(double weight, const CopulaSpec& a, const CopulaSpec& b);

  /// Throws DomainError when the parameters are outside the family's range.
  void validate() const;

  /// The dependence parameter reported next to tau in tables: rho for the
  /// elliptical families, theta for the Archimedean ones, 1/-1/0 for the
  /// degenerate ones and the weight for a mixture.
  double parameter() const;

  /// Human readable form, e.g. "student_t(rho=0.5,nu=5)".
  std::string describe() const;

  bool operator==(const CopulaSpec& other) const;
};

struct TailDependence {
  double lambda_upper = 0.0;
  double lambda_lower = 0.0;
};

struct UniformPair {
  double u;
  double v;
};

double copula_cdf(const CopulaSpec& spec, double u, double v);

/// dC/du: the distribution function of V given U = u.
double conditional_cdf(const CopulaSpec& spec, double u, double v);

/// v with conditional_cdf(spec, u, v) = p.
double conditional_inverse(const CopulaSpec& spec, double u, double p);

/// P(U > 1 - s, V > 1 - s), evaluated without cancellation for small s.
double joint_upper_tail(const CopulaSpec& spec, double s);

UniformPair sample_pair_one(const CopulaSpec& spec, RandomStream& rng);
std::vector<UniformPair> sample_pair(const CopulaSpec& spec, std::size_t n, RandomStream& rng);

/// Parameter with the given Kendall tau. tau = 1 and tau = -1 map to the
/// comonotone and countermonotone copulas. nu is used by StudentT only.
CopulaSpec tau_to_param(CopulaFamily family, double tau, int nu = 0);

/// Kendall's tau; closed form where one exists, otherwise
/// 1 - 4 * int int dC/du dC/dv du dv by quadrature.
double param_to_tau(const CopulaSpec& spec);

/// Kendall's tau of a Frank copula.
double frank_tau(double theta);

TailDependence tail_dependence_closed(const CopulaSpec& spec);

/// Default sequence 1e-2, 1e-3, ..., 1e-8 (distance to the corner).
std::vector<double> default_tail_sequence();

/// 1e-2, 1e-4, 1e-8, ..., 1e-256: for families whose ratios decay slowly
/// (Gaussian with rho near 1).
std::vector<double> extended_tail_sequence();

/// Estimates lambda_U = lim P(U > t, V > t) / (1 - t) and
/// lambda_L = lim C(t, t) / t along the given distances to the corner,
/// extrapolated with Aitken's delta-squared process. Throws
/// EstimationFailure when successive extrapolations disagree by more than
/// tolerance.
TailDependence tail_dependence_limit(const CopulaSpec& spec, std::span<const double> distances,
                                     double tolerance = 1e-2);
TailDependence tail_dependence_limit(const CopulaSpec& spec);

}  // namespace stablerisk
