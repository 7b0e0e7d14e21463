#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stablerisk/copula.hpp"
#include "stablerisk/stable.hpp"

namespace stablerisk {

/// Which tail of X + Y is the loss: Lower takes L = -(X + Y), Upper takes
/// L = X + Y.
enum class LossTail { Lower, Upper };

std::string_view loss_tail_name(LossTail tail);
std::optional<LossTail> parse_loss_tail(std::string_view name);

enum class Engine { MonteCarlo, Cconv };

std::string_view engine_name(Engine engine);

struct SimulationConfig {
  std::size_t n_draws = 1'000'000;
  double q = 0.05;
  StableParams marginal = standard_symmetric(1.0);
  CopulaSpec copula;
  std::uint64_t master_seed = 0;
  std::uint64_t cell_id = 0;
  /// Random stream of the copula draws. Cells sharing (master_seed,
  /// stream_id, copula, n_draws) reuse the same uniforms.
  std::uint64_t stream_id = 0;
  LossTail tail = LossTail::Lower;
  Engine engine = Engine::MonteCarlo;
  /// Labels echoed into the result; tau defaults to param_to_tau(copula).
  std::string family_label;
  std::optional<double> theta_label;
  std::optional<double> tau_label;

  /// Throws DomainError unless 0 < q < 0.5 and n_draws >= 1e4.
  void validate() const;
};

enum class QuantileMethod { MonteCarlo, CconvQuadrature, Analytic };

std::string_view method_name(QuantileMethod method);

struct QuantileEstimate {
  double value = 0.0;
  double level = 0.0;
  double std_error = 0.0;
  QuantileMethod method = QuantileMethod::Analytic;
};

struct SRCell {
  std::uint64_t cell_id = 0;
  std::string family;
  double theta = 0.0;
  double tau = 0.0;
  double alpha = 0.0;
  double q = 0.0;
  double sr = 0.0;
  double sr_std_error = 0.0;
  QuantileEstimate var_sum;
  QuantileEstimate var_single;
  Engine engine = Engine::MonteCarlo;
  std::size_t n_draws = 0;
  std::uint64_t seed = 0;
  /// "ok", or the error message of a failed cell.
  std::string status = "ok";

  bool ok() const { return status == "ok"; }
};

/// (1 - q) quantile of a loss sample: the ceil((1 - q) n)-th order
/// statistic, with the asymptotic standard error sqrt(q (1 - q) / n) / f(x)
/// and f from a kernel density estimate. Needs n >= 1e4.
QuantileEstimate empirical_var(std::span<const double> losses, double q);

/// n_draws realizations of X + Y with X = F^{-1}(U), Y = F^{-1}(V) and
/// (U, V) drawn from the copula on stream (master_seed, stream_id).
std::vector<double> simulate_sum_sample(const SimulationConfig& config);

/// VaR of one marginal at level q on the configured loss tail.
QuantileEstimate analytic_single_var(const StableParams& marginal, double q, LossTail tail);

/// One cell, by the configured engine. The denominator is always analytic.
SRCell super_additivity_ratio(const SimulationConfig& config);

/// 2^(1/alpha - 1): SR of two independent symmetric stable risks.
double sr_analytic_independent(double alpha, double q);

/// Evaluates cells on `parallelism` threads. Cells that share copula draws
/// are grouped so the uniforms are generated once. Results follow the input
/// order and do not depend on the thread count; a failing cell is reported
/// in its status without stopping the others.
std::vector<SRCell> run_cell_grid(std::span<const SimulationConfig> cells, std::size_t parallelism);

}  // namespace stablerisk
