#include "stablerisk/risk.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <thread>
#include <tuple>

#include "stablerisk/cconv.hpp"
#include "stablerisk/errors.hpp"
#include "stablerisk/random_stream.hpp"
#include "stablerisk/stats.hpp"

namespace stablerisk {

std::string_view loss_tail_name(LossTail tail) {
  return tail == LossTail::Lower ? "lower" : "upper";
}

std::optional<LossTail> parse_loss_tail(std::string_view name) {
  if (name == "lower") return LossTail::Lower;
  if (name == "upper") return LossTail::Upper;
  return std::nullopt;
}

std::string_view engine_name(Engine engine) {
  return engine == Engine::MonteCarlo ? "monte_carlo" : "cconv";
}

std::string_view method_name(QuantileMethod method) {
  switch (method) {
    case QuantileMethod::MonteCarlo: return "monte_carlo";
    case QuantileMethod::CconvQuadrature: return "cconv_quadrature";
    case QuantileMethod::Analytic: return "analytic";
  }
  return "unknown";
}

void SimulationConfig::validate() const {
  if (!(q > 0.0 && q < 0.5)) throw DomainError("simulation: q must lie in (0, 0.5)");
  if (n_draws < 10'000) throw DomainError("simulation: n_draws must be at least 10000");
  StableParams::make(marginal.alpha, marginal.beta, marginal.gamma, marginal.delta);
  copula.validate();
}

QuantileEstimate empirical_var(std::span<const double> losses, double q) {
  const std::size_t n = losses.size();
  if (n < 10'000) throw DomainError("empirical_var: sample size below 10000");
  if (!(q > 0.0 && q < 0.5)) throw DomainError("empirical_var: q must lie in (0, 0.5)");
  std::vector<double> sorted(losses.begin(), losses.end());
  std::sort(sorted.begin(), sorted.end());
  const double dn = static_cast<double>(n);
  // The small offset keeps exact products such as 0.95 * 100 on their integer.
  auto k = static_cast<std::size_t>(std::ceil((1.0 - q) * dn - 1e-9));
  k = std::clamp<std::size_t>(k, 1, n);
  QuantileEstimate est;
  est.value = sorted[k - 1];
  est.level = 1.0 - q;
  est.method = QuantileMethod::MonteCarlo;
  const double window = 0.2 * q * std::pow(dn, -0.2);
  const auto m = std::max<std::size_t>(10, static_cast<std::size_t>(std::ceil(window * dn)));
  const double f = stats::kernel_density_at(sorted, est.value, m);
  est.std_error = std::isfinite(f) && f > 0.0 ? std::sqrt(q * (1.0 - q) / dn) / f : 0.0;
  return est;
}

namespace {

std::vector<UniformPair> draw_pairs(const SimulationConfig& c) {
  RandomStream rng(c.master_seed, c.stream_id);
  return sample_pair(c.copula, c.n_draws, rng);
}

std::vector<double> sums_from_pairs(const std::vector<UniformPair>& pairs, const StableParams& m) {
  const auto table = quantile_table(m);
  std::vector<double> out(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    out[i] = table->interpolate(pairs[i].u) + table->interpolate(pairs[i].v);
  }
  return out;
}

SRCell cell_header(const SimulationConfig& c) {
  SRCell cell;
  cell.cell_id = c.cell_id;
  cell.family = c.family_label.empty() ? std::string(family_name(c.copula.family)) : c.family_label;
  cell.theta = c.theta_label.value_or(c.copula.parameter());
  cell.alpha = c.marginal.alpha;
  cell.q = c.q;
  cell.engine = c.engine;
  cell.n_draws = c.engine == Engine::MonteCarlo ? c.n_draws : 0;
  cell.seed = c.master_seed;
  return cell;
}

void finish_cell(SRCell& cell, const SimulationConfig& c, const QuantileEstimate& var_sum) {
  cell.var_sum = var_sum;
  cell.var_single = analytic_single_var(c.marginal, c.q, c.tail);
  if (std::abs(cell.var_single.value) < 1e-12) {
    throw DegenerateConfiguration("super_additivity_ratio: single-risk VaR is zero");
  }
  cell.sr = var_sum.value / (2.0 * cell.var_single.value);
  cell.sr_std_error = var_sum.std_error / (2.0 * std::abs(cell.var_single.value));
}

QuantileEstimate monte_carlo_var(const SimulationConfig& c, std::vector<double> sums) {
  if (c.tail == LossTail::Lower) {
    for (double& s : sums) s = -s;
  }
  return empirical_var(sums, c.q);
}

QuantileEstimate cconv_var(const SimulationConfig& c) {
  const Marginal m = Marginal::from_stable(c.marginal);
  const ConvolvedDistribution cd(m, m, c.copula);
  QuantileEstimate est;
  est.level = 1.0 - c.q;
  est.method = QuantileMethod::CconvQuadrature;
  est.value = c.tail == LossTail::Upper ? cd.quantile(1.0 - c.q) : -cd.quantile(c.q);
  return est;
}

void label_tau(SRCell& cell, const SimulationConfig& c) {
  cell.tau = c.tau_label ? *c.tau_label : param_to_tau(c.copula);
}

}  // namespace

std::vector<double> simulate_sum_sample(const SimulationConfig& config) {
  config.validate();
  return sums_from_pairs(draw_pairs(config), config.marginal);
}

QuantileEstimate analytic_single_var(const StableParams& marginal, double q, LossTail tail) {
  QuantileEstimate est;
  est.level = 1.0 - q;
  est.method = QuantileMethod::Analytic;
  est.value = tail == LossTail::Upper ? quantile_upper(marginal, q) : -quantile(marginal, q);
  return est;
}

SRCell super_additivity_ratio(const SimulationConfig& config) {
  config.validate();
  SRCell cell = cell_header(config);
  label_tau(cell, config);
  if (config.engine == Engine::Cconv) {
    finish_cell(cell, config, cconv_var(config));
  } else {
    finish_cell(cell, config, monte_carlo_var(config, simulate_sum_sample(config)));
  }
  return cell;
}

double sr_analytic_independent(double alpha, double q) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw DomainError("sr_analytic_independent: alpha outside (0, 2]");
  if (!(q > 0.0 && q < 1.0)) throw DomainError("sr_analytic_independent: q outside (0, 1)");
  return std::exp2(1.0 / alpha - 1.0);
}

std::vector<SRCell> run_cell_grid(std::span<const SimulationConfig> cells, std::size_t parallelism) {
  std::vector<SRCell> out(cells.size());
  // Monte Carlo cells that can share one set of copula draws form a group;
  // every quadrature cell is its own group.
  std::vector<std::vector<std::size_t>> groups;
  std::map<std::tuple<std::uint64_t, std::uint64_t, std::size_t, std::string>, std::size_t> index;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& c = cells[i];
    if (c.engine == Engine::MonteCarlo) {
      const auto key = std::make_tuple(c.master_seed, c.stream_id, c.n_draws, c.copula.describe());
      const auto [it, inserted] = index.emplace(key, groups.size());
      if (inserted) groups.emplace_back();
      groups[it->second].push_back(i);
    } else {
      groups.push_back({i});
    }
  }

  auto run_group = [&](const std::vector<std::size_t>& members) {
    std::vector<UniformPair> pairs;
    std::string shared_error;
    const auto& first = cells[members.front()];
    if (first.engine == Engine::MonteCarlo) {
      try {
        first.validate();
        pairs = draw_pairs(first);
      } catch (const std::exception& e) {
        shared_error = e.what();
      }
    }
    for (std::size_t i : members) {
      const auto& c = cells[i];
      SRCell cell = cell_header(c);
      try {
        if (!shared_error.empty()) throw NumericalFailure(shared_error);
        c.validate();
        label_tau(cell, c);
        if (c.engine == Engine::Cconv) {
          finish_cell(cell, c, cconv_var(c));
        } else {
          finish_cell(cell, c, monte_carlo_var(c, sums_from_pairs(pairs, c.marginal)));
        }
      } catch (const std::exception& e) {
        cell.status = e.what();
        cell.sr = std::nan("");
        cell.sr_std_error = std::nan("");
      }
      out[i] = std::move(cell);
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(parallelism, 1, std::max<std::size_t>(1, groups.size()));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t g = next++; g < groups.size(); g = next++) run_group(groups[g]);
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return out;
}

}  // namespace stablerisk
