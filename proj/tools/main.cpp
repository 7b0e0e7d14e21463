#include <cstdio>
#include <iostream>
#include <optional>
#include <thread>

#include <CLI11.hpp>

#include "stablerisk/harness.hpp"

using namespace stablerisk;

namespace {

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> draws;
  std::optional<std::string> out;
  std::optional<std::string> engine;
};

void apply(ExperimentSpec& spec, const Overrides& o) {
  if (o.seed) spec.master_seed = *o.seed;
  if (o.draws) spec.n_draws = *o.draws;
  if (o.out) spec.output = *o.out;
  if (o.engine) {
    if (*o.engine == "monte_carlo") {
      spec.engine = EngineChoice::MonteCarlo;
    } else if (*o.engine == "cconv") {
      spec.engine = EngineChoice::Cconv;
    } else {
      spec.engine = EngineChoice::Both;
    }
  }
  spec.validate();
}

int execute(ExperimentSpec spec, const Overrides& o, std::size_t threads) {
  apply(spec, o);
  const auto summary = run_experiment(spec, threads);
  for (const auto& f : summary.csv_files) std::cout << f.string() << '\n';
  std::cout << summary.manifest.string() << '\n';
  std::printf("%zu cells, %zu failed, %.1f s\n", summary.cells.size(), summary.failed, summary.wall_seconds);
  return summary.failed > 0 ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Value-at-Risk super-additivity of dependent stable risks"};
  app.require_subcommand(1);

  Overrides o;
  std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", o.seed, "Master seed");
    cmd->add_option("--draws", o.draws, "Monte Carlo draws per cell")->check(CLI::Range(10'000ul, 1'000'000'000ul));
    cmd->add_option("--out", o.out, "Output directory");
    cmd->add_option("--engine", o.engine, "monte_carlo, cconv or both")
        ->check(CLI::IsMember({"monte_carlo", "cconv", "both"}));
    cmd->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  };

  std::string spec_path;
  auto* run = app.add_subcommand("run", "Run an experiment file or a run manifest");
  run->add_option("spec", spec_path, "Experiment file (.ini) or manifest (.json)")->required();
  add_common(run);

  std::string preset_name;
  auto* pre = app.add_subcommand("preset", "Run a builtin experiment");
  pre->add_option("name", preset_name, "One of: table1..table5, fig1, fig2, fig3")
      ->required()
      ->check(CLI::IsMember(preset_names()));
  add_common(pre);

  bool full = false;
  double fault = 1.0;
  std::uint64_t validate_seed = 20240601;
  auto* val = app.add_subcommand("validate", "Run the invariant suite");
  auto* quick_flag = val->add_flag("--quick", "Reduced sample sizes (default)");
  val->add_flag("--full", full, "Full sample sizes and table reproduction")->excludes(quick_flag);
  val->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  val->add_option("--seed", validate_seed, "Master seed");
  val->add_option("--fault-quantile-scale", fault, "Scale the quantile used by inverse-transform checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return execute(load_experiment(spec_path), o, threads);
    if (*pre) {
      auto spec = preset(preset_name);
      return execute(spec, o, threads);
    }
    ValidationOptions opts;
    opts.level = full ? ValidationLevel::Full : ValidationLevel::Quick;
    opts.threads = threads;
    opts.seed = validate_seed;
    opts.quantile_fault = fault;
    const auto checks = validate(opts);
    print_checks(std::cout, checks);
    for (const auto& c : checks) {
      if (!c.passed) return 1;
    }
    return 0;
  } catch (const SpecError& e) {
    std::cerr << "invalid experiment: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
