#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stablerisk/copula.hpp"
#include "stablerisk/errors.hpp"
#include "stablerisk/reference_tables.hpp"
#include "stablerisk/risk.hpp"

namespace stablerisk {

enum class ExperimentKind { Table, Curve, DeepTail };
enum class EngineChoice { MonteCarlo, Cconv, Both };

std::string_view kind_name(ExperimentKind kind);
std::string_view engine_choice_name(EngineChoice engine);

/// One dependence row: either a Kendall tau (mapped through tau_to_param) or
/// an explicit family parameter, in which case tau is only a label.
struct DependenceRow {
  std::optional<double> tau;
  std::optional<double> theta;
};

/// One copula family swept over its rows; one CSV per series and q level.
struct CopulaSeries {
  std::string label;
  CopulaFamily family = CopulaFamily::Gaussian;
  int nu = 0;
  std::vector<DependenceRow> rows;
  /// Clayton only: rows with -1 < tau < 0 use clayton_r90 at that tau, and
  /// are labelled clayton_r90 in the output.
  bool rotate_negative = false;
};

struct ExperimentSpec {
  std::string name = "experiment";
  ExperimentKind kind = ExperimentKind::Table;
  std::vector<CopulaSeries> copulas;
  std::vector<double> alphas;
  std::vector<double> q_levels = {0.05};
  std::size_t n_draws = 1'000'000;
  std::uint64_t master_seed = 20240601;
  std::string output = "results";
  EngineChoice engine = EngineChoice::MonteCarlo;
  LossTail tail = LossTail::Lower;

  /// Throws SpecError when the grids are empty or out of range.
  void validate() const;
};

/// Parses the key/value format:
///
///   name = table1
///   kind = table            ; table | curve | deep_tail
///   alphas = 0.2, 0.3
///   q = 0.05
///   n_draws = 1000000
///   seed = 20240601
///   engine = monte_carlo    ; monte_carlo | cconv | both
///   tail = lower            ; lower | upper
///   output = results/table1
///
///   [gaussian]              ; series label
///   family = gaussian
///   tau = -0.9, 0, 0.9      ; or: theta = ...
///   nu = 5                  ; student_t only
///   negative_tau = native   ; clayton only: native | rotated
ExperimentSpec parse_experiment(std::istream& in);
ExperimentSpec load_experiment(const std::filesystem::path& path);

/// JSON form used in run manifests.
std::string experiment_to_json(const ExperimentSpec& spec);
ExperimentSpec experiment_from_json(std::string_view json);

std::vector<std::string> preset_names();
/// Throws SpecError for an unknown name.
ExperimentSpec preset(std::string_view name);

/// Tau grid of the table presets for the given family.
std::vector<DependenceRow> table_rows(CopulaFamily family);

/// The copula of one row, with the labels written to the output.
struct ResolvedRow {
  CopulaSpec copula;
  double theta;
  double tau;
};
ResolvedRow resolve_row(const CopulaSeries& series, const DependenceRow& row);

/// Grid cells in output order: series, q, row, alpha, engine.
std::vector<SimulationConfig> build_cells(const ExperimentSpec& spec);

inline constexpr std::string_view kCsvHeader =
    "family,theta,tau,alpha,q,sr,sr_se,var_sum,var_single,engine,n_draws,seed";

std::string csv_row(const SRCell& cell);

struct RunSummary {
  std::vector<SRCell> cells;
  std::vector<std::filesystem::path> csv_files;
  std::filesystem::path manifest;
  std::size_t failed = 0;
  double wall_seconds = 0.0;
};

/// Runs the grid and writes one CSV per (series, q) plus manifest.json into
/// spec.output.
RunSummary run_experiment(const ExperimentSpec& spec, std::size_t threads);

/// One printed reference cell against a simulated one.
struct CellComparison {
  std::string_view tau;
  double alpha = 0.0;
  double printed = 0.0;
  double simulated = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

/// Reference cells printed below 1e-3 (countermonotone rows) must be
/// reproduced as SR <= 1e-3; the others within max(5% relative, 3 combined
/// standard errors), where the combined error is sqrt(2) times the simulated
/// one. `cells` is the output of the matching table preset, in order.
struct TableComparison {
  std::string family;
  std::size_t compared = 0;
  std::vector<CellComparison> failures;
};
TableComparison compare_with_reference(const reference::Table& table, std::span<const SRCell> cells);

/// Rows whose printed (theta, tau) pair is not reproduced at the printed
/// precision, as readable messages. theta -> tau is checked on every row,
/// tau -> theta on rows with |tau| < 1.
std::vector<std::string> calibration_mismatches(const reference::Table& table);

/// Validation suite.
enum class ValidationLevel { Quick, Full };

struct ValidationOptions {
  ValidationLevel level = ValidationLevel::Quick;
  std::size_t threads = 1;
  std::uint64_t seed = 20240601;
  /// Negative control: the inverse-transform checks use a quantile scaled by
  /// this factor when it differs from 1.
  double quantile_fault = 1.0;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

std::vector<CheckResult> validate(const ValidationOptions& options);
void print_checks(std::ostream& os, const std::vector<CheckResult>& checks);

}  // namespace stablerisk
