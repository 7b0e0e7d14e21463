#include "stablerisk/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <json.hpp>

#include "stablerisk/reference_tables.hpp"

namespace stablerisk {

namespace {

using json = nlohmann::json;

constexpr std::string_view kVersion = "0.1.0";

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& text, const std::string& key) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (trim(text.substr(used)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw SpecError("invalid number '" + text + "' for " + key);
}

std::uint64_t parse_unsigned(const std::string& text, const std::string& key) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(text, &used);
    if (trim(text.substr(used)).empty() && text.find('-') == std::string::npos) return v;
  } catch (const std::exception&) {
  }
  throw SpecError("invalid integer '" + text + "' for " + key);
}

std::vector<double> parse_list(const std::string& text, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string t = trim(item);
    if (!t.empty()) out.push_back(parse_double(t, key));
  }
  return out;
}

ExperimentKind parse_kind(const std::string& s) {
  if (s == "table") return ExperimentKind::Table;
  if (s == "curve") return ExperimentKind::Curve;
  if (s == "deep_tail") return ExperimentKind::DeepTail;
  throw SpecError("unknown kind '" + s + "'");
}

EngineChoice parse_engine(const std::string& s) {
  if (s == "monte_carlo") return EngineChoice::MonteCarlo;
  if (s == "cconv") return EngineChoice::Cconv;
  if (s == "both") return EngineChoice::Both;
  throw SpecError("unknown engine '" + s + "'");
}

LossTail parse_tail(const std::string& s) {
  if (auto t = parse_loss_tail(s)) return *t;
  throw SpecError("unknown tail '" + s + "'");
}

CopulaFamily parse_family_or_throw(const std::string& s) {
  if (auto f = parse_family(s)) return *f;
  throw SpecError("unknown copula family '" + s + "'");
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(a + (b - a) * i / (n - 1));
  return out;
}

std::vector<DependenceRow> tau_rows(const std::vector<double>& taus) {
  std::vector<DependenceRow> out;
  for (double t : taus) out.push_back({t, std::nullopt});
  return out;
}

std::vector<CopulaSeries> elliptical_series(const std::vector<double>& taus) {
  std::vector<CopulaSeries> out;
  out.push_back({"gaussian", CopulaFamily::Gaussian, 0, tau_rows(taus)});
  for (int nu : {10, 5, 1}) {
    out.push_back({"student_t_nu" + std::to_string(nu), CopulaFamily::StudentT, nu, tau_rows(taus)});
  }
  return out;
}

std::string format_g(double v, int digits = 10) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

}  // namespace

std::string_view kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Table: return "table";
    case ExperimentKind::Curve: return "curve";
    case ExperimentKind::DeepTail: return "deep_tail";
  }
  return "table";
}

std::string_view engine_choice_name(EngineChoice engine) {
  switch (engine) {
    case EngineChoice::MonteCarlo: return "monte_carlo";
    case EngineChoice::Cconv: return "cconv";
    case EngineChoice::Both: return "both";
  }
  return "monte_carlo";
}

void ExperimentSpec::validate() const {
  if (copulas.empty()) throw SpecError("experiment has no copula series");
  if (alphas.empty()) throw SpecError("experiment has no alpha values");
  if (q_levels.empty()) throw SpecError("experiment has no q levels");
  for (double a : alphas) {
    if (!(a > 0.0 && a <= 2.0)) throw SpecError("alpha " + format_g(a) + " outside (0, 2]");
  }
  for (double q : q_levels) {
    if (!(q > 0.0 && q < 0.5)) throw SpecError("q " + format_g(q) + " outside (0, 0.5)");
  }
  if (n_draws < 10'000) throw SpecError("n_draws must be at least 10000");
  for (const auto& s : copulas) {
    if (s.rows.empty()) throw SpecError("copula series '" + s.label + "' has no rows");
    if (s.label.empty()) throw SpecError("copula series without a label");
    if (s.family == CopulaFamily::StudentT && s.nu < 1) {
      throw SpecError("series '" + s.label + "': student_t needs nu >= 1");
    }
    if (s.family == CopulaFamily::Mixture) throw SpecError("mixture series are not supported");
    if (s.rotate_negative && s.family != CopulaFamily::Clayton) {
      throw SpecError("series '" + s.label + "': negative_tau applies to clayton only");
    }
    for (const auto& r : s.rows) {
      if (!r.tau && !r.theta) throw SpecError("series '" + s.label + "': row without tau or theta");
      try {
        resolve_row(s, r);
      } catch (const DomainError& e) {
        throw SpecError("series '" + s.label + "': " + e.what());
      }
    }
  }
}

ExperimentSpec parse_experiment(std::istream& in) {
  // Strip inline comments, which the ini reader only accepts at line start.
  std::stringstream cleaned;
  std::string line;
  while (std::getline(in, line)) {
    const auto cut = line.find_first_of(";#");
    cleaned << (cut == std::string::npos ? line : line.substr(0, cut)) << '\n';
  }
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(cleaned, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw SpecError(std::string("malformed experiment file: ") + e.what());
  }
  ExperimentSpec spec;
  bool have_alphas = false;
  for (const auto& [key, node] : tree) {
    const std::string value = trim(node.data());
    if (!node.empty()) {
      CopulaSeries series;
      series.label = key;
      bool have_family = false;
      for (const auto& [k, v] : node) {
        const std::string val = trim(v.data());
        if (k == "family") {
          series.family = parse_family_or_throw(val);
          have_family = true;
        } else if (k == "nu") {
          series.nu = static_cast<int>(parse_unsigned(val, key + ".nu"));
        } else if (k == "tau") {
          for (double t : parse_list(val, key + ".tau")) series.rows.push_back({t, std::nullopt});
        } else if (k == "negative_tau") {
          if (val != "native" && val != "rotated") {
            throw SpecError("unknown negative_tau '" + val + "' in [" + key + "]");
          }
          series.rotate_negative = val == "rotated";
        } else if (k == "theta") {
          for (double t : parse_list(val, key + ".theta")) series.rows.push_back({std::nullopt, t});
        } else {
          throw SpecError("unknown key '" + k + "' in [" + key + "]");
        }
      }
      if (!have_family) throw SpecError("section [" + key + "] needs a family");
      spec.copulas.push_back(std::move(series));
      continue;
    }
    if (key == "name") {
      spec.name = value;
    } else if (key == "kind") {
      spec.kind = parse_kind(value);
    } else if (key == "alphas") {
      spec.alphas = parse_list(value, key);
      have_alphas = true;
    } else if (key == "q") {
      spec.q_levels = parse_list(value, key);
    } else if (key == "n_draws") {
      spec.n_draws = parse_unsigned(value, key);
    } else if (key == "seed") {
      spec.master_seed = parse_unsigned(value, key);
    } else if (key == "engine") {
      spec.engine = parse_engine(value);
    } else if (key == "tail") {
      spec.tail = parse_tail(value);
    } else if (key == "output") {
      spec.output = value;
    } else {
      throw SpecError("unknown key '" + key + "'");
    }
  }
  if (!have_alphas) spec.alphas.assign(reference::kAlphas.begin(), reference::kAlphas.end());
  spec.validate();
  return spec;
}

ExperimentSpec load_experiment(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open " + path.string());
  if (path.extension() == ".json") {
    std::stringstream ss;
    ss << in.rdbuf();
    return experiment_from_json(ss.str());
  }
  return parse_experiment(in);
}

std::string experiment_to_json(const ExperimentSpec& spec) {
  json j;
  j["name"] = spec.name;
  j["kind"] = kind_name(spec.kind);
  j["alphas"] = spec.alphas;
  j["q_levels"] = spec.q_levels;
  j["n_draws"] = spec.n_draws;
  j["seed"] = spec.master_seed;
  j["output"] = spec.output;
  j["engine"] = engine_choice_name(spec.engine);
  j["tail"] = loss_tail_name(spec.tail);
  j["copulas"] = json::array();
  for (const auto& s : spec.copulas) {
    json series{{"label", s.label}, {"family", family_name(s.family)}, {"nu", s.nu}};
    if (s.rotate_negative) series["negative_tau"] = "rotated";
    series["rows"] = json::array();
    for (const auto& r : s.rows) {
      json row = json::object();
      if (r.tau) row["tau"] = *r.tau;
      if (r.theta) row["theta"] = *r.theta;
      series["rows"].push_back(row);
    }
    j["copulas"].push_back(series);
  }
  return j.dump(2);
}

ExperimentSpec experiment_from_json(std::string_view text) {
  ExperimentSpec spec;
  try {
    json j = json::parse(text);
    if (j.contains("spec")) j = j["spec"];  // a run manifest
    spec.name = j.at("name").get<std::string>();
    spec.kind = parse_kind(j.at("kind").get<std::string>());
    spec.alphas = j.at("alphas").get<std::vector<double>>();
    spec.q_levels = j.at("q_levels").get<std::vector<double>>();
    spec.n_draws = j.at("n_draws").get<std::size_t>();
    spec.master_seed = j.at("seed").get<std::uint64_t>();
    spec.output = j.at("output").get<std::string>();
    spec.engine = parse_engine(j.at("engine").get<std::string>());
    spec.tail = parse_tail(j.at("tail").get<std::string>());
    for (const auto& s : j.at("copulas")) {
      CopulaSeries series;
      series.label = s.at("label").get<std::string>();
      series.family = parse_family_or_throw(s.at("family").get<std::string>());
      series.nu = s.value("nu", 0);
      const auto negative = s.value("negative_tau", std::string("native"));
      if (negative != "native" && negative != "rotated") {
        throw SpecError("unknown negative_tau '" + negative + "'");
      }
      series.rotate_negative = negative == "rotated";
      for (const auto& r : s.at("rows")) {
        DependenceRow row;
        if (r.contains("tau")) row.tau = r["tau"].get<double>();
        if (r.contains("theta")) row.theta = r["theta"].get<double>();
        series.rows.push_back(row);
      }
      spec.copulas.push_back(std::move(series));
    }
  } catch (const json::exception& e) {
    throw SpecError(std::string("malformed experiment json: ") + e.what());
  }
  spec.validate();
  return spec;
}

std::vector<DependenceRow> table_rows(CopulaFamily family) {
  if (family == CopulaFamily::Gumbel) {
    return tau_rows({0, 0.01, 0.1, 0.2, 0.3, 0.4, 0.5, 0.7, 0.8, 0.9, 0.99, 1});
  }
  auto rows = tau_rows({-1, -0.9, -0.7, -0.4, -0.3, -0.1, -0.01, 0, 0.01, 0.1, 0.2, 0.3, 0.4, 0.7,
                        0.9, 1});
  if (family == CopulaFamily::Frank) {
    // The extreme rows are the largest parameters whose generator still fits
    // in double precision, not the Frechet bounds.
    rows.front().theta = -709.0;
    rows.back().theta = 709.0;
  }
  return rows;
}

std::vector<std::string> preset_names() {
  return {"table1", "table2", "table3", "table4", "table5", "fig1", "fig2", "fig3"};
}

ExperimentSpec preset(std::string_view name) {
  ExperimentSpec spec;
  spec.name = std::string(name);
  spec.output = "results/" + spec.name;
  const std::vector<double> table_alphas(reference::kAlphas.begin(), reference::kAlphas.end());
  auto table = [&](std::string label, CopulaFamily family, int nu) {
    spec.kind = ExperimentKind::Table;
    spec.alphas = table_alphas;
    spec.copulas.push_back({std::move(label), family, nu, table_rows(family)});
  };
  const auto curve_taus = linspace(-1.0, 1.0, 33);
  if (name == "table1") {
    table("gaussian", CopulaFamily::Gaussian, 0);
  } else if (name == "table2") {
    table("student_t", CopulaFamily::StudentT, 5);
  } else if (name == "table3") {
    table("frank", CopulaFamily::Frank, 0);
  } else if (name == "table4") {
    table("clayton", CopulaFamily::Clayton, 0);
    spec.copulas.back().rotate_negative = true;
  } else if (name == "table5") {
    table("gumbel", CopulaFamily::Gumbel, 0);
  } else if (name == "fig1") {
    spec.kind = ExperimentKind::Curve;
    spec.alphas = {0.2, 0.8};
    spec.copulas = elliptical_series(curve_taus);
  } else if (name == "fig2") {
    spec.kind = ExperimentKind::DeepTail;
    spec.alphas = {1.0};
    spec.q_levels = {0.05, 0.01, 0.001, 0.0001};
    spec.copulas = elliptical_series(curve_taus);
  } else if (name == "fig3") {
    spec.kind = ExperimentKind::Curve;
    spec.alphas = {2.0};
    spec.q_levels = {0.1, 0.01};
    spec.copulas = elliptical_series(curve_taus);
  } else {
    throw SpecError("unknown preset '" + std::string(name) + "'");
  }
  return spec;
}

ResolvedRow resolve_row(const CopulaSeries& series, const DependenceRow& row) {
  using F = CopulaFamily;
  ResolvedRow out;
  if (row.theta) {
    const double th = *row.theta;
    switch (series.family) {
      case F::Gaussian: out.copula = CopulaSpec::gaussian(th); break;
      case F::StudentT: out.copula = CopulaSpec::student_t(th, series.nu); break;
      case F::Clayton: out.copula = CopulaSpec::clayton(th); break;
      case F::ClaytonRotated: out.copula = CopulaSpec::clayton_rotated(th); break;
      case F::Frank: out.copula = CopulaSpec::frank(th); break;
      case F::Gumbel: out.copula = CopulaSpec::gumbel(th); break;
      case F::Independence: out.copula = CopulaSpec::independence(); break;
      case F::Comonotone: out.copula = CopulaSpec::comonotone(); break;
      case F::Countermonotone: out.copula = CopulaSpec::countermonotone(); break;
      case F::Mixture: throw DomainError("mixture rows need an explicit specification");
    }
    out.theta = th;
    out.tau = row.tau ? *row.tau : param_to_tau(out.copula);
  } else {
    const double tau = *row.tau;
    const bool rotate = series.rotate_negative && series.family == F::Clayton && tau < 0.0 && tau > -1.0;
    out.copula = tau_to_param(rotate ? F::ClaytonRotated : series.family, tau, series.nu);
    out.theta = out.copula.parameter();
    out.tau = *row.tau;
  }
  return out;
}

std::vector<SimulationConfig> build_cells(const ExperimentSpec& spec) {
  std::vector<SimulationConfig> cells;
  std::vector<Engine> engines;
  if (spec.engine != EngineChoice::Cconv) engines.push_back(Engine::MonteCarlo);
  if (spec.engine != EngineChoice::MonteCarlo) engines.push_back(Engine::Cconv);
  std::uint64_t id = 0;
  for (std::size_t si = 0; si < spec.copulas.size(); ++si) {
    const auto& series = spec.copulas[si];
    std::vector<ResolvedRow> resolved;
    for (const auto& r : series.rows) resolved.push_back(resolve_row(series, r));
    for (double q : spec.q_levels) {
      for (std::size_t ri = 0; ri < resolved.size(); ++ri) {
        for (double alpha : spec.alphas) {
          for (Engine e : engines) {
            SimulationConfig c;
            c.n_draws = spec.n_draws;
            c.q = q;
            c.marginal = standard_symmetric(alpha);
            c.copula = resolved[ri].copula;
            c.master_seed = spec.master_seed;
            c.cell_id = id++;
            // One stream per (series, row): all alphas and q levels of a row
            // see the same copula draws.
            c.stream_id = (static_cast<std::uint64_t>(si) << 32) | ri;
            c.tail = spec.tail;
            c.engine = e;
            const bool rotated = series.rotate_negative &&
                                 resolved[ri].copula.family == CopulaFamily::ClaytonRotated;
            c.family_label = rotated ? std::string(family_name(CopulaFamily::ClaytonRotated)) : series.label;
            c.theta_label = resolved[ri].theta;
            c.tau_label = resolved[ri].tau;
            cells.push_back(std::move(c));
          }
        }
      }
    }
  }
  return cells;
}

std::string csv_row(const SRCell& cell) {
  std::string row = cell.family;
  for (double v : {cell.theta, cell.tau, cell.alpha, cell.q, cell.sr, cell.sr_std_error,
                   cell.var_sum.value, cell.var_single.value}) {
    row += ',';
    row += format_g(v);
  }
  row += ',';
  row += engine_name(cell.engine);
  row += ',' + std::to_string(cell.n_draws) + ',' + std::to_string(cell.seed);
  return row;
}

RunSummary run_experiment(const ExperimentSpec& spec, std::size_t threads) {
  spec.validate();
  const auto start = std::chrono::steady_clock::now();
  const auto cells = build_cells(spec);
  RunSummary summary;
  summary.cells = run_cell_grid(cells, threads);
  summary.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const std::filesystem::path dir(spec.output);
  std::filesystem::create_directories(dir);
  const std::size_t engines = spec.engine == EngineChoice::Both ? 2 : 1;
  std::size_t pos = 0;
  for (const auto& series : spec.copulas) {
    for (double q : spec.q_levels) {
      const std::size_t count = series.rows.size() * spec.alphas.size() * engines;
      const auto path = dir / (spec.name + "_" + series.label + "_q" + format_g(q) + ".csv");
      std::ofstream out(path, std::ios::binary);
      if (!out) throw std::runtime_error("cannot write " + path.string());
      out << kCsvHeader << '\n';
      for (std::size_t i = pos; i < pos + count; ++i) out << csv_row(summary.cells[i]) << '\n';
      pos += count;
      summary.csv_files.push_back(path);
    }
  }

  json manifest;
  manifest["tool"] = "stablerisk";
  manifest["version"] = kVersion;
  manifest["spec"] = json::parse(experiment_to_json(spec));
  manifest["threads"] = threads;
  manifest["wall_seconds"] = summary.wall_seconds;
  manifest["outputs"] = json::array();
  for (const auto& p : summary.csv_files) manifest["outputs"].push_back(p.filename().string());
  manifest["cells"] = json::array();
  for (const auto& c : summary.cells) {
    if (!c.ok()) ++summary.failed;
    manifest["cells"].push_back({{"cell_id", c.cell_id},
                                 {"family", c.family},
                                 {"theta", c.theta},
                                 {"tau", c.tau},
                                 {"alpha", c.alpha},
                                 {"q", c.q},
                                 {"engine", engine_name(c.engine)},
                                 {"status", c.status}});
  }
  manifest["failed_cells"] = summary.failed;
  summary.manifest = dir / (spec.name + "_manifest.json");
  std::ofstream out(summary.manifest);
  out << manifest.dump(2) << '\n';
  return summary;
}

}  // namespace stablerisk
