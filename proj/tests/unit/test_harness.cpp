#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "stablerisk/harness.hpp"

using namespace stablerisk;
namespace fs = std::filesystem;

namespace {

ExperimentSpec parse(const std::string& text) {
  std::istringstream in(text);
  return parse_experiment(in);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

const char* kSmall = R"(name = small
kind = table   ; inline comment
alphas = 0.5, 1.5
q = 0.05, 0.01
n_draws = 10000
seed = 11

[clayton]
family = clayton
tau = -0.3, 0, 0.4

[t3]
family = student_t
nu = 3
theta = 0.2   # parameter rows
)";

fs::path scratch_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("stablerisk_test_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("parse a spec") {
    const auto s = parse(kSmall);
    CHECK(s.name == "small");
    CHECK(s.kind == ExperimentKind::Table);
    CHECK(s.alphas == std::vector<double>{0.5, 1.5});
    CHECK(s.q_levels == std::vector<double>{0.05, 0.01});
    CHECK(s.n_draws == 10'000);
    CHECK(s.master_seed == 11);
    REQUIRE(s.copulas.size() == 2);
    CHECK(s.copulas[0].family == CopulaFamily::Clayton);
    CHECK(s.copulas[0].rows.size() == 3);
    CHECK(s.copulas[1].nu == 3);
    CHECK(*s.copulas[1].rows[0].theta == 0.2);
    CHECK(build_cells(s).size() == 2 * 2 * 4);
  }

  TEST_CASE("malformed specs raise SpecError") {
    CHECK_THROWS_AS(parse("kind = banana\n[g]\nfamily = gaussian\ntau = 0\n"), SpecError);
    CHECK_THROWS_AS(parse("alphas = 0.5\n"), SpecError);
    CHECK_THROWS_AS(parse("alphas = 2.5\n[g]\nfamily = gaussian\ntau = 0\n"), SpecError);
    CHECK_THROWS_AS(parse("q = 0.7\n[g]\nfamily = gaussian\ntau = 0\n"), SpecError);
    CHECK_THROWS_AS(parse("n_draws = 100\n[g]\nfamily = gaussian\ntau = 0\n"), SpecError);
    CHECK_THROWS_AS(parse("[g]\nfamily = nope\ntau = 0\n"), SpecError);
    CHECK_THROWS_AS(parse("[g]\nfamily = gumbel\ntau = -0.2\n"), SpecError);
    CHECK_THROWS_AS(parse("[g]\nfamily = student_t\ntau = 0.1\n"), SpecError);
    CHECK_THROWS_AS(parse("alphas = 0.5, x\n[g]\nfamily = gaussian\ntau = 0\n"), SpecError);
    CHECK_THROWS_AS(preset("table9"), SpecError);
  }

  TEST_CASE("presets") {
    for (const auto& name : preset_names()) {
      CAPTURE(name);
      CHECK_NOTHROW(preset(name).validate());
    }
    CHECK(build_cells(preset("table1")).size() == 176);
    CHECK(table_rows(CopulaFamily::Gumbel).size() == 12);
    CHECK(table_rows(CopulaFamily::Clayton).size() == 16);
    const auto t4 = build_cells(preset("table4"));
    CHECK(t4[11].family_label == "clayton_r90");
    CHECK(t4[11].copula.family == CopulaFamily::ClaytonRotated);
    CHECK(t4.back().family_label == "clayton");
    CHECK_THROWS_AS(parse("[g]\nfamily = gaussian\nnegative_tau = rotated\ntau = 0\n"), SpecError);
    const auto rot = parse("[c]\nfamily = clayton\nnegative_tau = rotated\ntau = -0.5, 0.5\n");
    CHECK(rot.copulas[0].rotate_negative);
    CHECK(experiment_from_json(experiment_to_json(rot)).copulas[0].rotate_negative);
  }

  TEST_CASE("row resolution") {
    CopulaSeries frank{"frank", CopulaFamily::Frank, 0, {}};
    const auto r = resolve_row(frank, DependenceRow{0.3, std::nullopt});
    CHECK(r.tau == 0.3);
    CHECK(r.theta == doctest::Approx(2.91743444592452).epsilon(1e-10));
    const auto p = resolve_row(frank, DependenceRow{std::nullopt, 5.0});
    CHECK(p.theta == 5.0);
    CHECK(p.tau == doctest::Approx(frank_tau(5.0)));
    CopulaSeries clayton{"clayton", CopulaFamily::Clayton, 0, {}};
    CHECK(resolve_row(clayton, DependenceRow{-0.3, std::nullopt}).copula.family == CopulaFamily::Clayton);
    clayton.rotate_negative = true;
    CHECK(resolve_row(clayton, DependenceRow{-0.3, std::nullopt}).copula == CopulaSpec::clayton_rotated(0.6 / 0.7));
    CHECK(resolve_row(clayton, DependenceRow{0.3, std::nullopt}).copula.family == CopulaFamily::Clayton);
    CHECK(resolve_row(clayton, DependenceRow{-1.0, std::nullopt}).copula == CopulaSpec::countermonotone());
    CopulaSeries gauss{"g", CopulaFamily::Gaussian, 0, {}};
    CHECK(resolve_row(gauss, DependenceRow{1.0, std::nullopt}).copula == CopulaSpec::comonotone());
  }

  TEST_CASE("json round trip") {
    const auto s = parse(kSmall);
    const auto back = experiment_from_json(experiment_to_json(s));
    CHECK(experiment_to_json(back) == experiment_to_json(s));
    CHECK(back.copulas[1].nu == 3);
    CHECK_THROWS_AS(experiment_from_json("{\"name\": 3}"), SpecError);
  }

  TEST_CASE("csv rows") {
    SRCell c;
    c.family = "clayton";
    c.theta = 2.0;
    c.tau = 0.5;
    c.alpha = 1.5;
    c.q = 0.05;
    c.sr = 1.25;
    c.n_draws = 10'000;
    c.seed = 4;
    const auto row = csv_row(c);
    CHECK(row.rfind("clayton,2,0.5,1.5,0.05,1.25,", 0) == 0);
    CHECK(std::count(row.begin(), row.end(), ',') == std::count(kCsvHeader.begin(), kCsvHeader.end(), ','));
    c.status = "failed";
    c.sr = std::numeric_limits<double>::quiet_NaN();
    CHECK(csv_row(c).find("nan") != std::string::npos);
  }

  TEST_CASE("runs write stable files and replay from the manifest") {
    auto s = parse(kSmall);
    s.output = scratch_dir("run_a").string();
    const auto a = run_experiment(s, 1);
    CHECK(a.failed == 0);
    CHECK(a.cells.size() == 16);
    REQUIRE(a.csv_files.size() == 4);
    for (const auto& f : a.csv_files) {
      const auto text = slurp(f);
      CHECK(text.rfind(std::string(kCsvHeader), 0) == 0);
    }
    CHECK(fs::exists(a.manifest));

    auto replay = load_experiment(a.manifest);
    replay.output = scratch_dir("run_b").string();
    const auto b = run_experiment(replay, 2);
    REQUIRE(b.csv_files.size() == a.csv_files.size());
    for (std::size_t i = 0; i < a.csv_files.size(); ++i) {
      CHECK(a.csv_files[i].filename() == b.csv_files[i].filename());
      CHECK(slurp(a.csv_files[i]) == slurp(b.csv_files[i]));
    }
    fs::remove_all(s.output);
    fs::remove_all(replay.output);
  }
}
