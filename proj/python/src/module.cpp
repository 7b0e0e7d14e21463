#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "stablerisk/cconv.hpp"
#include "stablerisk/copula.hpp"
#include "stablerisk/errors.hpp"
#include "stablerisk/harness.hpp"
#include "stablerisk/risk.hpp"
#include "stablerisk/stable.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace stablerisk;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

template <class Fn>
py::array_t<double> map_array(const Array& x, Fn fn) {
  py::array_t<double> out(x.request().shape);
  const double* src = x.data();
  double* dst = out.mutable_data();
  const auto n = static_cast<std::size_t>(x.size());
  {
    py::gil_scoped_release release;
    for (std::size_t i = 0; i < n; ++i) dst[i] = fn(src[i]);
  }
  return out;
}

py::array_t<double> to_numpy(std::vector<double> v) {
  auto* heap = new std::vector<double>(std::move(v));
  py::capsule owner(heap, [](void* p) { delete static_cast<std::vector<double>*>(p); });
  return py::array_t<double>(static_cast<py::ssize_t>(heap->size()), heap->data(), owner);
}

py::dict cell_dict(const SRCell& c) {
  return py::dict("cell_id"_a = c.cell_id, "family"_a = c.family, "theta"_a = c.theta, "tau"_a = c.tau,
                  "alpha"_a = c.alpha, "q"_a = c.q, "sr"_a = c.sr, "sr_se"_a = c.sr_std_error,
                  "var_sum"_a = c.var_sum.value, "var_sum_se"_a = c.var_sum.std_error,
                  "var_single"_a = c.var_single.value, "engine"_a = std::string(engine_name(c.engine)),
                  "n_draws"_a = c.n_draws, "seed"_a = c.seed, "status"_a = c.status);
}

Engine engine_from(const std::string& name) {
  if (name == "monte_carlo") return Engine::MonteCarlo;
  if (name == "cconv") return Engine::Cconv;
  throw py::value_error("engine must be 'monte_carlo' or 'cconv'");
}

LossTail tail_from(const std::string& name) {
  const auto t = parse_loss_tail(name);
  if (!t) throw py::value_error("tail must be 'lower' or 'upper'");
  return *t;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Stable laws, copulas and the super-additivity ratio";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<SpecError>(m, "SpecError", PyExc_ValueError);
  py::register_exception<NumericalFailure>(m, "NumericalFailure", PyExc_ArithmeticError);
  py::register_exception<EstimationFailure>(m, "EstimationFailure", PyExc_ArithmeticError);

  py::class_<StableParams>(m, "StableParams")
      .def(py::init(&StableParams::make), "alpha"_a, "beta"_a = 0.0, "gamma"_a = 1.0, "delta"_a = 0.0)
      .def_readonly("alpha", &StableParams::alpha)
      .def_readonly("beta", &StableParams::beta)
      .def_readonly("gamma", &StableParams::gamma)
      .def_readonly("delta", &StableParams::delta)
      .def("__eq__", [](const StableParams& a, const StableParams& b) { return a == b; })
      .def("__repr__", [](const StableParams& p) {
        return "StableParams(alpha=" + py::repr(py::float_(p.alpha)).cast<std::string>() +
               ", beta=" + py::repr(py::float_(p.beta)).cast<std::string>() +
               ", gamma=" + py::repr(py::float_(p.gamma)).cast<std::string>() +
               ", delta=" + py::repr(py::float_(p.delta)).cast<std::string>() + ")";
      });

  m.def("pdf", [](const StableParams& p, const Array& x) { return map_array(x, [&](double v) { return pdf(p, v); }); },
        "params"_a, "x"_a);
  m.def("cdf", [](const StableParams& p, const Array& x) { return map_array(x, [&](double v) { return cdf(p, v); }); },
        "params"_a, "x"_a);
  m.def("sf", [](const StableParams& p, const Array& x) { return map_array(x, [&](double v) { return sf(p, v); }); },
        "params"_a, "x"_a);
  m.def("quantile",
        [](const StableParams& p, const Array& u) { return map_array(u, [&](double v) { return quantile(p, v); }); },
        "params"_a, "u"_a);
  m.def(
      "sample",
      [](const StableParams& p, std::size_t n, std::uint64_t seed, std::uint64_t stream) {
        RandomStream rng(seed, stream);
        std::vector<double> out;
        {
          py::gil_scoped_release release;
          out = sample(p, n, rng);
        }
        return to_numpy(std::move(out));
      },
      "params"_a, "n"_a, "seed"_a, "stream"_a = 0);
  m.def("iid_sum_params", &iid_sum_params, "p1"_a, "p2"_a);
  m.def("affine_transform_params", &affine_transform_params, "params"_a, "a"_a, "b"_a);

  py::enum_<CopulaFamily>(m, "CopulaFamily")
      .value("GAUSSIAN", CopulaFamily::Gaussian)
      .value("STUDENT_T", CopulaFamily::StudentT)
      .value("CLAYTON", CopulaFamily::Clayton)
      .value("CLAYTON_R90", CopulaFamily::ClaytonRotated)
      .value("FRANK", CopulaFamily::Frank)
      .value("GUMBEL", CopulaFamily::Gumbel)
      .value("INDEPENDENCE", CopulaFamily::Independence)
      .value("COMONOTONE", CopulaFamily::Comonotone)
      .value("COUNTERMONOTONE", CopulaFamily::Countermonotone)
      .value("MIXTURE", CopulaFamily::Mixture);

  py::class_<CopulaSpec>(m, "Copula")
      .def_static("gaussian", &CopulaSpec::gaussian, "rho"_a)
      .def_static("student_t", &CopulaSpec::student_t, "rho"_a, "nu"_a)
      .def_static("clayton", &CopulaSpec::clayton, "theta"_a)
      .def_static("clayton_rotated", &CopulaSpec::clayton_rotated, "theta"_a)
      .def_static("frank", &CopulaSpec::frank, "theta"_a)
      .def_static("gumbel", &CopulaSpec::gumbel, "theta"_a)
      .def_static("independence", &CopulaSpec::independence)
      .def_static("comonotone", &CopulaSpec::comonotone)
      .def_static("countermonotone", &CopulaSpec::countermonotone)
      .def_static("mixture", &CopulaSpec::mixture, "weight"_a, "a"_a, "b"_a)
      .def_static("from_tau", &tau_to_param, "family"_a, "tau"_a, "nu"_a = 0)
      .def_readonly("family", &CopulaSpec::family)
      .def_property_readonly("parameter", &CopulaSpec::parameter)
      .def_property_readonly("tau", [](const CopulaSpec& c) { return param_to_tau(c); })
      .def_property_readonly("tail_dependence",
                             [](const CopulaSpec& c) {
                               const auto t = tail_dependence_closed(c);
                               return py::make_tuple(t.lambda_lower, t.lambda_upper);
                             })
      .def("cdf", [](const CopulaSpec& c, double u, double v) { return copula_cdf(c, u, v); }, "u"_a, "v"_a)
      .def("conditional_cdf", [](const CopulaSpec& c, double u, double v) { return conditional_cdf(c, u, v); },
           "u"_a, "v"_a)
      .def("conditional_inverse",
           [](const CopulaSpec& c, double u, double p) { return conditional_inverse(c, u, p); }, "u"_a, "p"_a)
      .def(
          "sample",
          [](const CopulaSpec& c, std::size_t n, std::uint64_t seed, std::uint64_t stream) {
            RandomStream rng(seed, stream);
            std::vector<UniformPair> pairs;
            {
              py::gil_scoped_release release;
              pairs = sample_pair(c, n, rng);
            }
            py::array_t<double> out({static_cast<py::ssize_t>(n), py::ssize_t{2}});
            auto w = out.mutable_unchecked<2>();
            for (std::size_t i = 0; i < n; ++i) {
              w(i, 0) = pairs[i].u;
              w(i, 1) = pairs[i].v;
            }
            return out;
          },
          "n"_a, "seed"_a, "stream"_a = 0)
      .def("__eq__", [](const CopulaSpec& a, const CopulaSpec& b) { return a == b; })
      .def("__repr__", &CopulaSpec::describe);

  py::class_<ConvolvedDistribution>(m, "ConvolvedDistribution")
      .def(py::init([](const StableParams& x, const StableParams& y, const CopulaSpec& c, int nodes) {
             return ConvolvedDistribution(Marginal::from_stable(x), Marginal::from_stable(y), c, nodes);
           }),
           "x"_a, "y"_a, "copula"_a, "nodes"_a = ConvolvedDistribution::kDefaultNodes)
      .def("cdf", [](const ConvolvedDistribution& d, const Array& t) {
        return map_array(t, [&](double v) { return d.cdf(v); });
      }, "t"_a)
      .def("quantile", &ConvolvedDistribution::quantile, "u"_a)
      .def("copula_of_x_and_sum", &ConvolvedDistribution::copula_of_x_and_sum, "u"_a, "v"_a);

  m.def(
      "empirical_var",
      [](const Array& losses, double q) {
        const auto e = empirical_var(std::span<const double>(losses.data(), static_cast<std::size_t>(losses.size())), q);
        return py::make_tuple(e.value, e.std_error);
      },
      "losses"_a, "q"_a, "Returns (VaR, standard error).");
  m.def(
      "analytic_var",
      [](const StableParams& p, double q, const std::string& tail) {
        return analytic_single_var(p, q, tail_from(tail)).value;
      },
      "params"_a, "q"_a, "tail"_a = "lower");
  m.def("sr_analytic_independent", &sr_analytic_independent, "alpha"_a, "q"_a);
  m.def(
      "super_additivity_ratio",
      [](double alpha, const CopulaSpec& copula, double q, std::size_t n_draws, std::uint64_t seed,
         const std::string& engine, const std::string& tail) {
        SimulationConfig c;
        c.marginal = standard_symmetric(alpha);
        c.copula = copula;
        c.q = q;
        c.n_draws = n_draws;
        c.master_seed = seed;
        c.engine = engine_from(engine);
        c.tail = tail_from(tail);
        SRCell cell;
        {
          py::gil_scoped_release release;
          cell = super_additivity_ratio(c);
        }
        return cell_dict(cell);
      },
      "alpha"_a, "copula"_a, "q"_a = 0.05, "n_draws"_a = 1'000'000, "seed"_a = 20240601,
      "engine"_a = "monte_carlo", "tail"_a = "lower");

  m.def("preset_names", &preset_names);
  m.def(
      "run",
      [](const std::string& source, const std::optional<std::string>& output, std::optional<std::size_t> n_draws,
         std::optional<std::uint64_t> seed, std::size_t threads) {
        const auto names = preset_names();
        ExperimentSpec spec = std::find(names.begin(), names.end(), source) != names.end()
                                  ? preset(source)
                                  : load_experiment(source);
        if (output) spec.output = *output;
        if (n_draws) spec.n_draws = *n_draws;
        if (seed) spec.master_seed = *seed;
        RunSummary s;
        {
          py::gil_scoped_release release;
          s = run_experiment(spec, threads);
        }
        py::list cells;
        for (const auto& c : s.cells) cells.append(cell_dict(c));
        return py::dict("cells"_a = cells, "csv_files"_a = s.csv_files, "manifest"_a = s.manifest,
                        "failed"_a = s.failed, "wall_seconds"_a = s.wall_seconds);
      },
      "source"_a, "output"_a = py::none(), "n_draws"_a = py::none(), "seed"_a = py::none(), "threads"_a = 1,
      "Runs a preset name or an experiment file and writes its CSVs and manifest.");
}
