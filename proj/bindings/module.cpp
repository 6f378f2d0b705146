#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qbl/angles.hpp"
#include "qbl/boltzmann.hpp"
#include "qbl/ensemble.hpp"
#include "qbl/error.hpp"
#include "qbl/fits.hpp"
#include "qbl/graph.hpp"
#include "qbl/simulator.hpp"
#include "qbl/spectrum.hpp"
#include "qbl/thermo.hpp"
#include "qbl/version.hpp"

namespace py = pybind11;
using namespace qbl;

namespace {

Assignment assignment_from_spins(const std::vector<int>& spins) {
  Assignment z;
  z.spins.reserve(spins.size());
  for (const int s : spins) {
    require(s == 1 || s == -1, ErrorKind::InvalidAssignment, "spins must be +1 or -1");
    z.spins.push_back(static_cast<std::int8_t>(s));
  }
  return z;
}

py::array_t<std::complex<double>> amplitudes_array(const StateVector& state) {
  py::array_t<std::complex<double>> out(state.amp.size());
  std::copy(state.amp.begin(), state.amp.end(), out.mutable_data());
  return out;
}

py::array_t<double> probabilities_array(const StateVector& state) {
  py::array_t<double> out(state.amp.size());
  double* data = out.mutable_data();
  for (std::size_t z = 0; z < state.amp.size(); ++z) data[z] = std::norm(state.amp[z]);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "QAOA MaxCut simulation, Boltzmann-model fitting, and performance prediction";
  m.attr("__version__") = kVersion;

  py::register_exception<Error>(m, "QblError");

  py::class_<GraphInstance>(m, "GraphInstance")
      .def_readonly("n", &GraphInstance::n)
      .def_readonly("edges", &GraphInstance::edges)
      .def_readonly("seed", &GraphInstance::seed)
      .def_readonly("label", &GraphInstance::label)
      .def_property_readonly("edge_count", &GraphInstance::edge_count)
      .def_property_readonly("average_degree", &GraphInstance::average_degree)
      .def("__repr__", [](const GraphInstance& g) {
        return "<GraphInstance " + g.label + " n=" + std::to_string(g.n) +
               " |E|=" + std::to_string(g.edge_count()) + ">";
      });

  m.def("generate_er", &generate_er, py::arg("n"), py::arg("edge_prob"), py::arg("seed"),
        py::arg("label") = std::string{});
  m.def("read_instance", &read_instance, py::arg("path"));
  m.def("write_instance", &write_instance, py::arg("instance"), py::arg("path"));
  m.def(
      "cut_cost",
      [](const GraphInstance& g, const std::vector<int>& spins) {
        return cut_cost(g, assignment_from_spins(spins));
      },
      py::arg("instance"), py::arg("spins"));

  py::class_<CostSpectrum>(m, "CostSpectrum")
      .def_readonly("n", &CostSpectrum::n)
      .def_readonly("edge_count", &CostSpectrum::edge_count)
      .def_readonly("c_min", &CostSpectrum::c_min)
      .def_readonly("c_max", &CostSpectrum::c_max)
      .def_readonly("ground_degeneracy", &CostSpectrum::ground_degeneracy)
      .def_readonly("support", &CostSpectrum::support)
      .def_readonly("counts", &CostSpectrum::counts)
      .def("rho", &CostSpectrum::rho, py::arg("cost"))
      .def("density", [](const CostSpectrum& spec) {
        py::dict out;
        for (std::size_t i = 0; i < spec.support.size(); ++i) {
          out[py::int_(spec.support[i])] = spec.counts[i];
        }
        return out;
      });

  py::class_<CostTable>(m, "CostTable")
      .def_readonly("n", &CostTable::n)
      .def_readonly("edge_count", &CostTable::edge_count)
      .def("__len__", [](const CostTable& t) { return t.size(); })
      .def("cost_of", [](const CostTable& t, std::uint64_t index) {
        require(index < t.size(), ErrorKind::InvalidInput, "assignment index out of range");
        return static_cast<long>(t.costs[index]);
      });

  m.def(
      "enumerate_spectrum",
      [](const GraphInstance& g, bool want_table, int threads) {
        EnumerationOptions opts;
        opts.want_table = want_table;
        opts.threads = threads;
        EnumerationResult result = enumerate_spectrum(g, opts);
        return py::make_tuple(result.spectrum,
                              result.table ? py::cast(std::move(*result.table)) : py::none());
      },
      py::arg("instance"), py::arg("want_table") = false, py::arg("threads") = 0);
  m.def(
      "optimal_set",
      [](const GraphInstance& g) {
        std::vector<std::vector<int>> out;
        for (const auto& z : optimal_set(g)) {
          out.emplace_back(z.spins.begin(), z.spins.end());
        }
        return out;
      },
      py::arg("instance"));

  py::class_<CostDistribution>(m, "CostDistribution")
      .def(py::init([](std::vector<long> support, std::vector<double> mass) {
             require(support.size() == mass.size(), ErrorKind::InvalidInput,
                     "support and mass must have equal length");
             return CostDistribution{std::move(support), std::move(mass)};
           }),
           py::arg("support"), py::arg("mass"))
      .def_readonly("support", &CostDistribution::support)
      .def_readonly("mass", &CostDistribution::mass)
      .def("mass_at", &CostDistribution::mass_at, py::arg("cost"))
      .def("mean", &CostDistribution::mean);

  py::class_<BinnedDistribution>(m, "BinnedDistribution")
      .def_readonly("bin_width", &BinnedDistribution::bin_width)
      .def_readonly("lo", &BinnedDistribution::lo)
      .def_readonly("hi", &BinnedDistribution::hi)
      .def_readonly("mean", &BinnedDistribution::mean)
      .def_readonly("stdev", &BinnedDistribution::stdev)
      .def_readonly("support_count", &BinnedDistribution::support_count);

  m.def("bin_distribution", &bin_distribution, py::arg("dist"), py::arg("spectrum"),
        py::arg("n_bins") = 7);

  py::class_<AngleSet>(m, "AngleSet")
      .def(py::init([](std::vector<double> betas, std::vector<double> gammas) {
             AngleSet a;
             a.p = static_cast<int>(betas.size());
             a.betas = std::move(betas);
             a.gammas = std::move(gammas);
             validate(a);
             return a;
           }),
           py::arg("betas"), py::arg("gammas"))
      .def_readonly("p", &AngleSet::p)
      .def_readonly("betas", &AngleSet::betas)
      .def_readonly("gammas", &AngleSet::gammas);

  py::class_<StateVector>(m, "StateVector")
      .def_readonly("n", &StateVector::n)
      .def_property_readonly("amplitudes", &amplitudes_array)
      .def_property_readonly("probabilities", &probabilities_array);

  m.def("init_plus", &init_plus, py::arg("n"), py::arg("max_qubits") = kDefaultSimQubitCap);
  m.def("run_qaoa", &run_qaoa, py::arg("table"), py::arg("angles"),
        py::arg("max_qubits") = kDefaultSimQubitCap);
  m.def("measure_distribution", &measure_distribution, py::arg("state"), py::arg("table"));
  m.def("expected_cost", &expected_cost, py::arg("state"), py::arg("table"));
  m.def("approximation_ratio", &approximation_ratio, py::arg("mean_cost"), py::arg("c_min"),
        py::arg("c_max"));
  m.def("optimal_probability", &optimal_probability, py::arg("dist"), py::arg("c_min"));
  m.def("shannon_entropy", &shannon_entropy, py::arg("state"));
  m.def("cost_gradient", &cost_gradient, py::arg("table"), py::arg("angles"),
        py::arg("max_qubits") = kDefaultSimQubitCap);

  py::class_<SkAngleTable>(m, "SkAngleTable")
      .def_static("load", &SkAngleTable::load, py::arg("path"))
      .def_static("embedded", []() { return SkAngleTable::embedded(); })
      .def("at", &SkAngleTable::at, py::arg("p"))
      .def("contains", &SkAngleTable::contains, py::arg("p"))
      .def_property_readonly("max_p", &SkAngleTable::max_p);

  m.def(
      "rescale_sk",
      [](int p, double avg_degree, const SkAngleTable* table) {
        return rescale_sk(table ? *table : SkAngleTable::embedded(), p, avg_degree);
      },
      py::arg("p"), py::arg("avg_degree"), py::arg("table") = nullptr);

  py::class_<OptimizationReport>(m, "OptimizationReport")
      .def_readonly("instance_label", &OptimizationReport::instance_label)
      .def_readonly("p", &OptimizationReport::p)
      .def_readonly("initial_angles", &OptimizationReport::initial_angles)
      .def_readonly("final_angles", &OptimizationReport::final_angles)
      .def_readonly("initial_cost", &OptimizationReport::initial_cost)
      .def_readonly("final_cost", &OptimizationReport::final_cost)
      .def_readonly("initial_ratio", &OptimizationReport::initial_ratio)
      .def_readonly("final_ratio", &OptimizationReport::final_ratio)
      .def_readonly("iterations", &OptimizationReport::iterations)
      .def_readonly("grad_norm", &OptimizationReport::grad_norm)
      .def_readonly("converged", &OptimizationReport::converged)
      .def("to_json", &OptimizationReport::to_json_string);

  m.def(
      "optimize_angles",
      [](const GraphInstance& g, const AngleSet& init, double grad_tol, double cost_tol,
         int max_iters) {
        OptimizerSettings opts;
        opts.grad_tol = grad_tol;
        opts.cost_tol = cost_tol;
        opts.max_iters = max_iters;
        return optimize_angles(g, init, opts);
      },
      py::arg("instance"), py::arg("init"), py::arg("grad_tol") = 1e-6,
      py::arg("cost_tol") = 1e-10, py::arg("max_iters") = 500);
  m.def(
      "brute_force_baseline",
      [](const GraphInstance& g, int p, int n_samples, std::uint64_t seed) {
        EnumerationOptions opts;
        opts.want_table = true;
        EnumerationResult enumerated = enumerate_spectrum(g, opts);
        return brute_force_baseline(g, *enumerated.table, enumerated.spectrum, p, n_samples, seed);
      },
      py::arg("instance"), py::arg("p"), py::arg("n_samples"), py::arg("seed"));

  py::class_<Temperature>(m, "Temperature")
      .def_static("finite", &Temperature::finite, py::arg("value"))
      .def_static("inf", &Temperature::inf)
      .def_readonly("value", &Temperature::value)
      .def_readonly("infinite", &Temperature::infinite)
      .def("__repr__", [](const Temperature& t) {
        return t.infinite ? std::string("<Temperature inf>")
                          : "<Temperature " + std::to_string(t.value) + ">";
      });

  m.def("log_partition", &log_partition, py::arg("spectrum"), py::arg("temperature"));
  m.def("model_cost_distribution", &model_cost_distribution, py::arg("spectrum"),
        py::arg("temperature"));
  m.def("mean_basis_probability", &mean_basis_probability, py::arg("dist"), py::arg("spectrum"));

  py::class_<TemperatureFit>(m, "TemperatureFit")
      .def_readonly("temperature", &TemperatureFit::temperature)
      .def_readonly("sse", &TemperatureFit::sse)
      .def_readonly("tvd", &TemperatureFit::tvd)
      .def_readonly("converged", &TemperatureFit::converged);

  m.def(
      "fit_temperature",
      [](const CostDistribution& exact, const CostSpectrum& spectrum, bool weighted) {
        FitTemperatureOptions opts;
        opts.weighted = weighted;
        return fit_temperature(exact, spectrum, opts);
      },
      py::arg("exact"), py::arg("spectrum"), py::arg("weighted") = false);
  m.def("tvd", &tvd, py::arg("a"), py::arg("b"));
  m.def("heuristic_temperature", &heuristic_temperature, py::arg("c_min"), py::arg("n"),
        py::arg("p"), py::arg("c") = kTempLawC, py::arg("d") = kTempLawD);

  py::class_<ModelMetrics>(m, "ModelMetrics")
      .def_readonly("mean_cost", &ModelMetrics::mean_cost)
      .def_readonly("r_exp", &ModelMetrics::r_exp)
      .def_readonly("pr_cmin_exp", &ModelMetrics::pr_cmin_exp)
      .def_readonly("cdf", &ModelMetrics::cdf);

  m.def(
      "model_metrics",
      [](const CostSpectrum& spectrum, const Temperature& t, const std::vector<double>& alphas) {
        return model_metrics(spectrum, t, alphas);
      },
      py::arg("spectrum"), py::arg("temperature"),
      py::arg("alphas") = std::vector<double>{0.04, 0.08});
  m.def("cumulative", &cumulative, py::arg("dist"), py::arg("threshold"));

  m.def("solve_boltzmann_temperature", &solve_boltzmann_temperature, py::arg("spectrum"),
        py::arg("target_mean"), py::arg("rel_tol") = 1e-9);
  m.def("boltzmann_entropy_bits", &boltzmann_entropy_bits, py::arg("spectrum"),
        py::arg("temperature"));
  m.def("fluctuation_entropy_bits", &fluctuation_entropy_bits, py::arg("s_boltzmann_bits"));
  m.def("sample_fluctuation_state", &sample_fluctuation_state, py::arg("spectrum"),
        py::arg("table"), py::arg("temperature"), py::arg("seed"));
  m.def(
      "random_constrained_distribution",
      [](const CostSpectrum& spectrum, double target_mean, std::uint64_t seed) {
        return random_constrained_distribution(spectrum, target_mean, seed);
      },
      py::arg("spectrum"), py::arg("target_mean"), py::arg("seed"));
  m.def("random_state_entropy_bits", &random_state_entropy_bits, py::arg("spectrum"),
        py::arg("class_masses"), py::arg("seed"));

  py::class_<ThermoReport>(m, "ThermoReport")
      .def_readonly("target_mean", &ThermoReport::target_mean)
      .def_readonly("s_qaoa", &ThermoReport::s_qaoa)
      .def_readonly("t_b", &ThermoReport::t_b)
      .def_readonly("s_boltzmann", &ThermoReport::s_boltzmann)
      .def_readonly("s_fluc", &ThermoReport::s_fluc)
      .def_readonly("s_random_mean", &ThermoReport::s_random_mean)
      .def_readonly("s_random_std", &ThermoReport::s_random_std)
      .def_readonly("random_draws", &ThermoReport::random_draws);

  m.def("make_thermo_report", &make_thermo_report, py::arg("spectrum"), py::arg("state"),
        py::arg("table"), py::arg("seed"), py::arg("random_draws") = 20);

  py::class_<SizeSpec>(m, "SizeSpec")
      .def(py::init<int, int>(), py::arg("n"), py::arg("count"))
      .def_readwrite("n", &SizeSpec::n)
      .def_readwrite("count", &SizeSpec::count);

  py::class_<EnsembleConfig>(m, "EnsembleConfig")
      .def(py::init<>())
      .def_readwrite("sizes", &EnsembleConfig::sizes)
      .def_readwrite("layers", &EnsembleConfig::layers)
      .def_readwrite("edge_prob", &EnsembleConfig::edge_prob)
      .def_readwrite("master_seed", &EnsembleConfig::master_seed)
      .def_readwrite("alphas", &EnsembleConfig::alphas)
      .def_readwrite("predict_only", &EnsembleConfig::predict_only)
      .def_readwrite("fit_temperature", &EnsembleConfig::fit_temperature)
      .def_readwrite("thermo", &EnsembleConfig::thermo)
      .def_readwrite("random_draws", &EnsembleConfig::random_draws)
      .def_readwrite("law_c", &EnsembleConfig::law_c)
      .def_readwrite("law_d", &EnsembleConfig::law_d)
      .def_readwrite("threads", &EnsembleConfig::threads);

  m.def("desk_profile", &desk_profile);

  py::class_<InstanceRecord>(m, "InstanceRecord")
      .def_readonly("label", &InstanceRecord::label)
      .def_readonly("n", &InstanceRecord::n)
      .def_readonly("p", &InstanceRecord::p)
      .def_readonly("edge_count", &InstanceRecord::edge_count)
      .def_readonly("c_min", &InstanceRecord::c_min)
      .def_readonly("c_max", &InstanceRecord::c_max)
      .def_readonly("avg_degree", &InstanceRecord::avg_degree)
      .def_readonly("mean_cost", &InstanceRecord::mean_cost)
      .def_readonly("r", &InstanceRecord::r)
      .def_readonly("pr_cmin", &InstanceRecord::pr_cmin)
      .def_readonly("cdf", &InstanceRecord::cdf)
      .def_readonly("fitted_t", &InstanceRecord::fitted_t)
      .def_readonly("tvd", &InstanceRecord::tvd)
      .def_readonly("s_qaoa", &InstanceRecord::s_qaoa)
      .def_readonly("s_boltzmann", &InstanceRecord::s_boltzmann)
      .def_readonly("s_fluc", &InstanceRecord::s_fluc)
      .def_readonly("s_random", &InstanceRecord::s_random)
      .def_readonly("t_e", &InstanceRecord::t_e)
      .def_readonly("r_exp", &InstanceRecord::r_exp)
      .def_readonly("pr_cmin_exp", &InstanceRecord::pr_cmin_exp)
      .def_readonly("cdf_exp", &InstanceRecord::cdf_exp)
      .def_readonly("error", &InstanceRecord::error);

  m.def(
      "run_ensemble", [](const EnsembleConfig& config) { return run_ensemble(config); },
      py::arg("config"), py::call_guard<py::gil_scoped_release>());
  m.def(
      "process_instances",
      [](const std::vector<GraphInstance>& instances, const EnsembleConfig& config) {
        return process_instances(instances, config);
      },
      py::arg("instances"), py::arg("config"), py::call_guard<py::gil_scoped_release>());

  m.def(
      "quantiles",
      [](std::vector<double> values, const std::vector<double>& qs) {
        return quantiles(std::move(values), qs);
      },
      py::arg("values"), py::arg("qs"));

  py::class_<ScalingFitAB>(m, "ScalingFitAB")
      .def_readonly("a", &ScalingFitAB::a)
      .def_readonly("b", &ScalingFitAB::b)
      .def_readonly("a_se", &ScalingFitAB::a_se)
      .def_readonly("b_se", &ScalingFitAB::b_se)
      .def_readonly("residual_norm", &ScalingFitAB::residual_norm);

  py::class_<TemperatureLawCD>(m, "TemperatureLawCD")
      .def_readonly("c", &TemperatureLawCD::c)
      .def_readonly("d", &TemperatureLawCD::d)
      .def_readonly("c_se", &TemperatureLawCD::c_se)
      .def_readonly("d_se", &TemperatureLawCD::d_se)
      .def_readonly("residual_norm", &TemperatureLawCD::residual_norm);

  m.def(
      "fit_pcmin_scaling",
      [](const std::vector<std::tuple<double, double, double>>& rows) {
        std::vector<ScalingPoint> points;
        for (const auto& [n, p, median] : rows) points.push_back({n, p, median});
        return fit_pcmin_scaling(points);
      },
      py::arg("points"));
  m.def("pcmin_medians_fit", [](const std::vector<InstanceRecord>& records) {
    return fit_pcmin_scaling(pcmin_medians(records));
  });
  m.def("fit_temperature_law", &fit_temperature_law, py::arg("records"));
  m.def(
      "layers_for_target",
      [](double n, double target, double a, double b) {
        ScalingFitAB fit;
        fit.a = a;
        fit.b = b;
        return layers_for_target(n, target, fit);
      },
      py::arg("n"), py::arg("target"), py::arg("a"), py::arg("b"));
}
