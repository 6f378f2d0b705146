#include "qbl/angles.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qbl/error.hpp"
#include "qbl/rng.hpp"

namespace qbl {

namespace detail {
const char* embedded_sk_table_json();
}

SkAngleTable SkAngleTable::from_json_string(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorKind::Parse, std::string("angle table JSON: ") + e.what());
  }
  SkAngleTable table;
  try {
    for (const auto& entry : doc.at("entries")) {
      AngleSet angles;
      angles.p = entry.at("p").get<int>();
      angles.betas = entry.at("betas").get<std::vector<double>>();
      angles.gammas = entry.at("gammas").get<std::vector<double>>();
      require(static_cast<int>(angles.betas.size()) == angles.p &&
                  static_cast<int>(angles.gammas.size()) == angles.p,
              ErrorKind::Parse,
              "angle table entry p=" + std::to_string(angles.p) + " has wrong array lengths");
      table.entries_[angles.p] = std::move(angles);
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Parse, std::string("angle table JSON: ") + e.what());
  }
  require(!table.entries_.empty(), ErrorKind::Parse, "angle table has no entries");
  return table;
}

SkAngleTable SkAngleTable::load(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::Io, "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_json_string(buffer.str());
}

const SkAngleTable& SkAngleTable::embedded() {
  static const SkAngleTable table = from_json_string(detail::embedded_sk_table_json());
  return table;
}

const AngleSet& SkAngleTable::at(int p) const {
  const auto it = entries_.find(p);
  require(it != entries_.end(), ErrorKind::MissingTableEntry,
          "angle table has no entry for p=" + std::to_string(p));
  return it->second;
}

int SkAngleTable::max_p() const { return entries_.empty() ? 0 : entries_.rbegin()->first; }

AngleSet rescale_sk(const SkAngleTable& table, int p, double avg_degree) {
  require(avg_degree > 0.0, ErrorKind::InvalidInstance,
          "average degree must be positive to rescale angles");
  const AngleSet& sk = table.at(p);
  AngleSet out = sk;
  const double scale = 1.0 / std::sqrt(avg_degree);
  for (double& gamma : out.gammas) gamma *= scale;
  return out;
}

namespace {

std::vector<double> pack(const AngleSet& angles) {
  std::vector<double> x;
  x.reserve(2 * angles.p);
  x.insert(x.end(), angles.betas.begin(), angles.betas.end());
  x.insert(x.end(), angles.gammas.begin(), angles.gammas.end());
  return x;
}

AngleSet unpack(const std::vector<double>& x, int p) {
  AngleSet angles;
  angles.p = p;
  angles.betas.assign(x.begin(), x.begin() + p);
  angles.gammas.assign(x.begin() + p, x.end());
  return angles;
}

nlohmann::ordered_json angles_json(const AngleSet& angles) {
  return {{"p", angles.p}, {"betas", angles.betas}, {"gammas", angles.gammas}};
}

}  // namespace

std::string OptimizationReport::to_json_string() const {
  nlohmann::ordered_json doc;
  doc["instance"] = instance_label;
  doc["p"] = p;
  doc["initial_angles"] = angles_json(initial_angles);
  doc["final_angles"] = angles_json(final_angles);
  doc["initial_cost"] = initial_cost;
  doc["final_cost"] = final_cost;
  doc["initial_ratio"] = initial_ratio;
  doc["final_ratio"] = final_ratio;
  doc["iterations"] = iterations;
  doc["grad_norm"] = grad_norm;
  doc["converged"] = converged;
  if (!init_sampling.empty()) doc["init_sampling"] = init_sampling;
  return doc.dump(2) + "\n";
}

void write_report(const OptimizationReport& report, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), ErrorKind::Io, "cannot open " + path + " for writing");
  out << report.to_json_string();
  require(out.good(), ErrorKind::Io, "failed writing " + path);
}

OptimizationReport optimize_angles(const GraphInstance& g, const CostTable& table,
                                   const CostSpectrum& spectrum, const AngleSet& init,
                                   const OptimizerSettings& opts) {
  validate(init);

  BfgsOptions bfgs;
  bfgs.grad_tol = opts.grad_tol;
  bfgs.cost_tol = opts.cost_tol;
  bfgs.max_iters = opts.max_iters;

  const int p = init.p;
  const auto objective = [&](const std::vector<double>& x, std::vector<double>* grad) {
    const AngleSet angles = unpack(x, p);
    double mean_cost = 0.0;
    if (grad != nullptr) {
      *grad = cost_and_gradient(table, angles, mean_cost, opts.max_qubits);
    } else {
      mean_cost = expected_cost(run_qaoa(table, angles, opts.max_qubits), table);
    }
    return mean_cost;
  };

  OptimizationReport report;
  report.instance_label = g.label;
  report.p = p;
  report.initial_angles = init;
  report.initial_cost = expected_cost(run_qaoa(table, init, opts.max_qubits), table);
  report.initial_ratio = approximation_ratio(report.initial_cost, spectrum.c_min, spectrum.c_max);

  const BfgsResult res = minimize_bfgs(objective, pack(init), bfgs);
  report.final_angles = unpack(res.x, p);
  report.final_cost = res.value;
  report.final_ratio = approximation_ratio(report.final_cost, spectrum.c_min, spectrum.c_max);
  report.iterations = res.iterations;
  report.grad_norm = res.grad_norm;
  report.converged = res.converged;
  return report;
}

OptimizationReport optimize_angles(const GraphInstance& g, const AngleSet& init,
                                   const OptimizerSettings& opts) {
  EnumerationOptions enum_opts;
  enum_opts.want_table = true;
  const EnumerationResult enumerated = enumerate_spectrum(g, enum_opts);
  return optimize_angles(g, *enumerated.table, enumerated.spectrum, init, opts);
}

OptimizationReport brute_force_baseline(const GraphInstance& g, const CostTable& table,
                                        const CostSpectrum& spectrum, int p, int n_samples,
                                        std::uint64_t seed, const OptimizerSettings& opts) {
  require(n_samples >= 1, ErrorKind::InvalidInput, "sample count must be at least 1");

  OptimizationReport best;
  bool have_best = false;
  constexpr double kPi = 3.14159265358979323846;
  for (int sample = 0; sample < n_samples; ++sample) {
    Xoshiro256pp rng(derive_seed(seed, static_cast<std::uint64_t>(sample)));
    AngleSet init;
    init.p = p;
    init.betas.resize(p);
    init.gammas.resize(p);
    for (int l = 0; l < p; ++l) init.betas[l] = rng.uniform(0.0, kPi);
    for (int l = 0; l < p; ++l) init.gammas[l] = rng.uniform(0.0, 2.0 * kPi);

    OptimizationReport report = optimize_angles(g, table, spectrum, init, opts);
    if (!have_best || report.final_ratio > best.final_ratio) {
      best = std::move(report);
      have_best = true;
    }
  }
  best.init_sampling = "uniform beta:[0,pi) gamma:[0,2pi) samples:" + std::to_string(n_samples);
  return best;
}

}  // namespace qbl
