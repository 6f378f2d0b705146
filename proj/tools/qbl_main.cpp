// qbl: generate MaxCut instances, enumerate cost spectra, simulate and
// optimize QAOA, fit Boltzmann models, and predict performance at sizes
// beyond exact simulation.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qbl/angles.hpp"
#include "qbl/ensemble.hpp"
#include "qbl/error.hpp"
#include "qbl/figures.hpp"
#include "qbl/fits.hpp"
#include "qbl/graph.hpp"
#include "qbl/io.hpp"
#include "qbl/parallel.hpp"
#include "qbl/records.hpp"
#include "qbl/rng.hpp"
#include "qbl/spectrum.hpp"
#include "qbl/version.hpp"

namespace {

using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitPartial = 2;
constexpr int kExitResource = 3;

int exit_code_for(const qbl::Error& e) {
  return e.kind() == qbl::ErrorKind::ResourceLimit ? kExitResource : kExitUsage;
}

// Run manifest: stages flip pending -> ok/failed and the file is rewritten at
// every transition, so an interrupted run leaves its incomplete stages
// visible.
class Manifest {
 public:
  Manifest(std::string path, std::string command, ordered_json config)
      : path_(std::move(path)), start_(clock::now()) {
    doc_["tool"] = "qbl";
    doc_["version"] = qbl::kVersion;
    doc_["command"] = std::move(command);
    doc_["config"] = std::move(config);
    doc_["stages"] = ordered_json::array();
    doc_["outputs"] = ordered_json::array();
    doc_["success"] = false;
  }

  void declare_stages(const std::vector<std::string>& names) {
    for (const auto& name : names) {
      doc_["stages"].push_back({{"name", name}, {"status", "pending"}, {"seconds", nullptr}});
    }
    write();
  }

  void begin(const std::string& name) {
    stage_start_ = clock::now();
    set_status(name, "running", -1.0);
  }

  void done(const std::string& name) {
    set_status(name, "ok", seconds_since(stage_start_));
  }

  void failed(const std::string& name) {
    set_status(name, "failed", seconds_since(stage_start_));
  }

  void add_output(const std::string& file) {
    doc_["outputs"].push_back(file);
  }

  void finish(bool success) {
    doc_["success"] = success;
    doc_["wall_seconds"] = seconds_since(start_);
    write();
  }

 private:
  using clock = std::chrono::steady_clock;

  static double round3(double v) { return std::round(v * 1000.0) / 1000.0; }

  double seconds_since(clock::time_point t0) const {
    return round3(std::chrono::duration<double>(clock::now() - t0).count());
  }

  void set_status(const std::string& name, const std::string& status, double seconds) {
    for (auto& stage : doc_["stages"]) {
      if (stage["name"] == name) {
        stage["status"] = status;
        if (seconds >= 0.0) stage["seconds"] = seconds;
      }
    }
    write();
  }

  void write() const {
    std::ofstream out(path_);
    if (out.good()) out << doc_.dump(2) << '\n';
  }

  std::string path_;
  ordered_json doc_;
  clock::time_point start_;
  clock::time_point stage_start_;
};

std::vector<qbl::GraphInstance> load_instances(const std::vector<std::string>& paths,
                                               const std::string& dir) {
  std::vector<std::string> files = paths;
  if (!dir.empty()) {
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
      if (entry.path().extension() == ".json") files.push_back(entry.path().string());
    }
    std::sort(files.begin(), files.end());
  }
  qbl::require(!files.empty(), qbl::ErrorKind::InvalidInput, "no instance files given");
  std::vector<qbl::GraphInstance> instances;
  instances.reserve(files.size());
  for (const auto& file : files) instances.push_back(qbl::read_instance(file));
  return instances;
}

std::uint64_t file_checksum(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  qbl::require(in.good(), qbl::ErrorKind::Io, "cannot open " + path);
  std::uint64_t hash = 0xcbf29ce484222325ULL;  // FNV-1a
  char buffer[1 << 14];
  while (in.read(buffer, sizeof buffer) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      hash ^= static_cast<unsigned char>(buffer[i]);
      hash *= 0x100000001b3ULL;
    }
  }
  return hash;
}

std::string hex64(std::uint64_t v) {
  char buffer[19];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(v));
  return buffer;
}

struct CommonOptions {
  int threads = 0;
  std::string sk_table_path;
};

void add_common(CLI::App* cmd, CommonOptions& common) {
  cmd->add_option("--threads", common.threads, "Worker threads (default: QBL_THREADS or cores)");
  cmd->add_option("--sk-table", common.sk_table_path,
                  "Angle table JSON (default: the embedded table)");
}

const qbl::SkAngleTable* resolve_sk_table(const CommonOptions& common,
                                          std::optional<qbl::SkAngleTable>& storage) {
  if (common.sk_table_path.empty()) return nullptr;
  storage = qbl::SkAngleTable::load(common.sk_table_path);
  return &*storage;
}

ordered_json config_echo(const qbl::EnsembleConfig& config) {
  ordered_json sizes = ordered_json::array();
  for (const auto& s : config.sizes) sizes.push_back({{"n", s.n}, {"count", s.count}});
  return {{"sizes", sizes},
          {"layers", config.layers},
          {"edge_prob", config.edge_prob},
          {"master_seed", config.master_seed},
          {"alphas", config.alphas},
          {"predict_only", config.predict_only},
          {"fit_temperature", config.fit_temperature},
          {"thermo", config.thermo},
          {"random_draws", config.random_draws},
          {"law_c", config.law_c},
          {"law_d", config.law_d}};
}

// Shared tail of run/entropy/predict: records, sidecar, figures, manifest.
int emit_outputs(const std::vector<qbl::InstanceRecord>& records,
                 const qbl::RunArtifacts* artifacts, const qbl::EnsembleConfig& config,
                 const std::string& out_dir, Manifest& manifest) {
  manifest.begin("records");
  const std::string csv_path = out_dir + "/records.csv";
  qbl::write_records_csv(records, config.alphas, csv_path);
  qbl::write_records_sidecar(config, records.size(), csv_path, out_dir + "/records.json");
  manifest.add_output(csv_path);
  manifest.add_output(out_dir + "/records.json");
  manifest.done("records");

  manifest.begin("figures");
  for (const auto& path : qbl::write_report_figures(records, config.alphas, out_dir)) {
    manifest.add_output(path);
  }
  if (artifacts != nullptr && !artifacts->dists.empty()) {
    qbl::write_binned_rows_csv(*artifacts, out_dir + "/binned.csv");
    manifest.add_output(out_dir + "/binned.csv");
    for (const auto& path : qbl::write_run_figures(records, *artifacts, out_dir)) {
      manifest.add_output(path);
    }
  }
  manifest.done("figures");

  int failures = 0;
  for (const auto& rec : records) {
    if (!rec.error.empty()) {
      ++failures;
      std::cerr << "instance " << rec.label << " p=" << rec.p << ": " << rec.error << '\n';
    }
  }
  manifest.finish(failures == 0);
  if (failures > 0) {
    std::cerr << failures << " of " << records.size() << " records failed\n";
    return kExitPartial;
  }
  return kExitOk;
}

int cmd_gen(int n, double edge_prob, int count, std::uint64_t seed, const std::string& out_dir) {
  qbl::ensure_directory(out_dir);
  Manifest manifest(out_dir + "/manifest.json", "gen",
                    {{"n", n}, {"edge_prob", edge_prob}, {"count", count}, {"seed", seed}});
  manifest.declare_stages({"generate"});
  manifest.begin("generate");
  for (int index = 0; index < count; ++index) {
    const std::uint64_t instance_seed =
        qbl::derive_seed(seed, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(index));
    const qbl::GraphInstance g = qbl::generate_er(n, edge_prob, instance_seed);
    const std::string path = out_dir + "/" + g.label + ".json";
    qbl::write_instance(g, path);
    manifest.add_output(path);
    std::cout << path << "  |E|=" << g.edge_count() << '\n';
  }
  manifest.done("generate");
  manifest.finish(true);
  return kExitOk;
}

int cmd_spectrum(const std::string& instance_path, const std::string& out_path,
                 const std::string& binned_out, int bins, int spectrum_cap, int threads) {
  const qbl::GraphInstance g = qbl::read_instance(instance_path);
  qbl::EnumerationOptions opts;
  opts.max_qubits_spectrum = spectrum_cap;
  opts.threads = threads;
  const qbl::CostSpectrum spectrum = qbl::enumerate_spectrum(g, opts).spectrum;
  qbl::write_spectrum_csv(spectrum, out_path);
  std::cout << g.label << ": c_min=" << spectrum.c_min << " c_max=" << spectrum.c_max
            << " ground_degeneracy=" << spectrum.ground_degeneracy << " -> " << out_path << '\n';
  if (!binned_out.empty()) {
    // Bins of the p=0 (uniform) output distribution rho(C)/2^n.
    qbl::CostDistribution uniform;
    uniform.support = spectrum.support;
    for (std::size_t i = 0; i < spectrum.support.size(); ++i) {
      uniform.mass.push_back(std::ldexp(static_cast<double>(spectrum.counts[i]), -spectrum.n));
    }
    qbl::write_binned_csv(qbl::bin_distribution(uniform, spectrum, bins), binned_out);
    std::cout << "binned (" << bins << " bins) -> " << binned_out << '\n';
  }
  return kExitOk;
}

int cmd_run(const std::vector<std::string>& instance_paths, const std::string& instance_dir,
            const std::vector<int>& p_list, qbl::EnsembleConfig config, bool reports,
            bool dump_dists, bool dump_states, const std::string& out_dir) {
  qbl::ensure_directory(out_dir);
  config.layers = p_list;

  std::vector<qbl::GraphInstance> instances;
  Manifest manifest(out_dir + "/manifest.json", "run", config_echo(config));
  manifest.declare_stages({"load", "process", "records", "figures"});

  manifest.begin("load");
  try {
    instances = load_instances(instance_paths, instance_dir);
  } catch (const qbl::Error& e) {
    manifest.failed("load");
    manifest.finish(false);
    throw;
  }
  manifest.done("load");

  if (reports) {
    config.reports_dir = out_dir + "/reports";
    qbl::ensure_directory(config.reports_dir);
  }
  if (dump_dists) {
    config.dump_dist_dir = out_dir + "/distributions";
    qbl::ensure_directory(config.dump_dist_dir);
  }
  if (dump_states) {
    config.dump_state_dir = out_dir + "/states";
    qbl::ensure_directory(config.dump_state_dir);
    for (const auto& g : instances) {
      qbl::require(g.n <= 16, qbl::ErrorKind::ResourceLimit,
                   "state dumps are limited to n <= 16, got n=" + std::to_string(g.n));
    }
  }

  manifest.begin("process");
  qbl::RunArtifacts artifacts;
  const std::vector<qbl::InstanceRecord> records =
      qbl::process_instances(instances, config, config.predict_only ? nullptr : &artifacts);
  manifest.done("process");

  return emit_outputs(records, config.predict_only ? nullptr : &artifacts, config, out_dir,
                      manifest);
}

int cmd_fit(const std::string& records_path, const std::string& which, const std::string& out) {
  const qbl::RecordsFile file = qbl::read_records_csv(records_path);

  ordered_json doc;
  doc["input"] = records_path;
  doc["input_checksum_fnv1a"] = hex64(file_checksum(records_path));
  if (which == "temperature-law") {
    const qbl::TemperatureLawCD fit = qbl::fit_temperature_law(file.records);
    doc["fit"] = "temperature-law";
    doc["c"] = fit.c;
    doc["d"] = fit.d;
    doc["c_se"] = fit.c_se;
    doc["d_se"] = fit.d_se;
    doc["residual_norm"] = fit.residual_norm;
    std::cout << "T = c*C_min/(n sqrt(p)) + d: c=" << fit.c << " (se " << fit.c_se
              << "), d=" << fit.d << " (se " << fit.d_se << ")\n";
  } else if (which == "pcmin-scaling") {
    const auto points = qbl::pcmin_medians(file.records);
    const qbl::ScalingFitAB fit = qbl::fit_pcmin_scaling(points);
    doc["fit"] = "pcmin-scaling";
    doc["a"] = fit.a;
    doc["b"] = fit.b;
    doc["a_se"] = fit.a_se;
    doc["b_se"] = fit.b_se;
    doc["residual_norm"] = fit.residual_norm;
    std::cout << "Pr(C_min) = a*exp(-b n/p^(2/3)): a=" << fit.a << " (se " << fit.a_se
              << "), b=" << fit.b << " (se " << fit.b_se << ")\n";
  } else {
    qbl::fail(qbl::ErrorKind::InvalidInput,
              "unknown fit '" + which + "' (use temperature-law or pcmin-scaling)");
  }

  std::ofstream stream(out);
  qbl::require(stream.good(), qbl::ErrorKind::Io, "cannot open " + out + " for writing");
  stream << doc.dump(2) << '\n';
  qbl::require(stream.good(), qbl::ErrorKind::Io, "failed writing " + out);
  return kExitOk;
}

int cmd_entropy(const std::vector<std::string>& instance_paths, const std::string& instance_dir,
                const std::vector<int>& p_list, qbl::EnsembleConfig config,
                const std::string& out_dir) {
  config.thermo = true;
  return cmd_run(instance_paths, instance_dir, p_list, std::move(config), false, false, false,
                 out_dir);
}

int cmd_predict(const std::vector<std::string>& size_specs, const std::vector<int>& p_list,
                qbl::EnsembleConfig config, const std::string& coeffs_json,
                const std::string& out_dir) {
  qbl::ensure_directory(out_dir);
  config.predict_only = true;
  config.layers = p_list;
  config.enumeration.want_table = false;

  for (const auto& token : size_specs) {
    const auto colon = token.find(':');
    qbl::require(colon != std::string::npos, qbl::ErrorKind::InvalidInput,
                 "size spec '" + token + "' is not n:count");
    qbl::SizeSpec size;
    size.n = std::stoi(token.substr(0, colon));
    size.count = std::stoi(token.substr(colon + 1));
    config.sizes.push_back(size);
  }

  if (!coeffs_json.empty()) {
    std::ifstream in(coeffs_json);
    qbl::require(in.good(), qbl::ErrorKind::Io, "cannot open " + coeffs_json);
    nlohmann::json doc;
    try {
      in >> doc;
      qbl::require(doc.at("fit") == "temperature-law", qbl::ErrorKind::InvalidInput,
                   coeffs_json + " is not a temperature-law fit");
      config.law_c = doc.at("c").get<double>();
      config.law_d = doc.at("d").get<double>();
    } catch (const nlohmann::json::exception& e) {
      qbl::fail(qbl::ErrorKind::Parse, coeffs_json + ": " + e.what());
    }
  }

  Manifest manifest(out_dir + "/manifest.json", "predict", config_echo(config));
  manifest.declare_stages({"process", "records", "figures"});
  manifest.begin("process");
  const std::vector<qbl::InstanceRecord> records = qbl::run_ensemble(config);
  manifest.done("process");
  return emit_outputs(records, nullptr, config, out_dir, manifest);
}

int cmd_report(const std::string& records_path, const std::string& out_dir) {
  qbl::ensure_directory(out_dir);
  const qbl::RecordsFile file = qbl::read_records_csv(records_path);
  for (const auto& path : qbl::write_report_figures(file.records, file.alphas, out_dir)) {
    std::cout << path << '\n';
  }

  // Fits, when the records carry the needed columns.
  ordered_json fits = ordered_json::object();
  try {
    const qbl::TemperatureLawCD law = qbl::fit_temperature_law(file.records);
    fits["temperature_law"] = {{"c", law.c},
                               {"d", law.d},
                               {"c_se", law.c_se},
                               {"d_se", law.d_se},
                               {"residual_norm", law.residual_norm}};
  } catch (const qbl::Error&) {
  }
  try {
    const qbl::ScalingFitAB scaling = qbl::fit_pcmin_scaling(qbl::pcmin_medians(file.records));
    fits["pcmin_scaling"] = {{"a", scaling.a},
                             {"b", scaling.b},
                             {"a_se", scaling.a_se},
                             {"b_se", scaling.b_se},
                             {"residual_norm", scaling.residual_norm}};
    std::cout << qbl::write_fig11(scaling, out_dir) << '\n';
  } catch (const qbl::Error&) {
  }
  if (!fits.empty()) {
    const std::string path = out_dir + "/fits.json";
    std::ofstream out(path);
    qbl::require(out.good(), qbl::ErrorKind::Io, "cannot open " + path + " for writing");
    out << fits.dump(2) << '\n';
    std::cout << path << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QAOA MaxCut simulation, Boltzmann-model fitting, and performance prediction"};
  app.require_subcommand(1);
  app.set_version_flag("--version", qbl::kVersion);
  app.set_config("--config", "", "Flat key=value config file; CLI flags take precedence");

  // gen
  auto* gen = app.add_subcommand("gen", "Generate random MaxCut instance files");
  int gen_n = 14;
  double gen_prob = 0.5;
  int gen_count = 1;
  std::uint64_t gen_seed = 1;
  std::string gen_out = ".";
  gen->add_option("--n", gen_n, "Vertex count")->required();
  gen->add_option("--edge-prob", gen_prob, "Edge probability (default 0.5)");
  gen->add_option("--count", gen_count, "Instances to generate");
  gen->add_option("--seed", gen_seed, "Master seed");
  gen->add_option("--out", gen_out, "Output directory")->required();

  // spectrum
  auto* spectrum = app.add_subcommand("spectrum", "Enumerate the cost spectrum of an instance");
  std::string spec_instance, spec_out = "spectrum.csv", spec_binned;
  int spec_bins = 7, spec_cap = 40, spec_threads = 0;
  spectrum->add_option("--instance", spec_instance, "Instance JSON file")->required();
  spectrum->add_option("--out", spec_out, "Spectrum CSV path");
  spectrum->add_option("--binned-out", spec_binned, "Binned p=0 distribution CSV path");
  spectrum->add_option("--bins", spec_bins, "Bin count (width |C_min|/bins)");
  spectrum->add_option("--cap", spec_cap, "Enumeration qubit cap");
  spectrum->add_option("--threads", spec_threads, "Worker threads");

  // run
  auto* run = app.add_subcommand("run", "Simulate, optimize, and fit instances");
  std::vector<std::string> run_instances;
  std::string run_dir, run_out;
  std::vector<int> run_p = {2, 4, 6, 8, 10, 12};
  CommonOptions run_common;
  qbl::EnsembleConfig run_config;
  bool run_thermo = false, run_no_fit = false, run_predict_only = false;
  bool run_no_reports = false, run_dump_dists = false, run_dump_states = false;
  run->add_option("instances", run_instances, "Instance JSON files");
  run->add_option("--instance-dir", run_dir, "Directory of instance JSON files");
  run->add_option("--p", run_p, "Layer counts")->delimiter(',');
  run->add_option("--alphas", run_config.alphas, "CDF thresholds C_alpha")->delimiter(',');
  run->add_flag("--thermo", run_thermo, "Run the entropy study per instance");
  run->add_flag("--no-fit", run_no_fit, "Skip the per-instance temperature fit");
  run->add_flag("--predict-only", run_predict_only, "Model-side metrics only (no state vectors)");
  run->add_option("--law-c", run_config.law_c, "Temperature-law coefficient c");
  run->add_option("--law-d", run_config.law_d, "Temperature-law coefficient d");
  run->add_option("--draws", run_config.random_draws, "Random baseline draws per instance");
  run->add_flag("--no-reports", run_no_reports, "Skip per-instance angle reports");
  run->add_flag("--dump-dists", run_dump_dists, "Dump measured distributions (CSV)");
  run->add_flag("--dump-states", run_dump_states, "Dump state vectors (binary, n <= 16)");
  run->add_option("--out", run_out, "Output directory")->required();
  add_common(run, run_common);

  // fit
  auto* fit = app.add_subcommand("fit", "Fit ensemble laws from a records file");
  std::string fit_records, fit_which = "temperature-law", fit_out = "fit.json";
  fit->add_option("--records", fit_records, "records.csv from a run")->required();
  fit->add_option("--which", fit_which, "temperature-law | pcmin-scaling");
  fit->add_option("--out", fit_out, "Fit JSON path");

  // entropy
  auto* entropy = app.add_subcommand("entropy", "Entropy study (run with the thermo stage on)");
  std::vector<std::string> ent_instances;
  std::string ent_dir, ent_out;
  std::vector<int> ent_p = {2};
  CommonOptions ent_common;
  qbl::EnsembleConfig ent_config;
  entropy->add_option("instances", ent_instances, "Instance JSON files");
  entropy->add_option("--instance-dir", ent_dir, "Directory of instance JSON files");
  entropy->add_option("--p", ent_p, "Layer counts")->delimiter(',');
  entropy->add_option("--draws", ent_config.random_draws, "Random baseline draws per instance");
  entropy->add_option("--out", ent_out, "Output directory")->required();
  add_common(entropy, ent_common);

  // predict
  auto* predict = app.add_subcommand("predict", "Model-side predictions for generated ensembles");
  std::vector<std::string> pred_sizes;
  std::vector<int> pred_p = {2, 4, 6, 8, 10, 12};
  std::string pred_out, pred_coeffs;
  CommonOptions pred_common;
  qbl::EnsembleConfig pred_config;
  predict->add_option("--sizes", pred_sizes, "Ensemble sizes as n:count (e.g. 26:300)")
      ->required()
      ->delimiter(',');
  predict->add_option("--p", pred_p, "Layer counts")->delimiter(',');
  predict->add_option("--seed", pred_config.master_seed, "Master seed");
  predict->add_option("--edge-prob", pred_config.edge_prob, "Edge probability");
  predict->add_option("--coeffs", pred_coeffs, "temperature-law fit JSON for (c, d)");
  predict->add_option("--law-c", pred_config.law_c, "Temperature-law coefficient c");
  predict->add_option("--law-d", pred_config.law_d, "Temperature-law coefficient d");
  predict->add_option("--cap", pred_config.enumeration.max_qubits_spectrum,
                      "Enumeration qubit cap");
  predict->add_option("--out", pred_out, "Output directory")->required();
  add_common(predict, pred_common);

  // report
  auto* report = app.add_subcommand("report", "Regenerate figure CSVs and fits from records");
  std::string rep_records, rep_out;
  report->add_option("--records", rep_records, "records.csv from a run")->required();
  report->add_option("--out", rep_out, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen(gen_n, gen_prob, gen_count, gen_seed, gen_out);
    if (spectrum->parsed()) {
      return cmd_spectrum(spec_instance, spec_out, spec_binned, spec_bins, spec_cap, spec_threads);
    }
    if (run->parsed()) {
      if (run_common.threads > 0) qbl::par::set_default_threads(run_common.threads);
      std::optional<qbl::SkAngleTable> table_storage;
      run_config.sk_table = resolve_sk_table(run_common, table_storage);
      run_config.thermo = run_thermo;
      run_config.fit_temperature = !run_no_fit;
      run_config.predict_only = run_predict_only;
      return cmd_run(run_instances, run_dir, run_p, run_config, !run_no_reports, run_dump_dists,
                     run_dump_states, run_out);
    }
    if (fit->parsed()) return cmd_fit(fit_records, fit_which, fit_out);
    if (entropy->parsed()) {
      if (ent_common.threads > 0) qbl::par::set_default_threads(ent_common.threads);
      std::optional<qbl::SkAngleTable> table_storage;
      ent_config.sk_table = resolve_sk_table(ent_common, table_storage);
      return cmd_entropy(ent_instances, ent_dir, ent_p, ent_config, ent_out);
    }
    if (predict->parsed()) {
      if (pred_common.threads > 0) qbl::par::set_default_threads(pred_common.threads);
      return cmd_predict(pred_sizes, pred_p, pred_config, pred_coeffs, pred_out);
    }
    if (report->parsed()) return cmd_report(rep_records, rep_out);
  } catch (const qbl::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
