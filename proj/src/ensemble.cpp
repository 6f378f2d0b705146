#include "qbl/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "qbl/error.hpp"
#include "qbl/parallel.hpp"
#include "qbl/rng.hpp"

namespace qbl {

CostSpectrum RecordDistribution::spectrum() const {
  CostSpectrum spec;
  spec.n = n;
  spec.support = support;
  spec.counts = rho;
  spec.c_min = support.front();
  // c_max equals |E|: the all-equal assignment attains it.
  spec.c_max = support.back();
  spec.edge_count = static_cast<int>(support.back());
  spec.ground_degeneracy = rho.front();
  return spec;
}

CostDistribution RecordDistribution::exact() const { return {support, exact_mass}; }

EnsembleConfig desk_profile() {
  EnsembleConfig config;
  config.sizes = {{14, 30}, {17, 30}, {20, 10}};
  config.layers = {2, 4, 6, 8, 10, 12};
  config.thermo = true;
  return config;
}

namespace {

void run_exact_pipeline(const GraphInstance& g, const CostSpectrum& spectrum,
                        const CostTable& table, const EnsembleConfig& config, int p,
                        std::uint64_t instance_seed, InstanceRecord& rec,
                        RecordDistribution* artifact) {
  const SkAngleTable& sk = config.sk_table ? *config.sk_table : SkAngleTable::embedded();
  const AngleSet init = rescale_sk(sk, p, g.average_degree());
  const OptimizationReport report = optimize_angles(g, table, spectrum, init, config.optimizer);
  if (!config.reports_dir.empty()) {
    const std::string path =
        config.reports_dir + "/" + g.label + "_p" + std::to_string(p) + ".json";
    write_report(report, path);
    rec.report_ref = path;
  }

  const StateVector state = run_qaoa(table, report.final_angles, config.optimizer.max_qubits);
  const CostDistribution dist = measure_distribution(state, table);
  if (!config.dump_dist_dir.empty()) {
    write_distribution_csv(dist,
                           config.dump_dist_dir + "/" + g.label + "_p" + std::to_string(p) + ".csv");
  }
  if (!config.dump_state_dir.empty()) {
    write_state_dump(state,
                     config.dump_state_dir + "/" + g.label + "_p" + std::to_string(p) + ".qsv");
  }

  if (artifact != nullptr) {
    artifact->label = rec.label;
    artifact->n = rec.n;
    artifact->p = rec.p;
    artifact->support = spectrum.support;
    artifact->rho = spectrum.counts;
    artifact->exact_mass.assign(spectrum.support.size(), 0.0);
    for (std::size_t i = 0; i < spectrum.support.size(); ++i) {
      artifact->exact_mass[i] = dist.mass_at(spectrum.support[i]);
    }
  }

  rec.mean_cost = expected_cost(state, table);
  rec.r = approximation_ratio(rec.mean_cost, spectrum.c_min, spectrum.c_max);
  rec.pr_cmin = optimal_probability(dist, spectrum.c_min);
  for (const double alpha : config.alphas) {
    const double threshold = (1.0 - alpha) * static_cast<double>(spectrum.c_min) +
                             alpha * static_cast<double>(spectrum.c_max);
    rec.cdf.push_back(cumulative(dist, threshold));
  }
  rec.s_qaoa = shannon_entropy(state);

  if (config.fit_temperature) {
    const TemperatureFit fit = fit_temperature(dist, spectrum);
    rec.fitted_t = fit.temperature.infinite ? std::numeric_limits<double>::infinity()
                                            : fit.temperature.value;
    rec.tvd = fit.tvd;
  }
  if (artifact != nullptr) artifact->fitted_t = rec.fitted_t;

  if (config.thermo) {
    const ThermoReport thermo = make_thermo_report(spectrum, state, table,
                                                   derive_seed(instance_seed, 0x7e, p),
                                                   config.random_draws);
    rec.s_boltzmann = thermo.s_boltzmann;
    rec.s_fluc = thermo.s_fluc;
    rec.s_random = thermo.s_random_mean;
    rec.s_random_std = thermo.s_random_std;
  }
}

void run_model_side(const CostSpectrum& spectrum, const EnsembleConfig& config, int p,
                    InstanceRecord& rec) {
  const Temperature t_e =
      heuristic_temperature(spectrum.c_min, spectrum.n, p, config.law_c, config.law_d);
  rec.t_e = t_e.value;
  const ModelMetrics metrics = model_metrics(spectrum, t_e, config.alphas);
  rec.r_exp = metrics.r_exp;
  rec.pr_cmin_exp = metrics.pr_cmin_exp;
  rec.cdf_exp = metrics.cdf;
}

}  // namespace

std::vector<InstanceRecord> process_instances(const std::vector<GraphInstance>& instances,
                                              const EnsembleConfig& config,
                                              RunArtifacts* artifacts) {
  std::vector<InstanceRecord> records(instances.size() * config.layers.size());
  if (artifacts != nullptr) artifacts->dists.assign(records.size(), {});

  par::run_tasks(instances.size(), config.threads, [&](std::size_t idx) {
    const GraphInstance& g = instances[idx];

    EnumerationOptions enum_opts = config.enumeration;
    enum_opts.want_table = !config.predict_only;
    enum_opts.threads = 1;  // the ensemble already fans out across instances

    CostSpectrum spectrum;
    std::optional<CostTable> table;
    std::string enum_error;
    try {
      EnumerationResult enumerated = enumerate_spectrum(g, enum_opts);
      spectrum = std::move(enumerated.spectrum);
      table = std::move(enumerated.table);
    } catch (const Error& e) {
      enum_error = e.what();
    }

    for (std::size_t li = 0; li < config.layers.size(); ++li) {
      const int p = config.layers[li];
      InstanceRecord& rec = records[idx * config.layers.size() + li];
      rec.label = g.label;
      rec.n = g.n;
      rec.p = p;
      if (!enum_error.empty()) {
        rec.error = enum_error;
        continue;
      }
      rec.edge_count = spectrum.edge_count;
      rec.c_min = spectrum.c_min;
      rec.c_max = spectrum.c_max;
      rec.avg_degree = g.average_degree();
      try {
        run_model_side(spectrum, config, p, rec);
      } catch (const Error& e) {
        rec.error = e.what();
      }
      if (!config.predict_only) {
        RecordDistribution* artifact =
            artifacts != nullptr ? &artifacts->dists[idx * config.layers.size() + li] : nullptr;
        try {
          run_exact_pipeline(g, spectrum, *table, config, p, g.seed, rec, artifact);
          if (artifact != nullptr) artifact->t_e = rec.t_e;
        } catch (const Error& e) {
          rec.error = rec.error.empty() ? e.what() : rec.error + "; " + e.what();
        }
      }
    }
  });

  if (artifacts != nullptr) {
    std::erase_if(artifacts->dists, [](const RecordDistribution& rd) { return rd.empty(); });
  }
  std::sort(records.begin(), records.end(), [](const InstanceRecord& a, const InstanceRecord& b) {
    if (a.n != b.n) return a.n < b.n;
    if (a.p != b.p) return a.p < b.p;
    return a.label < b.label;
  });
  return records;
}

std::vector<InstanceRecord> run_ensemble(const EnsembleConfig& config, RunArtifacts* artifacts) {
  require(!config.sizes.empty() && !config.layers.empty(), ErrorKind::InvalidInput,
          "ensemble config needs at least one size and one layer count");
  for (const auto& size : config.sizes) {
    require(size.count >= 1, ErrorKind::InvalidInput, "instance counts must be at least 1");
  }

  std::vector<GraphInstance> instances;
  for (const auto& size : config.sizes) {
    for (int index = 0; index < size.count; ++index) {
      const std::uint64_t seed = derive_seed(config.master_seed,
                                             static_cast<std::uint64_t>(size.n),
                                             static_cast<std::uint64_t>(index));
      instances.push_back(generate_er(size.n, config.edge_prob, seed));
    }
  }
  return process_instances(instances, config, artifacts);
}

std::vector<InstanceRecord> predict_large_n(const EnsembleConfig& config,
                                            const TemperatureLawCD& coeffs) {
  EnsembleConfig prediction = config;
  prediction.predict_only = true;
  prediction.law_c = coeffs.c;
  prediction.law_d = coeffs.d;
  return run_ensemble(prediction);
}

namespace {

double metric_value(const InstanceRecord& rec, const MetricSelector& metric, bool model_side) {
  switch (metric.kind) {
    case MetricKind::ApproxRatio:
      return model_side ? rec.r_exp : rec.r;
    case MetricKind::PrCmin:
      return model_side ? rec.pr_cmin_exp : rec.pr_cmin;
    case MetricKind::CdfAlpha: {
      const auto& source = model_side ? rec.cdf_exp : rec.cdf;
      if (metric.alpha_index >= source.size()) return kMissing;
      return source[metric.alpha_index];
    }
  }
  return kMissing;
}

}  // namespace

std::vector<ErrorStatRow> error_stats(const std::vector<InstanceRecord>& records,
                                      const MetricSelector& metric) {
  std::vector<std::pair<int, int>> groups;
  for (const auto& rec : records) {
    if (std::find(groups.begin(), groups.end(), std::make_pair(rec.n, rec.p)) == groups.end()) {
      groups.emplace_back(rec.n, rec.p);
    }
  }
  std::sort(groups.begin(), groups.end());

  std::vector<ErrorStatRow> rows;
  for (const auto& [n, p] : groups) {
    ErrorStatRow row;
    row.n = n;
    row.p = p;
    std::vector<double> rel, diff;
    for (const auto& rec : records) {
      if (rec.n != n || rec.p != p || !rec.error.empty()) continue;
      const double exact = metric_value(rec, metric, false);
      const double model = metric_value(rec, metric, true);
      if (is_missing(exact) || is_missing(model)) continue;
      diff.push_back(std::abs(model - exact));
      if (exact == 0.0) {
        row.excluded++;
      } else {
        rel.push_back(std::abs(1.0 - model / exact));
      }
    }
    row.used = static_cast<int>(diff.size());
    const double qs[3] = {0.5, 0.1, 0.9};
    if (!rel.empty()) {
      const auto q = quantiles(rel, qs);
      row.median_rel = q[0];
      row.q10_rel = q[1];
      row.q90_rel = q[2];
    }
    if (!diff.empty()) {
      const auto q = quantiles(diff, qs);
      row.median_diff = q[0];
      row.q10_diff = q[1];
      row.q90_diff = q[2];
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<ScalingPoint> pcmin_medians(const std::vector<InstanceRecord>& records) {
  std::vector<std::pair<int, int>> groups;
  for (const auto& rec : records) {
    if (!rec.error.empty() || is_missing(rec.pr_cmin)) continue;
    if (std::find(groups.begin(), groups.end(), std::make_pair(rec.n, rec.p)) == groups.end()) {
      groups.emplace_back(rec.n, rec.p);
    }
  }
  std::sort(groups.begin(), groups.end());

  std::vector<ScalingPoint> points;
  for (const auto& [n, p] : groups) {
    std::vector<double> values;
    for (const auto& rec : records) {
      if (rec.n == n && rec.p == p && rec.error.empty() && !is_missing(rec.pr_cmin)) {
        values.push_back(rec.pr_cmin);
      }
    }
    points.push_back({static_cast<double>(n), static_cast<double>(p), quantile(values, 0.5)});
  }
  return points;
}

TemperatureLawCD fit_temperature_law(const std::vector<InstanceRecord>& records) {
  std::vector<double> x, y;
  for (const auto& rec : records) {
    if (!rec.error.empty() || is_missing(rec.fitted_t) || std::isinf(rec.fitted_t)) continue;
    x.push_back(static_cast<double>(rec.c_min) /
                (rec.n * std::sqrt(static_cast<double>(rec.p))));
    y.push_back(rec.fitted_t);
  }
  return fit_line(x, y);
}

}  // namespace qbl
