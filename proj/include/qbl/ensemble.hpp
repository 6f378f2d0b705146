#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "qbl/angles.hpp"
#include "qbl/boltzmann.hpp"
#include "qbl/fits.hpp"
#include "qbl/graph.hpp"
#include "qbl/spectrum.hpp"
#include "qbl/thermo.hpp"

namespace qbl {

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();
inline bool is_missing(double v) { return v != v; }

struct SizeSpec {
  int n = 0;
  int count = 0;
};

struct EnsembleConfig {
  std::vector<SizeSpec> sizes;
  std::vector<int> layers;
  double edge_prob = 0.5;
  std::uint64_t master_seed = 1;
  std::vector<double> alphas = {0.04, 0.08};

  bool predict_only = false;   // spectrum + T_e metrics, no state vectors
  bool fit_temperature = true; // per-instance Boltzmann fit (exact mode)
  bool thermo = false;         // entropy study (exact mode)
  int random_draws = 20;

  double law_c = kTempLawC;    // coefficients for T_e
  double law_d = kTempLawD;

  OptimizerSettings optimizer;
  EnumerationOptions enumeration;
  int threads = 0;
  const SkAngleTable* sk_table = nullptr;  // null: the embedded table

  // Optional persistence, one file per (instance, p) when set.
  std::string reports_dir;     // angle-optimization reports (JSON)
  std::string dump_dist_dir;   // measured distributions ("C,prob" CSV)
  std::string dump_state_dir;  // state dumps (binary, n <= 16 only)
};

// The default desk-scale profile: 30 graphs at n = 14 and 17 plus 10 at
// n = 20, p = 2, 4, ..., 12.
EnsembleConfig desk_profile();

struct InstanceRecord {
  std::string label;
  int n = 0;
  int p = 0;
  int edge_count = 0;
  long c_min = 0;
  long c_max = 0;
  double avg_degree = kMissing;

  // Exact (state-vector) side; missing in prediction-only mode.
  double mean_cost = kMissing;
  double r = kMissing;
  double pr_cmin = kMissing;
  std::vector<double> cdf;          // one per alpha
  double fitted_t = kMissing;       // +inf encodes the infinite-T flag
  double tvd = kMissing;
  double s_qaoa = kMissing;
  double s_boltzmann = kMissing;
  double s_fluc = kMissing;
  double s_random = kMissing;
  double s_random_std = kMissing;

  // Model side, generated from T_e.
  double t_e = kMissing;
  double r_exp = kMissing;
  double pr_cmin_exp = kMissing;
  std::vector<double> cdf_exp;

  std::string report_ref;           // angle report path, when persisted
  std::string error;                // non-empty when this instance failed
};

// Cost spectrum plus exact masses retained per (instance, p) so binned and
// overlay figure data can be regenerated without re-simulating.
struct RecordDistribution {
  std::string label;
  int n = 0;
  int p = 0;
  double fitted_t = kMissing;  // +inf encodes the infinite-T flag
  double t_e = kMissing;
  std::vector<long> support;
  std::vector<std::uint64_t> rho;
  std::vector<double> exact_mass;

  bool empty() const { return support.empty(); }
  CostSpectrum spectrum() const;
  CostDistribution exact() const;
};

struct RunArtifacts {
  std::vector<RecordDistribution> dists;
};

// Full pipeline per (instance, p): generate, enumerate, transfer + optimize
// angles, simulate, metrics, Boltzmann fit, optional thermo study.
// Per-instance failures are recorded in the output, never aborting the run.
// Deterministic given the config; records sorted by (n, p, label).
std::vector<InstanceRecord> run_ensemble(const EnsembleConfig& config,
                                         RunArtifacts* artifacts = nullptr);

// Same pipeline over externally supplied instances.
std::vector<InstanceRecord> process_instances(const std::vector<GraphInstance>& instances,
                                              const EnsembleConfig& config,
                                              RunArtifacts* artifacts = nullptr);

// Prediction-only convenience: forces predict_only and skips table
// materialization so sizes up to the enumeration cap are allowed.
std::vector<InstanceRecord> predict_large_n(const EnsembleConfig& config,
                                            const TemperatureLawCD& coeffs);

enum class MetricKind { ApproxRatio, PrCmin, CdfAlpha };

struct MetricSelector {
  MetricKind kind = MetricKind::ApproxRatio;
  std::size_t alpha_index = 0;
};

struct ErrorStatRow {
  int n = 0;
  int p = 0;
  int used = 0;
  int excluded = 0;  // rows with Q = 0, excluded from the relative error
  double median_rel = kMissing;
  double q10_rel = kMissing;
  double q90_rel = kMissing;
  double median_diff = kMissing;
  double q10_diff = kMissing;
  double q90_diff = kMissing;
};

// Relative errors |1 - Q_exp/Q| and difference errors |Q_exp - Q| between the
// model-side and exact metrics, summarized per (n, p).
std::vector<ErrorStatRow> error_stats(const std::vector<InstanceRecord>& records,
                                      const MetricSelector& metric);

// Median Pr(C_min) per (n, p), as input for the scaling fit.
std::vector<ScalingPoint> pcmin_medians(const std::vector<InstanceRecord>& records);

// OLS of the fitted T on C_min/(n sqrt(p)); records without a finite fitted
// temperature are skipped.
TemperatureLawCD fit_temperature_law(const std::vector<InstanceRecord>& records);

}  // namespace qbl
