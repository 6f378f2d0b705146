// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exits nonzero if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "oracles.hpp"
#include "qbl/angles.hpp"
#include "qbl/boltzmann.hpp"
#include "qbl/ensemble.hpp"
#include "qbl/error.hpp"
#include "qbl/fits.hpp"
#include "qbl/graph.hpp"
#include "qbl/parallel.hpp"
#include "qbl/rng.hpp"
#include "qbl/simulator.hpp"
#include "qbl/spectrum.hpp"
#include "qbl/thermo.hpp"

namespace {

int g_failures = 0;

void report(int id, bool pass, const std::string& detail) {
  std::printf("%s criterion %2d: %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

qbl::EnumerationResult enumerate_with_table(const qbl::GraphInstance& g) {
  qbl::EnumerationOptions opts;
  opts.want_table = true;
  return qbl::enumerate_spectrum(g, opts);
}

qbl::AngleSet random_angles(int p, qbl::Xoshiro256pp& rng) {
  qbl::AngleSet angles;
  angles.p = p;
  for (int l = 0; l < p; ++l) {
    angles.betas.push_back(rng.uniform(0.0, 3.14159265358979));
    angles.gammas.push_back(rng.uniform(0.0, 2.0 * 3.14159265358979));
  }
  return angles;
}

// 1. run_qaoa equals dense-matrix evolution, 20 instances, n <= 6, p <= 4.
void criterion_simulator_oracle() {
  qbl::Xoshiro256pp rng(101);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + trial % 4;
    const int p = 1 + trial % 4;
    const qbl::GraphInstance g = qbl::generate_er(n, 0.5, 9000 + trial);
    const auto [spec, table] = enumerate_with_table(g);
    const qbl::AngleSet angles = random_angles(p, rng);
    const qbl::StateVector fast = qbl::run_qaoa(*table, angles);
    const auto dense = oracles::dense_matrix_qaoa(g, angles);
    for (std::uint64_t z = 0; z < fast.size(); ++z) {
      worst = std::max(worst, std::abs(fast.amp[z] - dense[z]));
    }
  }
  char detail[160];
  std::snprintf(detail, sizeof detail,
                "simulator equals the dense-matrix oracle; max amplitude deviation %.3e (< 1e-10)",
                worst);
  report(1, worst < 1e-10, detail);
}

// 2. Adjoint gradient vs central finite differences, 10 cases at n=8, p=3.
void criterion_gradient() {
  qbl::Xoshiro256pp rng(202);
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const qbl::GraphInstance g = qbl::generate_er(8, 0.5, 9100 + trial);
    const auto [spec, table] = enumerate_with_table(g);
    const qbl::AngleSet angles = random_angles(3, rng);
    double mean = 0.0;
    const auto adjoint = qbl::cost_and_gradient(*table, angles, mean);
    const auto fd = oracles::finite_difference_gradient(*table, angles, 1e-5);
    for (std::size_t i = 0; i < adjoint.size(); ++i) {
      const double scale = std::max(std::abs(fd[i]), 1e-3);
      worst = std::max(worst, std::abs(adjoint[i] - fd[i]) / scale);
    }
  }
  char detail[160];
  std::snprintf(detail, sizeof detail,
                "adjoint gradient matches finite differences; worst relative error %.3e (< 1e-6)",
                worst);
  report(2, worst < 1e-6, detail);
}

// 3. Measured distribution of the initial state equals rho(C)/2^n.
void criterion_p0_identity() {
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 6 + trial % 11;  // 6..16
    const qbl::GraphInstance g = qbl::generate_er(n, 0.5, 9200 + trial);
    const auto [spec, table] = enumerate_with_table(g);
    const qbl::CostDistribution dist =
        qbl::measure_distribution(qbl::init_plus(n), *table);
    for (std::size_t i = 0; i < spec.support.size(); ++i) {
      const double expected = std::ldexp(static_cast<double>(spec.counts[i]), -n);
      worst = std::max(worst, std::abs(dist.mass_at(spec.support[i]) - expected));
    }
  }
  char detail[160];
  std::snprintf(detail, sizeof detail,
                "p=0 distribution equals rho(C)/2^n; max deviation %.3e (< 1e-12)", worst);
  report(3, worst < 1e-12, detail);
}

// 4. Gray-code enumeration vs naive evaluation (50 instances, n <= 16), and
//    one n=30 enumeration within 10 minutes on up to 8 cores.
void criterion_spectrum_oracle() {
  bool exact = true;
  for (int trial = 0; trial < 50 && exact; ++trial) {
    const int n = 6 + trial % 11;  // 6..16
    const qbl::GraphInstance g = qbl::generate_er(n, 0.5, 9300 + trial);
    const qbl::CostSpectrum spec = qbl::enumerate_spectrum(g).spectrum;
    const auto expected = oracles::brute_force_density(g);
    exact = exact && spec.support.size() == expected.size();
    std::size_t i = 0;
    for (const auto& [cost, count] : expected) {
      if (!exact) break;
      exact = exact && spec.support[i] == cost && spec.counts[i] == count;
      ++i;
    }
  }

  const qbl::GraphInstance big = qbl::generate_er(30, 0.5, 424242);
  qbl::EnumerationOptions opts;
  opts.threads = std::min(8, qbl::par::default_threads());
  const auto start = std::chrono::steady_clock::now();
  const qbl::CostSpectrum spec = qbl::enumerate_spectrum(big, opts).spectrum;
  const double seconds = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start).count();
  std::uint64_t total = 0;
  for (const auto count : spec.counts) total += count;
  const bool big_ok = seconds < 600.0 && total == (std::uint64_t{1} << 30);

  char detail[200];
  std::snprintf(detail, sizeof detail,
                "enumeration exact on 50 instances (n<=16): %s; n=30 sweep %.1f s on %d threads "
                "(< 600 s)",
                exact ? "yes" : "no", seconds, opts.threads);
  report(4, exact && big_ok, detail);
}

struct DeskRun {
  std::vector<qbl::InstanceRecord> records;
  std::map<std::pair<int, int>, std::vector<const qbl::InstanceRecord*>> groups;
};

DeskRun run_desk_profile() {
  qbl::EnsembleConfig config;
  config.sizes = {{14, 30}, {17, 30}};
  config.layers = {2, 4, 6, 8, 10, 12};
  config.master_seed = 7;
  config.thermo = true;
  config.random_draws = 20;
  std::fprintf(stderr, "[desk profile: 60 graphs x 6 depths, thermo on; this is the long stage]\n");
  DeskRun run;
  run.records = qbl::run_ensemble(config);
  for (const auto& rec : run.records) {
    if (rec.error.empty()) run.groups[{rec.n, rec.p}].push_back(&rec);
  }
  return run;
}

std::vector<double> collect(const std::vector<const qbl::InstanceRecord*>& group,
                            double qbl::InstanceRecord::* field) {
  std::vector<double> values;
  for (const auto* rec : group) {
    if (!qbl::is_missing(rec->*field)) values.push_back(rec->*field);
  }
  return values;
}

// 5. Median r strictly increasing in p, exceeding 0.90 at p=12, per n.
void criterion_fig1(const DeskRun& desk) {
  bool pass = true;
  double worst_final = 1.0;
  for (const int n : {14, 17}) {
    double previous = -1.0;
    for (const int p : {2, 4, 6, 8, 10, 12}) {
      const auto it = desk.groups.find({n, p});
      if (it == desk.groups.end()) {
        pass = false;
        break;
      }
      const double median = qbl::quantile(collect(it->second, &qbl::InstanceRecord::r), 0.5);
      pass = pass && median > previous;
      previous = median;
    }
    pass = pass && previous > 0.90;
    worst_final = std::min(worst_final, previous);
  }
  char detail[200];
  std::snprintf(detail, sizeof detail,
                "median r strictly increasing in p; smallest p=12 median %.4f (> 0.90)",
                worst_final);
  report(5, pass, detail);
}

// 6. Median TVD per (n, p) within [0.01, 0.15].
void criterion_tvd_band(const DeskRun& desk) {
  double lo = 1.0, hi = 0.0;
  bool pass = true;
  for (const auto& [key, group] : desk.groups) {
    const double median = qbl::quantile(collect(group, &qbl::InstanceRecord::tvd), 0.5);
    lo = std::min(lo, median);
    hi = std::max(hi, median);
    pass = pass && median >= 0.01 && median <= 0.15;
  }
  char detail[160];
  std::snprintf(detail, sizeof detail,
                "median TVD per (n,p) spans [%.4f, %.4f] (within [0.01, 0.15])", lo, hi);
  report(6, pass, detail);
}

// 7. Temperature-law coefficients within the stated bands.
void criterion_temperature_law(const DeskRun& desk) {
  const qbl::TemperatureLawCD law = qbl::fit_temperature_law(desk.records);
  const bool pass = law.c >= -3.3 && law.c <= -2.2 && law.d >= -0.5 && law.d <= 0.0;
  char detail[160];
  std::snprintf(detail, sizeof detail,
                "fitted c = %.3f (in [-3.3, -2.2]), d = %.3f (in [-0.5, 0.0])", law.c, law.d);
  report(7, pass, detail);
}

// 8. Scaling-law decay rate within [0.3, 0.7].
void criterion_scaling(const DeskRun& desk) {
  const qbl::ScalingFitAB fit = qbl::fit_pcmin_scaling(qbl::pcmin_medians(desk.records));
  const bool pass = fit.b >= 0.3 && fit.b <= 0.7;
  char detail[160];
  std::snprintf(detail, sizeof detail, "fitted a = %.3f, b = %.3f (b in [0.3, 0.7])", fit.a,
                fit.b);
  report(8, pass, detail);
}

// 9. Entropy theorem, ordering, and the fluctuation-state check at n=14.
void criterion_entropy(const DeskRun& desk) {
  bool theorem = true;
  std::vector<double> s_qaoa, s_random;
  for (const auto& rec : desk.records) {
    if (!rec.error.empty() || qbl::is_missing(rec.s_boltzmann)) continue;
    theorem = theorem && rec.s_qaoa <= rec.s_boltzmann + 1e-6;
    s_qaoa.push_back(rec.s_qaoa);
    s_random.push_back(rec.s_random);
  }
  const double med_qaoa = qbl::quantile(s_qaoa, 0.5);
  const double med_random = qbl::quantile(s_random, 0.5);
  const bool ordering = med_random < med_qaoa;

  // Sampled fluctuation states at n=14: mean entropy over 50 draws within
  // 0.1 bits of S_Boltzmann - (1 - gamma_EM)/ln 2.
  const qbl::GraphInstance g = qbl::generate_er(14, 0.5, 9400);
  const auto [spec, table] = enumerate_with_table(g);
  const qbl::Temperature t_b = qbl::solve_boltzmann_temperature(spec, -0.35 * std::abs(spec.c_min));
  const double s_boltzmann = qbl::boltzmann_entropy_bits(spec, t_b);
  double mean_entropy = 0.0;
  for (int draw = 0; draw < 50; ++draw) {
    mean_entropy +=
        qbl::shannon_entropy(qbl::sample_fluctuation_state(spec, *table, t_b, 10000 + draw)) / 50.0;
  }
  const double predicted = qbl::fluctuation_entropy_bits(s_boltzmann);
  const bool fluc_ok = std::abs(mean_entropy - predicted) < 0.1;

  char detail[240];
  std::snprintf(detail, sizeof detail,
                "S_QAOA <= S_Boltzmann + 1e-6 for all: %s; median S_random %.3f < median S_QAOA "
                "%.3f: %s; fluctuation mean %.4f vs %.4f bits (|diff| < 0.1)",
                theorem ? "yes" : "no", med_random, med_qaoa, ordering ? "yes" : "no",
                mean_entropy, predicted);
  report(9, theorem && ordering && fluc_ok, detail);
}

// 10. Model-error envelopes: median eps_R(r) <= 1.5% per (n, p) and median
//     eps_R of Pr(C <= C_0.08) <= 20% at p >= 4.
void criterion_error_envelopes(const DeskRun& desk) {
  const auto r_rows = qbl::error_stats(desk.records, {qbl::MetricKind::ApproxRatio, 0});
  double worst_r = 0.0;
  for (const auto& row : r_rows) worst_r = std::max(worst_r, row.median_rel);

  const auto cdf_rows = qbl::error_stats(desk.records, {qbl::MetricKind::CdfAlpha, 1});
  double worst_cdf = 0.0;
  for (const auto& row : cdf_rows) {
    if (row.p >= 4) worst_cdf = std::max(worst_cdf, row.median_rel);
  }

  const bool pass = worst_r <= 0.015 && worst_cdf <= 0.20;
  char detail[200];
  std::snprintf(detail, sizeof detail,
                "worst median eps_R(r) %.4f (<= 0.015); worst median eps_R(cdf_0.08) at p>=4 "
                "%.4f (<= 0.20)",
                worst_r, worst_cdf);
  report(10, pass, detail);
}

// 11. Projection: residuals <= 1e-9 on 100 random targets per test spectrum;
//     grid-oracle agreement on the three-cost toy.
void criterion_projection() {
  bool residuals_ok = true;
  for (const std::uint64_t graph_seed : {1ULL, 2ULL}) {
    const qbl::GraphInstance g = qbl::generate_er(10, 0.5, 9500 + graph_seed);
    const qbl::CostSpectrum spec = qbl::enumerate_spectrum(g).spectrum;
    qbl::Xoshiro256pp rng(303 + graph_seed);
    for (int trial = 0; trial < 100; ++trial) {
      const double target =
          rng.uniform(static_cast<double>(spec.c_min), static_cast<double>(spec.c_max));
      const qbl::CostDistribution dist =
          qbl::random_constrained_distribution(spec, target, 11000 + trial);
      double total = 0.0, moment = 0.0;
      for (std::size_t i = 0; i < dist.mass.size(); ++i) {
        residuals_ok = residuals_ok && dist.mass[i] >= 0.0;
        total += dist.mass[i];
        moment += dist.mass[i] * dist.support[i];
      }
      residuals_ok =
          residuals_ok && std::abs(total - 1.0) <= 1e-9 && std::abs(moment - target) <= 1e-9;
    }
  }

  qbl::CostSpectrum toy;
  toy.n = 3;
  toy.support = {-2, 0, 2};
  toy.counts = {2, 4, 2};
  toy.c_min = -2;
  toy.c_max = 2;
  toy.edge_count = 2;
  toy.ground_degeneracy = 2;
  const std::vector<double> start = {0.2, 0.5, 0.3};
  double best_obj = 1e300;
  for (int k = 0; k <= 2500; ++k) {
    const double x = 0.5 + 0.25 * k / 2500.0;
    const double p0 = x, p1 = 1.5 - 2.0 * x, p2 = x - 0.5;
    const double obj = (p0 - start[0]) * (p0 - start[0]) + (p1 - start[1]) * (p1 - start[1]) +
                       (p2 - start[2]) * (p2 - start[2]);
    best_obj = std::min(best_obj, obj);
  }
  const qbl::CostDistribution projected = qbl::project_to_constraints(toy, start, -1.0);
  double obj = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    obj += (projected.mass[i] - start[i]) * (projected.mass[i] - start[i]);
  }
  const bool oracle_ok = std::abs(obj - best_obj) <= 1e-6;

  char detail[200];
  std::snprintf(detail, sizeof detail,
                "projection residuals <= 1e-9 on 200 random targets: %s; toy objective %.9f vs "
                "grid %.9f (|diff| <= 1e-6)",
                residuals_ok ? "yes" : "no", obj, best_obj);
  report(11, residuals_ok && oracle_ok, detail);
}

// 12. Synthetic-data roundtrips at the stated tolerances.
void criterion_roundtrips() {
  // Temperature fit to 1e-6.
  const qbl::GraphInstance g = qbl::generate_er(12, 0.5, 9600);
  const qbl::CostSpectrum spec = qbl::enumerate_spectrum(g).spectrum;
  double worst_t = 0.0;
  for (const double t_true : {0.5, 1.0, 2.0, 5.0, 20.0}) {
    const qbl::CostDistribution synthetic =
        qbl::model_cost_distribution(spec, qbl::Temperature::finite(t_true));
    const qbl::TemperatureFit fit = qbl::fit_temperature(synthetic, spec);
    worst_t = std::max(worst_t, std::abs(fit.temperature.value - t_true) / t_true);
  }

  // Scaling fit (a, b) to 1e-8.
  std::vector<qbl::ScalingPoint> points;
  for (const double n : {14.0, 17.0, 20.0, 23.0}) {
    for (const double p : {2.0, 4.0, 6.0, 8.0, 10.0, 12.0}) {
      qbl::ScalingPoint pt{n, p, 0.0};
      pt.median = 2.75 * std::exp(-0.502 * pt.x());
      points.push_back(pt);
    }
  }
  const qbl::ScalingFitAB ab = qbl::fit_pcmin_scaling(points);
  const double ab_err = std::max(std::abs(ab.a - 2.75), std::abs(ab.b - 0.502));

  // Line fit (c, d) to 1e-10.
  std::vector<qbl::InstanceRecord> records;
  for (int i = 0; i < 20; ++i) {
    qbl::InstanceRecord rec;
    rec.n = 14 + (i % 4) * 3;
    rec.p = 2 + 2 * (i % 6);
    rec.c_min = -18 - i;
    const double x = static_cast<double>(rec.c_min) / (rec.n * std::sqrt(rec.p));
    rec.fitted_t = -2.738 * x - 0.255;
    records.push_back(rec);
  }
  const qbl::TemperatureLawCD cd = qbl::fit_temperature_law(records);
  const double cd_err = std::max(std::abs(cd.c + 2.738), std::abs(cd.d + 0.255));

  const bool pass = worst_t < 1e-6 && ab_err < 1e-8 && cd_err < 1e-10;
  char detail[200];
  std::snprintf(detail, sizeof detail,
                "roundtrips: T rel %.2e (< 1e-6), (a,b) %.2e (< 1e-8), (c,d) %.2e (< 1e-10)",
                worst_t, ab_err, cd_err);
  report(12, pass, detail);
}

}  // namespace

int main() {
  std::printf("qbl acceptance suite (%d hardware threads)\n", qbl::par::default_threads());
  criterion_simulator_oracle();
  criterion_gradient();
  criterion_p0_identity();
  criterion_spectrum_oracle();

  const DeskRun desk = run_desk_profile();
  criterion_fig1(desk);
  criterion_tvd_band(desk);
  criterion_temperature_law(desk);
  criterion_scaling(desk);
  criterion_entropy(desk);
  criterion_error_envelopes(desk);

  criterion_projection();
  criterion_roundtrips();

  std::printf("%s (%d of 12 criteria failed)\n", g_failures == 0 ? "ALL PASS" : "FAILURES",
              g_failures);
  return g_failures == 0 ? 0 : 1;
}
