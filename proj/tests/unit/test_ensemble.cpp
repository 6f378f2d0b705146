#include <doctest.h>

#include <cmath>

#include "qbl/ensemble.hpp"
#include "qbl/error.hpp"

using namespace qbl;

namespace {

EnsembleConfig tiny_config() {
  EnsembleConfig config;
  config.sizes = {{8, 2}};
  config.layers = {1, 2};
  config.master_seed = 11;
  config.thermo = true;
  config.random_draws = 5;
  return config;
}

bool same_record(const InstanceRecord& a, const InstanceRecord& b) {
  const auto same = [](double x, double y) {
    return (is_missing(x) && is_missing(y)) || x == y;
  };
  return a.label == b.label && a.n == b.n && a.p == b.p && same(a.r, b.r) &&
         same(a.pr_cmin, b.pr_cmin) && same(a.fitted_t, b.fitted_t) && same(a.tvd, b.tvd) &&
         same(a.s_qaoa, b.s_qaoa) && same(a.s_boltzmann, b.s_boltzmann) &&
         same(a.s_random, b.s_random) && same(a.r_exp, b.r_exp) &&
         same(a.pr_cmin_exp, b.pr_cmin_exp) && a.cdf == b.cdf && a.cdf_exp == b.cdf_exp;
}

}  // namespace

TEST_CASE("single-record run populates every field") {
  EnsembleConfig config;
  config.sizes = {{8, 1}};
  config.layers = {2};
  config.thermo = true;
  config.random_draws = 4;
  const auto records = run_ensemble(config);
  REQUIRE(records.size() == 1);
  const InstanceRecord& rec = records[0];
  CHECK(rec.error.empty());
  CHECK(rec.n == 8);
  CHECK(rec.p == 2);
  CHECK(rec.edge_count > 0);
  CHECK(rec.c_min < 0);
  CHECK(rec.c_max == rec.edge_count);
  CHECK(!is_missing(rec.r));
  CHECK(!is_missing(rec.pr_cmin));
  REQUIRE(rec.cdf.size() == 2);
  CHECK(rec.cdf[0] >= 0.0);
  CHECK(rec.cdf[1] >= rec.cdf[0] - 1e-15);
  CHECK(!is_missing(rec.fitted_t));
  CHECK(!is_missing(rec.tvd));
  CHECK(!is_missing(rec.t_e));
  CHECK(!is_missing(rec.s_qaoa));
  CHECK(!is_missing(rec.s_boltzmann));
  CHECK(!is_missing(rec.s_fluc));
  CHECK(!is_missing(rec.s_random));
  CHECK(!is_missing(rec.r_exp));
  CHECK(!is_missing(rec.pr_cmin_exp));
  REQUIRE(rec.cdf_exp.size() == 2);
  CHECK(rec.r >= 0.0);
  CHECK(rec.r <= 1.0);
  CHECK(rec.r_exp >= 0.0);
  CHECK(rec.r_exp <= 1.0);
}

TEST_CASE("identical configs give identical records") {
  const EnsembleConfig config = tiny_config();
  const auto first = run_ensemble(config);
  const auto second = run_ensemble(config);
  REQUIRE(first.size() == second.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    CHECK(same_record(first[i], second[i]));
  }
}

TEST_CASE("records are identical for every worker count") {
  EnsembleConfig config = tiny_config();
  config.threads = 1;
  const auto serial = run_ensemble(config);
  config.threads = 4;
  const auto parallel = run_ensemble(config);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(same_record(serial[i], parallel[i]));
  }
}

TEST_CASE("prediction-only mode fills model fields and leaves simulation fields missing") {
  EnsembleConfig config;
  config.sizes = {{18, 1}};
  config.layers = {4};
  config.predict_only = true;
  const auto records = run_ensemble(config);
  REQUIRE(records.size() == 1);
  const InstanceRecord& rec = records[0];
  CHECK(rec.error.empty());
  CHECK(!is_missing(rec.r_exp));
  CHECK(!is_missing(rec.pr_cmin_exp));
  CHECK(!is_missing(rec.t_e));
  CHECK(is_missing(rec.r));
  CHECK(is_missing(rec.pr_cmin));
  CHECK(is_missing(rec.s_qaoa));
  CHECK(is_missing(rec.fitted_t));
  CHECK(rec.cdf.empty());
}

TEST_CASE("per-instance failures are recorded without aborting the run") {
  EnsembleConfig config;
  config.sizes = {{8, 2}};
  config.layers = {2};
  config.enumeration.max_qubits_spectrum = 6;  // force a resource-limit failure
  const auto records = run_ensemble(config);
  REQUIRE(records.size() == 2);
  for (const auto& rec : records) {
    CHECK(!rec.error.empty());
    CHECK(rec.error.find("resource-limit") != std::string::npos);
  }
}

TEST_CASE("artifacts align with records and reconstruct the exact distribution") {
  EnsembleConfig config;
  config.sizes = {{8, 1}};
  config.layers = {2};
  RunArtifacts artifacts;
  const auto records = run_ensemble(config, &artifacts);
  REQUIRE(records.size() == 1);
  REQUIRE(artifacts.dists.size() == 1);
  const RecordDistribution& rd = artifacts.dists[0];
  CHECK(rd.label == records[0].label);
  const CostSpectrum spec = rd.spectrum();
  CHECK(spec.c_min == records[0].c_min);
  double total = 0.0;
  for (const double m : rd.exact_mass) total += m;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("error stats arithmetic") {
  std::vector<InstanceRecord> records(3);
  for (auto& rec : records) {
    rec.n = 10;
    rec.p = 2;
  }
  records[0].r = 0.5;
  records[0].r_exp = 0.55;
  records[1].r = 0.8;
  records[1].r_exp = 0.8;
  records[2].r = 0.0;   // excluded from the relative error
  records[2].r_exp = 0.1;

  const auto rows = error_stats(records, {MetricKind::ApproxRatio, 0});
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].used == 3);
  CHECK(rows[0].excluded == 1);
  CHECK(rows[0].median_rel == doctest::Approx(0.05));  // median of {0.1, 0.0}
  CHECK(rows[0].median_diff == doctest::Approx(0.05)); // median of {0.05, 0.0, 0.1}
}

TEST_CASE("temperature-law fit on synthetic records") {
  std::vector<InstanceRecord> records;
  for (int i = 0; i < 12; ++i) {
    InstanceRecord rec;
    rec.n = 14 + (i % 3);
    rec.p = 2 + 2 * (i % 4);
    rec.c_min = -20 - i;
    const double x = static_cast<double>(rec.c_min) / (rec.n * std::sqrt(rec.p));
    rec.fitted_t = -2.738 * x - 0.255;
    records.push_back(rec);
  }
  const TemperatureLawCD fit = fit_temperature_law(records);
  CHECK(fit.c == doctest::Approx(-2.738).epsilon(1e-10));
  CHECK(fit.d == doctest::Approx(-0.255).epsilon(1e-10));
}

TEST_CASE("pcmin medians feed the scaling fit") {
  std::vector<InstanceRecord> records;
  for (const int n : {10, 12, 14}) {
    for (const int p : {2, 4, 8}) {
      for (int i = 0; i < 3; ++i) {
        InstanceRecord rec;
        rec.n = n;
        rec.p = p;
        rec.pr_cmin = 2.0 * std::exp(-0.45 * n / std::pow(p, 2.0 / 3.0)) * (1.0 + 0.01 * (i - 1));
        records.push_back(rec);
      }
    }
  }
  const auto points = pcmin_medians(records);
  REQUIRE(points.size() == 9);
  const ScalingFitAB fit = fit_pcmin_scaling(points);
  CHECK(fit.a == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(fit.b == doctest::Approx(0.45).epsilon(1e-3));
}

TEST_CASE("desk profile matches the documented defaults") {
  const EnsembleConfig config = desk_profile();
  REQUIRE(config.sizes.size() == 3);
  CHECK(config.sizes[0].n == 14);
  CHECK(config.sizes[0].count == 30);
  CHECK(config.sizes[2].n == 20);
  CHECK(config.sizes[2].count == 10);
  CHECK(config.layers == std::vector<int>{2, 4, 6, 8, 10, 12});
}
