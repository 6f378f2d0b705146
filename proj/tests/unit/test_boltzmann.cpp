#include <doctest.h>

#include <cmath>

#include "qbl/boltzmann.hpp"
#include "qbl/error.hpp"
#include "qbl/rng.hpp"

using namespace qbl;

namespace {

CostSpectrum triangle_spectrum() {
  GraphInstance g;
  g.n = 3;
  g.edges = {{0, 1}, {0, 2}, {1, 2}};
  return enumerate_spectrum(g).spectrum;
}

CostSpectrum toy_spectrum(std::vector<long> support, std::vector<std::uint64_t> counts, int n) {
  CostSpectrum spec;
  spec.n = n;
  spec.support = std::move(support);
  spec.counts = std::move(counts);
  spec.c_min = spec.support.front();
  spec.c_max = spec.support.back();
  spec.edge_count = static_cast<int>(spec.c_max);
  spec.ground_degeneracy = spec.counts.front();
  return spec;
}

}  // namespace

TEST_CASE("log partition on the triangle at T=1") {
  const CostSpectrum spec = triangle_spectrum();
  const double expected = std::log(6.0 * std::exp(1.0) + 2.0 * std::exp(-3.0));
  CHECK(log_partition(spec, Temperature::finite(1.0)) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected == doctest::Approx(2.79785).epsilon(1e-5));
}

TEST_CASE("log partition at infinite temperature is n ln 2") {
  const CostSpectrum spec = triangle_spectrum();
  CHECK(log_partition(spec, Temperature::inf()) == doctest::Approx(3.0 * std::log(2.0)));
}

TEST_CASE("shifting every cost by s changes ln Z by -s/T") {
  const CostSpectrum base = toy_spectrum({-1, 3}, {6, 2}, 3);
  const long shift = 5;
  const CostSpectrum shifted = toy_spectrum({-1 + shift, 3 + shift}, {6, 2}, 3);
  for (const double t : {0.5, 1.0, 4.0}) {
    const double lhs = log_partition(shifted, Temperature::finite(t));
    const double rhs = log_partition(base, Temperature::finite(t)) - shift / t;
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("log partition rejects non-positive temperatures") {
  CHECK_THROWS_AS(Temperature::finite(0.0), Error);
  CHECK_THROWS_AS(Temperature::finite(-2.0), Error);
}

TEST_CASE("model distribution limits") {
  const CostSpectrum spec = triangle_spectrum();

  const CostDistribution uniform = model_cost_distribution(spec, Temperature::inf());
  CHECK(uniform.mass_at(-1) == doctest::Approx(0.75));
  CHECK(uniform.mass_at(3) == doctest::Approx(0.25));

  const CostDistribution cold = model_cost_distribution(spec, Temperature::finite(1e-3));
  CHECK(cold.mass_at(-1) == doctest::Approx(1.0).epsilon(1e-9));

  const CostDistribution warm = model_cost_distribution(spec, Temperature::finite(1.0));
  const double z = 6.0 * std::exp(1.0) + 2.0 * std::exp(-3.0);
  CHECK(warm.mass_at(-1) == doctest::Approx(6.0 * std::exp(1.0) / z).epsilon(1e-12));
  CHECK(warm.mass_at(-1) == doctest::Approx(0.99393).epsilon(1e-4));
}

TEST_CASE("model mass per state decreases strictly with cost at finite T") {
  const GraphInstance g = generate_er(10, 0.5, 51);
  const CostSpectrum spec = enumerate_spectrum(g).spectrum;
  const CostDistribution model = model_cost_distribution(spec, Temperature::finite(2.0));
  double previous = 1e300;
  for (std::size_t i = 0; i < spec.support.size(); ++i) {
    const double per_state = model.mass[i] / static_cast<double>(spec.counts[i]);
    CHECK(per_state < previous);
    CHECK(per_state > 0.0);
    previous = per_state;
  }
}

TEST_CASE("mean basis probability") {
  const CostSpectrum spec = triangle_spectrum();
  CostDistribution uniform;
  uniform.support = {-1, 3};
  uniform.mass = {0.75, 0.25};
  const auto rows = mean_basis_probability(uniform, spec);
  REQUIRE(rows.size() == 2);
  // 0.75/6 and 0.25/2: both 2^-3 for the uniform distribution.
  CHECK(rows[0].second == doctest::Approx(0.75 / 6.0));
  CHECK(rows[1].second == doctest::Approx(0.25 / 2.0));

  // The Boltzmann model reproduces exp(-C/T)/Z exactly.
  const Temperature t = Temperature::finite(1.3);
  const auto model_rows = mean_basis_probability(model_cost_distribution(spec, t), spec);
  const double log_z = log_partition(spec, t);
  for (const auto& [cost, prob] : model_rows) {
    CHECK(std::log(prob) == doctest::Approx(-cost / t.value - log_z).epsilon(1e-10));
  }
}

TEST_CASE("mean basis probability rejects mass off the spectrum") {
  const CostSpectrum spec = triangle_spectrum();
  CostDistribution bad;
  bad.support = {0};
  bad.mass = {1.0};
  CHECK_THROWS_AS(mean_basis_probability(bad, spec), Error);
}

TEST_CASE("temperature fit recovers synthetic Boltzmann inputs") {
  Xoshiro256pp rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 8 + trial % 5;
    const GraphInstance g = generate_er(n, 0.5, 2000 + trial);
    const CostSpectrum spec = enumerate_spectrum(g).spectrum;
    const double temps[5] = {0.5, 1.0, 2.0, 5.0, 20.0};
    const double t_true = temps[trial % 5];
    const CostDistribution synthetic = model_cost_distribution(spec, Temperature::finite(t_true));
    const TemperatureFit fit = fit_temperature(synthetic, spec);
    REQUIRE(!fit.temperature.infinite);
    CHECK(fit.temperature.value == doctest::Approx(t_true).epsilon(1e-6));
    CHECK(fit.tvd < 1e-10);
    CHECK(fit.converged);
  }
}

TEST_CASE("temperature fit flags uniform input as infinite temperature") {
  const GraphInstance g = generate_er(9, 0.5, 3001);
  const CostSpectrum spec = enumerate_spectrum(g).spectrum;
  const CostDistribution uniform = model_cost_distribution(spec, Temperature::inf());
  const TemperatureFit fit = fit_temperature(uniform, spec);
  CHECK(fit.temperature.infinite);
  CHECK(fit.tvd < 1e-12);
}

TEST_CASE("tvd basics") {
  CostDistribution a, b;
  a.support = {-1, 3};
  a.mass = {0.75, 0.25};
  CHECK(tvd(a, a) == doctest::Approx(0.0));

  b.support = {-1, 3};
  b.mass = {0.5, 0.5};
  CHECK(tvd(a, b) == doctest::Approx(0.25));

  CostDistribution c, d;
  c.support = {0};
  c.mass = {1.0};
  d.support = {2};
  d.mass = {1.0};
  CHECK(tvd(c, d) == doctest::Approx(1.0));
}

TEST_CASE("tvd behaves as a metric on random distributions") {
  Xoshiro256pp rng(14);
  const GraphInstance g = generate_er(8, 0.5, 3100);
  const CostSpectrum spec = enumerate_spectrum(g).spectrum;
  const auto random_dist = [&]() {
    CostDistribution dist;
    dist.support = spec.support;
    double total = 0.0;
    for (std::size_t i = 0; i < spec.support.size(); ++i) {
      dist.mass.push_back(-std::log(rng.uniform() + 1e-300));
      total += dist.mass.back();
    }
    for (auto& m : dist.mass) m /= total;
    return dist;
  };
  for (int trial = 0; trial < 20; ++trial) {
    const CostDistribution a = random_dist(), b = random_dist(), c = random_dist();
    const double ab = tvd(a, b), ba = tvd(b, a), ac = tvd(a, c), cb = tvd(c, b);
    CHECK(ab == doctest::Approx(ba).epsilon(1e-14));
    CHECK(ab <= ac + cb + 1e-14);
    CHECK(ab >= 0.0);
    CHECK(ab <= 1.0);
  }
}

TEST_CASE("heuristic temperature") {
  const Temperature t = heuristic_temperature(-29, 23, 2);
  CHECK(t.value == doctest::Approx(2.18612).epsilon(1e-4));

  // Doubling p scales the slope term by 1/sqrt(2).
  const Temperature t2 = heuristic_temperature(-29, 23, 4);
  const double slope_p2 = t.value - kTempLawD;
  const double slope_p4 = t2.value - kTempLawD;
  CHECK(slope_p4 == doctest::Approx(slope_p2 / std::sqrt(2.0)).epsilon(1e-12));

  // c = 0 leaves only the intercept.
  const Temperature flat = heuristic_temperature(-29, 23, 2, 0.0, 0.7);
  CHECK(flat.value == doctest::Approx(0.7));

  CHECK_THROWS_AS(heuristic_temperature(-1, 100, 1), Error);
  try {
    heuristic_temperature(-1, 100, 1);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateTemperature);
  }
}

TEST_CASE("model metrics") {
  const CostSpectrum spec = triangle_spectrum();
  const double alphas[2] = {0.5, 1.0};

  const ModelMetrics inf_metrics = model_metrics(spec, Temperature::inf(), alphas);
  CHECK(inf_metrics.r_exp == doctest::Approx(3.0 / 4.0).epsilon(1e-12));

  const ModelMetrics cold = model_metrics(spec, Temperature::finite(1e-3), alphas);
  CHECK(cold.r_exp == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(cold.pr_cmin_exp == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(cold.cdf[0] == doctest::Approx(1.0).epsilon(1e-9));

  const ModelMetrics warm = model_metrics(spec, Temperature::finite(1.0), alphas);
  // C_0.5 = 1, so the cdf is the mass at cost -1.
  const double z = 6.0 * std::exp(1.0) + 2.0 * std::exp(-3.0);
  CHECK(warm.cdf[0] == doctest::Approx(6.0 * std::exp(1.0) / z).epsilon(1e-12));
  CHECK(warm.cdf[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cumulative mass at thresholds") {
  CostDistribution dist;
  dist.support = {-1, 3};
  dist.mass = {0.75, 0.25};
  CHECK(cumulative(dist, -2.0) == doctest::Approx(0.0));
  CHECK(cumulative(dist, 1.0) == doctest::Approx(0.75));
  CHECK(cumulative(dist, 3.0) == doctest::Approx(1.0));
  CHECK(cumulative(dist, 100.0) == doctest::Approx(1.0));
}

TEST_CASE("model moments expose the monotone mean used by the solver") {
  const GraphInstance g = generate_er(9, 0.5, 3200);
  const CostSpectrum spec = enumerate_spectrum(g).spectrum;
  double previous = model_moments(spec, 0.0).mean;
  CHECK(previous == doctest::Approx(0.0).epsilon(1e-9));
  for (double beta = 0.1; beta < 2.0; beta += 0.2) {
    const double mean = model_moments(spec, beta).mean;
    CHECK(mean < previous);
    previous = mean;
  }
}
