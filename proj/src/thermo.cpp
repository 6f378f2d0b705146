#include "qbl/thermo.hpp"

#include <algorithm>
#include <cmath>

#include "qbl/error.hpp"
#include "qbl/numeric.hpp"
#include "qbl/rng.hpp"

namespace qbl {

Temperature solve_boltzmann_temperature(const CostSpectrum& spectrum, double target_mean,
                                        double rel_tol) {
  require(target_mean > static_cast<double>(spectrum.c_min) && target_mean <= 0.0,
          ErrorKind::OutOfRange,
          "target mean cost must lie in (c_min, 0]; the negative-temperature regime is not "
          "supported");
  if (target_mean == 0.0) return Temperature::inf();

  const double tol = rel_tol * std::abs(static_cast<double>(spectrum.c_min));

  // <C>(beta) decreases monotonically from 0 at beta = 0 toward c_min.
  double beta_lo = 0.0;
  double beta_hi = 1.0;
  while (model_moments(spectrum, beta_hi).mean > target_mean) {
    beta_lo = beta_hi;
    beta_hi *= 2.0;
    require(beta_hi < 1e9, ErrorKind::NumericalFailure,
            "cannot bracket the Boltzmann temperature; target too close to c_min");
  }

  double beta = 0.5 * (beta_lo + beta_hi);
  for (int it = 0; it < 200; ++it) {
    const ModelMoments m = model_moments(spectrum, beta);
    const double miss = m.mean - target_mean;
    if (std::abs(miss) <= tol) break;
    if (miss > 0.0) {
      beta_lo = beta;
    } else {
      beta_hi = beta;
    }
    // Newton step on <C>(beta); fall back to bisection when it leaves the
    // bracket or the variance degenerates.
    double next = beta;
    if (m.variance > 0.0) next = beta + miss / m.variance;
    if (!(next > beta_lo && next < beta_hi)) next = 0.5 * (beta_lo + beta_hi);
    beta = next;
  }
  const double achieved = model_moments(spectrum, beta).mean;
  require(std::abs(achieved - target_mean) <= 10.0 * tol, ErrorKind::Convergence,
          "Boltzmann temperature solve missed the target mean by " +
              std::to_string(achieved - target_mean));
  return Temperature::finite(1.0 / beta);
}

double boltzmann_entropy_bits(const CostSpectrum& spectrum, Temperature t_b) {
  if (t_b.infinite) return static_cast<double>(spectrum.n);
  const double beta = 1.0 / t_b.value;
  const ModelMoments m = model_moments(spectrum, beta);
  const double log_z = m.log_z - beta * static_cast<double>(spectrum.c_min);
  return (m.mean * beta + log_z) / std::log(2.0);
}

double fluctuation_entropy_bits(double s_boltzmann_bits) {
  return s_boltzmann_bits - (1.0 - kEulerMascheroni) / std::log(2.0);
}

StateVector sample_fluctuation_state(const CostSpectrum& spectrum, const CostTable& table,
                                     Temperature t_b, std::uint64_t seed) {
  StateVector state;
  state.n = table.n;
  state.amp.resize(table.size());

  // Amplitude magnitudes |amp| ~ sqrt(w(C)); the overall scale cancels in the
  // final normalization, so shifted weights are fine.
  const double beta = t_b.infinite ? 0.0 : 1.0 / t_b.value;
  std::vector<double> root_weight(2 * table.edge_count + 1, 0.0);
  for (int c = -table.edge_count; c <= table.edge_count; ++c) {
    root_weight[c + table.edge_count] =
        std::exp(-0.5 * beta * static_cast<double>(c - spectrum.c_min));
  }

  Xoshiro256pp rng(seed);
  for (std::uint64_t z = 0; z < table.size(); ++z) {
    const auto [g, g2] = rng.normal_pair();
    const double w = root_weight[table.costs[z] + table.edge_count];
    state.amp[z] = {g * w, g2 * w};
  }
  const double norm = std::sqrt(norm_sq(state));
  require(norm > 0.0, ErrorKind::NumericalFailure, "fluctuation state collapsed to zero");
  for (auto& amp : state.amp) amp /= norm;
  return state;
}

namespace {

struct Residuals {
  double sum_one;
  double sum_cost;
};

Residuals residuals_of(const std::vector<double>& p, const std::vector<long>& costs,
                       double target) {
  const double total = pairwise_sum(p);
  const double moment =
      pairwise_sum(p.size(), [&](std::size_t i) { return p[i] * costs[i]; });
  return {std::abs(total - 1.0), std::abs(moment - target)};
}

}  // namespace

CostDistribution project_to_constraints(const CostSpectrum& spectrum, std::vector<double> start,
                                        double target_mean, const DykstraOptions& opts) {
  require(static_cast<double>(spectrum.c_min) <= target_mean &&
              target_mean <= static_cast<double>(spectrum.c_max),
          ErrorKind::OutOfRange, "target mean lies outside [c_min, c_max]");
  const std::vector<long>& costs = spectrum.support;
  const std::size_t m = costs.size();
  require(start.size() == m, ErrorKind::InvalidInput, "start size does not match the support");

  const double cost_norm_sq =
      pairwise_sum(m, [&](std::size_t i) { return static_cast<double>(costs[i]) * costs[i]; });

  std::vector<double> p = std::move(start);
  std::vector<double> inc_one(m, 0.0), inc_cost(m, 0.0), inc_orthant(m, 0.0), before(m);

  for (int cycle = 0; cycle < opts.max_cycles; ++cycle) {
    // Hyperplane sum(p) = 1.
    for (std::size_t i = 0; i < m; ++i) before[i] = p[i] + inc_one[i];
    {
      const double total = pairwise_sum(before);
      const double shift = (1.0 - total) / static_cast<double>(m);
      for (std::size_t i = 0; i < m; ++i) {
        const double projected = before[i] + shift;
        inc_one[i] = before[i] - projected;
        p[i] = projected;
      }
    }
    // Hyperplane sum(p * C) = target.
    for (std::size_t i = 0; i < m; ++i) before[i] = p[i] + inc_cost[i];
    {
      const double moment =
          pairwise_sum(m, [&](std::size_t i) { return before[i] * costs[i]; });
      const double scale = (target_mean - moment) / cost_norm_sq;
      for (std::size_t i = 0; i < m; ++i) {
        const double projected = before[i] + scale * static_cast<double>(costs[i]);
        inc_cost[i] = before[i] - projected;
        p[i] = projected;
      }
    }
    // Nonnegative orthant (clip), last so the returned point is feasible.
    for (std::size_t i = 0; i < m; ++i) before[i] = p[i] + inc_orthant[i];
    for (std::size_t i = 0; i < m; ++i) {
      const double projected = std::max(0.0, before[i]);
      inc_orthant[i] = before[i] - projected;
      p[i] = projected;
    }

    const Residuals res = residuals_of(p, costs, target_mean);
    if (res.sum_one <= opts.residual_tol && res.sum_cost <= opts.residual_tol) {
      CostDistribution dist;
      dist.support = costs;
      dist.mass = std::move(p);
      return dist;
    }
  }

  const Residuals res = residuals_of(p, costs, target_mean);
  fail(ErrorKind::Convergence,
       "Dykstra projection did not reach the residual tolerance after " +
           std::to_string(opts.max_cycles) + " cycles (|sum-1| = " + std::to_string(res.sum_one) +
           ", |mean-target| = " + std::to_string(res.sum_cost) + ")");
}

CostDistribution random_constrained_distribution(const CostSpectrum& spectrum, double target_mean,
                                                 std::uint64_t seed, const DykstraOptions& opts) {
  Xoshiro256pp rng(seed);
  // Dirichlet(1,...,1) start: normalized standard exponentials.
  std::vector<double> start(spectrum.support.size());
  double total = 0.0;
  for (double& v : start) {
    double u = rng.uniform();
    while (u <= 0.0) u = rng.uniform();
    v = -std::log(u);
    total += v;
  }
  for (double& v : start) v /= total;
  return project_to_constraints(spectrum, std::move(start), target_mean, opts);
}

double random_state_entropy_bits(const CostSpectrum& spectrum,
                                 const CostDistribution& class_masses, std::uint64_t seed) {
  Xoshiro256pp rng(seed);
  double entropy = 0.0;
  for (std::size_t i = 0; i < spectrum.support.size(); ++i) {
    const double mass = class_masses.mass_at(spectrum.support[i]);
    if (mass <= 0.0) continue;
    const std::uint64_t count = spectrum.counts[i];
    // Split the class mass over rho(C) states proportionally to uniforms
    // u_k: p_k = u_k * mass / S with S = sum u_k, so the class entropy is
    // -(mass/S) * sum u_k log2 u_k - mass * log2(mass / S).
    double sum_u = 0.0;
    double sum_u_log = 0.0;
    for (std::uint64_t k = 0; k < count; ++k) {
      double u = rng.uniform();
      while (u <= 0.0) u = rng.uniform();
      sum_u += u;
      sum_u_log += u * std::log2(u);
    }
    const double ratio = mass / sum_u;
    entropy -= ratio * sum_u_log + mass * std::log2(ratio);
  }
  return entropy;
}

ThermoReport make_thermo_report(const CostSpectrum& spectrum, const StateVector& state,
                                const CostTable& table, std::uint64_t seed, int random_draws) {
  require(random_draws >= 1, ErrorKind::InvalidInput, "need at least one random draw");

  ThermoReport report;
  report.target_mean = expected_cost(state, table);
  report.s_qaoa = shannon_entropy(state);
  report.t_b = solve_boltzmann_temperature(spectrum, std::min(report.target_mean, 0.0));
  report.s_boltzmann = boltzmann_entropy_bits(spectrum, report.t_b);
  report.s_fluc = fluctuation_entropy_bits(report.s_boltzmann);

  std::vector<double> samples(random_draws);
  for (int draw = 0; draw < random_draws; ++draw) {
    const std::uint64_t draw_seed = derive_seed(seed, static_cast<std::uint64_t>(draw), 0xd1);
    const CostDistribution masses =
        random_constrained_distribution(spectrum, report.target_mean, draw_seed);
    samples[draw] =
        random_state_entropy_bits(spectrum, masses, derive_seed(draw_seed, 0xe2));
  }
  const double mean = pairwise_sum(samples) / random_draws;
  const double var = pairwise_sum(samples.size(),
                                  [&](std::size_t i) {
                                    return (samples[i] - mean) * (samples[i] - mean);
                                  }) /
                     random_draws;
  report.s_random_mean = mean;
  report.s_random_std = std::sqrt(std::max(0.0, var));
  report.random_draws = random_draws;
  return report;
}

}  // namespace qbl
