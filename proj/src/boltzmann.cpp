#include "qbl/boltzmann.hpp"

#include <algorithm>
#include <cmath>

#include "qbl/error.hpp"
#include "qbl/numeric.hpp"
#include "qbl/simulator.hpp"

namespace qbl {

Temperature Temperature::finite(double t) {
  require(t > 0.0 && std::isfinite(t), ErrorKind::InvalidTemperature,
          "temperature must be positive and finite, got " + std::to_string(t));
  return {t, false};
}

namespace {

// Shifted Boltzmann weights rho_i * exp(-beta (C_i - c_min)); safe for any
// beta >= 0.
std::vector<double> shifted_weights(const CostSpectrum& spectrum, double beta) {
  std::vector<double> weights(spectrum.support.size());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    weights[i] = static_cast<double>(spectrum.counts[i]) *
                 std::exp(-beta * static_cast<double>(spectrum.support[i] - spectrum.c_min));
  }
  return weights;
}

}  // namespace

ModelMoments model_moments(const CostSpectrum& spectrum, double beta) {
  require(beta >= 0.0 && std::isfinite(beta), ErrorKind::InvalidTemperature,
          "inverse temperature must be finite and non-negative");
  const std::vector<double> weights = shifted_weights(spectrum, beta);
  const double z = pairwise_sum(weights);
  ModelMoments m;
  m.log_z = std::log(z);
  m.mean = pairwise_sum(weights.size(),
                        [&](std::size_t i) { return weights[i] * spectrum.support[i]; }) /
           z;
  m.variance = pairwise_sum(weights.size(),
                            [&](std::size_t i) {
                              const double d = spectrum.support[i] - m.mean;
                              return weights[i] * d * d;
                            }) /
               z;
  return m;
}

double log_partition(const CostSpectrum& spectrum, Temperature t) {
  if (t.infinite) return spectrum.n * std::log(2.0);
  require(t.value > 0.0, ErrorKind::InvalidTemperature, "temperature must be positive");
  const double beta = 1.0 / t.value;
  return model_moments(spectrum, beta).log_z - beta * static_cast<double>(spectrum.c_min);
}

CostDistribution model_cost_distribution(const CostSpectrum& spectrum, Temperature t) {
  CostDistribution dist;
  dist.support = spectrum.support;
  dist.mass.resize(spectrum.support.size());
  if (t.infinite) {
    const double scale = std::ldexp(1.0, -spectrum.n);
    for (std::size_t i = 0; i < dist.mass.size(); ++i) {
      dist.mass[i] = static_cast<double>(spectrum.counts[i]) * scale;
    }
    return dist;
  }
  require(t.value > 0.0, ErrorKind::InvalidTemperature, "temperature must be positive");
  const std::vector<double> weights = shifted_weights(spectrum, 1.0 / t.value);
  const double z = pairwise_sum(weights);
  for (std::size_t i = 0; i < dist.mass.size(); ++i) dist.mass[i] = weights[i] / z;
  return dist;
}

std::vector<std::pair<long, double>> mean_basis_probability(const CostDistribution& dist,
                                                            const CostSpectrum& spectrum) {
  for (std::size_t i = 0; i < dist.support.size(); ++i) {
    require(spectrum.rho(dist.support[i]) > 0 || dist.mass[i] == 0.0,
            ErrorKind::InconsistentInput,
            "distribution carries mass at cost " + std::to_string(dist.support[i]) +
                " where the spectrum has no solutions");
  }
  std::vector<std::pair<long, double>> result;
  result.reserve(spectrum.support.size());
  for (std::size_t i = 0; i < spectrum.support.size(); ++i) {
    const long cost = spectrum.support[i];
    result.emplace_back(cost, dist.mass_at(cost) / static_cast<double>(spectrum.counts[i]));
  }
  return result;
}

double tvd(const CostDistribution& a, const CostDistribution& b) {
  std::size_t i = 0, j = 0;
  std::vector<double> diffs;
  diffs.reserve(a.support.size() + b.support.size());
  while (i < a.support.size() || j < b.support.size()) {
    if (j >= b.support.size() || (i < a.support.size() && a.support[i] < b.support[j])) {
      diffs.push_back(std::abs(a.mass[i]));
      ++i;
    } else if (i >= a.support.size() || b.support[j] < a.support[i]) {
      diffs.push_back(std::abs(b.mass[j]));
      ++j;
    } else {
      diffs.push_back(std::abs(a.mass[i] - b.mass[j]));
      ++i;
      ++j;
    }
  }
  return 0.5 * pairwise_sum(diffs);
}

namespace {

struct FitContext {
  const CostSpectrum& spectrum;
  std::vector<double> exact_mass;  // aligned with spectrum.support
  std::vector<double> weight;      // residual weights (1 or rho)

  double sse(double beta) const {
    const std::vector<double> w = shifted_weights(spectrum, beta);
    const double z = pairwise_sum(w);
    return pairwise_sum(w.size(), [&](std::size_t i) {
      const double r = w[i] / z - exact_mass[i];
      return weight[i] * r * r;
    });
  }

  // First and second derivatives of the SSE with respect to beta.
  void derivatives(double beta, double& first, double& second) const {
    const std::vector<double> w = shifted_weights(spectrum, beta);
    const double z = pairwise_sum(w);
    const double mean =
        pairwise_sum(w.size(), [&](std::size_t i) { return w[i] * spectrum.support[i]; }) / z;
    const double var = pairwise_sum(w.size(),
                                    [&](std::size_t i) {
                                      const double d = spectrum.support[i] - mean;
                                      return w[i] * d * d;
                                    }) /
                       z;
    first = 0.0;
    second = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double m = w[i] / z;
      const double dm = m * (mean - spectrum.support[i]);
      const double d2m = m * (mean - spectrum.support[i]) * (mean - spectrum.support[i]) - m * var;
      const double r = m - exact_mass[i];
      first += weight[i] * 2.0 * r * dm;
      second += weight[i] * 2.0 * (dm * dm + r * d2m);
    }
  }
};

}  // namespace

TemperatureFit fit_temperature(const CostDistribution& exact, const CostSpectrum& spectrum,
                               const FitTemperatureOptions& opts) {
  require(!exact.empty(), ErrorKind::InvalidInput, "empty distribution");

  TemperatureFit fit;
  if (spectrum.support.size() < 2 || spectrum.c_min == 0) {
    // Degenerate spectrum: the model is the uniform distribution for any T.
    fit.temperature = Temperature::inf();
    fit.tvd = tvd(exact, model_cost_distribution(spectrum, fit.temperature));
    fit.converged = true;
    return fit;
  }

  FitContext ctx{spectrum, {}, {}};
  ctx.exact_mass.resize(spectrum.support.size());
  ctx.weight.resize(spectrum.support.size());
  for (std::size_t i = 0; i < spectrum.support.size(); ++i) {
    ctx.exact_mass[i] = exact.mass_at(spectrum.support[i]);
    ctx.weight[i] = opts.weighted ? static_cast<double>(spectrum.counts[i]) : 1.0;
  }

  const double unit = std::abs(static_cast<double>(spectrum.c_min)) / spectrum.n;
  double lo = std::log(opts.bracket_lo * unit);
  double hi = std::log(opts.bracket_hi * unit);
  const auto sse_log = [&](double s) { return ctx.sse(std::exp(-s)); };  // s = ln T

  // Golden-section minimization of SSE(ln T), expanding the bracket when the
  // minimum presses against an end.
  constexpr double kInvPhi = 0.6180339887498949;
  int evals = 0;
  double best_s = 0.0;
  for (int expansion = 0; expansion < 8; ++expansion) {
    double a = lo, b = hi;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = sse_log(x1), f2 = sse_log(x2);
    for (int it = 0; it < opts.golden_iters && (b - a) > 1e-10; ++it) {
      if (f1 <= f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - kInvPhi * (b - a);
        f1 = sse_log(x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + kInvPhi * (b - a);
        f2 = sse_log(x2);
      }
      ++evals;
    }
    best_s = 0.5 * (a + b);
    const double width = hi - lo;
    if (best_s - lo < 0.01 * width) {
      lo -= std::log(opts.bracket_hi / opts.bracket_lo);
      hi = best_s + 1.0;
    } else if (hi - best_s < 0.01 * width) {
      hi += std::log(opts.bracket_hi / opts.bracket_lo);
      lo = best_s - 1.0;
    } else {
      break;
    }
  }

  // Infinite-temperature escape: if the uniform model already beats the best
  // finite candidate, report the flag instead of a large float.
  const double sse_best = sse_log(best_s);
  const double sse_uniform = ctx.sse(0.0);
  if (sse_uniform <= sse_best) {
    fit.temperature = Temperature::inf();
    fit.sse = sse_uniform;
    fit.tvd = tvd(exact, model_cost_distribution(spectrum, fit.temperature));
    fit.converged = true;
    fit.iterations = evals;
    return fit;
  }

  // Newton refinement on the beta derivative.
  double beta = std::exp(-best_s);
  bool newton_ok = false;
  for (int it = 0; it < opts.newton_iters; ++it) {
    double first = 0.0, second = 0.0;
    ctx.derivatives(beta, first, second);
    ++evals;
    if (second <= 0.0) break;
    const double step = first / second;
    const double next = beta - step;
    if (!(next > 0.0) || !std::isfinite(next)) break;
    beta = next;
    if (std::abs(step) <= 1e-14 * std::max(beta, 1e-30)) {
      newton_ok = true;
      break;
    }
  }

  fit.temperature = Temperature::finite(1.0 / beta);
  fit.sse = ctx.sse(beta);
  fit.tvd = tvd(exact, model_cost_distribution(spectrum, fit.temperature));
  fit.converged = newton_ok || fit.sse <= sse_best + 1e-30;
  fit.iterations = evals;
  require(fit.converged, ErrorKind::FitFailure,
          "temperature fit did not converge (best T = " + std::to_string(1.0 / beta) + ")");
  return fit;
}

Temperature heuristic_temperature(long c_min, int n, int p, double c, double d) {
  require(n >= 1 && p >= 1, ErrorKind::InvalidInput, "n and p must be at least 1");
  require(c_min < 0, ErrorKind::InvalidInput, "heuristic temperature requires c_min < 0");
  const double t = c * static_cast<double>(c_min) / (n * std::sqrt(static_cast<double>(p))) + d;
  require(t > 0.0, ErrorKind::DegenerateTemperature,
          "heuristic temperature is not positive (" + std::to_string(t) + ")");
  return Temperature::finite(t);
}

ModelMetrics model_metrics(const CostSpectrum& spectrum, Temperature t,
                           std::span<const double> alphas) {
  for (const double alpha : alphas) {
    require(0.0 <= alpha && alpha <= 1.0, ErrorKind::InvalidInput,
            "alpha thresholds must lie in [0, 1]");
  }
  const CostDistribution dist = model_cost_distribution(spectrum, t);
  ModelMetrics out;
  out.mean_cost = dist.mean();
  out.r_exp = approximation_ratio(std::clamp(out.mean_cost,
                                             static_cast<double>(spectrum.c_min),
                                             static_cast<double>(spectrum.c_max)),
                                  spectrum.c_min, spectrum.c_max);
  out.pr_cmin_exp = dist.mass_at(spectrum.c_min);
  for (const double alpha : alphas) {
    const double threshold = (1.0 - alpha) * static_cast<double>(spectrum.c_min) +
                             alpha * static_cast<double>(spectrum.c_max);
    out.cdf.push_back(cumulative(dist, threshold));
  }
  return out;
}

double cumulative(const CostDistribution& dist, double threshold) {
  return pairwise_sum(dist.support.size(), [&](std::size_t i) {
    return static_cast<double>(dist.support[i]) <= threshold ? dist.mass[i] : 0.0;
  });
}

}  // namespace qbl
