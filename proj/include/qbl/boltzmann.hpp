#pragma once

#include <span>
#include <vector>

#include "qbl/spectrum.hpp"

namespace qbl {

// Paper-reported coefficients of the empirical temperature law
// T_e = c * C_min / (n sqrt(p)) + d.
inline constexpr double kTempLawC = -2.738;
inline constexpr double kTempLawD = -0.255;

// Temperature in cost units. Infinite temperature is represented explicitly
// so the p=0 (uniform) limit stays exact.
struct Temperature {
  double value = 0.0;
  bool infinite = false;

  static Temperature inf() { return {0.0, true}; }
  static Temperature finite(double t);  // requires t > 0

  double beta() const { return infinite ? 0.0 : 1.0 / value; }
};

// ln Z = ln sum_C rho(C) exp(-C/T), evaluated with exponents shifted by
// C_min so any T > 0 is safe.
double log_partition(const CostSpectrum& spectrum, Temperature t);

// mass(C) = rho(C) exp(-C/T) / Z; the uniform rho(C)/2^n at infinite T.
CostDistribution model_cost_distribution(const CostSpectrum& spectrum, Temperature t);

// mass(C)/rho(C) per supported cost (the average single-basis-state
// probability at each cost).
std::vector<std::pair<long, double>> mean_basis_probability(const CostDistribution& dist,
                                                            const CostSpectrum& spectrum);

// Model <C> and its derivative d<C>/d(beta) = -Var(C), both at inverse
// temperature beta >= 0. Shared by the fitter and the thermo solver.
struct ModelMoments {
  double log_z = 0.0;       // shifted by -beta*c_min
  double mean = 0.0;
  double variance = 0.0;
};
ModelMoments model_moments(const CostSpectrum& spectrum, double beta);

struct TemperatureFit {
  Temperature temperature;
  double sse = 0.0;       // sum of squared mass residuals at the optimum
  double tvd = 0.0;       // against the exact distribution
  bool converged = false;
  int iterations = 0;
};

struct FitTemperatureOptions {
  // Bracket in units of |C_min|/n, expanded geometrically at a boundary hit.
  double bracket_lo = 1e-3;
  double bracket_hi = 1e3;
  int golden_iters = 80;
  int newton_iters = 40;
  bool weighted = false;  // weight residuals by rho(C) instead of unweighted
};

// Least-squares fit of the model mass to an exact distribution over all
// supported costs, by golden-section bracketing refined with Newton steps on
// the derivative. Uniform inputs report the infinite-temperature flag.
TemperatureFit fit_temperature(const CostDistribution& exact, const CostSpectrum& spectrum,
                               const FitTemperatureOptions& opts = {});

// Total variation distance over the union of supports; in [0, 1].
double tvd(const CostDistribution& a, const CostDistribution& b);

// Empirical law T_e = c * C_min/(n sqrt(p)) + d. Throws
// ErrorKind::DegenerateTemperature when the result is not positive.
Temperature heuristic_temperature(long c_min, int n, int p, double c = kTempLawC,
                                  double d = kTempLawD);

struct ModelMetrics {
  double mean_cost = 0.0;
  double r_exp = 0.0;
  double pr_cmin_exp = 0.0;
  std::vector<double> cdf;  // one value per requested alpha
};

// Model-side performance metrics at temperature t: approximation ratio,
// optimal-solution mass, and cumulative mass at C_alpha =
// (1-alpha) C_min + alpha C_max for each requested alpha.
ModelMetrics model_metrics(const CostSpectrum& spectrum, Temperature t,
                           std::span<const double> alphas);

// Total mass at costs <= threshold (real-valued threshold).
double cumulative(const CostDistribution& dist, double threshold);

}  // namespace qbl
