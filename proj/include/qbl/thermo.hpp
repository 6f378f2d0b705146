#pragma once

#include <cstdint>
#include <string>

#include "qbl/boltzmann.hpp"
#include "qbl/simulator.hpp"
#include "qbl/spectrum.hpp"

namespace qbl {

// Euler-Mascheroni constant; the Gaussian-fluctuation entropy deficit is
// (1 - gamma_EM)/ln 2 bits.
inline constexpr double kEulerMascheroni = 0.5772156649015329;

// T_B with model <C>(T_B) = target_mean, by bisection on the inverse
// temperature refined with Newton steps. target_mean = 0 returns the
// infinite-temperature flag; targets outside (C_min, 0] are rejected.
Temperature solve_boltzmann_temperature(const CostSpectrum& spectrum, double target_mean,
                                        double rel_tol = 1e-9);

// (<C>/T_B + ln Z)/ln 2 bits; n bits at infinite temperature.
double boltzmann_entropy_bits(const CostSpectrum& spectrum, Temperature t_b);

double fluctuation_entropy_bits(double s_boltzmann_bits);

// State with independent complex Gaussian fluctuations about the Boltzmann
// weights, renormalized.
StateVector sample_fluctuation_state(const CostSpectrum& spectrum, const CostTable& table,
                                     Temperature t_b, std::uint64_t seed);

struct DykstraOptions {
  double residual_tol = 1e-9;
  int max_cycles = 100000;
};

// Uniform-random start (Dirichlet(1,...,1) over the spectrum support)
// projected in L2 onto {Pr >= 0, sum Pr = 1, sum Pr*C = target_mean} by
// Dykstra-corrected alternating projections.
CostDistribution random_constrained_distribution(const CostSpectrum& spectrum, double target_mean,
                                                 std::uint64_t seed,
                                                 const DykstraOptions& opts = {});

// Deterministic projection of an explicit start (used by tests and the
// random-start wrapper above).
CostDistribution project_to_constraints(const CostSpectrum& spectrum,
                                        std::vector<double> start, double target_mean,
                                        const DykstraOptions& opts = {});

// Entropy of a random state whose per-cost class masses are split uniformly
// at random over the rho(C) basis states of each class; streaming, O(1)
// memory in the class size.
double random_state_entropy_bits(const CostSpectrum& spectrum,
                                 const CostDistribution& class_masses, std::uint64_t seed);

struct ThermoReport {
  std::string instance_label;
  double target_mean = 0.0;
  double s_qaoa = 0.0;
  Temperature t_b;
  double s_boltzmann = 0.0;
  double s_fluc = 0.0;
  double s_random_mean = 0.0;
  double s_random_std = 0.0;
  int random_draws = 0;
};

// Full entropy study for one optimized state.
ThermoReport make_thermo_report(const CostSpectrum& spectrum, const StateVector& state,
                                const CostTable& table, std::uint64_t seed, int random_draws = 20);

}  // namespace qbl
