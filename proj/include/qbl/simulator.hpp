#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "qbl/spectrum.hpp"

namespace qbl {

inline constexpr int kDefaultSimQubitCap = 26;

// Variational angles for a p-layer ansatz.
struct AngleSet {
  int p = 0;
  std::vector<double> betas;
  std::vector<double> gammas;

  static AngleSet zeros(int p) { return {p, std::vector<double>(p, 0.0), std::vector<double>(p, 0.0)}; }
};

void validate(const AngleSet& angles);

struct StateVector {
  int n = 0;
  std::vector<std::complex<double>> amp;

  std::uint64_t size() const { return amp.size(); }
};

// Uniform superposition: every amplitude 2^{-n/2}.
StateVector init_plus(int n, int max_qubits = kDefaultSimQubitCap);

double norm_sq(const StateVector& state);

// Diagonal phase evolution: amp(z) *= exp(-i gamma C(z)).
void apply_phase(StateVector& state, const CostTable& table, double gamma);

// Transverse-field evolution exp(-i beta X) on every qubit, applied as an
// in-place pairwise butterfly per qubit.
void apply_mixer(StateVector& state, double beta);

// Full ansatz: layers l = 1..p of phase(gamma_l) then mixer(beta_l) applied
// to the uniform superposition. Norm is checked after every layer.
StateVector run_qaoa(const CostTable& table, const AngleSet& angles,
                     int max_qubits = kDefaultSimQubitCap);

// Mass per cost value: mass(C) = sum of |amp(z)|^2 over z with C(z) = C.
CostDistribution measure_distribution(const StateVector& state, const CostTable& table);

double expected_cost(const StateVector& state, const CostTable& table);

// (c_max - mean) / (c_max - c_min), in [0, 1].
double approximation_ratio(double mean_cost, long c_min, long c_max);

double optimal_probability(const CostDistribution& dist, long c_min);

// Shannon entropy of the measurement distribution, in bits.
double shannon_entropy(const StateVector& state);

// d<C>/d(betas, gammas) by reverse (adjoint) sweep with two state vectors;
// layout: [dbeta_1..dbeta_p, dgamma_1..dgamma_p].
std::vector<double> cost_gradient(const CostTable& table, const AngleSet& angles,
                                  int max_qubits = kDefaultSimQubitCap);

// Same as cost_gradient but also returns <C> from the shared forward pass.
std::vector<double> cost_and_gradient(const CostTable& table, const AngleSet& angles,
                                      double& mean_cost, int max_qubits = kDefaultSimQubitCap);

// Debug dump: little-endian {n: u32} then 2^n complex-double pairs.
void write_state_dump(const StateVector& state, const std::string& path);
StateVector read_state_dump(const std::string& path);

}  // namespace qbl
