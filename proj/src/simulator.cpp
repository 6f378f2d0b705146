#include "qbl/simulator.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "qbl/error.hpp"
#include "qbl/numeric.hpp"

namespace qbl {

void validate(const AngleSet& angles) {
  require(angles.p >= 1, ErrorKind::InvalidInput, "layer count must be at least 1");
  require(static_cast<int>(angles.betas.size()) == angles.p &&
              static_cast<int>(angles.gammas.size()) == angles.p,
          ErrorKind::InvalidInput, "angle arrays must have length p");
}

StateVector init_plus(int n, int max_qubits) {
  require(n >= 1, ErrorKind::InvalidInput, "qubit count must be at least 1");
  require(n <= max_qubits, ErrorKind::ResourceLimit,
          "n=" + std::to_string(n) + " exceeds the simulator cap of " + std::to_string(max_qubits));
  StateVector state;
  state.n = n;
  const double amp = std::sqrt(std::ldexp(1.0, -n));
  state.amp.assign(std::uint64_t{1} << n, {amp, 0.0});
  return state;
}

double norm_sq(const StateVector& state) {
  return pairwise_sum(state.size(), [&](std::size_t z) { return std::norm(state.amp[z]); });
}

void apply_phase(StateVector& state, const CostTable& table, double gamma) {
  require(table.size() == state.size(), ErrorKind::InvalidInput,
          "cost table size does not match the state vector");
  const int edge_count = table.edge_count;
  // The cost lattice holds at most 2|E|+1 values; one phasor per value.
  std::vector<std::complex<double>> lut(2 * edge_count + 1);
  for (int c = -edge_count; c <= edge_count; ++c) {
    lut[c + edge_count] = {std::cos(gamma * c), -std::sin(gamma * c)};
  }
  const std::int16_t* costs = table.costs.data();
  std::complex<double>* amp = state.amp.data();
  const std::uint64_t size = state.size();
  for (std::uint64_t z = 0; z < size; ++z) {
    amp[z] *= lut[costs[z] + edge_count];
  }
}

void apply_mixer(StateVector& state, double beta) {
  const double c = std::cos(beta);
  const double s = std::sin(beta);
  double* amp = reinterpret_cast<double*>(state.amp.data());
  const std::uint64_t size = state.size();
  for (int q = 0; q < state.n; ++q) {
    const std::uint64_t stride = std::uint64_t{1} << q;
    for (std::uint64_t base = 0; base < size; base += 2 * stride) {
      double* lo = amp + 2 * base;
      double* hi = amp + 2 * (base + stride);
      for (std::uint64_t k = 0; k < stride; ++k) {
        const double ar = lo[2 * k], ai = lo[2 * k + 1];
        const double br = hi[2 * k], bi = hi[2 * k + 1];
        lo[2 * k] = c * ar + s * bi;
        lo[2 * k + 1] = c * ai - s * br;
        hi[2 * k] = c * br + s * ai;
        hi[2 * k + 1] = c * bi - s * ar;
      }
    }
  }
}

namespace {

void check_norm(const StateVector& state, const char* where) {
  const double norm = norm_sq(state);
  require(std::abs(norm - 1.0) <= 1e-10, ErrorKind::NumericalFailure,
          std::string("norm drifted to ") + std::to_string(norm) + " after " + where);
}

}  // namespace

StateVector run_qaoa(const CostTable& table, const AngleSet& angles, int max_qubits) {
  validate(angles);
  StateVector state = init_plus(table.n, max_qubits);
  for (int l = 0; l < angles.p; ++l) {
    apply_phase(state, table, angles.gammas[l]);
    apply_mixer(state, angles.betas[l]);
    check_norm(state, "layer");
  }
  return state;
}

CostDistribution measure_distribution(const StateVector& state, const CostTable& table) {
  require(table.size() == state.size(), ErrorKind::InvalidInput,
          "cost table size does not match the state vector");
  const int edge_count = table.edge_count;
  const std::size_t range = 2 * edge_count + 1;
  std::vector<double> mass(range, 0.0);
  std::vector<double> comp(range, 0.0);  // Kahan compensation per cost value
  std::vector<std::uint64_t> hits(range, 0);
  const std::uint64_t size = state.size();
  for (std::uint64_t z = 0; z < size; ++z) {
    const std::size_t bin = table.costs[z] + edge_count;
    const double term = std::norm(state.amp[z]) - comp[bin];
    const double next = mass[bin] + term;
    comp[bin] = (next - mass[bin]) - term;
    mass[bin] = next;
    hits[bin]++;
  }
  CostDistribution dist;
  for (std::size_t i = 0; i < range; ++i) {
    if (hits[i] == 0) continue;
    dist.support.push_back(static_cast<long>(i) - edge_count);
    dist.mass.push_back(mass[i]);
  }
  return dist;
}

double expected_cost(const StateVector& state, const CostTable& table) {
  require(table.size() == state.size(), ErrorKind::InvalidInput,
          "cost table size does not match the state vector");
  return pairwise_sum(state.size(), [&](std::size_t z) {
    return static_cast<double>(table.costs[z]) * std::norm(state.amp[z]);
  });
}

double approximation_ratio(double mean_cost, long c_min, long c_max) {
  require(c_min < c_max, ErrorKind::DegenerateSpectrum,
          "degenerate spectrum: c_min equals c_max");
  require(c_min <= mean_cost && mean_cost <= c_max, ErrorKind::InvalidInput,
          "mean cost lies outside [c_min, c_max]");
  return (c_max - mean_cost) / static_cast<double>(c_max - c_min);
}

double optimal_probability(const CostDistribution& dist, long c_min) {
  return dist.mass_at(c_min);
}

double shannon_entropy(const StateVector& state) {
  return pairwise_sum(state.size(), [&](std::size_t z) {
    const double p = std::norm(state.amp[z]);
    return p > 0.0 ? -p * std::log2(p) : 0.0;
  });
}

namespace {

// Im <lam| X_q |phi>, the per-qubit cross term of the mixer generator.
double im_cross_qubit(const StateVector& lam, const StateVector& phi, int q) {
  const std::uint64_t stride = std::uint64_t{1} << q;
  const std::uint64_t pairs = lam.size() >> 1;
  return pairwise_sum(pairs, [&](std::uint64_t k) {
    const std::uint64_t a = ((k & ~(stride - 1)) << 1) | (k & (stride - 1));
    const std::uint64_t b = a | stride;
    const std::complex<double> la = lam.amp[a];
    const std::complex<double> lb = lam.amp[b];
    const std::complex<double> pa = phi.amp[a];
    const std::complex<double> pb = phi.amp[b];
    return (la.real() * pb.imag() - la.imag() * pb.real()) +
           (lb.real() * pa.imag() - lb.imag() * pa.real());
  });
}

// Im <lam| C |phi> for the diagonal generator.
double im_diag_cost(const StateVector& lam, const StateVector& phi, const CostTable& table) {
  return pairwise_sum(lam.size(), [&](std::uint64_t z) {
    const std::complex<double> l = lam.amp[z];
    const std::complex<double> f = phi.amp[z];
    return static_cast<double>(table.costs[z]) * (l.real() * f.imag() - l.imag() * f.real());
  });
}

}  // namespace

std::vector<double> cost_and_gradient(const CostTable& table, const AngleSet& angles,
                                      double& mean_cost, int max_qubits) {
  validate(angles);
  const int p = angles.p;

  StateVector phi = run_qaoa(table, angles, max_qubits);
  mean_cost = expected_cost(phi, table);

  StateVector lam = phi;
  for (std::uint64_t z = 0; z < lam.size(); ++z) {
    lam.amp[z] *= static_cast<double>(table.costs[z]);
  }

  std::vector<double> grad(2 * p, 0.0);
  for (int l = p - 1; l >= 0; --l) {
    double beta_term = 0.0;
    for (int q = 0; q < table.n; ++q) beta_term += im_cross_qubit(lam, phi, q);
    grad[l] = 2.0 * beta_term;

    apply_mixer(phi, -angles.betas[l]);
    apply_mixer(lam, -angles.betas[l]);

    grad[p + l] = 2.0 * im_diag_cost(lam, phi, table);

    apply_phase(phi, table, -angles.gammas[l]);
    apply_phase(lam, table, -angles.gammas[l]);
  }
  return grad;
}

std::vector<double> cost_gradient(const CostTable& table, const AngleSet& angles, int max_qubits) {
  double mean_cost = 0.0;
  return cost_and_gradient(table, angles, mean_cost, max_qubits);
}

void write_state_dump(const StateVector& state, const std::string& path) {
  static_assert(sizeof(std::complex<double>) == 16);
  require(std::endian::native == std::endian::little, ErrorKind::Io,
          "state dumps require a little-endian host");
  require(state.n <= 16, ErrorKind::ResourceLimit, "state dumps are limited to n <= 16");
  std::ofstream out(path, std::ios::binary);
  require(out.good(), ErrorKind::Io, "cannot open " + path + " for writing");
  const std::uint32_t n = static_cast<std::uint32_t>(state.n);
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  out.write(reinterpret_cast<const char*>(state.amp.data()),
            static_cast<std::streamsize>(state.amp.size() * sizeof(std::complex<double>)));
  require(out.good(), ErrorKind::Io, "failed writing " + path);
}

StateVector read_state_dump(const std::string& path) {
  require(std::endian::native == std::endian::little, ErrorKind::Io,
          "state dumps require a little-endian host");
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorKind::Io, "cannot open " + path);
  std::uint32_t n = 0;
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  require(in.good() && n >= 1 && n <= 16, ErrorKind::Parse, "bad state dump header in " + path);
  StateVector state;
  state.n = static_cast<int>(n);
  state.amp.resize(std::uint64_t{1} << n);
  in.read(reinterpret_cast<char*>(state.amp.data()),
          static_cast<std::streamsize>(state.amp.size() * sizeof(std::complex<double>)));
  require(in.good(), ErrorKind::Parse, "truncated state dump " + path);
  return state;
}

}  // namespace qbl
