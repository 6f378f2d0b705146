#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qbl/graph.hpp"

namespace qbl {

// Exact density of solutions rho(C) over all 2^n assignments, stored sparsely
// on the supported costs (at most 2|E|+1 values, all sharing the parity of
// |E|).
struct CostSpectrum {
  int n = 0;
  int edge_count = 0;
  long c_min = 0;
  long c_max = 0;
  std::uint64_t ground_degeneracy = 0;
  std::vector<long> support;            // ascending
  std::vector<std::uint64_t> counts;    // rho per support entry

  std::uint64_t total() const { return std::uint64_t{1} << n; }
  std::uint64_t rho(long cost) const;
  int support_index(long cost) const;   // -1 when absent
};

// Per-assignment cost array indexed by the canonical integer encoding.
struct CostTable {
  int n = 0;
  int edge_count = 0;
  std::vector<std::int16_t> costs;      // size 2^n

  std::uint64_t size() const { return costs.size(); }
};

// Probability mass function over integer cost values.
struct CostDistribution {
  std::vector<long> support;            // ascending
  std::vector<double> mass;

  double mass_at(long cost) const;
  double mean() const;
  bool empty() const { return support.empty(); }
};

struct BinnedDistribution {
  double bin_width = 0.0;
  std::vector<double> lo;               // half-open [lo, hi), last bin closed
  std::vector<double> hi;
  std::vector<double> mean;             // mean probability over supported costs in the bin
  std::vector<double> stdev;
  std::vector<int> support_count;       // supported costs per bin; 0 flags an empty bin
};

struct EnumerationOptions {
  bool want_table = false;
  int max_qubits_spectrum = 40;
  int max_qubits_table = 26;
  int threads = 0;                      // 0: use the configured default
};

struct EnumerationResult {
  CostSpectrum spectrum;
  std::optional<CostTable> table;
};

// Sweeps all 2^n assignments in Gray-code order with O(1) amortized updates
// per step (flipping spin v changes the cost by -2 z_v sum_{u in N(v)} z_u).
// Parallelized over contiguous Gray subsequences; integer accumulation makes
// the result identical for every thread count.
EnumerationResult enumerate_spectrum(const GraphInstance& g, const EnumerationOptions& opts = {});

// All assignments attaining C_min; length equals the ground degeneracy.
std::vector<Assignment> optimal_set(const GraphInstance& g, const EnumerationOptions& opts = {});

// Bins of width |C_min|/n_bins anchored at C_min, tiling through C_max, with
// per-bin mean and (population) standard deviation of the probability over
// the supported costs falling in each bin.
BinnedDistribution bin_distribution(const CostDistribution& dist, const CostSpectrum& spectrum,
                                    int n_bins = 7);

// CSV emission: spectrum rows "C,rho"; binned rows "bin_lo,bin_hi,mean,std".
void write_spectrum_csv(const CostSpectrum& spectrum, const std::string& path);
void write_binned_csv(const BinnedDistribution& binned, const std::string& path);
void write_distribution_csv(const CostDistribution& dist, const std::string& path);

}  // namespace qbl
