#include "qbl/spectrum.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>

#include "qbl/error.hpp"
#include "qbl/io.hpp"
#include "qbl/numeric.hpp"
#include "qbl/parallel.hpp"

namespace qbl {

std::uint64_t CostSpectrum::rho(long cost) const {
  const int idx = support_index(cost);
  return idx < 0 ? 0 : counts[idx];
}

int CostSpectrum::support_index(long cost) const {
  const auto it = std::lower_bound(support.begin(), support.end(), cost);
  if (it == support.end() || *it != cost) return -1;
  return static_cast<int>(it - support.begin());
}

double CostDistribution::mass_at(long cost) const {
  const auto it = std::lower_bound(support.begin(), support.end(), cost);
  if (it == support.end() || *it != cost) return 0.0;
  return mass[it - support.begin()];
}

double CostDistribution::mean() const {
  return pairwise_sum(support.size(), [&](std::size_t i) { return mass[i] * support[i]; });
}

namespace {

// Flat adjacency for the sweep inner loop.
struct Csr {
  std::vector<std::int32_t> offsets;
  std::vector<std::int32_t> neighbors;

  explicit Csr(const GraphInstance& g) {
    const auto lists = g.adjacency();
    offsets.resize(g.n + 1, 0);
    for (int v = 0; v < g.n; ++v) offsets[v + 1] = offsets[v] + static_cast<int>(lists[v].size());
    neighbors.reserve(offsets.back());
    for (const auto& list : lists) neighbors.insert(neighbors.end(), list.begin(), list.end());
  }
};

// Sweeps Gray indices [begin, end), adding rho counts into density (indexed
// by cost + |E|) and optionally writing per-assignment costs into table.
void sweep_range(const GraphInstance& g, const Csr& csr, std::uint64_t begin, std::uint64_t end,
                 std::vector<std::uint64_t>& density, std::int16_t* table) {
  const int n = g.n;
  const long edge_count = g.edge_count();

  std::uint64_t code = begin ^ (begin >> 1);
  std::vector<std::int8_t> spin(n);
  for (int v = 0; v < n; ++v) spin[v] = ((code >> v) & 1ULL) ? -1 : +1;

  std::vector<std::int16_t> local(n, 0);
  for (int v = 0; v < n; ++v) {
    std::int16_t sum = 0;
    for (int k = csr.offsets[v]; k < csr.offsets[v + 1]; ++k) sum += spin[csr.neighbors[k]];
    local[v] = sum;
  }
  long cost = 0;
  for (const auto& [i, j] : g.edges) cost += static_cast<long>(spin[i]) * spin[j];

  density[cost + edge_count]++;
  if (table != nullptr) table[code] = static_cast<std::int16_t>(cost);

  for (std::uint64_t k = begin + 1; k < end; ++k) {
    const int v = std::countr_zero(k);
    const std::int16_t delta = static_cast<std::int16_t>(2 * spin[v]);
    cost -= static_cast<long>(delta) * local[v];
    for (int e = csr.offsets[v]; e < csr.offsets[v + 1]; ++e) local[csr.neighbors[e]] -= delta;
    spin[v] = static_cast<std::int8_t>(-spin[v]);
    code ^= (std::uint64_t{1} << v);

    density[cost + edge_count]++;
    if (table != nullptr) table[code] = static_cast<std::int16_t>(cost);
  }
}

}  // namespace

EnumerationResult enumerate_spectrum(const GraphInstance& g, const EnumerationOptions& opts) {
  validate(g);
  require(g.n <= opts.max_qubits_spectrum, ErrorKind::ResourceLimit,
          "n=" + std::to_string(g.n) + " exceeds the spectrum enumeration cap of " +
              std::to_string(opts.max_qubits_spectrum));
  if (opts.want_table) {
    require(g.n <= opts.max_qubits_table, ErrorKind::ResourceLimit,
            "n=" + std::to_string(g.n) + " exceeds the cost-table materialization cap of " +
                std::to_string(opts.max_qubits_table));
  }

  const Csr csr(g);
  const std::uint64_t total = std::uint64_t{1} << g.n;
  const long edge_count = g.edge_count();
  const std::size_t range = static_cast<std::size_t>(2 * edge_count + 1);

  EnumerationResult result;
  if (opts.want_table) {
    result.table.emplace();
    result.table->n = g.n;
    result.table->edge_count = g.edge_count();
    result.table->costs.resize(total);
  }
  std::int16_t* table = result.table ? result.table->costs.data() : nullptr;

  const int threads = par::resolve_threads(opts.threads);
  std::vector<std::vector<std::uint64_t>> partial(
      std::min<std::uint64_t>(static_cast<std::uint64_t>(threads), total));
  par::run_chunks(total, static_cast<int>(partial.size()),
                  [&](int chunk, std::size_t begin, std::size_t end) {
                    partial[chunk].assign(range, 0);
                    sweep_range(g, csr, begin, end, partial[chunk], table);
                  });

  std::vector<std::uint64_t> density(range, 0);
  for (const auto& piece : partial) {
    if (piece.empty()) continue;
    for (std::size_t i = 0; i < range; ++i) density[i] += piece[i];
  }

  CostSpectrum& spec = result.spectrum;
  spec.n = g.n;
  spec.edge_count = g.edge_count();
  for (std::size_t i = 0; i < range; ++i) {
    if (density[i] == 0) continue;
    spec.support.push_back(static_cast<long>(i) - edge_count);
    spec.counts.push_back(density[i]);
  }
  spec.c_min = spec.support.front();
  spec.c_max = spec.support.back();
  spec.ground_degeneracy = spec.counts.front();
  return result;
}

std::vector<Assignment> optimal_set(const GraphInstance& g, const EnumerationOptions& opts) {
  EnumerationOptions scan = opts;
  scan.want_table = false;
  require(g.n <= opts.max_qubits_table, ErrorKind::ResourceLimit,
          "n=" + std::to_string(g.n) + " exceeds the materialization cap of " +
              std::to_string(opts.max_qubits_table));
  const CostSpectrum spec = enumerate_spectrum(g, scan).spectrum;

  const Csr csr(g);
  const std::uint64_t total = std::uint64_t{1} << g.n;
  const int threads = par::resolve_threads(opts.threads);
  std::vector<std::vector<std::uint64_t>> hits(
      std::min<std::uint64_t>(static_cast<std::uint64_t>(threads), total));
  par::run_chunks(total, static_cast<int>(hits.size()),
                  [&](int chunk, std::size_t begin, std::size_t end) {
                    // Re-sweep the range, keeping indices that attain c_min.
                    std::vector<std::uint64_t> density(2 * g.edge_count() + 1, 0);
                    const int n = g.n;
                    std::uint64_t code = static_cast<std::uint64_t>(begin);
                    code = code ^ (code >> 1);
                    std::vector<std::int8_t> spin(n);
                    for (int v = 0; v < n; ++v) spin[v] = ((code >> v) & 1ULL) ? -1 : +1;
                    std::vector<std::int16_t> local(n, 0);
                    for (int v = 0; v < n; ++v) {
                      std::int16_t sum = 0;
                      for (int k = csr.offsets[v]; k < csr.offsets[v + 1]; ++k)
                        sum += spin[csr.neighbors[k]];
                      local[v] = sum;
                    }
                    long cost = 0;
                    for (const auto& [i, j] : g.edges)
                      cost += static_cast<long>(spin[i]) * spin[j];
                    if (cost == spec.c_min) hits[chunk].push_back(code);
                    for (std::uint64_t k = begin + 1; k < end; ++k) {
                      const int v = std::countr_zero(k);
                      const std::int16_t delta = static_cast<std::int16_t>(2 * spin[v]);
                      cost -= static_cast<long>(delta) * local[v];
                      for (int e = csr.offsets[v]; e < csr.offsets[v + 1]; ++e)
                        local[csr.neighbors[e]] -= delta;
                      spin[v] = static_cast<std::int8_t>(-spin[v]);
                      code ^= (std::uint64_t{1} << v);
                      if (cost == spec.c_min) hits[chunk].push_back(code);
                    }
                  });

  std::vector<std::uint64_t> indices;
  for (auto& piece : hits) indices.insert(indices.end(), piece.begin(), piece.end());
  std::sort(indices.begin(), indices.end());

  std::vector<Assignment> result;
  result.reserve(indices.size());
  for (const std::uint64_t idx : indices) result.push_back(Assignment::from_index(idx, g.n));
  return result;
}

BinnedDistribution bin_distribution(const CostDistribution& dist, const CostSpectrum& spectrum,
                                    int n_bins) {
  require(!dist.empty(), ErrorKind::InvalidInput, "empty distribution");
  require(n_bins >= 1, ErrorKind::InvalidInput, "bin count must be at least 1");

  const double width = std::abs(static_cast<double>(spectrum.c_min)) / n_bins;
  require(width > 0.0, ErrorKind::InvalidInput, "degenerate bin width (c_min = 0)");

  BinnedDistribution out;
  out.bin_width = width;
  const double lo0 = static_cast<double>(spectrum.c_min);
  const double span = static_cast<double>(spectrum.c_max) - lo0;
  const int bins = std::max(1, static_cast<int>(std::ceil(span / width)) + (span == 0.0 ? 1 : 0));
  for (int b = 0; b < bins; ++b) {
    out.lo.push_back(lo0 + b * width);
    out.hi.push_back(lo0 + (b + 1) * width);
  }

  std::vector<std::vector<double>> values(bins);
  for (std::size_t i = 0; i < spectrum.support.size(); ++i) {
    const long cost = spectrum.support[i];
    int b = static_cast<int>(std::floor((cost - lo0) / width));
    if (b >= bins) b = bins - 1;  // last bin is closed at c_max
    if (b < 0) b = 0;
    values[b].push_back(dist.mass_at(cost));
  }

  for (int b = 0; b < bins; ++b) {
    const auto& vs = values[b];
    out.support_count.push_back(static_cast<int>(vs.size()));
    if (vs.empty()) {
      out.mean.push_back(0.0);
      out.stdev.push_back(0.0);
      continue;
    }
    const double mean = pairwise_sum(vs) / vs.size();
    const double var =
        pairwise_sum(vs.size(), [&](std::size_t i) { return (vs[i] - mean) * (vs[i] - mean); }) /
        vs.size();
    out.mean.push_back(mean);
    out.stdev.push_back(std::sqrt(std::max(0.0, var)));
  }
  return out;
}

void write_spectrum_csv(const CostSpectrum& spectrum, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), ErrorKind::Io, "cannot open " + path + " for writing");
  out << "C,rho\n";
  for (std::size_t i = 0; i < spectrum.support.size(); ++i) {
    out << spectrum.support[i] << ',' << spectrum.counts[i] << '\n';
  }
  require(out.good(), ErrorKind::Io, "failed writing " + path);
}

void write_binned_csv(const BinnedDistribution& binned, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), ErrorKind::Io, "cannot open " + path + " for writing");
  out << "bin_lo,bin_hi,mean,std\n";
  for (std::size_t b = 0; b < binned.lo.size(); ++b) {
    out << fmt_g17(binned.lo[b]) << ',' << fmt_g17(binned.hi[b]) << ',' << fmt_g17(binned.mean[b])
        << ',' << fmt_g17(binned.stdev[b]) << '\n';
  }
  require(out.good(), ErrorKind::Io, "failed writing " + path);
}

void write_distribution_csv(const CostDistribution& dist, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), ErrorKind::Io, "cannot open " + path + " for writing");
  out << "C,prob\n";
  for (std::size_t i = 0; i < dist.support.size(); ++i) {
    out << dist.support[i] << ',' << fmt_g17(dist.mass[i]) << '\n';
  }
  require(out.good(), ErrorKind::Io, "failed writing " + path);
}

}  // namespace qbl
