#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "qbl/bfgs.hpp"
#include "qbl/graph.hpp"
#include "qbl/simulator.hpp"

namespace qbl {

// Transferable angles for the infinite-size Sherrington-Kirkpatrick model,
// shipped as a data asset (data/sk_angles.json) and rescaled per instance.
class SkAngleTable {
 public:
  static SkAngleTable load(const std::string& path);
  static SkAngleTable from_json_string(const std::string& text);
  // The copy of data/sk_angles.json compiled into the library.
  static const SkAngleTable& embedded();

  // Throws ErrorKind::MissingTableEntry when no entry for p exists.
  const AngleSet& at(int p) const;
  bool contains(int p) const { return entries_.count(p) != 0; }
  int max_p() const;

 private:
  std::map<int, AngleSet> entries_;
};

// betas unchanged, gammas divided by sqrt(average degree).
AngleSet rescale_sk(const SkAngleTable& table, int p, double avg_degree);

struct OptimizerSettings {
  double grad_tol = 1e-6;
  double cost_tol = 1e-10;
  int max_iters = 500;
  int max_qubits = kDefaultSimQubitCap;
};

struct OptimizationReport {
  std::string instance_label;
  int p = 0;
  AngleSet initial_angles;
  AngleSet final_angles;
  double initial_cost = 0.0;
  double final_cost = 0.0;
  double initial_ratio = 0.0;
  double final_ratio = 0.0;
  int iterations = 0;
  double grad_norm = 0.0;
  bool converged = false;
  std::string init_sampling;  // set by the brute-force baseline

  std::string to_json_string() const;
};

void write_report(const OptimizationReport& report, const std::string& path);

// Quasi-Newton descent on <C>(betas, gammas) with the adjoint gradient.
OptimizationReport optimize_angles(const GraphInstance& g, const CostTable& table,
                                   const CostSpectrum& spectrum, const AngleSet& init,
                                   const OptimizerSettings& opts = {});

// Convenience overload that enumerates the instance itself.
OptimizationReport optimize_angles(const GraphInstance& g, const AngleSet& init,
                                   const OptimizerSettings& opts = {});

// Appendix-style baseline: optimize n_samples uniform random starts
// (beta in [0, pi), gamma in [0, 2 pi)) and keep the best final ratio,
// breaking ties toward the earliest sample.
OptimizationReport brute_force_baseline(const GraphInstance& g, const CostTable& table,
                                        const CostSpectrum& spectrum, int p, int n_samples,
                                        std::uint64_t seed, const OptimizerSettings& opts = {});

}  // namespace qbl
