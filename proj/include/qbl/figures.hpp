#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qbl/ensemble.hpp"
#include "qbl/fits.hpp"

namespace qbl {

// Per-instance binned rows ("binned.csv"): cost-distribution and
// mean-basis-probability bins of width |C_min|/7.
void write_binned_rows_csv(const RunArtifacts& artifacts, const std::string& path);

// Figure data derivable from records alone: fig1 (approximation ratios),
// fig3 (optimal-solution probability), fig6 (temperature scatter), fig7
// (entropies), fig8 (exact vs model metrics), fig10 (model-side medians).
// Returns the paths written.
std::vector<std::string> write_report_figures(const std::vector<InstanceRecord>& records,
                                              std::span<const double> alphas,
                                              const std::string& out_dir);

// Figure data needing full distributions: fig2/fig12 (binned cost
// distributions with across-instance mean/std), fig4 (binned mean basis
// probabilities), fig5 (exact vs best-fit overlays for the median/worst TVD
// instances), fig9 (cumulative distributions of the median-TVD instance).
std::vector<std::string> write_run_figures(const std::vector<InstanceRecord>& records,
                                           const RunArtifacts& artifacts,
                                           const std::string& out_dir);

// fig11: layer-count estimates p(n) for fixed optimal-solution probability
// targets, from the inverted scaling law.
std::string write_fig11(const ScalingFitAB& fit, const std::string& out_dir);

}  // namespace qbl
