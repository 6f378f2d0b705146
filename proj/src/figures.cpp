#include "qbl/figures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>

#include "qbl/boltzmann.hpp"
#include "qbl/error.hpp"
#include "qbl/io.hpp"

namespace qbl {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  require(out.good(), ErrorKind::Io, "cannot open " + path + " for writing");
  return out;
}

struct GroupKey {
  int n;
  int p;
  bool operator<(const GroupKey& other) const {
    return n != other.n ? n < other.n : p < other.p;
  }
};

using GroupedValues = std::map<GroupKey, std::vector<double>>;

void write_median_quantiles(const GroupedValues& groups, const std::string& value_name,
                            const std::string& path) {
  auto out = open_out(path);
  out << "n,p,median_" << value_name << ",q10_" << value_name << ",q90_" << value_name
      << ",count\n";
  const double qs[3] = {0.5, 0.1, 0.9};
  for (const auto& [key, values] : groups) {
    if (values.empty()) continue;
    const auto q = quantiles(values, qs);
    out << key.n << ',' << key.p << ',' << fmt_g17(q[0]) << ',' << fmt_g17(q[1]) << ','
        << fmt_g17(q[2]) << ',' << values.size() << '\n';
  }
}

GroupedValues group_metric(const std::vector<InstanceRecord>& records,
                           double InstanceRecord::* field) {
  GroupedValues groups;
  for (const auto& rec : records) {
    if (!rec.error.empty()) continue;
    const double value = rec.*field;
    if (is_missing(value)) continue;
    groups[{rec.n, rec.p}].push_back(value);
  }
  return groups;
}

}  // namespace

void write_binned_rows_csv(const RunArtifacts& artifacts, const std::string& path) {
  auto out = open_out(path);
  out << "label,n,p,kind,bin,lo,hi,mean,std,count\n";
  for (const auto& rd : artifacts.dists) {
    const CostSpectrum spec = rd.spectrum();
    if (spec.c_min == 0) continue;
    const CostDistribution exact = rd.exact();

    CostDistribution basis;
    basis.support = rd.support;
    basis.mass.resize(rd.support.size());
    for (std::size_t i = 0; i < rd.support.size(); ++i) {
      basis.mass[i] = rd.exact_mass[i] / static_cast<double>(rd.rho[i]);
    }

    const BinnedDistribution cost_bins = bin_distribution(exact, spec, 7);
    const BinnedDistribution basis_bins = bin_distribution(basis, spec, 7);
    const BinnedDistribution* all[2] = {&cost_bins, &basis_bins};
    const char* kinds[2] = {"cost", "basis"};
    for (int k = 0; k < 2; ++k) {
      for (std::size_t b = 0; b < all[k]->lo.size(); ++b) {
        out << rd.label << ',' << rd.n << ',' << rd.p << ',' << kinds[k] << ',' << b << ','
            << fmt_g17(all[k]->lo[b]) << ',' << fmt_g17(all[k]->hi[b]) << ','
            << fmt_g17(all[k]->mean[b]) << ',' << fmt_g17(all[k]->stdev[b]) << ','
            << all[k]->support_count[b] << '\n';
      }
    }
  }
}

std::vector<std::string> write_report_figures(const std::vector<InstanceRecord>& records,
                                              std::span<const double> alphas,
                                              const std::string& out_dir) {
  ensure_directory(out_dir);
  std::vector<std::string> written;
  const auto emit = [&](const std::string& name) {
    written.push_back(out_dir + "/" + name);
    return written.back();
  };

  {
    const GroupedValues r_groups = group_metric(records, &InstanceRecord::r);
    if (!r_groups.empty()) write_median_quantiles(r_groups, "r", emit("fig1.csv"));
  }
  {
    const GroupedValues groups = group_metric(records, &InstanceRecord::pr_cmin);
    if (!groups.empty()) write_median_quantiles(groups, "pr_cmin", emit("fig3.csv"));
  }
  {
    bool any = false;
    for (const auto& rec : records) any = any || !is_missing(rec.fitted_t);
    if (any) {
      auto out = open_out(emit("fig6.csv"));
      out << "label,n,p,x,fitted_t,t_e\n";
      for (const auto& rec : records) {
        if (!rec.error.empty() || is_missing(rec.fitted_t) || std::isinf(rec.fitted_t)) continue;
        const double x =
            static_cast<double>(rec.c_min) / (rec.n * std::sqrt(static_cast<double>(rec.p)));
        out << rec.label << ',' << rec.n << ',' << rec.p << ',' << fmt_g17(x) << ','
            << fmt_g17(rec.fitted_t) << ',' << fmt_opt(rec.t_e) << '\n';
      }
    }
  }
  {
    bool any = false;
    for (const auto& rec : records) any = any || !is_missing(rec.s_boltzmann);
    if (any) {
      auto out = open_out(emit("fig7.csv"));
      out << "label,n,p,s_boltzmann,s_qaoa,s_random,s_fluc\n";
      for (const auto& rec : records) {
        if (!rec.error.empty() || is_missing(rec.s_boltzmann)) continue;
        out << rec.label << ',' << rec.n << ',' << rec.p << ',' << fmt_g17(rec.s_boltzmann) << ','
            << fmt_opt(rec.s_qaoa) << ',' << fmt_opt(rec.s_random) << ',' << fmt_opt(rec.s_fluc)
            << '\n';
      }
    }
  }
  {
    bool any = false;
    for (const auto& rec : records) any = any || (!is_missing(rec.r) && !is_missing(rec.r_exp));
    if (any) {
      auto out = open_out(emit("fig8.csv"));
      out << "label,n,p,r,r_exp,pr_cmin,pr_cmin_exp";
      for (const double alpha : alphas) {
        char tag[32];
        std::snprintf(tag, sizeof tag, "%g", alpha);
        out << ",cdf_" << tag << ",cdf_exp_" << tag;
      }
      out << '\n';
      for (const auto& rec : records) {
        if (!rec.error.empty() || is_missing(rec.r) || is_missing(rec.r_exp)) continue;
        out << rec.label << ',' << rec.n << ',' << rec.p << ',' << fmt_g17(rec.r) << ','
            << fmt_g17(rec.r_exp) << ',' << fmt_opt(rec.pr_cmin) << ','
            << fmt_opt(rec.pr_cmin_exp);
        for (std::size_t i = 0; i < alphas.size(); ++i) {
          out << ',' << (i < rec.cdf.size() ? fmt_opt(rec.cdf[i]) : std::string{}) << ','
              << (i < rec.cdf_exp.size() ? fmt_opt(rec.cdf_exp[i]) : std::string{});
        }
        out << '\n';
      }
    }
  }
  {
    const GroupedValues r_exp_groups = group_metric(records, &InstanceRecord::r_exp);
    const GroupedValues p_exp_groups = group_metric(records, &InstanceRecord::pr_cmin_exp);
    if (!r_exp_groups.empty()) {
      auto out = open_out(emit("fig10.csv"));
      out << "n,p,median_r_exp,q10_r_exp,q90_r_exp,median_pr_cmin_exp,q10_pr_cmin_exp,"
             "q90_pr_cmin_exp,count\n";
      const double qs[3] = {0.5, 0.1, 0.9};
      for (const auto& [key, values] : r_exp_groups) {
        const auto qr = quantiles(values, qs);
        const auto it = p_exp_groups.find(key);
        std::vector<double> qp = {kMissing, kMissing, kMissing};
        if (it != p_exp_groups.end() && !it->second.empty()) qp = quantiles(it->second, qs);
        out << key.n << ',' << key.p << ',' << fmt_g17(qr[0]) << ',' << fmt_g17(qr[1]) << ','
            << fmt_g17(qr[2]) << ',' << fmt_opt(qp[0]) << ',' << fmt_opt(qp[1]) << ','
            << fmt_opt(qp[2]) << ',' << values.size() << '\n';
      }
    }
  }
  return written;
}

namespace {

const RecordDistribution* find_dist(const RunArtifacts& artifacts, const std::string& label,
                                    int p) {
  for (const auto& rd : artifacts.dists) {
    if (rd.label == label && rd.p == p) return &rd;
  }
  return nullptr;
}

// Record whose TVD is the sample median (lower middle) within (n, p).
const InstanceRecord* pick_by_tvd(const std::vector<InstanceRecord>& records, int n, int p,
                                  bool worst) {
  std::vector<const InstanceRecord*> group;
  for (const auto& rec : records) {
    if (rec.n == n && rec.p == p && rec.error.empty() && !is_missing(rec.tvd)) {
      group.push_back(&rec);
    }
  }
  if (group.empty()) return nullptr;
  std::sort(group.begin(), group.end(),
            [](const InstanceRecord* a, const InstanceRecord* b) { return a->tvd < b->tvd; });
  return worst ? group.back() : group[(group.size() - 1) / 2];
}

}  // namespace

std::vector<std::string> write_run_figures(const std::vector<InstanceRecord>& records,
                                           const RunArtifacts& artifacts,
                                           const std::string& out_dir) {
  ensure_directory(out_dir);
  std::vector<std::string> written;

  // fig2/fig12 (cost bins) and fig4 (mean basis-state bins): across-instance
  // mean and std of the per-instance bin means, aligned by bin index.
  struct Accum {
    std::vector<double> values;
  };
  std::map<std::pair<GroupKey, int>, Accum> cost_acc, basis_acc;
  for (const auto& rd : artifacts.dists) {
    const CostSpectrum spec = rd.spectrum();
    if (spec.c_min == 0) continue;
    const CostDistribution exact = rd.exact();
    CostDistribution basis;
    basis.support = rd.support;
    basis.mass.resize(rd.support.size());
    for (std::size_t i = 0; i < rd.support.size(); ++i) {
      basis.mass[i] = rd.exact_mass[i] / static_cast<double>(rd.rho[i]);
    }
    const BinnedDistribution cost_bins = bin_distribution(exact, spec, 7);
    const BinnedDistribution basis_bins = bin_distribution(basis, spec, 7);
    for (std::size_t b = 0; b < cost_bins.mean.size(); ++b) {
      cost_acc[{{rd.n, rd.p}, static_cast<int>(b)}].values.push_back(cost_bins.mean[b]);
    }
    for (std::size_t b = 0; b < basis_bins.mean.size(); ++b) {
      basis_acc[{{rd.n, rd.p}, static_cast<int>(b)}].values.push_back(basis_bins.mean[b]);
    }
  }

  const auto write_binned_fig = [&](const std::map<std::pair<GroupKey, int>, Accum>& acc,
                                    const std::string& name) {
    const std::string path = out_dir + "/" + name;
    auto out = open_out(path);
    // x in units of |C_min|: bins anchored at C_min have edges -1 + bin/7.
    out << "n,p,bin,x_lo,x_hi,mean,std,instances\n";
    for (const auto& [key, accum] : acc) {
      const auto& [group, bin] = key;
      const double mean =
          std::accumulate(accum.values.begin(), accum.values.end(), 0.0) / accum.values.size();
      double var = 0.0;
      for (const double v : accum.values) var += (v - mean) * (v - mean);
      var /= accum.values.size();
      out << group.n << ',' << group.p << ',' << bin << ',' << fmt_g17(-1.0 + bin / 7.0) << ','
          << fmt_g17(-1.0 + (bin + 1) / 7.0) << ',' << fmt_g17(mean) << ','
          << fmt_g17(std::sqrt(var)) << ',' << accum.values.size() << '\n';
    }
    written.push_back(path);
  };
  if (!cost_acc.empty()) {
    write_binned_fig(cost_acc, "fig2.csv");
    write_binned_fig(cost_acc, "fig12.csv");
  }
  if (!basis_acc.empty()) write_binned_fig(basis_acc, "fig4.csv");

  // fig5: exact vs best-fit model distributions for the median- and
  // worst-TVD instances at the smallest and largest p of the largest n.
  int n_max = 0, p_min = 0, p_max = 0;
  for (const auto& rec : records) {
    if (is_missing(rec.tvd) || !rec.error.empty()) continue;
    n_max = std::max(n_max, rec.n);
  }
  bool have_p = false;
  for (const auto& rec : records) {
    if (rec.n != n_max || is_missing(rec.tvd) || !rec.error.empty()) continue;
    if (!have_p) {
      p_min = p_max = rec.p;
      have_p = true;
    }
    p_min = std::min(p_min, rec.p);
    p_max = std::max(p_max, rec.p);
  }
  if (have_p) {
    const std::string path = out_dir + "/fig5.csv";
    auto out = open_out(path);
    out << "case,label,n,p,tvd,fitted_t,C,rho,exact_prob,model_prob\n";
    const std::pair<int, bool> cases[4] = {
        {p_min, false}, {p_min, true}, {p_max, false}, {p_max, true}};
    for (const auto& [p, worst] : cases) {
      const InstanceRecord* rec = pick_by_tvd(records, n_max, p, worst);
      if (rec == nullptr) continue;
      const RecordDistribution* rd = find_dist(artifacts, rec->label, rec->p);
      if (rd == nullptr) continue;
      const CostSpectrum spec = rd->spectrum();
      const Temperature t = std::isinf(rec->fitted_t) ? Temperature::inf()
                                                      : Temperature::finite(rec->fitted_t);
      const CostDistribution model = model_cost_distribution(spec, t);
      for (std::size_t i = 0; i < rd->support.size(); ++i) {
        out << (worst ? "worst" : "median") << ',' << rec->label << ',' << rec->n << ',' << rec->p
            << ',' << fmt_g17(rec->tvd) << ',' << fmt_g17(rec->fitted_t) << ','
            << rd->support[i] << ',' << rd->rho[i] << ',' << fmt_g17(rd->exact_mass[i]) << ','
            << fmt_g17(model.mass[i]) << '\n';
      }
    }
    written.push_back(path);
  }

  // fig9: cumulative distributions across p for the median-TVD instance at
  // the smallest p, exact vs the T_e model.
  if (have_p) {
    const InstanceRecord* anchor = pick_by_tvd(records, n_max, p_min, false);
    if (anchor != nullptr) {
      const std::string path = out_dir + "/fig9.csv";
      auto out = open_out(path);
      out << "label,n,p,C,exact_cdf,model_te_cdf\n";
      for (const auto& rd : artifacts.dists) {
        if (rd.label != anchor->label) continue;
        const CostSpectrum spec = rd.spectrum();
        const CostDistribution exact = rd.exact();
        CostDistribution model;
        if (!is_missing(rd.t_e)) {
          model = model_cost_distribution(spec, Temperature::finite(rd.t_e));
        }
        double exact_cum = 0.0, model_cum = 0.0;
        for (std::size_t i = 0; i < rd.support.size(); ++i) {
          exact_cum += exact.mass[i];
          if (!model.mass.empty()) model_cum += model.mass[i];
          out << rd.label << ',' << rd.n << ',' << rd.p << ',' << rd.support[i] << ','
              << fmt_g17(exact_cum) << ','
              << (model.mass.empty() ? std::string{} : fmt_g17(model_cum)) << '\n';
        }
      }
      written.push_back(path);
    }
  }

  return written;
}

std::string write_fig11(const ScalingFitAB& fit, const std::string& out_dir) {
  ensure_directory(out_dir);
  const std::string path = out_dir + "/fig11.csv";
  auto out = open_out(path);
  out << "target_pr_cmin,n,p_estimate\n";
  const double targets[] = {0.5, 0.1, 0.01};
  const double ns[] = {10, 20, 50, 100, 200, 500, 1000, 2000, 5000, 10000};
  for (const double target : targets) {
    if (target >= fit.a) continue;
    for (const double n : ns) {
      out << fmt_g17(target) << ',' << fmt_g17(n) << ','
          << fmt_g17(layers_for_target(n, target, fit)) << '\n';
    }
  }
  return path;
}

}  // namespace qbl
