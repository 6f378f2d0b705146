#include "qbl/records.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "qbl/error.hpp"
#include "qbl/io.hpp"

namespace qbl {

namespace {

std::string alpha_tag(double alpha) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%g", alpha);
  return buffer;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_opt(const std::string& cell) {
  if (cell.empty()) return kMissing;
  if (cell == "inf") return std::numeric_limits<double>::infinity();
  return std::stod(cell);
}

std::string fmt_field(double value) {
  if (std::isinf(value)) return "inf";
  return fmt_opt(value);
}

}  // namespace

void write_records_csv(const std::vector<InstanceRecord>& records, std::span<const double> alphas,
                       const std::string& path) {
  std::ofstream out(path);
  require(out.good(), ErrorKind::Io, "cannot open " + path + " for writing");

  out << "label,n,p,edges,c_min,c_max,avg_degree,mean_cost,r,pr_cmin";
  for (const double alpha : alphas) out << ",cdf_" << alpha_tag(alpha);
  out << ",fitted_t,t_e,tvd,s_qaoa,s_boltzmann,s_fluc,s_random,s_random_std"
      << ",r_exp,pr_cmin_exp";
  for (const double alpha : alphas) out << ",cdf_exp_" << alpha_tag(alpha);
  out << ",report,error\n";

  for (const auto& rec : records) {
    out << rec.label << ',' << rec.n << ',' << rec.p << ',' << rec.edge_count << ',' << rec.c_min
        << ',' << rec.c_max << ',' << fmt_field(rec.avg_degree) << ',' << fmt_field(rec.mean_cost)
        << ',' << fmt_field(rec.r) << ',' << fmt_field(rec.pr_cmin);
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      out << ',' << (i < rec.cdf.size() ? fmt_field(rec.cdf[i]) : std::string{});
    }
    out << ',' << fmt_field(rec.fitted_t) << ',' << fmt_field(rec.t_e) << ','
        << fmt_field(rec.tvd) << ',' << fmt_field(rec.s_qaoa) << ',' << fmt_field(rec.s_boltzmann)
        << ',' << fmt_field(rec.s_fluc) << ',' << fmt_field(rec.s_random) << ','
        << fmt_field(rec.s_random_std) << ',' << fmt_field(rec.r_exp) << ','
        << fmt_field(rec.pr_cmin_exp);
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      out << ',' << (i < rec.cdf_exp.size() ? fmt_field(rec.cdf_exp[i]) : std::string{});
    }
    out << ',' << rec.report_ref << ',' << rec.error << '\n';
  }
  require(out.good(), ErrorKind::Io, "failed writing " + path);
}

RecordsFile read_records_csv(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::Io, "cannot open " + path);

  std::string header;
  require(static_cast<bool>(std::getline(in, header)), ErrorKind::Parse,
          path + ": missing header row");
  const std::vector<std::string> columns = split_csv_line(header);

  RecordsFile file;
  std::size_t cdf_begin = columns.size(), cdf_count = 0;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].rfind("cdf_exp_", 0) == 0) continue;
    if (columns[i].rfind("cdf_", 0) == 0) {
      if (cdf_count == 0) cdf_begin = i;
      ++cdf_count;
      file.alphas.push_back(std::stod(columns[i].substr(4)));
    }
  }

  auto column_index = [&](const std::string& name) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (columns[i] == name) return i;
    }
    fail(ErrorKind::Parse, path + ": missing column " + name);
  };

  const std::size_t idx_label = column_index("label");
  const std::size_t idx_n = column_index("n");
  const std::size_t idx_p = column_index("p");
  const std::size_t idx_edges = column_index("edges");
  const std::size_t idx_cmin = column_index("c_min");
  const std::size_t idx_cmax = column_index("c_max");
  const std::size_t idx_avg = column_index("avg_degree");
  const std::size_t idx_mean = column_index("mean_cost");
  const std::size_t idx_r = column_index("r");
  const std::size_t idx_pcm = column_index("pr_cmin");
  const std::size_t idx_ft = column_index("fitted_t");
  const std::size_t idx_te = column_index("t_e");
  const std::size_t idx_tvd = column_index("tvd");
  const std::size_t idx_sq = column_index("s_qaoa");
  const std::size_t idx_sb = column_index("s_boltzmann");
  const std::size_t idx_sf = column_index("s_fluc");
  const std::size_t idx_sr = column_index("s_random");
  const std::size_t idx_srs = column_index("s_random_std");
  const std::size_t idx_rexp = column_index("r_exp");
  const std::size_t idx_pexp = column_index("pr_cmin_exp");
  const std::size_t idx_report = column_index("report");
  const std::size_t idx_error = column_index("error");

  std::size_t cdf_exp_begin = columns.size();
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].rfind("cdf_exp_", 0) == 0) {
      cdf_exp_begin = i;
      break;
    }
  }

  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    require(cells.size() >= columns.size(), ErrorKind::Parse,
            path + ": row " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                " cells, expected " + std::to_string(columns.size()));
    try {
      InstanceRecord rec;
      rec.label = cells[idx_label];
      rec.n = std::stoi(cells[idx_n]);
      rec.p = std::stoi(cells[idx_p]);
      rec.edge_count = std::stoi(cells[idx_edges]);
      rec.c_min = std::stol(cells[idx_cmin]);
      rec.c_max = std::stol(cells[idx_cmax]);
      rec.avg_degree = parse_opt(cells[idx_avg]);
      rec.mean_cost = parse_opt(cells[idx_mean]);
      rec.r = parse_opt(cells[idx_r]);
      rec.pr_cmin = parse_opt(cells[idx_pcm]);
      for (std::size_t k = 0; k < cdf_count; ++k) rec.cdf.push_back(parse_opt(cells[cdf_begin + k]));
      rec.fitted_t = parse_opt(cells[idx_ft]);
      rec.t_e = parse_opt(cells[idx_te]);
      rec.tvd = parse_opt(cells[idx_tvd]);
      rec.s_qaoa = parse_opt(cells[idx_sq]);
      rec.s_boltzmann = parse_opt(cells[idx_sb]);
      rec.s_fluc = parse_opt(cells[idx_sf]);
      rec.s_random = parse_opt(cells[idx_sr]);
      rec.s_random_std = parse_opt(cells[idx_srs]);
      rec.r_exp = parse_opt(cells[idx_rexp]);
      rec.pr_cmin_exp = parse_opt(cells[idx_pexp]);
      for (std::size_t k = 0; k < cdf_count; ++k) {
        rec.cdf_exp.push_back(parse_opt(cells[cdf_exp_begin + k]));
      }
      rec.report_ref = cells[idx_report];
      rec.error = cells[idx_error];
      file.records.push_back(std::move(rec));
    } catch (const std::exception& e) {
      fail(ErrorKind::Parse, path + ": row " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return file;
}

void write_records_sidecar(const EnsembleConfig& config, std::size_t record_count,
                           const std::string& csv_path, const std::string& path) {
  nlohmann::ordered_json sizes = nlohmann::ordered_json::array();
  for (const auto& size : config.sizes) sizes.push_back({{"n", size.n}, {"count", size.count}});

  nlohmann::ordered_json doc;
  doc["records_csv"] = csv_path;
  doc["record_count"] = record_count;
  doc["config"] = {
      {"sizes", sizes},
      {"layers", config.layers},
      {"edge_prob", config.edge_prob},
      {"master_seed", config.master_seed},
      {"alphas", config.alphas},
      {"predict_only", config.predict_only},
      {"fit_temperature", config.fit_temperature},
      {"thermo", config.thermo},
      {"random_draws", config.random_draws},
      {"law_c", config.law_c},
      {"law_d", config.law_d},
  };

  std::ofstream out(path);
  require(out.good(), ErrorKind::Io, "cannot open " + path + " for writing");
  out << doc.dump(2) << '\n';
  require(out.good(), ErrorKind::Io, "failed writing " + path);
}

}  // namespace qbl
