#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qbl/ensemble.hpp"

namespace qbl {

// Records CSV: one row per (instance, p), missing fields empty, numeric
// fields in 17-significant-digit round-trip form.
void write_records_csv(const std::vector<InstanceRecord>& records, std::span<const double> alphas,
                       const std::string& path);

struct RecordsFile {
  std::vector<InstanceRecord> records;
  std::vector<double> alphas;
};

RecordsFile read_records_csv(const std::string& path);

// JSON sidecar: config echo plus run bookkeeping.
void write_records_sidecar(const EnsembleConfig& config, std::size_t record_count,
                           const std::string& csv_path, const std::string& path);

}  // namespace qbl
