#pragma once

// Sweep output: fixed-schema CSV plus a JSON metadata sidecar.

#include <iosfwd>
#include <string>
#include <vector>

#include "copo/explore.hpp"

namespace copo {

const std::vector<std::string>& csv_columns();

/// Encodes flags and the error message for the `error` column.
std::string error_cell(const SweepRow& row);

void write_csv(std::ostream& os, const SweepResult& r, int precision = 9);
void write_csv_file(const std::string& path, const SweepResult& r, int precision = 9);

std::string format_number(double v, int precision);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Throws std::out_of_range for a missing column.
  std::size_t column(const std::string& name) const;
  double number(std::size_t row, const std::string& name) const;
};

/// Throws std::runtime_error on ragged rows.
CsvTable read_csv(std::istream& is);
CsvTable read_csv_file(const std::string& path);

/// Spec echo, version, calibration, optimiser order and timestamp.
std::string metadata_json(const SweepResult& r);
/// path + ".json"
void write_metadata_file(const std::string& csv_path, const SweepResult& r);

} // namespace copo
