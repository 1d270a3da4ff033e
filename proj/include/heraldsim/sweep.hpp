#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "heraldsim/types.hpp"

namespace heraldsim {

// One parameter sweep: a named grid plus equally long named data columns and
// a manifest holding everything needed to reproduce the run.
class SweepTable {
public:
  SweepTable(std::string parameter_name, std::vector<double> parameter_values);

  const std::string& parameter_name() const { return parameter_name_; }
  const std::vector<double>& parameter_values() const { return parameter_values_; }
  std::int64_t rows() const { return static_cast<std::int64_t>(parameter_values_.size()); }

  // errors: std::invalid_argument on a length mismatch or duplicate name
  void add_column(const std::string& name, std::vector<double> values);
  const std::vector<std::string>& column_names() const { return column_names_; }
  // errors: std::invalid_argument when no column has that name
  const std::vector<double>& column(const std::string& name) const;

  nlohmann::json manifest;

private:
  std::string parameter_name_;
  std::vector<double> parameter_values_;
  std::vector<std::string> column_names_;
  std::vector<std::vector<double>> columns_;
};

// locale-independent shortest-round-trip style formatting at 12 significant
// digits; not-a-number renders as "nan"
std::string format_cell(double value);

// header row `parameter,column,...` then one row per grid point, '\n' endings
std::string to_csv(const SweepTable& table);

// writes the CSV and (unless manifest_path is empty) the manifest JSON with a
// `generated_at` stamp added; errors: std::runtime_error when a file cannot
// be opened
void write_table(const SweepTable& table, const std::string& csv_path,
                 const std::string& manifest_path);

// minimal self-contained line plot of every column against the parameter
std::string render_svg(const SweepTable& table);

// Runs body(0..count-1), splitting the indices over HERALDSIM_WORKERS threads
// (unset: hardware concurrency, at most 8).  Each index must write only its
// own output slot, which makes parallel and serial runs bit-identical.
void parallel_for_index(std::int64_t count,
                        const std::function<void(std::int64_t)>& body);

std::vector<double> linspace(double lo, double hi, int points);
// geometric spacing; errors: std::invalid_argument unless 0 < lo, hi
std::vector<double> logspace(double lo, double hi, int points);

} // namespace heraldsim
