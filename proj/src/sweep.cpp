#include "heraldsim/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace heraldsim {

SweepTable::SweepTable(std::string parameter_name, std::vector<double> parameter_values)
    : parameter_name_(std::move(parameter_name)),
      parameter_values_(std::move(parameter_values)) {
  if (parameter_name_.empty())
    throw std::invalid_argument("sweep: parameter name is empty");
  if (parameter_values_.empty())
    throw std::invalid_argument("sweep: parameter grid is empty");
}

void SweepTable::add_column(const std::string& name, std::vector<double> values) {
  if (name.empty()) throw std::invalid_argument("sweep: column name is empty");
  if (values.size() != parameter_values_.size())
    throw std::invalid_argument("sweep: column '" + name + "' has " +
                                std::to_string(values.size()) + " rows, grid has " +
                                std::to_string(parameter_values_.size()));
  if (std::find(column_names_.begin(), column_names_.end(), name) != column_names_.end())
    throw std::invalid_argument("sweep: duplicate column '" + name + "'");
  column_names_.push_back(name);
  columns_.push_back(std::move(values));
}

const std::vector<double>& SweepTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < column_names_.size(); ++i)
    if (column_names_[i] == name) return columns_[i];
  throw std::invalid_argument("sweep: no column named '" + name + "'");
}

std::string format_cell(double value) {
  if (std::isnan(value)) return "nan";
  char buffer[40];
  const auto out = std::to_chars(buffer, buffer + sizeof(buffer), value,
                                 std::chars_format::general, 12);
  return std::string(buffer, out.ptr);
}

std::string to_csv(const SweepTable& table) {
  std::string text = table.parameter_name();
  for (const auto& name : table.column_names()) {
    text += ',';
    text += name;
  }
  text += '\n';
  for (std::int64_t row = 0; row < table.rows(); ++row) {
    text += format_cell(table.parameter_values()[row]);
    for (const auto& name : table.column_names()) {
      text += ',';
      text += format_cell(table.column(name)[row]);
    }
    text += '\n';
  }
  return text;
}

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm parts{};
  gmtime_r(&now, &parts);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &parts);
  return buffer;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("sweep: cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("sweep: write to '" + path + "' failed");
}

} // namespace

void write_table(const SweepTable& table, const std::string& csv_path,
                 const std::string& manifest_path) {
  write_text(csv_path, to_csv(table));
  if (manifest_path.empty()) return;
  nlohmann::json manifest = table.manifest;
  manifest["generated_at"] = utc_timestamp();
  write_text(manifest_path, manifest.dump(2) + "\n");
}

std::string render_svg(const SweepTable& table) {
  constexpr double width = 720.0, height = 440.0, margin = 56.0;
  const double plot_w = width - 2 * margin, plot_h = height - 2 * margin;

  double x_lo = table.parameter_values().front(), x_hi = x_lo;
  for (double x : table.parameter_values()) {
    x_lo = std::min(x_lo, x);
    x_hi = std::max(x_hi, x);
  }
  double y_lo = 0.0, y_hi = 0.0;
  bool seeded = false;
  for (const auto& name : table.column_names())
    for (double y : table.column(name)) {
      if (std::isnan(y)) continue;
      if (!seeded) { y_lo = y_hi = y; seeded = true; }
      y_lo = std::min(y_lo, y);
      y_hi = std::max(y_hi, y);
    }
  if (x_hi <= x_lo) x_hi = x_lo + 1.0;
  if (!seeded) { y_lo = 0.0; y_hi = 1.0; }
  if (y_hi <= y_lo) y_hi = y_lo + 1.0;

  const auto x_of = [&](double x) { return margin + plot_w * (x - x_lo) / (x_hi - x_lo); };
  const auto y_of = [&](double y) { return height - margin - plot_h * (y - y_lo) / (y_hi - y_lo); };
  static const char* palette[] = {"#1b6ca8", "#c0392b", "#1e8449", "#8e44ad",
                                  "#b7950b", "#2c3e50", "#ca6f1e", "#117a65"};

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                    format_cell(width) + "\" height=\"" + format_cell(height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<line x1=\"" + format_cell(margin) + "\" y1=\"" + format_cell(height - margin) +
         "\" x2=\"" + format_cell(width - margin) + "\" y2=\"" + format_cell(height - margin) +
         "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + format_cell(margin) + "\" y1=\"" + format_cell(margin) +
         "\" x2=\"" + format_cell(margin) + "\" y2=\"" + format_cell(height - margin) +
         "\" stroke=\"black\"/>\n";
  svg += "<text x=\"" + format_cell(width / 2) + "\" y=\"" + format_cell(height - margin / 4) +
         "\" text-anchor=\"middle\" font-size=\"13\">" + table.parameter_name() + "</text>\n";

  int series = 0;
  for (const auto& name : table.column_names()) {
    const char* color = palette[series % 8];
    std::string points;
    for (std::int64_t row = 0; row < table.rows(); ++row) {
      const double y = table.column(name)[row];
      if (std::isnan(y)) continue;
      points += format_cell(x_of(table.parameter_values()[row])) + "," +
                format_cell(y_of(y)) + " ";
    }
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
           "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
    svg += "<text x=\"" + format_cell(width - margin + 4) + "\" y=\"" +
           format_cell(margin + 16.0 * series) + "\" font-size=\"11\" fill=\"" + color +
           "\" text-anchor=\"end\">" + name + "</text>\n";
    ++series;
  }
  svg += "</svg>\n";
  return svg;
}

namespace {

int worker_count() {
  if (const char* env = std::getenv("HERALDSIM_WORKERS")) {
    const int requested = std::atoi(env);
    if (requested >= 1) return requested;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(std::min<unsigned>(hw == 0 ? 1 : hw, 8));
}

} // namespace

void parallel_for_index(std::int64_t count,
                        const std::function<void(std::int64_t)>& body) {
  if (count <= 0) return;
  const int workers = static_cast<int>(std::min<std::int64_t>(worker_count(), count));
  if (workers <= 1) {
    for (std::int64_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    for (;;) {
      const std::int64_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(run);
  for (auto& thread : pool) thread.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<double> linspace(double lo, double hi, int points) {
  if (points < 1) throw std::invalid_argument("sweep: grid needs at least one point");
  std::vector<double> grid(points);
  if (points == 1) {
    grid[0] = lo;
    return grid;
  }
  for (int i = 0; i < points; ++i)
    grid[i] = lo + (hi - lo) * static_cast<double>(i) / (points - 1);
  return grid;
}

std::vector<double> logspace(double lo, double hi, int points) {
  if (!(lo > 0.0) || !(hi > 0.0))
    throw std::invalid_argument("sweep: geometric grid needs positive endpoints");
  auto grid = linspace(std::log(lo), std::log(hi), points);
  for (double& x : grid) x = std::exp(x);
  return grid;
}

} // namespace heraldsim
