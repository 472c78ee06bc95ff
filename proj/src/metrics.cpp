#include "mmgp/metrics.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace mmgp {

namespace {

constexpr const char* kColumns[] = {
    "generation",      "mean_tree_size", "max_tree_size",           "pool_used_peak",
    "pool_max_used",   "allocated_slots", "best_fitness",           "mean_fitness",
    "total_opcodes_evaluated", "generation_wall_time", "worker_busy_time", "idle_fraction",
};
constexpr std::size_t kNumColumns = std::size(kColumns);

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw CsvError("bad number '" + s + "'");
  return v;
}

std::uint64_t to_count(const std::string& s) {
  std::size_t used = 0;
  const auto v = std::stoull(s, &used);
  if (used != s.size()) throw CsvError("bad count '" + s + "'");
  return v;
}

}  // namespace

double GenerationStats::effective_cores() const {
  return static_cast<double>(worker_busy_time.size()) * (1.0 - idle_fraction);
}

double idle_fraction(std::span<const double> busy) {
  if (busy.size() <= 1) return 0.0;
  const double longest = *std::max_element(busy.begin(), busy.end());
  if (longest <= 0.0) return 0.0;
  const double total = std::accumulate(busy.begin(), busy.end(), 0.0);
  return std::clamp(1.0 - total / (static_cast<double>(busy.size()) * longest), 0.0, 1.0);
}

GenerationStats record_generation(const GenerationSample& s) {
  GenerationStats row;
  row.generation = s.generation;
  if (!s.tree_sizes.empty()) {
    const auto total = std::accumulate(s.tree_sizes.begin(), s.tree_sizes.end(), std::uint64_t{0});
    row.mean_tree_size = static_cast<double>(total) / static_cast<double>(s.tree_sizes.size());
    row.max_tree_size = *std::max_element(s.tree_sizes.begin(), s.tree_sizes.end());
    row.total_opcodes_evaluated = total * s.num_cases;
  }
  if (!s.fitness.empty()) {
    row.best_fitness = *std::min_element(s.fitness.begin(), s.fitness.end());
    row.mean_fitness = std::accumulate(s.fitness.begin(), s.fitness.end(), 0.0) /
                       static_cast<double>(s.fitness.size());
  }
  row.pool_used_peak = s.pool_used_peak;
  row.pool_max_used = s.pool_max_used;
  row.allocated_slots = s.allocated_slots;
  row.generation_wall_time = s.wall_time;
  row.worker_busy_time = s.worker_busy_time;
  row.idle_fraction = idle_fraction(row.worker_busy_time);
  return row;
}

void zero_wall_clock(std::vector<GenerationStats>& series) {
  for (auto& row : series) {
    row.generation_wall_time = 0.0;
    std::fill(row.worker_busy_time.begin(), row.worker_busy_time.end(), 0.0);
    row.idle_fraction = 0.0;
  }
}

std::string csv_header() { return fmt::format("{}", fmt::join(kColumns, ",")); }

std::string csv_row(const GenerationStats& r) {
  // Busy times share one column, separated by ';'.
  return fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}", r.generation, r.mean_tree_size,
                     r.max_tree_size, r.pool_used_peak, r.pool_max_used, r.allocated_slots,
                     r.best_fitness, r.mean_fitness, r.total_opcodes_evaluated,
                     r.generation_wall_time, fmt::join(r.worker_busy_time, ";"), r.idle_fraction);
}

void emit_csv(std::span<const GenerationStats> series, const std::filesystem::path& path) {
  if (series.empty()) throw CsvError("emit_csv: empty series");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CsvError("emit_csv: cannot open " + path.string());
  out << csv_header() << '\n';
  for (const auto& row : series) out << csv_row(row) << '\n';
  out.flush();
  if (!out) throw CsvError("emit_csv: write failed for " + path.string());
}

std::vector<GenerationStats> parse_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CsvError("parse_csv: cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != csv_header()) throw CsvError("parse_csv: missing or unexpected header");

  std::vector<GenerationStats> series;
  while (std::getline(in, line)) {
    const auto f = split(line, ',');
    if (f.size() != kNumColumns) throw CsvError("parse_csv: expected " + std::to_string(kNumColumns) + " fields");
    try {
      GenerationStats r;
      r.generation = to_count(f[0]);
      r.mean_tree_size = to_double(f[1]);
      r.max_tree_size = to_count(f[2]);
      r.pool_used_peak = to_count(f[3]);
      r.pool_max_used = to_count(f[4]);
      r.allocated_slots = to_count(f[5]);
      r.best_fitness = to_double(f[6]);
      r.mean_fitness = to_double(f[7]);
      r.total_opcodes_evaluated = to_count(f[8]);
      r.generation_wall_time = to_double(f[9]);
      if (!f[10].empty())
        for (const auto& t : split(f[10], ';')) r.worker_busy_time.push_back(to_double(t));
      r.idle_fraction = to_double(f[11]);
      series.push_back(std::move(r));
    } catch (const std::logic_error& e) {  // stod/stoull failures
      throw CsvError(std::string("parse_csv: ") + e.what());
    }
  }
  return series;
}

}  // namespace mmgp
