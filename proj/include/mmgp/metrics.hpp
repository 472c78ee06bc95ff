#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mmgp {

/// One row per generation (generation 0 is the random population).
struct GenerationStats {
  std::size_t generation = 0;
  double mean_tree_size = 0.0;
  std::size_t max_tree_size = 0;
  std::size_t pool_used_peak = 0;  // within this generation
  std::size_t pool_max_used = 0;   // across the run so far
  std::size_t allocated_slots = 0;
  double best_fitness = 0.0;
  double mean_fitness = 0.0;
  std::uint64_t total_opcodes_evaluated = 0;
  double generation_wall_time = 0.0;     // seconds
  std::vector<double> worker_busy_time;  // seconds, one per worker
  double idle_fraction = 0.0;

  /// Workers' average occupancy expressed as cores.
  double effective_cores() const;

  friend bool operator==(const GenerationStats&, const GenerationStats&) = default;
};

/// Raw per-generation measurements taken by an engine.
struct GenerationSample {
  std::size_t generation = 0;
  std::span<const std::size_t> tree_sizes;
  std::span<const double> fitness;
  std::size_t pool_used_peak = 0;
  std::size_t pool_max_used = 0;
  std::size_t allocated_slots = 0;
  std::size_t num_cases = 0;
  double wall_time = 0.0;
  std::vector<double> worker_busy_time;
};

GenerationStats record_generation(const GenerationSample& sample);

/// 1 - sum(busy) / (n * max(busy)); 0 for a single worker or no work.
double idle_fraction(std::span<const double> busy);

/// Sets every wall-clock field to zero (for byte-stable output).
void zero_wall_clock(std::vector<GenerationStats>& series);

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string csv_header();
std::string csv_row(const GenerationStats& row);

/// Header plus one row per generation. Throws CsvError on an empty series
/// (nothing is created) or when the file cannot be written.
void emit_csv(std::span<const GenerationStats> series, const std::filesystem::path& path);

/// Inverse of emit_csv.
std::vector<GenerationStats> parse_csv(const std::filesystem::path& path);

}  // namespace mmgp
