#include "mmgp/cli.hpp"

#include <algorithm>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "mmgp/naive_engine.hpp"

namespace mmgp::cli {

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitRunFailure = 3;
constexpr int kExitIo = 1;

}  // namespace

std::optional<CliArgs> parse_args(const std::vector<std::string>& argv, std::ostream& out) {
  CliArgs args;
  auto& cfg = args.config;
  std::string engine = "pooled";
  std::string problem = "quartic";
  std::string csv;

  CLI::App app{"Memory-bounded generational genetic programming", "mmgp"};
  app.add_option("--popsize,-M", cfg.popsize, "Population size")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--threads,-t", cfg.nthreads, "Breeding threads (0 = inline)")
      ->check(CLI::Range(std::size_t{0}, std::size_t{1024}))
      ->capture_default_str();
  app.add_option("--generations,-g", cfg.generations, "Generations including the random one")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--seed,-s", cfg.seed, "Master random seed")->capture_default_str();
  app.add_option("--buffer-bytes", cfg.buffer_bytes, "Fixed genome buffer length")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--tournament-size", cfg.tournament_size, "Tournament size")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--max-depth", cfg.max_initial_depth, "Depth limit of the random population")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--engine", engine, "pooled or naive")
      ->check(CLI::IsMember({"pooled", "naive"}))
      ->capture_default_str();
  app.add_option("--problem", problem, "Benchmark problem")->check(CLI::IsMember({"quartic"}))->capture_default_str();
  app.add_option("--csv", csv, "Write per-generation statistics to this file");
  app.add_flag("--quiet,-q", args.quiet, "Only print the summary line");
  app.add_flag("--zero-time", args.zero_time, "Zero wall-clock fields in the statistics");

  std::vector<std::string> rev(argv.rbegin(), argv.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  args.engine = engine == "naive" ? EngineKind::kNaive : EngineKind::kPooled;
  cfg.problem = parse_problem(problem);
  if (!csv.empty()) args.csv_path = csv;
  if (args.engine == EngineKind::kNaive && app.count("--threads") > 0)
    args.warnings.push_back("the naive engine is single-threaded; --threads " + std::to_string(cfg.nthreads) +
                            " ignored");
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return args;
}

std::string summary_line(const CliArgs& args, const RunResult& result) {
  const auto& cfg = args.config;
  const auto& last = result.stats.back();
  double cores = 0.0;
  for (const auto& row : result.stats) cores += row.effective_cores();
  cores /= static_cast<double>(result.stats.size());
  return fmt::format(
      "engine={} popsize={} threads={} generations={} seed={} capacity={} bound={} peak_buffers={} "
      "best_fitness={} mean_tree_size={} effective_cores={:.3f}",
      args.engine == EngineKind::kNaive ? "naive" : "pooled", cfg.popsize, cfg.nthreads, cfg.generations,
      cfg.seed, result.pool_capacity, pool_capacity(cfg.popsize, cfg.nthreads), result.peak_buffers(),
      last.best_fitness, last.mean_tree_size, cores);
}

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  std::optional<CliArgs> parsed;
  try {
    parsed = parse_args(argv, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\nRun with --help for the list of flags.\n";
    return kExitUsage;
  }
  if (!parsed) return 0;
  const auto& args = *parsed;
  for (const auto& w : args.warnings) err << "warning: " << w << '\n';

  RunResult result;
  try {
    result = args.engine == EngineKind::kNaive ? run_evolution_naive(args.config) : run_evolution(args.config);
  } catch (const std::exception& e) {
    err << "fatal: " << e.what() << '\n';
    return kExitRunFailure;
  }
  if (args.zero_time) zero_wall_clock(result.stats);

  if (!args.quiet) {
    for (const auto& row : result.stats)
      out << fmt::format("gen {:>5}  best {:<12.6g} mean_size {:<10.2f} max_size {:<6} peak {:<6} max_used {}\n",
                         row.generation, row.best_fitness, row.mean_tree_size, row.max_tree_size,
                         row.pool_used_peak, row.pool_max_used);
  }

  int code = 0;
  if (args.csv_path) {
    try {
      emit_csv(result.stats, *args.csv_path);
    } catch (const CsvError& e) {
      err << "error: " << e.what() << '\n';
      code = kExitIo;
    }
  }
  out << summary_line(args, result) << '\n';
  return code;
}

}  // namespace mmgp::cli
