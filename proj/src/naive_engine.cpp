#include "mmgp/naive_engine.hpp"

#include <chrono>

namespace mmgp {

namespace {

using Clock = std::chrono::steady_clock;
using Genome = std::vector<std::uint8_t>;

struct Member {
  Genome buffer;
  std::size_t tree_len = 0;
  double fitness = 0.0;

  std::span<const std::uint8_t> tree() const { return std::span(buffer).first(tree_len); }
};

}  // namespace

RunResult run_evolution_naive(const RunConfig& config, const Problem& problem) {
  config.validate();
  const std::size_t m = config.popsize;
  Rng master(config.seed);
  RunResult result;
  result.pool_capacity = 2 * m;

  auto record = [&](std::size_t g, const std::vector<Member>& pop, std::size_t live, double wall) {
    std::vector<std::size_t> sizes;
    std::vector<double> fitness;
    for (const auto& ind : pop) {
      sizes.push_back(ind.tree_len);
      fitness.push_back(ind.fitness);
    }
    const std::size_t max_used = result.stats.empty() ? live : std::max(live, result.stats.back().pool_max_used);
    result.stats.push_back(record_generation({.generation = g,
                                              .tree_sizes = sizes,
                                              .fitness = fitness,
                                              .pool_used_peak = live,
                                              .pool_max_used = max_used,
                                              .allocated_slots = max_used,
                                              .num_cases = problem.num_cases(),
                                              .wall_time = wall,
                                              .worker_busy_time = {wall}}));
    result.fitness_history.push_back(std::move(fitness));
  };

  auto t0 = Clock::now();
  std::vector<Member> pop(m);
  for (std::size_t i = 0; i < m; ++i) {
    pop[i].buffer.assign(config.buffer_bytes, 0);
    pop[i].tree_len = random_tree(master, initial_depth(config, i), pop[i].buffer);
  }
  for (auto& ind : pop) ind.fitness = problem.fitness(ind.tree());
  record(0, pop, m, std::chrono::duration<double>(Clock::now() - t0).count());

  for (std::size_t g = 1; g < config.generations; ++g) {
    t0 = Clock::now();
    std::vector<double> fitness;
    for (const auto& ind : pop) fitness.push_back(ind.fitness);
    const auto outcome = select_parents(master, fitness, config.tournament_size);

    std::vector<Member> next(m);
    for (std::size_t s = 0; s < m; ++s) {
      auto& child = next[s];
      child.buffer.assign(config.buffer_bytes, 0);
      auto rng = child_stream(config.seed, g, s);
      child.tree_len = subtree_crossover(pop[static_cast<std::size_t>(outcome[s].mum)].tree(),
                                         pop[static_cast<std::size_t>(outcome[s].dad)].tree(), child.buffer, rng);
      child.fitness = problem.fitness(child.tree());
    }
    pop = std::move(next);
    record(g, pop, 2 * m, std::chrono::duration<double>(Clock::now() - t0).count());
  }

  for (const auto& ind : pop) {
    result.genomes.emplace_back(ind.tree().begin(), ind.tree().end());
    Individual out;
    out.tree_len = ind.tree_len;
    out.fitness = ind.fitness;
    result.population.push_back(out);
  }
  return result;
}

RunResult run_evolution_naive(const RunConfig& config) {
  config.validate();
  return run_evolution_naive(config, Problem::make(config.problem));
}

}  // namespace mmgp
