#pragma once

// Generational GP engine whose breeding phase keeps at most
// popsize + 2*max(1, nthreads) genome buffers alive.
//
// Each generation the master thread draws all parents by tournament, builds
// the breeding plan and frees every parent that has no children. Workers
// then repeatedly claim a child (class 1 before class 2+), run crossover
// outside the lock, detach the child from both parents (freeing a parent
// once its last child exists) and evaluate the child outside the lock.
//
// Every child draws its crossover points from its own stream seeded by
// (seed, generation, child), so results do not depend on how work is spread
// over threads.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "mmgp/breeding_plan.hpp"
#include "mmgp/expr_pool.hpp"
#include "mmgp/genome.hpp"
#include "mmgp/metrics.hpp"

namespace mmgp {

struct RunConfig {
  std::size_t popsize = 500;
  std::size_t nthreads = 8;  // 0: breed inline on the calling thread
  std::size_t generations = 50;  // including the random generation 0
  std::size_t buffer_bytes = 512;
  std::size_t tournament_size = 7;
  std::uint64_t seed = 1;
  ProblemId problem = ProblemId::kQuartic;
  std::size_t max_initial_depth = 6;

  /// Throws std::invalid_argument describing the first bad field.
  void validate() const;
};

/// Bookkeeping for one population member; the genome itself lives in a pool
/// buffer.
struct Individual {
  SlotId slot_id = kNoSlot;
  std::size_t tree_len = 0;
  double fitness = std::numeric_limits<double>::infinity();
  ParentId mum_id = kEmpty;
  ParentId dad_id = kEmpty;
  std::int32_t num_children = 0;

  friend bool operator==(const Individual&, const Individual&) = default;
};

struct RunResult {
  std::vector<Individual> population;
  std::vector<std::vector<std::uint8_t>> genomes;    // final population, tree_len bytes each
  std::vector<std::vector<double>> fitness_history;  // every member, every generation
  std::vector<GenerationStats> stats;
  std::size_t pool_capacity = 0;

  /// Largest pool_max_used over the run.
  std::size_t peak_buffers() const;
};

/// Depth limit for member `index` of generation 0: ramps 2..max_initial_depth
/// across the population (1 when max_initial_depth is 1).
std::size_t initial_depth(const RunConfig& config, std::size_t index);

/// Mum then dad for each child in order: 2*popsize tournaments from `rng`.
std::vector<ParentPair> select_parents(Rng& rng, std::span<const double> fitness,
                                       std::size_t tournament_size);

// Breeding bookkeeping. Every function here must be called with the engine
// mutex held; they are free functions so the interleaving tests can drive
// them step by step.
namespace breeding {

/// Master phase: records parents on the children, counts each parent's
/// children, builds the plan and releases the buffers of infertile parents.
BreedingPlan prepare(ExprPool& pool, std::span<Individual> parents, std::span<Individual> children,
                     std::span<const ParentPair> outcome);

/// Claims the next child and gives it a buffer. nullopt when no work is left.
std::optional<ChildId> start_child(ExprPool& pool, BreedingPlan& plan, std::span<Individual> children);

/// Detaches created child `id` from its parents, promotes a parent's last
/// child to class 1 and frees parents with no children left.
void finish_child(ExprPool& pool, BreedingPlan& plan, std::span<Individual> parents,
                  std::span<const Individual> children, ChildId id);

}  // namespace breeding

RunResult run_evolution(const RunConfig& config, const Problem& problem);
RunResult run_evolution(const RunConfig& config);

}  // namespace mmgp
