#include "mmgp/engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

namespace mmgp {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

constexpr std::size_t kMaxThreads = 1024;

class PooledEngine {
 public:
  PooledEngine(const RunConfig& config, const Problem& problem)
      : config_(config),
        problem_(problem),
        pool_(config.popsize, config.nthreads, config.buffer_bytes),
        master_rng_(config.seed) {}

  RunResult run() {
    create_initial_population();
    for (std::size_t g = 1; g < config_.generations; ++g) run_generation(g);

    RunResult result;
    result.pool_capacity = pool_.capacity();
    result.stats = std::move(stats_);
    result.fitness_history = std::move(fitness_history_);
    for (const auto& ind : pop_) {
      const auto genome = pool_.buffer(ind.slot_id).first(ind.tree_len);
      result.genomes.emplace_back(genome.begin(), genome.end());
    }
    result.population = std::move(pop_);
    return result;
  }

 private:
  std::size_t num_workers() const { return std::max<std::size_t>(1, config_.nthreads); }

  std::span<const std::uint8_t> genome(const Individual& ind) const {
    return pool_.buffer(ind.slot_id).first(ind.tree_len);
  }

  // Runs `body(worker)` on every worker (inline when nthreads == 0) and
  // returns each worker's busy time. The first exception thrown by any
  // worker is rethrown after all of them have stopped.
  template <typename Body>
  std::vector<double> fork_join(Body&& body) {
    std::vector<double> busy(num_workers(), 0.0);
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&](std::size_t id) {
      const auto t0 = Clock::now();
      try {
        body(id);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
      busy[id] = seconds_since(t0);
    };
    if (config_.nthreads == 0) {
      worker(0);
    } else {
      std::vector<std::jthread> threads;
      threads.reserve(num_workers());
      for (std::size_t id = 0; id < num_workers(); ++id) threads.emplace_back(worker, id);
    }
    if (failure) std::rethrow_exception(failure);
    return busy;
  }

  void create_initial_population() {
    const auto t0 = Clock::now();
    pool_.reset_window();
    pop_.assign(config_.popsize, Individual{});
    for (std::size_t i = 0; i < pop_.size(); ++i) {
      auto& ind = pop_[i];
      pool_.acquire(ind.slot_id);
      ind.tree_len = random_tree(master_rng_, initial_depth(config_, i), pool_.buffer(ind.slot_id));
    }
    std::atomic<std::size_t> next{0};
    auto busy = fork_join([&](std::size_t) {
      for (std::size_t i = next++; i < pop_.size(); i = next++) pop_[i].fitness = problem_.fitness(genome(pop_[i]));
    });
    record(0, std::move(busy), seconds_since(t0));
  }

  void run_generation(std::size_t g) {
    const auto t0 = Clock::now();
    std::vector<double> fitness(pop_.size());
    std::transform(pop_.begin(), pop_.end(), fitness.begin(), [](const Individual& i) { return i.fitness; });
    const auto outcome = select_parents(master_rng_, fitness, config_.tournament_size);

    std::vector<Individual> next_pop(config_.popsize);
    pool_.reset_window();
    plan_ = breeding::prepare(pool_, pop_, next_pop, outcome);

    auto busy = fork_join([&](std::size_t) { worker_loop(g, next_pop); });

    plan_.release_children_arrays();
    for (auto& parent : pop_) pool_.release(parent.slot_id);  // all freed already unless buggy
    pop_ = std::move(next_pop);
    record(g, std::move(busy), seconds_since(t0));
  }

  void worker_loop(std::size_t g, std::vector<Individual>& next_pop) {
    for (;;) {
      ChildId id;
      std::span<const std::uint8_t> mum;
      std::span<const std::uint8_t> dad;
      std::span<std::uint8_t> out;
      {
        std::lock_guard lock(mutex_);
        const auto claimed = breeding::start_child(pool_, plan_, next_pop);
        if (!claimed) return;
        id = *claimed;
        const auto& child = next_pop[static_cast<std::size_t>(id)];
        mum = genome(pop_[static_cast<std::size_t>(child.mum_id)]);
        dad = genome(pop_[static_cast<std::size_t>(child.dad_id)]);
        out = pool_.buffer(child.slot_id);
      }
      auto& child = next_pop[static_cast<std::size_t>(id)];
      auto rng = child_stream(config_.seed, g, static_cast<std::uint64_t>(id));
      child.tree_len = subtree_crossover(mum, dad, out, rng);
      {
        std::lock_guard lock(mutex_);
        breeding::finish_child(pool_, plan_, pop_, next_pop, id);
      }
      child.fitness = problem_.fitness(out.first(child.tree_len));
    }
  }

  void record(std::size_t g, std::vector<double> busy, double wall) {
    std::vector<std::size_t> sizes(pop_.size());
    std::vector<double> fitness(pop_.size());
    for (std::size_t i = 0; i < pop_.size(); ++i) {
      sizes[i] = pop_[i].tree_len;
      fitness[i] = pop_[i].fitness;
    }
    const auto ps = pool_.stats();
    stats_.push_back(record_generation({.generation = g,
                                        .tree_sizes = sizes,
                                        .fitness = fitness,
                                        .pool_used_peak = pool_.window_peak(),
                                        .pool_max_used = ps.max_used,
                                        .allocated_slots = ps.allocated_slots,
                                        .num_cases = problem_.num_cases(),
                                        .wall_time = wall,
                                        .worker_busy_time = std::move(busy)}));
    fitness_history_.push_back(std::move(fitness));
  }

  RunConfig config_;
  const Problem& problem_;
  ExprPool pool_;
  Rng master_rng_;
  std::mutex mutex_;  // guards pool_, plan_ and parents' slot_id/num_children
  BreedingPlan plan_;
  std::vector<Individual> pop_;
  std::vector<GenerationStats> stats_;
  std::vector<std::vector<double>> fitness_history_;
};

}  // namespace

void RunConfig::validate() const {
  if (popsize == 0) throw std::invalid_argument("popsize must be at least 1");
  if (popsize > static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max() / 4))
    throw std::invalid_argument("popsize too large");
  if (nthreads > kMaxThreads) throw std::invalid_argument("threads must be at most " + std::to_string(kMaxThreads));
  if (generations == 0) throw std::invalid_argument("generations must be at least 1");
  if (buffer_bytes == 0) throw std::invalid_argument("buffer_bytes must be at least 1");
  if (tournament_size == 0) throw std::invalid_argument("tournament_size must be at least 1");
  if (max_initial_depth == 0) throw std::invalid_argument("max_initial_depth must be at least 1");
  if (max_initial_depth >= 63 || ((std::size_t{1} << max_initial_depth) - 1) > buffer_bytes)
    throw std::invalid_argument("a full tree of max_initial_depth " + std::to_string(max_initial_depth) +
                                " does not fit in " + std::to_string(buffer_bytes) + " buffer bytes");
}

std::size_t RunResult::peak_buffers() const {
  std::size_t peak = 0;
  for (const auto& row : stats) peak = std::max(peak, row.pool_max_used);
  return peak;
}

std::size_t initial_depth(const RunConfig& config, std::size_t index) {
  if (config.max_initial_depth <= 1) return 1;
  return 2 + index % (config.max_initial_depth - 1);
}

std::vector<ParentPair> select_parents(Rng& rng, std::span<const double> fitness, std::size_t tournament_size) {
  std::vector<ParentPair> outcome(fitness.size());
  for (auto& pp : outcome) {
    pp.mum = static_cast<ParentId>(tournament_select(rng, fitness, tournament_size));
    pp.dad = static_cast<ParentId>(tournament_select(rng, fitness, tournament_size));
  }
  return outcome;
}

namespace breeding {

BreedingPlan prepare(ExprPool& pool, std::span<Individual> parents, std::span<Individual> children,
                     std::span<const ParentPair> outcome) {
  if (children.size() != outcome.size()) throw std::invalid_argument("prepare: one outcome per child required");
  const auto counts = count_children(outcome, parents.size());
  for (std::size_t p = 0; p < parents.size(); ++p) parents[p].num_children = counts[p];
  for (std::size_t s = 0; s < children.size(); ++s) {
    children[s].mum_id = outcome[s].mum;
    children[s].dad_id = outcome[s].dad;
  }
  auto plan = BreedingPlan::build(outcome, counts);
  for (auto& parent : parents)
    if (parent.num_children == 0) pool.release(parent.slot_id);
  return plan;
}

std::optional<ChildId> start_child(ExprPool& pool, BreedingPlan& plan, std::span<Individual> children) {
  const auto id = plan.claim_next();
  if (!id) return std::nullopt;
  auto& child = children[static_cast<std::size_t>(*id)];
  if (child.slot_id != kNoSlot) throw PlanInvariantError("start_child: child claimed twice");
  pool.acquire(child.slot_id);
  return id;
}

void finish_child(ExprPool& pool, BreedingPlan& plan, std::span<Individual> parents,
                  std::span<const Individual> children, ChildId id) {
  const auto& child = children[static_cast<std::size_t>(id)];
  auto& mum = parents[static_cast<std::size_t>(child.mum_id)];
  auto& dad = parents[static_cast<std::size_t>(child.dad_id)];
  const auto from_mum = plan.rem_child(child.mum_id, id);
  const auto from_dad = plan.rem_child(child.dad_id, id);
  if (from_mum.remaining == 1) plan.move21(id, from_mum.last);
  if (from_dad.remaining == 1) plan.move21(id, from_dad.last);
  if (from_mum.remaining == 0) {
    mum.num_children = 0;
    pool.release(mum.slot_id);
  }
  if (from_dad.remaining == 0) {
    dad.num_children = 0;
    pool.release(dad.slot_id);
  }
}

}  // namespace breeding

RunResult run_evolution(const RunConfig& config, const Problem& problem) {
  config.validate();
  return PooledEngine(config, problem).run();
}

RunResult run_evolution(const RunConfig& config) {
  config.validate();
  const auto problem = Problem::make(config.problem);
  return PooledEngine(config, problem).run();
}

}  // namespace mmgp
