#pragma once

// Exhaustive exploration of the breeding bookkeeping under every order in
// which simulated workers can enter the engine's critical sections.
//
// A worker alternates two locked steps: START (claim a child, acquire its
// buffer) and FINISH (detach the child from its parents, release parents).
// Crossover runs between the two, so it may read the parents' buffers at
// any moment while the child is pending. The checker therefore requires,
// at every state, that both parents of every pending child still own their
// buffers.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mmgp/breeding_plan.hpp"
#include "mmgp/engine.hpp"
#include "mmgp/expr_pool.hpp"

namespace mmgp::testing {

struct World {
  ExprPool pool;
  std::vector<Individual> parents;
  std::vector<Individual> children;
  BreedingPlan plan;
  std::vector<std::optional<ChildId>> pending;
  std::vector<bool> done;
};

inline World make_world(const std::vector<ParentPair>& outcome, std::size_t nthreads) {
  const std::size_t m = outcome.size();
  World w{ExprPool(m, nthreads, 1), std::vector<Individual>(m), std::vector<Individual>(m), {}, {}, {}};
  for (auto& p : w.parents) w.pool.acquire(p.slot_id);
  w.pool.reset_window();
  w.plan = breeding::prepare(w.pool, w.parents, w.children, outcome);
  const std::size_t workers = nthreads == 0 ? 1 : nthreads;
  w.pending.assign(workers, std::nullopt);
  w.done.assign(workers, false);
  return w;
}

/// One locked step by `worker`. Returns false if the worker has exited.
inline bool step(World& w, std::size_t worker) {
  if (w.done[worker]) return false;
  auto& pending = w.pending[worker];
  if (!pending) {
    pending = breeding::start_child(w.pool, w.plan, w.children);
    if (!pending) w.done[worker] = true;
  } else {
    breeding::finish_child(w.pool, w.plan, w.parents, w.children, *pending);
    pending.reset();
  }
  return true;
}

/// Empty string if every invariant holds in `w`.
inline std::string check_state(const World& w) {
  for (const auto& p : w.pending) {
    if (!p) continue;
    const auto& c = w.children[static_cast<std::size_t>(*p)];
    if (w.parents[static_cast<std::size_t>(c.mum_id)].slot_id == kNoSlot ||
        w.parents[static_cast<std::size_t>(c.dad_id)].slot_id == kNoSlot)
      return "pending child " + std::to_string(*p) + " has a released parent buffer";
  }
  if (auto v = w.plan.check_integrity()) return "plan integrity: " + v->what;
  const auto st = w.pool.stats();
  if (st.used + w.pool.free_slots().size() != w.pool.capacity()) return "pool conservation broken";
  std::vector<int> owners(w.pool.capacity() + 1, 0);
  for (const auto s : w.pool.free_slots()) ++owners[static_cast<std::size_t>(s)];
  for (const auto& v : {std::cref(w.parents), std::cref(w.children)})
    for (const auto& ind : v.get())
      if (ind.slot_id != kNoSlot) ++owners[static_cast<std::size_t>(ind.slot_id)];
  for (std::size_t s = 1; s < owners.size(); ++s)
    if (owners[s] != 1) return "slot " + std::to_string(s) + " owned " + std::to_string(owners[s]) + " times";
  return {};
}

/// Empty string if the finished generation is consistent.
inline std::string check_final(const World& w) {
  const std::size_t m = w.children.size();
  for (const auto& c : w.children)
    if (c.slot_id == kNoSlot) return "child without buffer";
  for (const auto& p : w.parents)
    if (p.slot_id != kNoSlot) return "parent buffer never released";
  if (w.pool.stats().used != m) return "used != popsize at end of generation";
  if (w.pool.window_peak() < m + 1) return "peak below popsize + 1";
  for (std::size_t p = 0; p < w.plan.num_parents(); ++p)
    for (const auto c : w.plan.children(static_cast<ParentId>(p)))
      if (c != kEmpty) return "children array not drained";
  if (w.plan.head1() != kEmpty || w.plan.head2() != kEmpty) return "work chains not empty";
  return {};
}

struct ExploreResult {
  std::size_t paths = 0;
  std::size_t states = 0;
  std::size_t peak_used = 0;
  std::string failure;
};

inline void explore(const World& w, ExploreResult& out) {
  if (!out.failure.empty()) return;
  ++out.states;
  if (auto bad = check_state(w); !bad.empty()) {
    out.failure = bad;
    return;
  }
  out.peak_used = std::max(out.peak_used, w.pool.window_peak());
  bool any = false;
  for (std::size_t worker = 0; worker < w.done.size(); ++worker) {
    if (w.done[worker]) continue;
    any = true;
    World next = w;
    try {
      step(next, worker);
    } catch (const std::exception& e) {
      out.failure = e.what();
      return;
    }
    explore(next, out);
  }
  if (!any) {
    ++out.paths;
    if (auto bad = check_final(w); !bad.empty()) out.failure = bad;
  }
}

/// Every selection outcome for `m` children. With `ordered` false only
/// outcomes with mum <= dad are produced.
inline std::vector<std::vector<ParentPair>> all_outcomes(int m, bool ordered) {
  std::vector<ParentPair> pairs;
  for (int a = 0; a < m; ++a)
    for (int b = ordered ? 0 : a; b < m; ++b) pairs.push_back({a, b});
  std::vector<std::vector<ParentPair>> out;
  std::vector<std::size_t> digit(static_cast<std::size_t>(m), 0);
  for (;;) {
    std::vector<ParentPair> o;
    for (auto d : digit) o.push_back(pairs[d]);
    out.push_back(std::move(o));
    std::size_t i = 0;
    while (i < digit.size() && ++digit[i] == pairs.size()) digit[i++] = 0;
    if (i == digit.size()) break;
  }
  return out;
}

inline std::vector<ParentPair> random_outcome(std::mt19937_64& rng, int m) {
  // Skewed parent choice so some parents get many children, as under
  // tournament selection.
  std::uniform_int_distribution<int> any(0, m - 1);
  std::uniform_int_distribution<int> few(0, std::max(0, m / 4 - 1));
  std::bernoulli_distribution elite(0.5);
  std::vector<ParentPair> o(static_cast<std::size_t>(m));
  for (auto& pp : o) {
    pp.mum = elite(rng) ? few(rng) : any(rng);
    pp.dad = elite(rng) ? few(rng) : any(rng);
  }
  return o;
}

struct ScheduleReport {
  std::size_t claims = 0;
  std::size_t class2_claims = 0;
  std::size_t priority_violations = 0;  // class-2+ claim while chain 1 non-empty
  std::size_t peak_used = 0;
  std::string failure;
};

/// One generation on `outcome` with workers stepping in random order.
inline ScheduleReport random_schedule(std::mt19937_64& rng, const std::vector<ParentPair>& outcome,
                                      std::size_t threads) {
  ScheduleReport rep;
  auto w = make_world(outcome, threads);
  std::size_t live = w.done.size();
  while (live > 0) {
    const std::size_t worker = rng() % w.done.size();
    if (w.done[worker]) continue;
    const bool claiming = !w.pending[worker];
    const auto next = w.plan.peek_next();
    const auto prior = next ? w.plan.status(*next) : ChildClass::kClaimed;
    const bool chain1_empty = w.plan.head1() == kEmpty;
    step(w, worker);
    if (claiming && w.pending[worker]) {
      ++rep.claims;
      if (*w.pending[worker] != *next) rep.failure = "claim differs from peek";
      if (prior == ChildClass::kTwoPlus) {
        ++rep.class2_claims;
        if (!chain1_empty) ++rep.priority_violations;
      }
    }
    if (auto bad = check_state(w); !bad.empty() && rep.failure.empty()) rep.failure = bad;
    if (w.done[worker]) --live;
  }
  if (auto bad = check_final(w); !bad.empty() && rep.failure.empty()) rep.failure = bad;
  rep.peak_used = w.pool.window_peak();
  return rep;
}

}  // namespace mmgp::testing
