#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "mmgp/breeding_plan.hpp"
#include "mmgp/engine.hpp"
#include "mmgp/expr_pool.hpp"
#include "mmgp/genome.hpp"
#include "mmgp/metrics.hpp"
#include "mmgp/naive_engine.hpp"

namespace py = pybind11;
using namespace mmgp;

namespace {

py::bytes to_bytes(std::span<const std::uint8_t> s) {
  return py::bytes(reinterpret_cast<const char*>(s.data()), s.size());
}

std::vector<std::uint8_t> from_bytes(const py::bytes& b) {
  const std::string s = b;
  return {s.begin(), s.end()};
}

py::object optional_child(std::optional<ChildId> id) {
  return id ? py::object(py::int_(*id)) : py::object(py::none());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Memory-bounded generational genetic programming";

  py::register_exception<PoolExhaustedError>(m, "PoolExhaustedError", PyExc_RuntimeError);
  py::register_exception<PlanInvariantError>(m, "PlanInvariantError", PyExc_RuntimeError);

  m.def("pool_capacity", &pool_capacity, py::arg("popsize"), py::arg("nthreads"));

  py::class_<ExprPool>(m, "ExprPool")
      .def(py::init<std::size_t, std::size_t, std::size_t>(), py::arg("popsize"), py::arg("nthreads"),
           py::arg("buffer_bytes"))
      .def("acquire",
           [](ExprPool& pool) {
             SlotId holder = kNoSlot;
             return pool.acquire(holder);
           })
      .def("release",
           [](ExprPool& pool, SlotId slot) {
             pool.release(slot);
             return slot;
           },
           py::arg("slot"), "Frees `slot` and returns the cleared holder value (0).")
      .def("stats",
           [](const ExprPool& pool) {
             const auto s = pool.stats();
             return py::make_tuple(s.used, s.max_used, s.allocated_slots);
           })
      .def("free_slots", &ExprPool::free_slots)
      .def_property_readonly("capacity", &ExprPool::capacity)
      .def_property_readonly("buffer_bytes", &ExprPool::buffer_bytes)
      .def_property_readonly("chainhead", &ExprPool::chainhead);

  py::class_<BreedingPlan>(m, "BreedingPlan")
      .def_static(
          "build",
          [](const std::vector<std::pair<ParentId, ParentId>>& pairs, const std::vector<std::int32_t>& counts) {
            std::vector<ParentPair> outcome;
            for (const auto& [mum, dad] : pairs) outcome.push_back({mum, dad});
            return BreedingPlan::build(outcome, counts);
          },
          py::arg("parents"), py::arg("num_children"))
      .def("claim_next", [](BreedingPlan& p) { return optional_child(p.claim_next()); })
      .def("rem_child",
           [](BreedingPlan& p, ParentId parent, ChildId s) {
             const auto r = p.rem_child(parent, s);
             return py::make_tuple(r.remaining, r.last);
           })
      .def("move21", &BreedingPlan::move21, py::arg("active"), py::arg("s"))
      .def("check_integrity",
           [](const BreedingPlan& p) -> py::object {
             const auto v = p.check_integrity();
             return v ? py::object(py::str(v->what)) : py::object(py::none());
           })
      .def("chain1", &BreedingPlan::chain1)
      .def("chain2", &BreedingPlan::chain2)
      .def("children",
           [](const BreedingPlan& p, ParentId parent) {
             const auto c = p.children(parent);
             return std::vector<ChildId>(c.begin(), c.end());
           })
      .def("status", [](const BreedingPlan& p, ChildId s) { return static_cast<int>(p.status(s)); });

  py::class_<Problem>(m, "Problem")
      .def_static("quartic", &Problem::quartic)
      .def("fitness", [](const Problem& p, const py::bytes& tree) { return p.fitness(from_bytes(tree)); })
      .def_static("run", [](const py::bytes& tree, double x) { return Problem::run(from_bytes(tree), x); })
      .def_property_readonly("num_cases", &Problem::num_cases);

  m.def(
      "random_tree",
      [](std::uint64_t seed, std::size_t depth, std::size_t buffer_bytes) {
        Rng rng(seed);
        std::vector<std::uint8_t> buf(buffer_bytes);
        const auto len = random_tree(rng, depth, buf);
        return to_bytes(std::span(buf).first(len));
      },
      py::arg("seed"), py::arg("depth_limit"), py::arg("buffer_bytes"));
  m.def(
      "subtree_crossover",
      [](const py::bytes& mum, const py::bytes& dad, std::size_t buffer_bytes, std::uint64_t seed) {
        Rng rng(seed);
        std::vector<std::uint8_t> child(buffer_bytes);
        const auto len = subtree_crossover(from_bytes(mum), from_bytes(dad), child, rng);
        return to_bytes(std::span(child).first(len));
      },
      py::arg("mum"), py::arg("dad"), py::arg("buffer_bytes"), py::arg("seed"));

  py::class_<RunConfig>(m, "RunConfig")
      .def(py::init<>())
      .def_readwrite("popsize", &RunConfig::popsize)
      .def_readwrite("nthreads", &RunConfig::nthreads)
      .def_readwrite("generations", &RunConfig::generations)
      .def_readwrite("buffer_bytes", &RunConfig::buffer_bytes)
      .def_readwrite("tournament_size", &RunConfig::tournament_size)
      .def_readwrite("seed", &RunConfig::seed)
      .def_readwrite("max_initial_depth", &RunConfig::max_initial_depth)
      .def("validate", &RunConfig::validate);

  py::class_<Individual>(m, "Individual")
      .def_readonly("slot_id", &Individual::slot_id)
      .def_readonly("tree_len", &Individual::tree_len)
      .def_readonly("fitness", &Individual::fitness)
      .def_readonly("mum_id", &Individual::mum_id)
      .def_readonly("dad_id", &Individual::dad_id);

  py::class_<GenerationStats>(m, "GenerationStats")
      .def_readonly("generation", &GenerationStats::generation)
      .def_readonly("mean_tree_size", &GenerationStats::mean_tree_size)
      .def_readonly("max_tree_size", &GenerationStats::max_tree_size)
      .def_readonly("pool_used_peak", &GenerationStats::pool_used_peak)
      .def_readonly("pool_max_used", &GenerationStats::pool_max_used)
      .def_readonly("allocated_slots", &GenerationStats::allocated_slots)
      .def_readonly("best_fitness", &GenerationStats::best_fitness)
      .def_readonly("mean_fitness", &GenerationStats::mean_fitness)
      .def_readonly("total_opcodes_evaluated", &GenerationStats::total_opcodes_evaluated)
      .def_readonly("generation_wall_time", &GenerationStats::generation_wall_time)
      .def_readonly("worker_busy_time", &GenerationStats::worker_busy_time)
      .def_readonly("idle_fraction", &GenerationStats::idle_fraction)
      .def("effective_cores", &GenerationStats::effective_cores)
      .def("__eq__", [](const GenerationStats& a, const GenerationStats& b) { return a == b; });

  py::class_<RunResult>(m, "RunResult")
      .def_readonly("population", &RunResult::population)
      .def_property_readonly("genomes",
                             [](const RunResult& r) {
                               py::list out;
                               for (const auto& g : r.genomes) out.append(to_bytes(g));
                               return out;
                             })
      .def_readonly("fitness_history", &RunResult::fitness_history)
      .def_readonly("stats", &RunResult::stats)
      .def_readonly("pool_capacity", &RunResult::pool_capacity)
      .def("peak_buffers", &RunResult::peak_buffers);

  m.def("run_evolution", py::overload_cast<const RunConfig&>(&run_evolution), py::arg("config"),
        py::call_guard<py::gil_scoped_release>());
  m.def("run_evolution_naive", py::overload_cast<const RunConfig&>(&run_evolution_naive), py::arg("config"),
        py::call_guard<py::gil_scoped_release>());

  m.def(
      "emit_csv",
      [](const std::vector<GenerationStats>& series, const std::filesystem::path& path) { emit_csv(series, path); },
      py::arg("series"), py::arg("path"));
  m.def("parse_csv", &parse_csv, py::arg("path"));
}
