#pragma once

// Linear prefix encoding of program trees, one byte per node.
//
//   0..3   binary functions  + - * protected-/
//   4      the input variable x
//   5..15  integer constants -5..5
//
// A buffer holds one tree starting at cell 0; its length is implied by the
// arity walk and also kept alongside as tree_len.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace mmgp {

using Rng = std::mt19937_64;

namespace op {
inline constexpr std::uint8_t kAdd = 0;
inline constexpr std::uint8_t kSub = 1;
inline constexpr std::uint8_t kMul = 2;
inline constexpr std::uint8_t kDiv = 3;
inline constexpr std::uint8_t kVar = 4;
inline constexpr std::uint8_t kConstBase = 5;
inline constexpr int kConstMin = -5;
inline constexpr int kConstMax = 5;
inline constexpr std::uint8_t kNumFunctions = 4;
inline constexpr std::uint8_t kNumOpcodes = kConstBase + (kConstMax - kConstMin + 1);
}  // namespace op

constexpr int arity(std::uint8_t code) noexcept { return code < op::kNumFunctions ? 2 : 0; }
constexpr bool is_terminal(std::uint8_t code) noexcept { return arity(code) == 0; }
constexpr std::uint8_t constant_opcode(int value) noexcept {
  return static_cast<std::uint8_t>(op::kConstBase + (value - op::kConstMin));
}

/// One past the last cell of the subtree rooted at `start`. Throws
/// std::out_of_range if the encoding runs off the end of `tree`.
std::size_t subtree_end(std::span<const std::uint8_t> tree, std::size_t start);

/// True if `tree` is exactly one complete prefix tree.
bool is_complete_tree(std::span<const std::uint8_t> tree);

std::size_t tree_depth(std::span<const std::uint8_t> tree);

/// Grow-method random tree of depth at most `depth_limit`. Every node above
/// the depth limit is drawn uniformly from the full opcode set; nodes at the
/// limit are terminals. Throws std::length_error if the buffer is too small.
std::size_t random_tree(Rng& rng, std::size_t depth_limit, std::span<std::uint8_t> buffer);

inline constexpr int kCrossoverAttempts = 10;

/// Copies `mum` into `child` with one uniformly chosen subtree replaced by a
/// uniformly chosen subtree of `dad`. Points are redrawn up to
/// kCrossoverAttempts times while the result would not fit in `child`;
/// after that the child is an unchanged copy of mum.
std::size_t subtree_crossover(std::span<const std::uint8_t> mum, std::span<const std::uint8_t> dad,
                              std::span<std::uint8_t> child, Rng& rng);

/// Tournament of `k` uniform draws with replacement; lowest fitness wins,
/// ties go to the lowest index.
std::size_t tournament_select(Rng& rng, std::span<const double> fitness, std::size_t k);

/// Deterministic stream for child `child` of generation `generation`.
Rng child_stream(std::uint64_t master_seed, std::uint64_t generation, std::uint64_t child);

enum class ProblemId { kQuartic };

std::string_view to_string(ProblemId id);
ProblemId parse_problem(std::string_view name);

/// Symbolic regression over a fixed table of training cases.
class Problem {
 public:
  /// x^4 + x^3 + x^2 + x sampled at 20 evenly spaced points on [-1, 1].
  static Problem quartic();
  static Problem make(ProblemId id);

  Problem(std::vector<double> inputs, std::vector<double> targets);

  /// Sum of absolute errors over all cases. Non-finite totals map to +inf.
  double fitness(std::span<const std::uint8_t> tree) const;
  /// Value of `tree` at x.
  static double run(std::span<const std::uint8_t> tree, double x);

  std::size_t num_cases() const noexcept { return inputs_.size(); }
  std::span<const double> inputs() const noexcept { return inputs_; }
  std::span<const double> targets() const noexcept { return targets_; }

 private:
  std::vector<double> inputs_;
  std::vector<double> targets_;
};

}  // namespace mmgp
