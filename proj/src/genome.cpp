#include "mmgp/genome.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mmgp {

namespace {

std::size_t uniform_below(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

double eval_at(std::span<const std::uint8_t> tree, std::size_t& pc, double x) {
  const std::uint8_t code = tree[pc++];
  switch (code) {
    case op::kAdd: {
      const double a = eval_at(tree, pc, x);
      return a + eval_at(tree, pc, x);
    }
    case op::kSub: {
      const double a = eval_at(tree, pc, x);
      return a - eval_at(tree, pc, x);
    }
    case op::kMul: {
      const double a = eval_at(tree, pc, x);
      return a * eval_at(tree, pc, x);
    }
    case op::kDiv: {
      const double a = eval_at(tree, pc, x);
      const double b = eval_at(tree, pc, x);
      return std::fabs(b) < 1e-9 ? 1.0 : a / b;
    }
    case op::kVar:
      return x;
    default:
      return static_cast<double>(static_cast<int>(code - op::kConstBase) + op::kConstMin);
  }
}

// Terminal kinds are x and "a constant", so a node is a function with
// probability 4/6 before the depth limit. The constant value is a second draw.
std::uint8_t random_terminal(Rng& rng) {
  if (uniform_below(rng, 2) == 0) return op::kVar;
  return static_cast<std::uint8_t>(op::kConstBase + uniform_below(rng, op::kNumOpcodes - op::kConstBase));
}

std::size_t grow(Rng& rng, std::size_t depth_left, std::span<std::uint8_t> buffer, std::size_t pos) {
  if (pos >= buffer.size()) throw std::length_error("random_tree: tree does not fit in buffer");
  std::uint8_t code;
  if (depth_left <= 1) {
    code = random_terminal(rng);
  } else {
    const auto pick = uniform_below(rng, op::kNumFunctions + 2);
    code = pick < op::kNumFunctions ? static_cast<std::uint8_t>(pick) : random_terminal(rng);
  }
  buffer[pos++] = code;
  for (int a = 0; a < arity(code); ++a) pos = grow(rng, depth_left - 1, buffer, pos);
  return pos;
}

}  // namespace

std::size_t subtree_end(std::span<const std::uint8_t> tree, std::size_t start) {
  std::size_t open = 1;
  std::size_t pc = start;
  while (open > 0) {
    if (pc >= tree.size()) throw std::out_of_range("subtree_end: incomplete prefix tree");
    open += static_cast<std::size_t>(arity(tree[pc])) - 1;
    ++pc;
  }
  return pc;
}

bool is_complete_tree(std::span<const std::uint8_t> tree) {
  if (tree.empty()) return false;
  if (std::any_of(tree.begin(), tree.end(), [](std::uint8_t c) { return c >= op::kNumOpcodes; }))
    return false;
  try {
    return subtree_end(tree, 0) == tree.size();
  } catch (const std::out_of_range&) {
    return false;
  }
}

std::size_t tree_depth(std::span<const std::uint8_t> tree) {
  // Pending-children counts of the open ancestors.
  std::vector<int> stack;
  std::size_t depth = 0;
  for (const std::uint8_t code : tree) {
    if (!stack.empty()) --stack.back();
    stack.push_back(arity(code));
    depth = std::max(depth, stack.size());
    while (!stack.empty() && stack.back() == 0) stack.pop_back();
  }
  return depth;
}

std::size_t random_tree(Rng& rng, std::size_t depth_limit, std::span<std::uint8_t> buffer) {
  if (depth_limit == 0) throw std::invalid_argument("random_tree: depth_limit must be at least 1");
  return grow(rng, depth_limit, buffer, 0);
}

std::size_t subtree_crossover(std::span<const std::uint8_t> mum, std::span<const std::uint8_t> dad,
                              std::span<std::uint8_t> child, Rng& rng) {
  if (mum.size() > child.size()) throw std::length_error("subtree_crossover: mum larger than child buffer");
  for (int attempt = 0; attempt < kCrossoverAttempts; ++attempt) {
    const std::size_t mum_at = uniform_below(rng, mum.size());
    const std::size_t mum_end = subtree_end(mum, mum_at);
    const std::size_t dad_at = uniform_below(rng, dad.size());
    const std::size_t dad_end = subtree_end(dad, dad_at);
    const std::size_t len = mum.size() - (mum_end - mum_at) + (dad_end - dad_at);
    if (len > child.size()) continue;
    auto out = std::copy(mum.begin(), mum.begin() + static_cast<std::ptrdiff_t>(mum_at), child.begin());
    out = std::copy(dad.begin() + static_cast<std::ptrdiff_t>(dad_at),
                    dad.begin() + static_cast<std::ptrdiff_t>(dad_end), out);
    std::copy(mum.begin() + static_cast<std::ptrdiff_t>(mum_end), mum.end(), out);
    return len;
  }
  std::copy(mum.begin(), mum.end(), child.begin());
  return mum.size();
}

std::size_t tournament_select(Rng& rng, std::span<const double> fitness, std::size_t k) {
  if (fitness.empty()) throw std::invalid_argument("tournament_select: empty population");
  if (k == 0) throw std::invalid_argument("tournament_select: tournament size must be at least 1");
  std::size_t best = uniform_below(rng, fitness.size());
  for (std::size_t i = 1; i < k; ++i) {
    const std::size_t cand = uniform_below(rng, fitness.size());
    if (fitness[cand] < fitness[best] || (fitness[cand] == fitness[best] && cand < best)) best = cand;
  }
  return best;
}

Rng child_stream(std::uint64_t master_seed, std::uint64_t generation, std::uint64_t child) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(generation), static_cast<std::uint32_t>(generation >> 32),
                    static_cast<std::uint32_t>(child), static_cast<std::uint32_t>(child >> 32)};
  return Rng(seq);
}

std::string_view to_string(ProblemId id) {
  switch (id) {
    case ProblemId::kQuartic:
      return "quartic";
  }
  return "unknown";
}

ProblemId parse_problem(std::string_view name) {
  if (name == "quartic") return ProblemId::kQuartic;
  throw std::invalid_argument("unknown problem '" + std::string(name) + "'");
}

Problem::Problem(std::vector<double> inputs, std::vector<double> targets)
    : inputs_(std::move(inputs)), targets_(std::move(targets)) {
  if (inputs_.size() != targets_.size() || inputs_.empty())
    throw std::invalid_argument("Problem: need equally many non-zero inputs and targets");
}

Problem Problem::quartic() {
  constexpr int kCases = 20;
  std::vector<double> xs;
  std::vector<double> ys;
  for (int i = 0; i < kCases; ++i) {
    const double x = -1.0 + 2.0 * i / (kCases - 1);
    xs.push_back(x);
    ys.push_back(x * x * x * x + x * x * x + x * x + x);
  }
  return Problem(std::move(xs), std::move(ys));
}

Problem Problem::make(ProblemId id) {
  switch (id) {
    case ProblemId::kQuartic:
      return quartic();
  }
  throw std::invalid_argument("Problem::make: unknown id");
}

double Problem::run(std::span<const std::uint8_t> tree, double x) {
  std::size_t pc = 0;
  return eval_at(tree, pc, x);
}

double Problem::fitness(std::span<const std::uint8_t> tree) const {
  double total = 0.0;
  for (std::size_t i = 0; i < inputs_.size(); ++i) total += std::fabs(run(tree, inputs_[i]) - targets_[i]);
  return std::isfinite(total) ? total : std::numeric_limits<double>::infinity();
}

}  // namespace mmgp
