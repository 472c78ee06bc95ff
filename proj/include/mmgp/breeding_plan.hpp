#pragma once

// Per-generation breeding schedule.
//
// Children waiting to be created sit on one of two work chains threaded
// through `forw`:
//   chain 1  - at least one parent has no other child left to create. Singly
//              linked; new entries are pushed at the head.
//   chain 2+ - both parents still have two or more children to create.
//              Doubly linked (`back` is kept) so a child can be unlinked from
//              anywhere when one of its parents drops to one outstanding child.
// Workers always drain chain 1 first, so parents whose last child has been
// created give up their genome buffer as early as possible.
//
// Each parent also owns a small linear array of its outstanding children.
// -1 marks an empty entry in every array of this module.
//
// Not synchronized; every mutating call happens under the engine mutex.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mmgp {

using ChildId = std::int32_t;
using ParentId = std::int32_t;
inline constexpr std::int32_t kEmpty = -1;

/// The two parents picked for one child.
struct ParentPair {
  ParentId mum = kEmpty;
  ParentId dad = kEmpty;

  friend bool operator==(const ParentPair&, const ParentPair&) = default;
};

/// Broken chain or children-array bookkeeping. Indicates a scheduling bug.
class PlanInvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class ChildClass : std::int8_t { kClaimed = 0, kOne = 1, kTwoPlus = 2 };

struct RemChildResult {
  int remaining = 0;
  ChildId last = kEmpty;  // the single remaining child when remaining == 1

  friend bool operator==(const RemChildResult&, const RemChildResult&) = default;
};

struct PlanViolation {
  std::string what;
  std::int32_t first = kEmpty;
  std::int32_t second = kEmpty;
};

/// Number of children each parent is assigned in `outcome`
/// (one edge to mum and one to dad per child).
std::vector<std::int32_t> count_children(std::span<const ParentPair> outcome,
                                         std::size_t num_parents);

class BreedingPlan {
 public:
  BreedingPlan() = default;

  /// Classifies every child, appends it (in ascending order) to the tail of
  /// its chain and registers it with both parents.
  static BreedingPlan build(std::span<const ParentPair> outcome,
                            std::span<const std::int32_t> num_children);

  /// Next child to create: head of chain 1, else head of chain 2+.
  /// Marks it claimed so move21 leaves it alone.
  std::optional<ChildId> claim_next();
  /// What claim_next would return, without changing anything.
  std::optional<ChildId> peek_next() const;

  /// Removes one occurrence of `s` from `parent`'s children array and
  /// reports how many entries remain.
  RemChildResult rem_child(ParentId parent, ChildId s);

  /// Promotes `s` from chain 2+ to the head of chain 1, unless it is the
  /// child being processed (`active`) or it has already left chain 2+.
  void move21(ChildId active, ChildId s);

  /// First inconsistency found between chains, links and status, if any.
  std::optional<PlanViolation> check_integrity() const;

  /// Frees every children array (master phase, after workers join).
  void release_children_arrays();

  std::size_t popsize() const noexcept { return status_.size(); }
  ChildId head1() const noexcept { return chainhd1_; }
  ChildId head2() const noexcept { return chainhd2_; }
  ChildId forw(ChildId s) const { return forw_.at(static_cast<std::size_t>(s)); }
  ChildId back(ChildId s) const { return back_.at(static_cast<std::size_t>(s)); }
  ChildClass status(ChildId s) const { return status_.at(static_cast<std::size_t>(s)); }
  std::span<const ChildId> children(ParentId p) const {
    return children_.at(static_cast<std::size_t>(p));
  }
  std::size_t num_parents() const noexcept { return children_.size(); }

  /// Chain contents from head, bounded by popsize (cycles are truncated).
  std::vector<ChildId> chain1() const { return walk(chainhd1_); }
  std::vector<ChildId> chain2() const { return walk(chainhd2_); }

  friend bool operator==(const BreedingPlan&, const BreedingPlan&) = default;

 private:
  friend struct BreedingPlanTestAccess;

  std::vector<ChildId> walk(ChildId head) const;
  void append(ChildId s, ChildId& last, ChildId& head);

  std::vector<ChildId> forw_;
  std::vector<ChildId> back_;  // valid only on chain 2+
  std::vector<ChildClass> status_;
  std::vector<std::vector<ChildId>> children_;
  ChildId chainhd1_ = kEmpty;
  ChildId chainhd2_ = kEmpty;
};

}  // namespace mmgp
