#pragma once

// Fixed set of genome buffers threaded on an index free chain.
//
// Slot 0 is never handed out: 0 doubles as "end of chain" and as the
// "holds no buffer" marker stored by each individual. Storage for a slot is
// allocated the first time the slot is acquired and kept until the pool is
// destroyed, so a run touches the system allocator at most `capacity` times.
//
// Not synchronized. The engine calls acquire/release only while holding its
// single breeding mutex.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace mmgp {

using SlotId = std::int32_t;
inline constexpr SlotId kNoSlot = 0;

/// Thrown when acquire() finds the free chain empty. Under correct
/// scheduling this cannot happen, so it is treated as fatal by callers.
class PoolExhaustedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct PoolStats {
  std::size_t used = 0;
  std::size_t max_used = 0;
  std::size_t allocated_slots = 0;

  friend bool operator==(const PoolStats&, const PoolStats&) = default;
};

/// Number of slots needed for `popsize` individuals bred by `nthreads`
/// workers; nthreads == 0 (inline serial mode) counts as one worker.
constexpr std::size_t pool_capacity(std::size_t popsize, std::size_t nthreads) {
  return popsize + 2 * (nthreads == 0 ? 1 : nthreads);
}

class ExprPool {
 public:
  ExprPool(std::size_t popsize, std::size_t nthreads, std::size_t buffer_bytes);

  /// Hands out the head of the free chain and stores its id in `holder`.
  SlotId acquire(SlotId& holder);

  /// Returns `holder`'s slot to the head of the free chain and resets
  /// `holder` to kNoSlot. A holder that is already kNoSlot is left alone.
  void release(SlotId& holder);

  std::span<std::uint8_t> buffer(SlotId slot);
  std::span<const std::uint8_t> buffer(SlotId slot) const;

  PoolStats stats() const noexcept { return {used_, max_used_, allocated_}; }

  std::size_t capacity() const noexcept { return capacity_; }
  std::size_t buffer_bytes() const noexcept { return buffer_bytes_; }
  SlotId chainhead() const noexcept { return chainhead_; }
  /// Successor of `slot` on the free chain (meaningful only while free).
  SlotId next_free(SlotId slot) const { return chain_.at(static_cast<std::size_t>(slot)); }
  bool is_allocated(SlotId slot) const;

  /// Slots reachable from chainhead, in chain order. Walk is bounded by
  /// capacity, so a corrupted cyclic chain yields capacity+1 entries.
  std::vector<SlotId> free_slots() const;

  /// High-water mark of `used` since the last reset_window().
  std::size_t window_peak() const noexcept { return window_peak_; }
  void reset_window() noexcept { window_peak_ = used_; }

  friend bool operator==(const ExprPool&, const ExprPool&) = default;

 private:
  void check_slot(SlotId slot) const;

  std::size_t capacity_;
  std::size_t buffer_bytes_;
  std::vector<std::vector<std::uint8_t>> storage_;  // [0] unused
  std::vector<SlotId> chain_;                       // [0] unused
  SlotId chainhead_ = 1;
  std::size_t used_ = 0;
  std::size_t max_used_ = 0;
  std::size_t allocated_ = 0;
  std::size_t window_peak_ = 0;
};

}  // namespace mmgp
