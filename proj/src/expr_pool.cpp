#include "mmgp/expr_pool.hpp"

#include <algorithm>
#include <string>

namespace mmgp {

ExprPool::ExprPool(std::size_t popsize, std::size_t nthreads, std::size_t buffer_bytes)
    : capacity_(pool_capacity(popsize, nthreads)), buffer_bytes_(buffer_bytes) {
  if (popsize == 0) throw std::invalid_argument("ExprPool: popsize must be at least 1");
  if (buffer_bytes == 0) throw std::invalid_argument("ExprPool: buffer_bytes must be at least 1");
  const std::size_t n = capacity_ + 1;
  storage_.resize(n);
  chain_.assign(n, 0);
  for (std::size_t i = 1; i < capacity_; ++i) chain_[i] = static_cast<SlotId>(i + 1);
  chain_[capacity_] = 0;
  chainhead_ = 1;
}

void ExprPool::check_slot(SlotId slot) const {
  if (slot < 1 || static_cast<std::size_t>(slot) > capacity_)
    throw std::out_of_range("ExprPool: slot " + std::to_string(slot) + " out of range");
}

SlotId ExprPool::acquire(SlotId& holder) {
  if (chainhead_ == 0) {
    throw PoolExhaustedError("ran out of expr buffers: capacity " + std::to_string(capacity_) +
                             ", used " + std::to_string(used_));
  }
  const SlotId slot = chainhead_;
  auto& store = storage_[static_cast<std::size_t>(slot)];
  if (store.empty()) {
    store.resize(buffer_bytes_);
    ++allocated_;
  }
  holder = slot;
  chainhead_ = chain_[static_cast<std::size_t>(slot)];
  ++used_;
  max_used_ = std::max(max_used_, used_);
  window_peak_ = std::max(window_peak_, used_);
  return slot;
}

void ExprPool::release(SlotId& holder) {
  const SlotId slot = holder;
  if (slot == kNoSlot) return;  // already freed
  check_slot(slot);
  chain_[static_cast<std::size_t>(slot)] = chainhead_;
  chainhead_ = slot;
  --used_;
  holder = kNoSlot;
}

std::span<std::uint8_t> ExprPool::buffer(SlotId slot) {
  check_slot(slot);
  return storage_[static_cast<std::size_t>(slot)];
}

std::span<const std::uint8_t> ExprPool::buffer(SlotId slot) const {
  check_slot(slot);
  return storage_[static_cast<std::size_t>(slot)];
}

bool ExprPool::is_allocated(SlotId slot) const {
  check_slot(slot);
  return !storage_[static_cast<std::size_t>(slot)].empty();
}

std::vector<SlotId> ExprPool::free_slots() const {
  std::vector<SlotId> out;
  for (SlotId s = chainhead_; s != 0 && out.size() <= capacity_; s = chain_[static_cast<std::size_t>(s)])
    out.push_back(s);
  return out;
}

}  // namespace mmgp
