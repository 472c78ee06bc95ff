#include "mmgp/breeding_plan.hpp"

#include <algorithm>

namespace mmgp {

namespace {

std::string idx(std::int32_t v) { return std::to_string(v); }

}  // namespace

std::vector<std::int32_t> count_children(std::span<const ParentPair> outcome,
                                         std::size_t num_parents) {
  std::vector<std::int32_t> counts(num_parents, 0);
  for (const auto& pp : outcome) {
    if (pp.mum < 0 || static_cast<std::size_t>(pp.mum) >= num_parents || pp.dad < 0 ||
        static_cast<std::size_t>(pp.dad) >= num_parents)
      throw std::invalid_argument("count_children: parent id out of range");
    ++counts[static_cast<std::size_t>(pp.mum)];
    ++counts[static_cast<std::size_t>(pp.dad)];
  }
  return counts;
}

void BreedingPlan::append(ChildId s, ChildId& last, ChildId& head) {
  if (last != kEmpty) forw_[static_cast<std::size_t>(last)] = s;
  forw_[static_cast<std::size_t>(s)] = kEmpty;
  back_[static_cast<std::size_t>(s)] = last;
  last = s;
  if (head == kEmpty) head = s;
}

BreedingPlan BreedingPlan::build(std::span<const ParentPair> outcome,
                                 std::span<const std::int32_t> num_children) {
  const auto expected = count_children(outcome, num_children.size());
  if (!std::equal(expected.begin(), expected.end(), num_children.begin()))
    throw std::invalid_argument("BreedingPlan::build: num_children disagrees with selection outcome");

  BreedingPlan plan;
  const std::size_t n = outcome.size();
  plan.forw_.assign(n, kEmpty);
  plan.back_.assign(n, kEmpty);
  plan.status_.assign(n, ChildClass::kClaimed);
  plan.children_.resize(num_children.size());

  ChildId last1 = kEmpty;
  ChildId last2 = kEmpty;
  for (std::size_t i = 0; i < n; ++i) {
    const auto s = static_cast<ChildId>(i);
    const auto [mum, dad] = outcome[i];
    const auto mum_n = num_children[static_cast<std::size_t>(mum)];
    const auto dad_n = num_children[static_cast<std::size_t>(dad)];
    if (mum_n == 1 || dad_n == 1) {
      plan.append(s, last1, plan.chainhd1_);
      plan.status_[i] = ChildClass::kOne;
    } else {
      plan.append(s, last2, plan.chainhd2_);
      plan.status_[i] = ChildClass::kTwoPlus;
    }
    for (const ParentId p : {mum, dad}) {
      auto& kids = plan.children_[static_cast<std::size_t>(p)];
      if (kids.empty()) kids.assign(static_cast<std::size_t>(num_children[static_cast<std::size_t>(p)]), kEmpty);
      auto slot = std::find(kids.begin(), kids.end(), kEmpty);
      if (slot == kids.end())
        throw PlanInvariantError("BreedingPlan::build: children array of parent " + idx(p) + " overflow");
      *slot = s;
    }
  }
  return plan;
}

std::optional<ChildId> BreedingPlan::peek_next() const {
  if (chainhd1_ != kEmpty) return chainhd1_;
  if (chainhd2_ != kEmpty) return chainhd2_;
  return std::nullopt;
}

std::optional<ChildId> BreedingPlan::claim_next() {
  ChildId i = kEmpty;
  if (chainhd1_ != kEmpty) {
    i = chainhd1_;
    chainhd1_ = forw_[static_cast<std::size_t>(i)];
  } else if (chainhd2_ != kEmpty) {
    i = chainhd2_;
    chainhd2_ = forw_[static_cast<std::size_t>(i)];
    if (chainhd2_ != kEmpty) back_[static_cast<std::size_t>(chainhd2_)] = kEmpty;
  }
  if (i == kEmpty) return std::nullopt;
  status_[static_cast<std::size_t>(i)] = ChildClass::kClaimed;
  return i;
}

RemChildResult BreedingPlan::rem_child(ParentId parent, ChildId s) {
  auto& kids = children_.at(static_cast<std::size_t>(parent));
  RemChildResult out;
  ChildId target = s;
  bool removed = false;
  for (auto& entry : kids) {
    if (entry == target) {
      entry = kEmpty;
      removed = true;
      target = -2;  // remove only one instance
    }
    if (entry != kEmpty) {
      out.last = entry;
      ++out.remaining;
    }
  }
  if (!removed)
    throw PlanInvariantError("rem_child: child " + idx(s) + " not registered with parent " + idx(parent));
  if (out.remaining != 1) out.last = kEmpty;
  return out;
}

void BreedingPlan::move21(ChildId active, ChildId s) {
  if (active == s) return;
  const auto su = static_cast<std::size_t>(s);
  if (status_.at(su) != ChildClass::kTwoPlus) return;  // already class 1 or claimed

  status_[su] = ChildClass::kOne;
  const ChildId b = back_[su];
  const ChildId f = forw_[su];
  if (chainhd2_ == s) chainhd2_ = f;
  if (b != kEmpty) forw_[static_cast<std::size_t>(b)] = f;
  if (f != kEmpty) back_[static_cast<std::size_t>(f)] = b;
  back_[su] = kEmpty;

  forw_[su] = chainhd1_;
  chainhd1_ = s;
}

std::vector<ChildId> BreedingPlan::walk(ChildId head) const {
  std::vector<ChildId> out;
  for (ChildId s = head; s != kEmpty && out.size() <= popsize(); s = forw_[static_cast<std::size_t>(s)]) {
    out.push_back(s);
    if (s < 0 || static_cast<std::size_t>(s) >= popsize()) break;
  }
  return out;
}

std::optional<PlanViolation> BreedingPlan::check_integrity() const {
  const auto n = static_cast<std::int32_t>(popsize());
  if (forw_.size() != popsize() || back_.size() != popsize())
    return PlanViolation{"link arrays sized differently from status"};

  std::vector<std::int8_t> seen(popsize(), 0);
  auto walk_chain = [&](ChildId head, ChildClass want, bool doubly,
                        std::size_t& length) -> std::optional<PlanViolation> {
    length = 0;
    ChildId prev = kEmpty;
    for (ChildId s = head; s != kEmpty; s = forw_[static_cast<std::size_t>(s)]) {
      if (s < 0 || s >= n) return PlanViolation{"chain link out of range", prev, s};
      const auto su = static_cast<std::size_t>(s);
      if (seen[su]) return PlanViolation{"child reached twice (cycle or shared node)", prev, s};
      seen[su] = 1;
      if (status_[su] != want) return PlanViolation{"chain member has wrong status", s, static_cast<std::int32_t>(status_[su])};
      if (doubly && back_[su] != prev) return PlanViolation{"back link disagrees with forward link", prev, s};
      prev = s;
      ++length;
    }
    return std::nullopt;
  };

  std::size_t len1 = 0;
  std::size_t len2 = 0;
  if (auto v = walk_chain(chainhd1_, ChildClass::kOne, false, len1)) return v;
  if (auto v = walk_chain(chainhd2_, ChildClass::kTwoPlus, true, len2)) return v;

  const auto ones = static_cast<std::size_t>(std::count(status_.begin(), status_.end(), ChildClass::kOne));
  const auto twos = static_cast<std::size_t>(std::count(status_.begin(), status_.end(), ChildClass::kTwoPlus));
  if (ones != len1) return PlanViolation{"class-1 children missing from chain 1", static_cast<std::int32_t>(ones), static_cast<std::int32_t>(len1)};
  if (twos != len2) return PlanViolation{"class-2+ children missing from chain 2+", static_cast<std::int32_t>(twos), static_cast<std::int32_t>(len2)};

  for (std::size_t p = 0; p < children_.size(); ++p) {
    for (const ChildId c : children_[p]) {
      if (c < kEmpty || c >= n) return PlanViolation{"children entry out of range", static_cast<std::int32_t>(p), c};
    }
  }
  return std::nullopt;
}

void BreedingPlan::release_children_arrays() {
  std::vector<std::vector<ChildId>>().swap(children_);
}

}  // namespace mmgp
