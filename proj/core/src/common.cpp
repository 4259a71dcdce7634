// SPDX-License-Identifier: Apache-2.0
#include "prefq/common.hpp"

#include <algorithm>
#include <iterator>
#include <limits>

namespace prefq {

StakeholderSet::StakeholderSet(std::vector<int> ids) : ids_(std::move(ids)) {
  std::sort(ids_.begin(), ids_.end());
  ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
}

bool StakeholderSet::contains(int id) const {
  return std::binary_search(ids_.begin(), ids_.end(), id);
}

bool StakeholderSet::intersects(const StakeholderSet& other) const {
  auto a = ids_.begin();
  auto b = other.ids_.begin();
  while (a != ids_.end() && b != other.ids_.end()) {
    if (*a == *b) return true;
    if (*a < *b)
      ++a;
    else
      ++b;
  }
  return false;
}

bool StakeholderSet::subset_of(const StakeholderSet& other) const {
  return std::includes(other.ids_.begin(), other.ids_.end(), ids_.begin(),
                       ids_.end());
}

void StakeholderSet::insert(int id) {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) ids_.insert(it, id);
}

void StakeholderSet::merge(const StakeholderSet& other) {
  std::vector<int> merged;
  merged.reserve(ids_.size() + other.ids_.size());
  std::set_union(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end(),
                 std::back_inserter(merged));
  ids_ = std::move(merged);
}

std::string StakeholderSet::to_string() const {
  std::string out = "{";
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(ids_[i]);
  }
  out += '}';
  return out;
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw InternalError("Rng::below(0)");
  // Rejection sampling over the largest multiple of n that fits in 64 bits.
  std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                        std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = next();
  } while (x >= limit);
  return x % n;
}

std::int64_t Rng::range(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw InternalError("Rng::range: lo > hi");
  return lo + static_cast<std::int64_t>(
                  below(static_cast<std::uint64_t>(hi - lo) + 1));
}

}  // namespace prefq
