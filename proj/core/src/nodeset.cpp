// SPDX-License-Identifier: Apache-2.0
#include "prefq/nodeset.hpp"

namespace prefq {

NodeSet& NodeSet::operator&=(const NodeSet& o) {
  check_same(o);
  for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] &= o.bits_[i];
  return *this;
}

NodeSet& NodeSet::operator|=(const NodeSet& o) {
  check_same(o);
  for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] |= o.bits_[i];
  return *this;
}

NodeSet& NodeSet::subtract(const NodeSet& o) {
  check_same(o);
  for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] &= ~o.bits_[i];
  return *this;
}

bool NodeSet::empty() const {
  for (std::uint64_t w : bits_)
    if (w) return false;
  return true;
}

std::uint64_t NodeSet::count() const {
  std::uint64_t n = 0;
  for (std::uint64_t w : bits_)
    n += static_cast<std::uint64_t>(__builtin_popcountll(w));
  return n;
}

bool NodeSet::subset_of(const NodeSet& o) const {
  check_same(o);
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i] & ~o.bits_[i]) return false;
  return true;
}

}  // namespace prefq
