// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "prefq/common.hpp"

namespace prefq {

// A node of the induced preference graph: outcome index 0..n-1, or the
// synthetic worst node.
using NodeId = std::int64_t;
inline constexpr NodeId kBottom = -1;

// Fixed-universe bitset over the nodes of one graph: n outcomes plus the
// synthetic worst node, which is stored at position n so ascending iteration
// yields outcomes first. All binary operations require operands built for the
// same universe.
class NodeSet {
 public:
  NodeSet() = default;
  explicit NodeSet(std::uint64_t n_outcomes)
      : n_(n_outcomes), bits_((n_outcomes + 1 + 63) / 64, 0) {}

  static NodeSet all_outcomes(std::uint64_t n) {
    NodeSet s(n);
    for (std::uint64_t i = 0; i < n; ++i) s.insert(static_cast<NodeId>(i));
    return s;
  }
  static NodeSet full_universe(std::uint64_t n) {
    NodeSet s = all_outcomes(n);
    s.insert(kBottom);
    return s;
  }

  std::uint64_t n_outcomes() const { return n_; }

  bool contains(NodeId node) const {
    std::uint64_t b = bit_of(node);
    return (bits_[b >> 6] >> (b & 63)) & 1;
  }
  void insert(NodeId node) {
    std::uint64_t b = bit_of(node);
    bits_[b >> 6] |= std::uint64_t{1} << (b & 63);
  }
  void erase(NodeId node) {
    std::uint64_t b = bit_of(node);
    bits_[b >> 6] &= ~(std::uint64_t{1} << (b & 63));
  }

  bool contains_bottom() const { return contains(kBottom); }
  NodeSet without_bottom() const {
    NodeSet s = *this;
    s.erase(kBottom);
    return s;
  }

  NodeSet& operator&=(const NodeSet& o);
  NodeSet& operator|=(const NodeSet& o);
  NodeSet& subtract(const NodeSet& o);

  friend NodeSet operator&(NodeSet a, const NodeSet& b) { return a &= b; }
  friend NodeSet operator|(NodeSet a, const NodeSet& b) { return a |= b; }
  friend NodeSet minus(NodeSet a, const NodeSet& b) { return a.subtract(b); }

  bool empty() const;
  std::uint64_t count() const;
  bool subset_of(const NodeSet& o) const;

  friend bool operator==(const NodeSet&, const NodeSet&) = default;

  // Ascending outcome ids, then kBottom if present.
  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t w = 0; w < bits_.size(); ++w) {
      std::uint64_t word = bits_[w];
      while (word) {
        std::uint64_t bit = static_cast<std::uint64_t>(w) * 64 +
                            static_cast<std::uint64_t>(__builtin_ctzll(word));
        fn(bit == n_ ? kBottom : static_cast<NodeId>(bit));
        word &= word - 1;
      }
    }
  }

  std::vector<NodeId> to_vector() const {
    std::vector<NodeId> out;
    out.reserve(static_cast<std::size_t>(count()));
    for_each([&](NodeId n) { out.push_back(n); });
    return out;
  }

 private:
  std::uint64_t bit_of(NodeId node) const {
    if (node == kBottom) return n_;
    if (node < 0 || static_cast<std::uint64_t>(node) >= n_)
      throw InternalError("node id outside the set universe");
    return static_cast<std::uint64_t>(node);
  }
  void check_same(const NodeSet& o) const {
    if (n_ != o.n_) throw InternalError("node sets from different universes");
  }

  std::uint64_t n_ = 0;
  std::vector<std::uint64_t> bits_{0};
};

}  // namespace prefq
