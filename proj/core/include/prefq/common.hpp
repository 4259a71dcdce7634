// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace prefq {

// Outcome spaces larger than this are refused by every operation that would
// have to enumerate them.
inline constexpr std::uint64_t kDefaultMaterializeLimit = std::uint64_t{1} << 20;

struct SourcePos {
  int line = 0;  // 1-based, 0 means unknown
  int col = 0;
};

// Malformed input text. Always carries the position of the offending token.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, SourcePos pos)
      : std::runtime_error(format(what, pos)), pos_(pos) {}
  SourcePos pos() const { return pos_; }

 private:
  static std::string format(const std::string& what, SourcePos pos) {
    if (pos.line <= 0) return what;
    return what + " at line " + std::to_string(pos.line) + ", column " +
           std::to_string(pos.col);
  }
  SourcePos pos_;
};

// Well-formed input that names things which do not exist or violates a
// documented restriction (unknown variable, stakeholder outside the profile,
// inconsistent statement, ...).
class SemanticError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An operation would enumerate more outcomes or edges than the configured
// materialization limit allows.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A cooperative deadline expired inside an engine loop.
class TimeoutError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A broken internal invariant: engine disagreement, a fixpoint that failed to
// stabilize within its proven bound, and similar conditions that indicate a
// bug rather than bad input.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Cooperative timeout token passed into long-running evaluations. poll() is
// cheap enough for inner loops: it only reads the clock every 256 calls.
class Deadline {
 public:
  Deadline() = default;

  static Deadline after_ms(std::int64_t ms) {
    Deadline d;
    d.enabled_ = true;
    d.at_ = std::chrono::steady_clock::now() + std::chrono::milliseconds(ms);
    return d;
  }

  bool enabled() const { return enabled_; }

  void poll() const {
    if (!enabled_) return;
    if (++tick_ % 256 != 0) return;
    if (std::chrono::steady_clock::now() >= at_)
      throw TimeoutError("evaluation deadline exceeded");
  }

 private:
  std::chrono::steady_clock::time_point at_{};
  bool enabled_ = false;
  mutable std::uint32_t tick_ = 0;
};

// Sorted set of stakeholder ids. Ids are positive and usually tiny, so a
// sorted vector beats anything fancier at the scales we run.
class StakeholderSet {
 public:
  StakeholderSet() = default;
  explicit StakeholderSet(std::vector<int> ids);
  StakeholderSet(std::initializer_list<int> ids)
      : StakeholderSet(std::vector<int>(ids)) {}

  static StakeholderSet single(int id) { return StakeholderSet({id}); }

  bool empty() const { return ids_.empty(); }
  std::size_t size() const { return ids_.size(); }
  bool contains(int id) const;
  bool intersects(const StakeholderSet& other) const;
  bool subset_of(const StakeholderSet& other) const;
  void insert(int id);
  void merge(const StakeholderSet& other);

  const std::vector<int>& ids() const { return ids_; }
  auto begin() const { return ids_.begin(); }
  auto end() const { return ids_.end(); }

  friend bool operator==(const StakeholderSet&, const StakeholderSet&) = default;

  // "{1,2,3}"
  std::string to_string() const;

 private:
  std::vector<int> ids_;  // sorted, unique
};

// Deterministic random source. The algorithm is pinned on purpose: mt19937_64
// seeded directly, bounded draws by rejection sampling (no modulo bias, no
// libstdc++-specific distribution code), doubles from the top 53 bits, and
// Fisher-Yates shuffles driven by below(). Two builds on different platforms
// given the same seed produce identical streams, so generated instances are
// reproducible bit for bit.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  // Uniform draw from [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);

  // Uniform draw from [lo, hi], inclusive on both ends.
  std::int64_t range(std::int64_t lo, std::int64_t hi);

  // Uniform in [0, 1).
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool chance(double p) { return unit() < p; }

  template <typename T>
  const T& pick(const std::vector<T>& xs) {
    return xs[below(xs.size())];
  }

  template <typename T>
  void shuffle(std::vector<T>& xs) {
    for (std::size_t i = xs.size(); i > 1; --i) {
      std::size_t j = below(i);
      std::swap(xs[i - 1], xs[j]);
    }
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace prefq
