#pragma once

// Incremental maximisation shared by the ARC procedures.
//
// Every hypothesis j carries a "level": the smallest k at which it clears its
// threshold (E_j >= 1/(k alpha gamma_j), P_j <= k alpha gamma_j, ...). With
// c_t(k) = #{j <= t : level_j <= k}, the procedures need
//
//     k*_t = max{ k <= t : c_t(k) >= k },   max(empty) = 0,
//
// and reject {j <= t : level_j <= k*_t}. c_t only grows with t, so k*_t is
// nondecreasing and the rejection sets are nested.

#include <cstddef>
#include <vector>

#include "onlinearc/core.hpp"

namespace oarc {

/// Fenwick tree over levels 1..capacity.
class LevelCounts {
 public:
  explicit LevelCounts(std::size_t capacity = 0) : tree_(capacity + 1, 0) {}
  std::size_t capacity() const { return tree_.size() - 1; }
  void add(std::size_t level);
  /// Number of stored levels <= k (k clamped to capacity).
  std::size_t prefix(std::size_t k) const;

 private:
  std::vector<std::size_t> tree_;
};

class LevelLadder {
 public:
  LevelLadder();

  /// Appends hypothesis t = size()+1 with the given level (kInfinite allowed)
  /// and returns the indices that join the rejection set, ascending.
  std::vector<std::size_t> push(std::size_t level);

  std::size_t k_star() const { return k_star_; }
  std::size_t size() const { return levels_.size(); }
  std::size_t level(std::size_t i) const { return levels_[i - 1]; }
  bool rejected(std::size_t i) const { return levels_[i - 1] <= k_star_; }

 private:
  void grow(std::size_t capacity);

  std::vector<std::size_t> levels_;
  LevelCounts counts_;
  std::vector<std::vector<std::size_t>> buckets_;  // buckets_[k]: indices with level k
  std::size_t k_star_ = 0;
};

/// k* recursion with decision deadlines d_t >= t. Active set
/// C_t = {i <= t : d_i >= t}; rejected hypotheses whose deadline passed are
/// frozen and counted as F_t = |R_{t-1} \ C_t|, and
///
///     k*_t = F_t + max{ k <= |C_t| : #{j in C_t : level_j <= F_t + k} >= k }.
///
/// Active j is rejected iff level_j <= k*_t; frozen decisions never change.
class DeadlineLadder {
 public:
  /// Appends hypothesis t with its level and deadline (kInfinite = none).
  std::vector<std::size_t> push(std::size_t level, std::size_t deadline);

  std::size_t k_star() const { return k_star_; }
  std::size_t size() const { return levels_.size(); }
  bool rejected(std::size_t i) const { return rejected_[i - 1] != 0; }
  std::size_t frozen_rejections() const { return frozen_rejected_; }
  const std::vector<std::size_t>& active() const { return active_; }
  /// k*_t for every past t (1-based).
  std::size_t k_star_at(std::size_t t) const { return t == 0 ? 0 : k_history_[t - 1]; }

 private:
  std::vector<std::size_t> levels_;
  std::vector<std::size_t> deadlines_;
  std::vector<char> rejected_;
  std::vector<std::size_t> active_;
  std::vector<std::size_t> k_history_;
  std::vector<std::size_t> scratch_;
  std::size_t frozen_rejected_ = 0;
  std::size_t k_star_ = 0;
};

}  // namespace oarc
