#include "onlinearc/ladder.hpp"

#include <algorithm>

namespace oarc {

void LevelCounts::add(std::size_t level) {
  for (std::size_t i = level; i < tree_.size(); i += i & (~i + 1)) ++tree_[i];
}

std::size_t LevelCounts::prefix(std::size_t k) const {
  std::size_t sum = 0;
  for (std::size_t i = std::min(k, capacity()); i > 0; i -= i & (~i + 1)) sum += tree_[i];
  return sum;
}

LevelLadder::LevelLadder() { grow(64); }

void LevelLadder::grow(std::size_t capacity) {
  counts_ = LevelCounts(capacity);
  buckets_.assign(capacity + 1, {});
  for (std::size_t i = 1; i <= levels_.size(); ++i) {
    const std::size_t lv = levels_[i - 1];
    if (lv <= capacity) {
      counts_.add(lv);
      buckets_[lv].push_back(i);
    }
  }
}

std::vector<std::size_t> LevelLadder::push(std::size_t level) {
  levels_.push_back(level);
  const std::size_t t = levels_.size();
  if (t > counts_.capacity()) {
    grow(2 * counts_.capacity());
  } else if (level <= counts_.capacity()) {
    counts_.add(level);
    buckets_[level].push_back(t);
  }

  // Largest k <= t with c(k) >= k. If c(k) < k, every k' in (c(k), k] fails
  // too, so jump to c(k). The previous k* always qualifies.
  const std::size_t old_k = k_star_;
  std::size_t k = t;
  while (k > old_k) {
    const std::size_t c = counts_.prefix(k);
    if (c >= k) break;
    k = c;
  }
  k_star_ = std::max(k, old_k);

  std::vector<std::size_t> joined;
  for (std::size_t lv = old_k + 1; lv <= k_star_; ++lv) {
    joined.insert(joined.end(), buckets_[lv].begin(), buckets_[lv].end());
  }
  if (level <= old_k) joined.push_back(t);
  std::sort(joined.begin(), joined.end());
  return joined;
}

std::vector<std::size_t> DeadlineLadder::push(std::size_t level, std::size_t deadline) {
  levels_.push_back(level);
  deadlines_.push_back(deadline);
  rejected_.push_back(0);
  const std::size_t t = levels_.size();

  // Hypotheses whose deadline is t-1 leave the active set now.
  std::size_t kept = 0;
  for (std::size_t i : active_) {
    if (deadlines_[i - 1] >= t) {
      active_[kept++] = i;
    } else if (rejected_[i - 1]) {
      ++frozen_rejected_;
    }
  }
  active_.resize(kept);
  active_.push_back(t);

  // Histogram of shifted levels max(level - F, 1), capped at |C_t|.
  const std::size_t n_active = active_.size();
  const std::size_t F = frozen_rejected_;
  scratch_.assign(n_active + 1, 0);
  for (std::size_t i : active_) {
    const std::size_t lv = levels_[i - 1];
    if (lv == kInfinite) continue;
    const std::size_t shifted = lv > F ? lv - F : 1;
    if (shifted <= n_active) ++scratch_[shifted];
  }
  std::size_t cumulative = 0;
  for (std::size_t k = 1; k <= n_active; ++k) {
    cumulative += scratch_[k];
    scratch_[k] = cumulative;
  }
  std::size_t best = 0;
  for (std::size_t k = n_active; k >= 1; --k) {
    if (scratch_[k] >= k) {
      best = k;
      break;
    }
  }
  k_star_ = F + best;
  k_history_.push_back(k_star_);

  std::vector<std::size_t> joined;
  for (std::size_t i : active_) {
    if (!rejected_[i - 1] && levels_[i - 1] <= k_star_) {
      rejected_[i - 1] = 1;
      joined.push_back(i);
    }
  }
  std::sort(joined.begin(), joined.end());
  return joined;
}

}  // namespace oarc
