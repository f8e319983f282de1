#pragma once

// Domain types shared by every procedure: scores, weight sequences,
// rejection sets and the per-stream state that procedures mutate.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace oarc {

/// Sentinel for "no finite level" / "no deadline".
inline constexpr std::size_t kInfinite = std::numeric_limits<std::size_t>::max();

/// Largest level the threshold search probes before declaring a score unreachable.
inline constexpr std::size_t kMaxLevel = std::size_t{1} << 53;

/// Weight-sum slack tolerated by WeightSequence validation.
inline constexpr double kWeightSlack = 1e-12;

enum class ScoreKind { PValue, EValue };

std::string to_string(ScoreKind kind);

/// A validated score. p-values live in [0, 1]; e-values in [0, +inf].
struct Score {
  double value = 0.0;
  ScoreKind kind = ScoreKind::PValue;

  static Score p(double value);
  static Score e(double value);
};

/// Throws InputError when `value` is outside the range allowed for `kind`.
void validate_score(double value, ScoreKind kind);

/// Nonnegative per-hypothesis weights gamma_1, gamma_2, ... with total mass <= 1.
class WeightSequence {
 public:
  enum class Form { Explicit, Geometric, UniformFinite };

  /// Weights beyond the end of the list are zero.
  static WeightSequence explicit_list(std::vector<double> weights);
  /// gamma_t = q^(t-1) (1 - q), 0 < q < 1.
  static WeightSequence geometric(double q);
  /// gamma_t = 1/K for t <= K, zero afterwards.
  static WeightSequence uniform(std::size_t K);

  /// Weight of hypothesis t (1-based).
  double operator()(std::size_t t) const;
  /// Sum of gamma_i over i > t.
  double tail_mass(std::size_t t) const;
  /// Supremum of the whole sequence.
  double max_weight() const { return max_weight_; }
  /// Sum of the whole sequence.
  double total_mass() const { return total_mass_; }

  Form form() const { return form_; }
  double q() const { return q_; }
  /// K for UniformFinite, list length for Explicit, kInfinite for Geometric.
  std::size_t horizon() const;
  std::string describe() const;

 private:
  WeightSequence() = default;

  Form form_ = Form::UniformFinite;
  double q_ = 0.0;
  std::size_t K_ = 0;
  std::vector<double> weights_;
  std::vector<double> suffix_;  // suffix_[t] = sum_{i > t} weights_[i-1]
  double max_weight_ = 0.0;
  double total_mass_ = 0.0;
};

/// Rejected hypothesis indices (1-based, ascending) current at step `time`.
struct RejectionSet {
  std::vector<std::size_t> indices;
  std::size_t time = 0;

  std::size_t size() const { return indices.size(); }
  bool empty() const { return indices.empty(); }
  bool contains(std::size_t i) const;
  bool is_subset_of(const RejectionSet& other) const;
};

// Threshold predicates. Every procedure, oracle-free check and truncation
// function goes through these so that ties resolve identically everywhere.

/// E >= 1 / (level * alpha * gamma); never true when gamma == 0.
inline bool e_passes(double e, double level, double alpha, double gamma) {
  if (!(gamma > 0.0)) return false;
  return e >= 1.0 / (level * alpha * gamma);
}

/// P <= level * alpha * gamma; never true when gamma == 0.
inline bool p_passes(double p, double level, double alpha, double gamma) {
  if (!(gamma > 0.0)) return false;
  return p <= level * alpha * gamma;
}

/// Grid value 1 / (k alpha gamma) of the e-value rejection ladder.
inline double e_grid(std::size_t k, double alpha, double gamma) {
  return 1.0 / (static_cast<double>(k) * alpha * gamma);
}

/// Smallest k >= 1 with passes(k), or kInfinite when none up to kMaxLevel.
/// `passes` must be monotone (false ... false true ... true); `hint` only
/// affects speed.
template <class Pred>
std::size_t first_passing_level(Pred&& passes, std::size_t hint) {
  if (hint < 1) hint = 1;
  if (hint > kMaxLevel) hint = kMaxLevel;
  std::size_t lo;  // fails (0 means "nothing known to fail")
  std::size_t hi;  // passes
  if (passes(hint)) {
    hi = hint;
    std::size_t step = 1;
    lo = 0;
    while (hi > 1) {
      const std::size_t probe = hi > step ? hi - step : 1;
      if (!passes(probe)) {
        lo = probe;
        break;
      }
      hi = probe;
      step *= 2;
    }
    if (hi == 1) return 1;
  } else {
    lo = hint;
    std::size_t step = 1;
    for (;;) {
      if (lo >= kMaxLevel) return kInfinite;
      const std::size_t probe = (kMaxLevel - lo > step) ? lo + step : kMaxLevel;
      if (passes(probe)) {
        hi = probe;
        break;
      }
      lo = probe;
      step *= 2;
    }
  }
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (passes(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

/// Smallest k with E >= 1/(k alpha gamma); kInfinite if gamma == 0 or E == 0.
std::size_t e_level(double e, double alpha, double gamma);

/// Smallest k with P <= k alpha gamma; kInfinite if gamma == 0.
std::size_t p_level(double p, double alpha, double gamma);

/// Mutable state of one stream: scores seen so far plus the nested rejection
/// history, stored as the step at which each index joined the rejection set.
class StreamState {
 public:
  StreamState(WeightSequence weights, double alpha);

  const WeightSequence& weights() const { return weights_; }
  double alpha() const { return alpha_; }
  std::size_t time() const { return scores_.size(); }
  std::span<const double> scores() const { return scores_; }
  double score(std::size_t i) const { return scores_[i - 1]; }
  double gamma(std::size_t i) const { return i >= 1 && i <= gammas_.size() ? gammas_[i - 1] : weights_(i); }

  std::size_t k_star() const { return k_star_; }
  std::size_t num_rejected() const { return order_.size(); }
  bool is_rejected(std::size_t i) const { return i >= 1 && i <= join_.size() && join_[i - 1] != 0; }
  /// Step at which index i joined the rejection set, 0 if never.
  std::size_t join_time(std::size_t i) const { return join_[i - 1]; }
  /// Rejected indices in the order they joined.
  const std::vector<std::size_t>& rejected_in_order() const { return order_; }

  RejectionSet rejection_set() const;
  /// R_t for any past t, reconstructed from join times.
  RejectionSet rejection_set_at(std::size_t t) const;

  void append(double score);
  void set_k_star(std::size_t k) { k_star_ = k; }
  /// Marks i rejected at the current step. Returns false if already rejected.
  bool reject(std::size_t i);

 private:
  WeightSequence weights_;
  double alpha_;
  std::vector<double> scores_;
  std::vector<double> gammas_;  // gamma_i cached for i <= time()
  std::vector<std::size_t> join_;
  std::vector<std::size_t> order_;
  std::size_t k_star_ = 0;
};

/// Result of feeding one score to a procedure.
struct StepResult {
  std::size_t t = 0;
  std::size_t k_star = 0;
  /// Indices that joined the rejection set at this step, ascending.
  std::vector<std::size_t> newly_rejected;
};

/// True iff every t in `candidate` clears the threshold implied by |candidate|.
/// Indices are 1-based. Throws InputError on out-of-range indices or mixed kinds.
bool is_self_consistent(std::span<const std::size_t> candidate, std::span<const Score> scores,
                        const WeightSequence& weights, double alpha);

/// Same predicate for a homogeneous raw score list.
bool is_self_consistent(std::span<const std::size_t> candidate, std::span<const double> scores,
                        ScoreKind kind, const WeightSequence& weights, double alpha);

/// l_K = sum_{i=1}^K 1/i.
double harmonic_number(std::size_t K);

void validate_alpha(double alpha);

}  // namespace oarc
