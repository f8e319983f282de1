#pragma once

// False-discovery and power metrics over rejection histories.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "onlinearc/core.hpp"

namespace oarc {

/// is_null[i-1] is true when H_i is a true null (i in I_0).
struct GroundTruth {
  std::vector<char> is_null;

  std::size_t size() const { return is_null.size(); }
  bool null(std::size_t i) const { return is_null[i - 1] != 0; }
  std::size_t num_nulls() const;
  std::size_t num_non_nulls() const { return size() - num_nulls(); }
};

/// |R cap I_0| / (|R| v 1). Throws InputError if R has an index outside the truth labels.
double fdp(const RejectionSet& rejections, const GroundTruth& truth);

/// FDP_t for t = 1..n plus the running maximum.
struct FdpPath {
  std::vector<double> values;  // values[t-1] = FDP_t
  double sup_fdp = 0.0;

  /// max_{t <= K} FDP_t (K clamped to the path length).
  double sup_up_to(std::size_t K) const;
};

/// Everything a stopping rule may look at: scores and |R_t|, never labels.
struct ObservableHistory {
  std::span<const double> scores;
  std::span<const std::size_t> num_rejected;  // num_rejected[t-1] = |R_t|
};

class StoppingRule {
 public:
  /// Stop at T (or at the end of the stream if it is shorter).
  static StoppingRule fixed_time(std::size_t T);
  /// Stop at the time of the j-th rejection, or at the end of the stream.
  static StoppingRule jth_rejection(std::size_t j);

  std::size_t stop_time(const ObservableHistory& history) const;

 private:
  enum class Kind { Fixed, JthRejection };
  Kind kind_ = Kind::Fixed;
  std::size_t param_ = 0;
};

/// One simulated stream for one procedure.
struct TrialRecord {
  FdpPath path;
  std::vector<std::size_t> num_rejected;     // |R_t|
  std::vector<std::size_t> true_discoveries;  // |R_t \ I_0|
  std::vector<double> scores;
  std::size_t num_non_nulls = 0;

  double power() const;
  ObservableHistory history() const { return {scores, num_rejected}; }
};

/// Builds the record from a finished stream's join times.
TrialRecord make_trial_record(const StreamState& state, const GroundTruth& truth);

/// Per-trial scalars that estimate_metrics averages.
struct TrialSummary {
  double fdp_end = 0.0;
  double sup_fdp = 0.0;
  double sup_fdp_k = 0.0;
  double stop_fdp = 0.0;
  double power = 0.0;
};

TrialSummary summarize_trial(const TrialRecord& record, std::size_t K,
                             const std::optional<StoppingRule>& rule = std::nullopt);

struct Estimate {
  double mean = 0.0;
  double se = 0.0;  // sample SD / sqrt(m)
};

struct MetricsSummary {
  Estimate fdr_at_end;
  Estimate sup_fdr;
  Estimate sup_fdr_k;
  Estimate stop_fdr;
  Estimate power;
  std::size_t trials = 0;
};

/// Mean and standard error of a sample; needs at least two values.
Estimate estimate(std::span<const double> values);

/// Averages over trials in index order. Throws InputError for fewer than two trials.
MetricsSummary estimate_metrics(std::span<const TrialSummary> trials);
MetricsSummary estimate_metrics(std::span<const TrialRecord> trials, std::size_t K,
                                const std::optional<StoppingRule>& rule = std::nullopt);

}  // namespace oarc
