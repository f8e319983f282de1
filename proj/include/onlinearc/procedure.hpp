#pragma once

#include <string>
#include <vector>

#include "onlinearc/core.hpp"

namespace oarc {

/// Common driver for all streaming procedures. Subclasses implement
/// `advance`, which sees the state with the new score already appended and
/// returns the indices joining the rejection set at this step.
class OnlineProcedure {
 public:
  virtual ~OnlineProcedure() = default;

  virtual std::string name() const = 0;
  virtual ScoreKind kind() const = 0;
  /// True when decisions are final the moment they are made (LOND, LORD, ...).
  virtual bool fully_online() const { return false; }

  /// Validates `score` against kind(), appends it and updates R_t.
  StepResult step(double score);

  const StreamState& state() const { return state_; }
  std::size_t time() const { return state_.time(); }
  std::size_t k_star() const { return state_.k_star(); }
  RejectionSet rejection_set() const { return state_.rejection_set(); }

 protected:
  OnlineProcedure(WeightSequence weights, double alpha) : state_(std::move(weights), alpha) {}

  /// Maps the validated input to the value stored in the stream (identity
  /// except for boosted procedures).
  virtual double preprocess(double score) { return score; }
  virtual std::vector<std::size_t> advance() = 0;

  StreamState state_;
};

}  // namespace oarc
