#pragma once

// Streaming e-value procedures: online e-BH, e-LOND and e-TOAD.

#include <cstddef>
#include <vector>

#include "onlinearc/ladder.hpp"
#include "onlinearc/procedure.hpp"

namespace oarc {

/// Decision deadlines d_t >= t; kInfinite means the decision never freezes.
class DeadlineSchedule {
 public:
  /// d_t = infinity for all t.
  static DeadlineSchedule none();
  /// d_t = t: every decision is final immediately.
  static DeadlineSchedule immediate();
  /// d_t = t + lag.
  static DeadlineSchedule fixed_lag(std::size_t lag);
  /// Explicit d_1, d_2, ...; indices past the list get no deadline.
  static DeadlineSchedule explicit_list(std::vector<std::size_t> deadlines);

  std::size_t operator()(std::size_t t) const;
  std::string describe() const;

 private:
  enum class Form { None, Lag, Explicit };
  Form form_ = Form::None;
  std::size_t lag_ = 0;
  std::vector<std::size_t> list_;
};

/// Online e-BH: R_t = {i <= t : E_i >= 1/(k*_t alpha gamma_i)} with
/// k*_t = max{k <= t : #{j <= t : E_j >= 1/(k alpha gamma_j)} >= k}.
class OnlineEbh : public OnlineProcedure {
 public:
  OnlineEbh(WeightSequence weights, double alpha);

  std::string name() const override { return "oe-bh"; }
  ScoreKind kind() const override { return ScoreKind::EValue; }

 protected:
  std::vector<std::size_t> advance() override;

 private:
  LevelLadder ladder_;
};

/// e-LOND: rejects H_t iff E_t >= 1/(alpha gamma_t (|R_{t-1}| + 1)).
class ELond : public OnlineProcedure {
 public:
  ELond(WeightSequence weights, double alpha);

  std::string name() const override { return "e-lond"; }
  ScoreKind kind() const override { return ScoreKind::EValue; }
  bool fully_online() const override { return true; }

 protected:
  std::vector<std::size_t> advance() override;
};

/// e-TOAD: online e-BH with decision deadlines.
class ETOAD : public OnlineProcedure {
 public:
  ETOAD(WeightSequence weights, double alpha, DeadlineSchedule deadlines);

  std::string name() const override { return "e-toad"; }
  ScoreKind kind() const override { return ScoreKind::EValue; }

  const DeadlineLadder& ladder() const { return ladder_; }

 protected:
  std::vector<std::size_t> advance() override;

 private:
  DeadlineSchedule deadlines_;
  DeadlineLadder ladder_;
};

}  // namespace oarc
