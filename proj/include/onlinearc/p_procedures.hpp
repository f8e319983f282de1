#pragma once

// Streaming p-value procedures: online BH, LOND, r-LOND, online BR, TOAD,
// online Storey-BH and the LORD++ / SAFFRON baselines.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "onlinearc/e_procedures.hpp"
#include "onlinearc/ladder.hpp"
#include "onlinearc/procedure.hpp"

namespace oarc {

/// Reshaping beta(k) = int_0^k x dnu(x) for a probability measure nu on (0, inf).
class ShapeFunction {
 public:
  enum class Variant { Identity, BY, CustomMeasure };

  /// beta(k) = k.
  static ShapeFunction identity();
  /// nu(x) proportional to 1/x on {1..K}: beta(k) = min(k, K) / l_K.
  static ShapeFunction by(std::size_t K);
  /// Discrete measure with atoms (x_i, w_i), x_i > 0, w_i >= 0, sum w_i = 1.
  static ShapeFunction custom(std::vector<std::pair<double, double>> atoms);

  double operator()(std::size_t k) const;
  Variant variant() const { return variant_; }
  std::string describe() const;

  /// Smallest k with P <= beta(k) alpha gamma, kInfinite if none.
  std::size_t level(double p, double alpha, double gamma) const;

 private:
  Variant variant_ = Variant::Identity;
  std::size_t K_ = 0;
  double ell_ = 1.0;
  std::vector<double> atoms_x_;   // ascending
  std::vector<double> cumulative_;  // cumulative_[i] = sum_{j <= i} x_j w_j
};

/// P <= beta_k alpha gamma; a zero beta_k (like a zero gamma) rejects nothing.
inline bool shape_passes(double p, double beta_k, double alpha, double gamma) {
  return beta_k > 0.0 && p_passes(p, beta_k, alpha, gamma);
}

/// Online BH: k*_t = max{k <= t : #{j <= t : P_j <= k alpha gamma_j} >= k}.
class OnlineBh : public OnlineProcedure {
 public:
  OnlineBh(WeightSequence weights, double alpha);

  std::string name() const override { return "o-bh"; }
  ScoreKind kind() const override { return ScoreKind::PValue; }

 protected:
  std::vector<std::size_t> advance() override;

 private:
  LevelLadder ladder_;
};

/// LOND: rejects H_t iff P_t <= alpha gamma_t (|R_{t-1}| + 1).
class Lond : public OnlineProcedure {
 public:
  Lond(WeightSequence weights, double alpha);

  std::string name() const override { return "lond"; }
  ScoreKind kind() const override { return ScoreKind::PValue; }
  bool fully_online() const override { return true; }

 protected:
  std::vector<std::size_t> advance() override;
};

/// r-LOND: rejects H_t iff P_t <= alpha gamma_t beta(|R_{t-1}| + 1).
class RLond : public OnlineProcedure {
 public:
  RLond(WeightSequence weights, double alpha, ShapeFunction beta);

  std::string name() const override { return "r-lond"; }
  ScoreKind kind() const override { return ScoreKind::PValue; }
  bool fully_online() const override { return true; }

 protected:
  std::vector<std::size_t> advance() override;

 private:
  ShapeFunction beta_;
};

/// Online BR: online BH with thresholds alpha gamma_j beta(k).
class OnlineBr : public OnlineProcedure {
 public:
  OnlineBr(WeightSequence weights, double alpha, ShapeFunction beta);

  std::string name() const override { return "o-br"; }
  ScoreKind kind() const override { return ScoreKind::PValue; }

 protected:
  std::vector<std::size_t> advance() override;

 private:
  ShapeFunction beta_;
  LevelLadder ladder_;
};

/// TOAD: online BR with decision deadlines. `shapes[t-1]` applies to H_t; the
/// last entry covers every later index.
class Toad : public OnlineProcedure {
 public:
  Toad(WeightSequence weights, double alpha, DeadlineSchedule deadlines,
       std::vector<ShapeFunction> shapes);
  Toad(WeightSequence weights, double alpha, DeadlineSchedule deadlines, ShapeFunction beta);

  std::string name() const override { return "toad"; }
  ScoreKind kind() const override { return ScoreKind::PValue; }

  const DeadlineLadder& ladder() const { return ladder_; }

 protected:
  std::vector<std::size_t> advance() override;

 private:
  DeadlineSchedule deadlines_;
  std::vector<ShapeFunction> shapes_;
  DeadlineLadder ladder_;
};

/// Online Storey-BH. With pi0_t = (max_i gamma_i + sum_i gamma_i 1{P_i > lambda
/// or i > t}) / (1 - lambda), rejects {i : P_i <= min(k*_t alpha gamma_i / pi0_t, lambda)}.
class OnlineStoreyBh : public OnlineProcedure {
 public:
  OnlineStoreyBh(WeightSequence weights, double alpha, double lambda);

  std::string name() const override { return "o-sbh"; }
  ScoreKind kind() const override { return ScoreKind::PValue; }

  double lambda() const { return lambda_; }
  double gamma_max() const { return state_.weights().max_weight(); }
  /// sum_{i <= t} gamma_i 1{P_i > lambda}
  double over_lambda_mass() const { return over_lambda_mass_; }
  /// sum_{i > t} gamma_i
  double tail_mass() const { return state_.weights().tail_mass(state_.time()); }
  double pi0_hat() const { return pi0_; }

  /// Rejection threshold for P_i at level k under the current estimate.
  double threshold(std::size_t i, std::size_t k) const;

 protected:
  std::vector<std::size_t> advance() override;

 private:
  /// Smallest passing level of candidate i, or kInfinite if above `cap`.
  std::size_t level_of(std::size_t i, std::size_t cap) const;

  double lambda_;
  double candidate_mass_ = 0.0;  // sum_{i <= t} gamma_i 1{P_i <= lambda}
  double over_lambda_mass_ = 0.0;
  double pi0_;
  std::vector<std::size_t> candidates_;  // indices with P_i <= lambda
  std::vector<std::size_t> levels_;      // levels_[c] for candidates_[c]
  std::vector<std::size_t> hist_;
};

/// LORD++ with spending sequence gamma:
/// alpha_t = w0 gamma_t + (alpha - w0) gamma_{t - tau_1} 1{tau_1 < t}
///           + alpha sum_{j >= 2} gamma_{t - tau_j}.
class Lord : public OnlineProcedure {
 public:
  /// w0 defaults to alpha; must lie in (0, alpha].
  Lord(WeightSequence weights, double alpha, double w0 = -1.0);

  std::string name() const override { return "lord"; }
  ScoreKind kind() const override { return ScoreKind::PValue; }
  bool fully_online() const override { return true; }

  double w0() const { return w0_; }
  /// alpha_t of the most recent step.
  double last_level() const { return last_level_; }
  /// sum_{i <= t} alpha_i
  double spent() const { return spent_; }
  /// sum_{i <= t} alpha_i <= alpha (|R_t| v 1)
  bool condition_holds() const;

 protected:
  std::vector<std::size_t> advance() override;

 private:
  double w0_;
  double spent_ = 0.0;
  double last_level_ = 0.0;
};

/// SAFFRON with candidate threshold lambda:
/// alpha_t = min(lambda, (1 - lambda) [w0 gamma_{t - C_0+} + (alpha - w0) gamma_{t - tau_1 - C_1+}
///           + alpha sum_{j >= 2} gamma_{t - tau_j - C_j+}]),
/// where C_j+ counts candidates (P_i <= lambda) strictly between tau_j and t.
class Saffron : public OnlineProcedure {
 public:
  /// w0 defaults to alpha / 2; must lie in (0, alpha].
  Saffron(WeightSequence weights, double alpha, double lambda = 0.5, double w0 = -1.0);

  std::string name() const override { return "saffron"; }
  ScoreKind kind() const override { return ScoreKind::PValue; }
  bool fully_online() const override { return true; }

  double lambda() const { return lambda_; }
  double w0() const { return w0_; }
  double last_level() const { return last_level_; }
  /// sum_{i <= t} alpha_i 1{P_i > lambda} / (1 - lambda)
  double spent() const { return spent_; }
  /// spent() <= alpha (|R_t| v 1)
  bool condition_holds() const;

 protected:
  std::vector<std::size_t> advance() override;

 private:
  double lambda_;
  double w0_;
  double spent_ = 0.0;
  double last_level_ = 0.0;
  std::vector<std::size_t> candidates_prefix_;  // [t] = #candidates among 1..t
};

}  // namespace oarc
