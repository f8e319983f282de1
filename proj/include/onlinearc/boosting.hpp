#pragma once

// Truncation functions, boosting-factor solver for Gaussian likelihood-ratio
// e-values, p-to-e transforms and the boosted online e-BH procedure.

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "onlinearc/e_procedures.hpp"
#include "onlinearc/ladder.hpp"
#include "onlinearc/p_procedures.hpp"

namespace oarc {

/// Standard normal CDF, 0.5 erfc(-z / sqrt 2).
double normal_cdf(double z);
/// Upper tail 1 - Phi(z), computed without cancellation.
double normal_sf(double z);
double normal_pdf(double z);

enum class TruncationVariant { Full, Plus, Minus, Local, LocalPlus, LocalMinus, Toad, Prds };

std::string to_string(TruncationVariant v);

/// Parameters of one truncation function. With a = alpha gamma and grid
/// g_k = 1/(k a), every variant maps x to a grid value, zero, or (Plus
/// family, below the cutoff) x itself.
struct TruncationSpec {
  double alpha = 0.05;
  double gamma = 0.01;
  TruncationVariant variant = TruncationVariant::Full;
  std::size_t s = kInfinite;    // cutoff for Plus/Minus families
  std::size_t lag_kstar = 0;    // k*_{t - L_t - 1} for Local families
  std::size_t deadline = kInfinite;  // d_t for Toad

  static TruncationSpec full(double alpha, double gamma);
  static TruncationSpec plus(double alpha, double gamma, std::size_t s);
  static TruncationSpec minus(double alpha, double gamma, std::size_t s);
  static TruncationSpec local(double alpha, double gamma, std::size_t lag_kstar);
  static TruncationSpec local_plus(double alpha, double gamma, std::size_t s, std::size_t lag_kstar);
  static TruncationSpec local_minus(double alpha, double gamma, std::size_t s, std::size_t lag_kstar);
  static TruncationSpec toad(double alpha, double gamma, std::size_t deadline);
  static TruncationSpec prds(double alpha, double gamma);

  /// Throws ConfigError on inconsistent parameters.
  void validate() const;
  bool has_finite_cutoff() const;
  bool passes_through() const;
  /// First grid index the variant can emit (lag_kstar + 1 for Local families).
  std::size_t first_grid_index() const;
  std::string describe() const;
};

/// Evaluates the truncation at x in [0, +inf]. Negative or NaN x throws InputError.
double truncate(const TruncationSpec& spec, double x);

/// E = exp(delta Z - delta^2 / 2); log-normal with mean 1 when Z ~ N(0, 1).
struct GaussianLRModel {
  double delta = 3.0;

  explicit GaussianLRModel(double d = 3.0);
  double evalue(double z) const { return std::exp(delta * z - 0.5 * delta * delta); }
};

/// E_null[T(b E)] in closed form. Requires a finite cutoff (Plus, Minus,
/// LocalPlus, LocalMinus, or Toad with a finite deadline).
double expected_truncated_value(const GaussianLRModel& model, const TruncationSpec& spec, double b);

struct BoostSolution {
  double b = 1.0;
  double residual = 0.0;  // |E[T(bE)] - 1|
  int iterations = 0;
};

/// Solves E_null[T(b E)] = 1 for b >= 1 by safeguarded Newton inside a
/// bisection bracket on [1, b_max], doubling b_max up to 1e6.
BoostSolution solve_boost_factor(const GaussianLRModel& model, const TruncationSpec& spec);

inline constexpr double kMaxBoostFactor = 1e6;

/// psi: [0, 1] -> [0, inf], nonincreasing and left-continuous with psi(0) = inf,
/// together with psi^{-1}(y) = max{u in [0, 1] : psi(u) >= y}.
class NonincreasingTransform {
 public:
  /// psi(u) = 1/u.
  static NonincreasingTransform reciprocal();
  /// psi^{-1}(1/(alpha gamma k)) = alpha gamma beta(k): p-values calibrated to shape beta.
  static NonincreasingTransform from_shape(const ShapeFunction& beta, double alpha, double gamma);
  /// psi = 0 on (0, 1].
  static NonincreasingTransform zero();
  /// Arbitrary psi; the inverse is found numerically. `inverse_limit` bounds
  /// psi^{-1}(y) as y -> 0+.
  static NonincreasingTransform from_function(std::function<double(double)> psi, double inverse_limit = 1.0);

  double psi(double u) const { return psi_(u); }
  double inverse(double y) const;
  double inverse_limit() const { return inverse_limit_; }

 private:
  std::function<double(double)> psi_;
  std::function<double(double)> inverse_;  // empty: numeric
  double inverse_limit_ = 1.0;
};

enum class ConditionMode { Arbitrary, Prds, Toad };
enum class Verdict { Pass, Fail, Indeterminate };

std::string to_string(Verdict v);

struct ConditionResult {
  Verdict verdict = Verdict::Indeterminate;
  double value = 0.0;       // partial sum (or supremum) over the evaluated terms
  double tail_bound = 0.0;  // bound on the neglected part
  std::size_t terms = 0;
};

/// Checks the validity condition for e-BH applied to psi(P_t):
///   Arbitrary: sum_k g_k (psi^{-1}(g_k) - psi^{-1}(g_{k-1})) <= 1,
///   Prds:      sup_k g_k psi^{-1}(g_k) <= 1,
///   Toad:      the Arbitrary sum truncated at k = deadline.
ConditionResult check_transform_condition(const NonincreasingTransform& psi, double alpha, double gamma,
                                          ConditionMode mode, std::size_t deadline = kInfinite,
                                          std::size_t k_max = 1000000);

/// Boosting factors b_t for one (model, alpha, weights, variant, s) choice.
/// Non-local factors are solved exactly for t <= horizon up front. Local
/// factors depend on (t, k0); they come from a tabulated inverse of
/// H(y; k0) = a E[T(bE)] with y = a b, which does not depend on t.
/// Immutable after construction, so safe to share across threads.
class BoostFactorTable {
 public:
  BoostFactorTable(GaussianLRModel model, double alpha, WeightSequence weights, TruncationVariant variant,
                   std::size_t s, std::size_t horizon);

  double factor(std::size_t t, std::size_t k0 = 0) const;
  TruncationSpec spec(std::size_t t, std::size_t k0 = 0) const;
  TruncationVariant variant() const { return variant_; }
  bool local() const;
  std::size_t cutoff() const { return s_; }
  const GaussianLRModel& model() const { return model_; }

 private:
  double solve_local(double a, std::size_t k0) const;

  GaussianLRModel model_;
  double alpha_;
  WeightSequence weights_;
  TruncationVariant variant_;
  std::size_t s_;
  std::size_t horizon_;
  std::vector<double> exact_;  // non-local: b_t for t <= horizon

  // Local: H(y; k0) = a E[T(bE)] with y = a b, on a log-y grid.
  double log_y0_ = 0.0;
  double step_ = 0.0;
  std::size_t grid_ = 0;
  std::vector<double> log_h_;   // [k0 * grid_ + j]
  std::vector<double> dlog_h_;  // d log H / d log y
};

/// Online e-BH fed with boosted scores. The table's variant picks the policy:
/// Plus and LocalPlus feed X_t = b_t E_t, Minus and LocalMinus feed the
/// truncated T(b_t E_t). Local variants use k0 = k* at the end of the
/// previous batch of `batch_size` hypotheses.
class BoostedOnlineEbh : public OnlineProcedure {
 public:
  BoostedOnlineEbh(WeightSequence weights, double alpha, std::shared_ptr<const BoostFactorTable> table,
                   std::size_t batch_size = 1, std::string name = "oe-bh-boost");

  std::string name() const override { return name_; }
  ScoreKind kind() const override { return ScoreKind::EValue; }

  /// Unboosted input E_i.
  double raw_score(std::size_t i) const { return raw_[i - 1]; }
  /// k0 used when boosting H_i (0 for non-local policies).
  std::size_t lag_kstar(std::size_t i) const { return lag_[i - 1]; }

 protected:
  double preprocess(double score) override;
  std::vector<std::size_t> advance() override;

 private:
  std::shared_ptr<const BoostFactorTable> table_;
  std::size_t batch_size_;
  std::string name_;
  LevelLadder ladder_;
  std::vector<double> raw_;
  std::vector<std::size_t> lag_;
  std::vector<std::size_t> k_history_;
};

}  // namespace oarc
