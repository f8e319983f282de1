#pragma once

// Data generators (batch-correlated Gaussian streams and the adversarial
// sharpness construction) and the parallel experiment runner.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "onlinearc/metrics.hpp"
#include "onlinearc/rng.hpp"
#include "onlinearc/roster.hpp"

namespace oarc {

struct GaussianSetupConfig {
  std::size_t n = 1000;
  std::size_t m = 100;
  double mu_a = 3.5;
  double pi_a = 0.5;
  std::size_t batch_size = 20;
  double rho = 0.5;
  double q = 0.99;
  double alpha = 0.05;
  double lambda = 0.5;
  std::size_t deadline_lag = 10;
  double lord_w0 = -1.0;  // < 0: alpha / 10
  std::uint64_t seed = 42;
  /// Use P_t = Phi(-Z_t) instead of Phi(-X_t).
  bool literal_pvalues = false;

  /// Throws ConfigError on violated invariants.
  void validate() const;
  RosterOptions roster_options() const;
};

struct GaussianTrial {
  std::vector<double> z;  // batch-correlated N(0, 1)
  std::vector<double> x;  // z + mu_a * Pi_A
  std::vector<double> pvalues;
  std::vector<double> evalues;
  GroundTruth truth;
};

/// Per hypothesis: a fresh batch factor W at each batch start, then xi_t and Pi_t.
GaussianTrial generate_gaussian_trial(const GaussianSetupConfig& cfg, Rng& rng);

struct AdversarialConfig {
  std::size_t K0 = 1000;
  std::size_t K = 0;  // 0: use 2 K0
  double alpha = 0.05;
  std::size_t m = 500;
  std::uint64_t seed = 42;

  std::size_t total() const { return K == 0 ? 2 * K0 : K; }
  void validate() const;
};

struct AdversarialTrial {
  std::vector<double> pvalues;  // length K
  GroundTruth truth;
  std::size_t j_star = 0;
  std::size_t k1_star = 0;
  std::size_t stop_time = 0;  // K0 + K1*
  bool feasible = true;       // K1* <= K - K0
  double predicted_fdp = 0.0;  // (j* / ceil(K P_(j*) / alpha)) ^ 1
};

AdversarialTrial generate_adversarial_trial(const AdversarialConfig& cfg, Rng& rng);

/// j* and K1* from null p-values (any order), for K total hypotheses.
struct AdversarialPoint {
  std::size_t j_star = 0;
  std::size_t k1_star = 0;
  double predicted_fdp = 0.0;
};
AdversarialPoint adversarial_point(std::vector<double> null_pvalues, std::size_t K, double alpha);

struct AdversarialSummary {
  std::size_t feasible = 0;
  std::size_t infeasible = 0;
  Estimate stop_fdp;           // online BH FDP at stop_time, feasible trials only
  Estimate predicted_fdp;
  std::size_t formula_mismatches = 0;  // trials where the two differ
};

AdversarialSummary run_adversarial(const AdversarialConfig& cfg);

/// Metrics of one procedure at one pi_A, with the per-trial summaries kept.
struct ExperimentCell {
  std::string label;
  double q = 0.0;
  double pi_a = 0.0;
  MetricsSummary metrics;
  std::vector<TrialSummary> trials;
};

struct ExperimentResult {
  GaussianSetupConfig config;
  std::vector<double> pi_grid;
  std::vector<std::string> labels;
  std::vector<ExperimentCell> cells;  // procedure-major, then pi

  const ExperimentCell& cell(const std::string& label, std::size_t pi_index) const;
};

/// Runs every procedure on the same generated trials. Trial i at pi index j
/// uses Rng::substream(seed, j, i), so results do not depend on threading.
ExperimentResult run_experiment(const GaussianSetupConfig& cfg, const std::vector<double>& pi_grid,
                                const std::vector<RosterEntry>& roster);
/// Single-threaded reference; bit-identical to run_experiment.
ExperimentResult run_experiment_serial(const GaussianSetupConfig& cfg, const std::vector<double>& pi_grid,
                                       const std::vector<RosterEntry>& roster);

/// Feeds the scores of the procedure's kind to a fresh instance.
TrialRecord run_procedure(const PreparedProcedure& proc, const GaussianTrial& trial);

struct ResultRow {
  std::string procedure;
  double pi_a = 0.0;
  double mu_a = 0.0;
  double q = 0.0;
  double alpha = 0.0;
  std::string metric;
  double value = 0.0;
  double stderr_ = 0.0;
  std::size_t n = 0;
  std::size_t m = 0;
  std::uint64_t seed = 0;
};

inline constexpr const char* kCsvHeader = "procedure,pi_a,mu_a,q,alpha,metric,value,stderr,n,m,seed";

/// Rows power, fdr, sup_fdr per procedure and pi_A.
std::vector<ResultRow> to_rows(const ExperimentResult& result);
void write_csv(std::ostream& out, const std::vector<ResultRow>& rows);

/// "a:b:step" (inclusive) or "x,y,z". Throws ConfigError on malformed input
/// or values outside (0, 1).
std::vector<double> parse_pi_grid(const std::string& text);

}  // namespace oarc
