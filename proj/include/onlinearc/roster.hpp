#pragma once

// Named procedure factories used by the experiment runner and the CLI.

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "onlinearc/boosting.hpp"
#include "onlinearc/procedure.hpp"

namespace oarc {

/// Settings shared by every roster entry of one experiment.
struct RosterOptions {
  std::size_t n = 1000;           // horizon; BY(n) shapes, boosting cutoff s = n
  double alpha = 0.05;
  double q = 0.99;                // default geometric weight parameter
  double lambda = 0.5;            // Storey-BH and SAFFRON
  std::size_t deadline_lag = 10;  // d_t = t + lag for e-TOAD / TOAD
  std::size_t batch_size = 20;    // k0 refresh period for local boosting
  double delta = 3.0;             // alternative mean of the likelihood-ratio e-values
  double lord_w0 = -1.0;          // LORD initial wealth; < 0: alpha / 10
  /// Replaces geometric(q) for every entry when set.
  std::optional<WeightSequence> weights;
};

/// One requested procedure: `name` or `name:q`.
struct RosterEntry {
  std::string name;
  double q = -1.0;  // < 0: use RosterOptions::q

  std::string label() const;
};

/// A roster entry bound to its options, ready to instantiate per trial.
struct PreparedProcedure {
  std::string label;
  std::string name;
  double q = 0.0;
  ScoreKind kind = ScoreKind::EValue;
  std::function<std::unique_ptr<OnlineProcedure>()> make;
};

/// Every known procedure name, in roster order.
const std::vector<std::string>& roster_names();

bool is_known_procedure(const std::string& name);

/// Parses "oe-bh,e-lond:0.999,all". Throws ConfigError on unknown names,
/// malformed q overrides or an empty list.
std::vector<RosterEntry> parse_roster(const std::string& text);

/// Validates options and builds factories. Boosting tables are computed once
/// here and shared by all trials.
std::vector<PreparedProcedure> prepare_roster(const std::vector<RosterEntry>& entries, const RosterOptions& options);

}  // namespace oarc
