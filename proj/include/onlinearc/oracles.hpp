#pragma once

// Brute-force references built from the sort-based textbook definitions.
// None of these share code with the streaming k* search.

#include <cstddef>
#include <span>
#include <vector>

#include "onlinearc/core.hpp"
#include "onlinearc/e_procedures.hpp"
#include "onlinearc/metrics.hpp"
#include "onlinearc/p_procedures.hpp"

namespace oarc {

/// Largest instance the exhaustive enumerations accept.
inline constexpr std::size_t kMaxEnumeration = 20;

/// Step-up BH at level alpha over K = p.size() hypotheses.
RejectionSet offline_bh(std::span<const double> p, double alpha);

/// Base e-BH: rejects the k* largest e-values, k* = max{k : #{E_j >= K/(k alpha)} >= k}.
RejectionSet offline_ebh(std::span<const double> e, double alpha);

/// Storey-BH with pi0 = (1 + #{P_i > lambda}) / ((1 - lambda) K), thresholds
/// min(k alpha / (K pi0), lambda). Throws ConfigError unless lambda in [alpha, 1).
RejectionSet offline_storey_bh(std::span<const double> p, double alpha, double lambda);

/// Weighted BH with weights renormalised to sum to one:
/// k* = max{k : #{P_i <= k alpha w_i / pi0} >= k}.
RejectionSet weighted_bh(std::span<const double> p, std::span<const double> weights, double alpha);

/// pi0 min_j r_(j) / j with r_i = P_i / w_i sorted ascending and pi0 = sum w.
/// Throws InputError when every weight is zero or the lengths differ.
double weighted_simes(std::span<const double> p, std::span<const double> weights);

/// Largest FDP over all self-consistent subsets of {1..K}, found by
/// enumerating all 2^K subsets. Throws InputError for K > kMaxEnumeration.
double max_self_consistent_fdp(std::span<const double> scores, ScoreKind kind, std::span<const double> weights,
                               double alpha, const GroundTruth& truth);

/// Largest self-consistent subset of {1..K}; ties go to the lexicographically
/// smallest bitmask. Same size limit as above.
RejectionSet largest_self_consistent_subset(std::span<const double> scores, ScoreKind kind,
                                            std::span<const double> weights, double alpha);

/// Literal evaluation of the (e-)TOAD recursion: at every t, C_t, F_t and k*_t
/// are rebuilt from scratch and R_t = {i <= t : pass_i(k*_{min(d_i, t)})}.
struct ToadTrace {
  std::vector<std::size_t> k_star;        // k_star[t-1]
  std::vector<RejectionSet> rejections;  // rejections[t-1] = R_t
};

ToadTrace reference_etoad(std::span<const double> e, const WeightSequence& weights, double alpha,
                          const DeadlineSchedule& deadlines);

/// `shapes[i-1]` applies to H_i; the last entry covers later indices.
ToadTrace reference_toad(std::span<const double> p, const WeightSequence& weights, double alpha,
                         const DeadlineSchedule& deadlines, std::span<const ShapeFunction> shapes);

}  // namespace oarc
