#include "onlinearc/oracles.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <numeric>
#include <sstream>

#include "onlinearc/errors.hpp"

namespace oarc {

namespace {

std::vector<std::size_t> order_by(std::span<const double> keys, bool ascending) {
  std::vector<std::size_t> idx(keys.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return ascending ? keys[a] < keys[b] : keys[a] > keys[b];
  });
  return idx;
}

RejectionSet make_set(std::vector<std::size_t> indices, std::size_t time) {
  std::sort(indices.begin(), indices.end());
  return RejectionSet{std::move(indices), time};
}

// First k entries of a 0-based ordering, as a 1-based set.
RejectionSet make_top(const std::vector<std::size_t>& order, std::size_t k) {
  std::vector<std::size_t> out(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
  for (auto& i : out) ++i;
  return make_set(std::move(out), order.size());
}

void check_pvalues(std::span<const double> p) {
  for (double v : p) validate_score(v, ScoreKind::PValue);
}

void check_enumerable(std::size_t K) {
  if (K > kMaxEnumeration) {
    std::ostringstream os;
    os << "exhaustive enumeration refused for K = " << K << " (limit " << kMaxEnumeration << ")";
    throw InputError(os.str());
  }
}

// pass[k] = bitmask of hypotheses clearing the level-k threshold, k = 0..K.
std::vector<std::uint32_t> pass_masks(std::span<const double> scores, ScoreKind kind,
                                      std::span<const double> weights, double alpha) {
  const std::size_t K = scores.size();
  if (weights.size() != K) throw InputError("scores and weights differ in length");
  std::vector<std::uint32_t> pass(K + 1, 0);
  for (std::size_t k = 1; k <= K; ++k) {
    for (std::size_t i = 0; i < K; ++i) {
      const double lvl = static_cast<double>(k);
      const bool ok = kind == ScoreKind::EValue ? e_passes(scores[i], lvl, alpha, weights[i])
                                                : p_passes(scores[i], lvl, alpha, weights[i]);
      if (ok) pass[k] |= std::uint32_t{1} << i;
    }
  }
  return pass;
}

ToadTrace run_toad(std::size_t n, const DeadlineSchedule& deadlines,
                   const std::function<bool(std::size_t, std::size_t)>& passes) {
  ToadTrace trace;
  std::vector<std::size_t> prev;  // R_{t-1}
  for (std::size_t t = 1; t <= n; ++t) {
    std::vector<std::size_t> active;
    for (std::size_t i = 1; i <= t; ++i) {
      if (deadlines(i) >= t) active.push_back(i);
    }
    std::size_t frozen = 0;
    for (std::size_t i : prev) {
      if (!std::binary_search(active.begin(), active.end(), i)) ++frozen;
    }
    std::size_t best = 0;
    for (std::size_t k = 1; k <= active.size(); ++k) {
      std::size_t count = 0;
      for (std::size_t j : active) {
        if (passes(j, frozen + k)) ++count;
      }
      if (count >= k) best = k;
    }
    trace.k_star.push_back(frozen + best);
    std::vector<std::size_t> current;
    for (std::size_t i = 1; i <= t; ++i) {
      const std::size_t when = std::min(deadlines(i), t);
      const std::size_t k = trace.k_star[when - 1];
      if (k > 0 && passes(i, k)) current.push_back(i);
    }
    trace.rejections.push_back(RejectionSet{current, t});
    prev = std::move(current);
  }
  return trace;
}

}  // namespace

RejectionSet offline_bh(std::span<const double> p, double alpha) {
  validate_alpha(alpha);
  check_pvalues(p);
  const std::size_t K = p.size();
  if (K == 0) return {};
  const double gamma = 1.0 / static_cast<double>(K);
  const auto idx = order_by(p, true);
  std::size_t k_star = 0;
  for (std::size_t k = K; k >= 1; --k) {
    if (p_passes(p[idx[k - 1]], static_cast<double>(k), alpha, gamma)) {
      k_star = k;
      break;
    }
  }
  return make_top(idx, k_star);
}

RejectionSet offline_ebh(std::span<const double> e, double alpha) {
  validate_alpha(alpha);
  for (double v : e) validate_score(v, ScoreKind::EValue);
  const std::size_t K = e.size();
  if (K == 0) return {};
  const double gamma = 1.0 / static_cast<double>(K);
  const auto idx = order_by(e, false);
  std::size_t k_star = 0;
  for (std::size_t k = K; k >= 1; --k) {
    if (e_passes(e[idx[k - 1]], static_cast<double>(k), alpha, gamma)) {
      k_star = k;
      break;
    }
  }
  return make_top(idx, k_star);
}

RejectionSet offline_storey_bh(std::span<const double> p, double alpha, double lambda) {
  validate_alpha(alpha);
  if (!(lambda >= alpha && lambda < 1.0)) {
    std::ostringstream os;
    os << "Storey lambda must lie in [alpha, 1), got " << lambda;
    throw ConfigError(os.str());
  }
  check_pvalues(p);
  const std::size_t K = p.size();
  if (K == 0) return {};
  const double Kd = static_cast<double>(K);
  std::size_t over = 0;
  for (double v : p) over += v > lambda ? 1 : 0;
  const double pi0 = (1.0 + static_cast<double>(over)) / ((1.0 - lambda) * Kd);
  auto threshold = [&](std::size_t k) { return std::min(static_cast<double>(k) * alpha / (Kd * pi0), lambda); };
  const auto idx = order_by(p, true);
  std::size_t k_star = 0;
  for (std::size_t k = K; k >= 1; --k) {
    if (p[idx[k - 1]] <= threshold(k)) {
      k_star = k;
      break;
    }
  }
  std::vector<std::size_t> out;
  if (k_star > 0) {
    const double thr = threshold(k_star);
    for (std::size_t i = 0; i < K; ++i) {
      if (p[i] <= thr) out.push_back(i + 1);
    }
  }
  return make_set(std::move(out), K);
}

RejectionSet weighted_bh(std::span<const double> p, std::span<const double> weights, double alpha) {
  validate_alpha(alpha);
  check_pvalues(p);
  if (p.size() != weights.size()) throw InputError("p-values and weights differ in length");
  const double pi0 = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(pi0 > 0.0)) throw InputError("weighted BH needs a positive total weight");
  const std::size_t K = p.size();
  std::vector<double> w(K);
  for (std::size_t i = 0; i < K; ++i) {
    if (weights[i] < 0.0) throw InputError("weights must be nonnegative");
    w[i] = weights[i] / pi0;
  }
  std::size_t k_star = 0;
  for (std::size_t k = K; k >= 1 && k_star == 0; --k) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < K; ++i) count += p_passes(p[i], static_cast<double>(k), alpha, w[i]) ? 1 : 0;
    if (count >= k) k_star = k;
  }
  std::vector<std::size_t> out;
  if (k_star > 0) {
    for (std::size_t i = 0; i < K; ++i) {
      if (p_passes(p[i], static_cast<double>(k_star), alpha, w[i])) out.push_back(i + 1);
    }
  }
  return make_set(std::move(out), K);
}

double weighted_simes(std::span<const double> p, std::span<const double> weights) {
  check_pvalues(p);
  if (p.size() != weights.size()) throw InputError("p-values and weights differ in length");
  double pi0 = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw InputError("weights must be nonnegative");
    pi0 += w;
  }
  if (!(pi0 > 0.0)) throw InputError("weighted Simes needs at least one positive weight");
  std::vector<double> r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    r[i] = weights[i] > 0.0 ? p[i] / weights[i] : std::numeric_limits<double>::infinity();
  }
  std::sort(r.begin(), r.end());
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j <= r.size(); ++j) best = std::min(best, r[j - 1] / static_cast<double>(j));
  return pi0 * best;
}

double max_self_consistent_fdp(std::span<const double> scores, ScoreKind kind, std::span<const double> weights,
                               double alpha, const GroundTruth& truth) {
  const std::size_t K = scores.size();
  check_enumerable(K);
  if (truth.size() < K) throw InputError("ground truth does not cover every hypothesis");
  const auto pass = pass_masks(scores, kind, weights, alpha);
  std::uint32_t nulls = 0;
  for (std::size_t i = 0; i < K; ++i) {
    if (truth.null(i + 1)) nulls |= std::uint32_t{1} << i;
  }
  double best = 0.0;
  const std::uint32_t end = std::uint32_t{1} << K;
  for (std::uint32_t s = 1; s < end; ++s) {
    const auto size = static_cast<std::size_t>(std::popcount(s));
    if ((s & ~pass[size]) != 0) continue;
    const double v = static_cast<double>(std::popcount(s & nulls)) / static_cast<double>(size);
    best = std::max(best, v);
  }
  return best;
}

RejectionSet largest_self_consistent_subset(std::span<const double> scores, ScoreKind kind,
                                            std::span<const double> weights, double alpha) {
  const std::size_t K = scores.size();
  check_enumerable(K);
  const auto pass = pass_masks(scores, kind, weights, alpha);
  std::uint32_t best = 0;
  int best_size = 0;
  const std::uint32_t end = std::uint32_t{1} << K;
  for (std::uint32_t s = 1; s < end; ++s) {
    const int size = std::popcount(s);
    if (size <= best_size) continue;
    if ((s & ~pass[static_cast<std::size_t>(size)]) != 0) continue;
    best = s;
    best_size = size;
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < K; ++i) {
    if (best & (std::uint32_t{1} << i)) out.push_back(i + 1);
  }
  return RejectionSet{out, K};
}

ToadTrace reference_etoad(std::span<const double> e, const WeightSequence& weights, double alpha,
                          const DeadlineSchedule& deadlines) {
  validate_alpha(alpha);
  return run_toad(e.size(), deadlines, [&](std::size_t i, std::size_t k) {
    return e_passes(e[i - 1], static_cast<double>(k), alpha, weights(i));
  });
}

ToadTrace reference_toad(std::span<const double> p, const WeightSequence& weights, double alpha,
                         const DeadlineSchedule& deadlines, std::span<const ShapeFunction> shapes) {
  validate_alpha(alpha);
  if (shapes.empty()) throw ConfigError("TOAD needs at least one shape function");
  return run_toad(p.size(), deadlines, [&](std::size_t i, std::size_t k) {
    const auto& beta = shapes[std::min(i, shapes.size()) - 1];
    return shape_passes(p[i - 1], beta(k), alpha, weights(i));
  });
}

}  // namespace oarc
