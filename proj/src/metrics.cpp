#include "onlinearc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "onlinearc/errors.hpp"

namespace oarc {

std::size_t GroundTruth::num_nulls() const {
  return static_cast<std::size_t>(std::count(is_null.begin(), is_null.end(), char{1}));
}

double fdp(const RejectionSet& rejections, const GroundTruth& truth) {
  std::size_t false_rejections = 0;
  for (std::size_t i : rejections.indices) {
    if (i < 1 || i > truth.size()) {
      std::ostringstream os;
      os << "rejected index " << i << " has no ground-truth label (labels cover 1.." << truth.size() << ")";
      throw InputError(os.str());
    }
    if (truth.null(i)) ++false_rejections;
  }
  if (rejections.empty()) return 0.0;
  return static_cast<double>(false_rejections) / static_cast<double>(rejections.size());
}

double FdpPath::sup_up_to(std::size_t K) const {
  const std::size_t n = std::min(K, values.size());
  double best = 0.0;
  for (std::size_t t = 0; t < n; ++t) best = std::max(best, values[t]);
  return best;
}

StoppingRule StoppingRule::fixed_time(std::size_t T) {
  if (T == 0) throw ConfigError("fixed stopping time must be >= 1");
  StoppingRule r;
  r.kind_ = Kind::Fixed;
  r.param_ = T;
  return r;
}

StoppingRule StoppingRule::jth_rejection(std::size_t j) {
  if (j == 0) throw ConfigError("j-th rejection rule needs j >= 1");
  StoppingRule r;
  r.kind_ = Kind::JthRejection;
  r.param_ = j;
  return r;
}

std::size_t StoppingRule::stop_time(const ObservableHistory& history) const {
  const std::size_t n = history.num_rejected.size();
  if (kind_ == Kind::Fixed) return std::min(param_, n);
  for (std::size_t t = 1; t <= n; ++t) {
    if (history.num_rejected[t - 1] >= param_) return t;
  }
  return n;
}

double TrialRecord::power() const {
  const std::size_t found = true_discoveries.empty() ? 0 : true_discoveries.back();
  return static_cast<double>(found) / static_cast<double>(std::max<std::size_t>(num_non_nulls, 1));
}

TrialRecord make_trial_record(const StreamState& state, const GroundTruth& truth) {
  const std::size_t n = state.time();
  if (truth.size() < n) {
    std::ostringstream os;
    os << "ground truth covers " << truth.size() << " hypotheses but the stream has " << n;
    throw InputError(os.str());
  }
  std::vector<std::size_t> joins(n + 1, 0);
  std::vector<std::size_t> false_joins(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    const std::size_t jt = state.join_time(i);
    if (jt == 0) continue;
    ++joins[jt];
    if (truth.null(i)) ++false_joins[jt];
  }
  TrialRecord rec;
  rec.scores.assign(state.scores().begin(), state.scores().end());
  rec.num_rejected.resize(n);
  rec.true_discoveries.resize(n);
  rec.path.values.resize(n);
  std::size_t total = 0;
  std::size_t false_total = 0;
  for (std::size_t t = 1; t <= n; ++t) {
    total += joins[t];
    false_total += false_joins[t];
    rec.num_rejected[t - 1] = total;
    rec.true_discoveries[t - 1] = total - false_total;
    const double v = total == 0 ? 0.0 : static_cast<double>(false_total) / static_cast<double>(total);
    rec.path.values[t - 1] = v;
    rec.path.sup_fdp = std::max(rec.path.sup_fdp, v);
  }
  for (std::size_t i = 1; i <= n; ++i) {
    if (!truth.null(i)) ++rec.num_non_nulls;
  }
  return rec;
}

TrialSummary summarize_trial(const TrialRecord& record, std::size_t K, const std::optional<StoppingRule>& rule) {
  TrialSummary s;
  const auto& v = record.path.values;
  s.fdp_end = v.empty() ? 0.0 : v.back();
  s.sup_fdp = record.path.sup_fdp;
  s.sup_fdp_k = record.path.sup_up_to(K);
  if (rule && !v.empty()) {
    const std::size_t tau = rule->stop_time(record.history());
    s.stop_fdp = tau == 0 ? 0.0 : v[tau - 1];
  } else {
    s.stop_fdp = s.fdp_end;
  }
  s.power = record.power();
  return s;
}

Estimate estimate(std::span<const double> values) {
  if (values.size() < 2) {
    std::ostringstream os;
    os << "need at least two trials for a standard error, got " << values.size();
    throw InputError(os.str());
  }
  const double m = static_cast<double>(values.size());
  double sum = 0.0;
  for (double x : values) sum += x;
  Estimate e;
  e.mean = sum / m;
  double ss = 0.0;
  for (double x : values) ss += (x - e.mean) * (x - e.mean);
  e.se = std::sqrt(ss / (m - 1.0)) / std::sqrt(m);
  return e;
}

MetricsSummary estimate_metrics(std::span<const TrialSummary> trials) {
  if (trials.size() < 2) {
    std::ostringstream os;
    os << "estimate_metrics needs at least two trials, got " << trials.size();
    throw InputError(os.str());
  }
  std::vector<double> buf(trials.size());
  auto column = [&](double TrialSummary::*field) {
    for (std::size_t i = 0; i < trials.size(); ++i) buf[i] = trials[i].*field;
    return estimate(buf);
  };
  MetricsSummary out;
  out.fdr_at_end = column(&TrialSummary::fdp_end);
  out.sup_fdr = column(&TrialSummary::sup_fdp);
  out.sup_fdr_k = column(&TrialSummary::sup_fdp_k);
  out.stop_fdr = column(&TrialSummary::stop_fdp);
  out.power = column(&TrialSummary::power);
  out.trials = trials.size();
  return out;
}

MetricsSummary estimate_metrics(std::span<const TrialRecord> trials, std::size_t K,
                                const std::optional<StoppingRule>& rule) {
  std::vector<TrialSummary> summaries;
  summaries.reserve(trials.size());
  for (const auto& rec : trials) summaries.push_back(summarize_trial(rec, K, rule));
  return estimate_metrics(summaries);
}

}  // namespace oarc
