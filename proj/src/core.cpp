#include "onlinearc/core.hpp"

#include <algorithm>
#include <sstream>

#include "onlinearc/errors.hpp"

namespace oarc {

std::string to_string(ScoreKind kind) { return kind == ScoreKind::PValue ? "p-value" : "e-value"; }

void validate_score(double value, ScoreKind kind) {
  if (std::isnan(value)) {
    throw InputError(to_string(kind) + " is NaN");
  }
  if (kind == ScoreKind::PValue) {
    if (value < 0.0 || value > 1.0) {
      std::ostringstream os;
      os << "p-value " << value << " outside [0, 1]";
      throw InputError(os.str());
    }
  } else if (value < 0.0) {
    std::ostringstream os;
    os << "e-value " << value << " is negative";
    throw InputError(os.str());
  }
}

Score Score::p(double value) {
  validate_score(value, ScoreKind::PValue);
  return {value, ScoreKind::PValue};
}

Score Score::e(double value) {
  validate_score(value, ScoreKind::EValue);
  return {value, ScoreKind::EValue};
}

void validate_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    std::ostringstream os;
    os << "alpha " << alpha << " outside (0, 1]";
    throw ConfigError(os.str());
  }
}

// ---------------------------------------------------------------------------
// WeightSequence

WeightSequence WeightSequence::explicit_list(std::vector<double> weights) {
  WeightSequence w;
  w.form_ = Form::Explicit;
  w.K_ = weights.size();
  w.suffix_.assign(weights.size() + 1, 0.0);
  for (std::size_t i = weights.size(); i-- > 0;) {
    const double g = weights[i];
    if (!std::isfinite(g) || g < 0.0) {
      std::ostringstream os;
      os << "weight gamma_" << (i + 1) << " = " << g << " is not a nonnegative finite number";
      throw InputError(os.str());
    }
    w.suffix_[i] = w.suffix_[i + 1] + g;
    w.max_weight_ = std::max(w.max_weight_, g);
  }
  w.total_mass_ = w.suffix_[0];
  if (w.total_mass_ > 1.0 + kWeightSlack) {
    std::ostringstream os;
    os.precision(17);
    os << "weights sum to " << w.total_mass_ << " > 1";
    throw InputError(os.str());
  }
  w.weights_ = std::move(weights);
  return w;
}

WeightSequence WeightSequence::geometric(double q) {
  if (!(q > 0.0 && q < 1.0)) {
    std::ostringstream os;
    os << "geometric weight parameter q = " << q << " outside (0, 1)";
    throw ConfigError(os.str());
  }
  WeightSequence w;
  w.form_ = Form::Geometric;
  w.q_ = q;
  w.K_ = kInfinite;
  w.max_weight_ = 1.0 - q;
  w.total_mass_ = 1.0;
  return w;
}

WeightSequence WeightSequence::uniform(std::size_t K) {
  if (K == 0) throw ConfigError("uniform weights need K >= 1");
  WeightSequence w;
  w.form_ = Form::UniformFinite;
  w.K_ = K;
  w.max_weight_ = 1.0 / static_cast<double>(K);
  w.total_mass_ = 1.0;
  return w;
}

double WeightSequence::operator()(std::size_t t) const {
  if (t == 0) return 0.0;
  switch (form_) {
    case Form::Geometric:
      return std::pow(q_, static_cast<double>(t - 1)) * (1.0 - q_);
    case Form::UniformFinite:
      return t <= K_ ? 1.0 / static_cast<double>(K_) : 0.0;
    case Form::Explicit:
      return t <= K_ ? weights_[t - 1] : 0.0;
  }
  return 0.0;
}

double WeightSequence::tail_mass(std::size_t t) const {
  switch (form_) {
    case Form::Geometric:
      return std::pow(q_, static_cast<double>(t));
    case Form::UniformFinite:
      return t < K_ ? static_cast<double>(K_ - t) / static_cast<double>(K_) : 0.0;
    case Form::Explicit:
      return t < K_ ? suffix_[t] : 0.0;
  }
  return 0.0;
}

std::size_t WeightSequence::horizon() const { return K_; }

std::string WeightSequence::describe() const {
  std::ostringstream os;
  switch (form_) {
    case Form::Geometric:
      os << "geometric:" << q_;
      break;
    case Form::UniformFinite:
      os << "uniform:" << K_;
      break;
    case Form::Explicit:
      os << "explicit[" << K_ << "]";
      break;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Levels

std::size_t e_level(double e, double alpha, double gamma) {
  if (!(gamma > 0.0) || !(e > 0.0)) return kInfinite;
  const double raw = 1.0 / (e * alpha * gamma);
  const std::size_t hint = raw < 9e15 ? static_cast<std::size_t>(std::ceil(raw)) : kMaxLevel;
  return first_passing_level(
      [&](std::size_t k) { return e_passes(e, static_cast<double>(k), alpha, gamma); }, hint);
}

std::size_t p_level(double p, double alpha, double gamma) {
  if (!(gamma > 0.0)) return kInfinite;
  const double raw = p / (alpha * gamma);
  const std::size_t hint = raw < 9e15 ? static_cast<std::size_t>(std::ceil(raw)) : kMaxLevel;
  return first_passing_level(
      [&](std::size_t k) { return p_passes(p, static_cast<double>(k), alpha, gamma); }, hint);
}

// ---------------------------------------------------------------------------
// RejectionSet / StreamState

bool RejectionSet::contains(std::size_t i) const {
  return std::binary_search(indices.begin(), indices.end(), i);
}

bool RejectionSet::is_subset_of(const RejectionSet& other) const {
  return std::includes(other.indices.begin(), other.indices.end(), indices.begin(), indices.end());
}

StreamState::StreamState(WeightSequence weights, double alpha)
    : weights_(std::move(weights)), alpha_(alpha) {
  validate_alpha(alpha);
}

void StreamState::append(double score) {
  scores_.push_back(score);
  gammas_.push_back(weights_(scores_.size()));
  join_.push_back(0);
}

bool StreamState::reject(std::size_t i) {
  if (join_[i - 1] != 0) return false;
  join_[i - 1] = time();
  order_.push_back(i);
  return true;
}

RejectionSet StreamState::rejection_set() const {
  RejectionSet r;
  r.time = time();
  r.indices = order_;
  std::sort(r.indices.begin(), r.indices.end());
  return r;
}

RejectionSet StreamState::rejection_set_at(std::size_t t) const {
  RejectionSet r;
  r.time = t;
  for (std::size_t i = 1; i <= std::min(t, join_.size()); ++i) {
    if (join_[i - 1] != 0 && join_[i - 1] <= t) r.indices.push_back(i);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Self-consistency

bool is_self_consistent(std::span<const std::size_t> candidate, std::span<const double> scores,
                        ScoreKind kind, const WeightSequence& weights, double alpha) {
  std::vector<std::size_t> sorted(candidate.begin(), candidate.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InputError("candidate set contains duplicate indices");
  }
  for (std::size_t i : sorted) {
    if (i < 1 || i > scores.size()) {
      std::ostringstream os;
      os << "candidate index " << i << " outside 1.." << scores.size();
      throw InputError(os.str());
    }
  }
  const double size = static_cast<double>(sorted.size());
  for (std::size_t i : sorted) {
    const double s = scores[i - 1];
    const bool ok = kind == ScoreKind::EValue ? e_passes(s, size, alpha, weights(i))
                                              : p_passes(s, size, alpha, weights(i));
    if (!ok) return false;
  }
  return true;
}

bool is_self_consistent(std::span<const std::size_t> candidate, std::span<const Score> scores,
                        const WeightSequence& weights, double alpha) {
  std::vector<double> raw;
  raw.reserve(scores.size());
  for (const Score& s : scores) {
    if (s.kind != scores.front().kind) throw InputError("score list mixes p-values and e-values");
    raw.push_back(s.value);
  }
  const ScoreKind kind = scores.empty() ? ScoreKind::PValue : scores.front().kind;
  return is_self_consistent(candidate, raw, kind, weights, alpha);
}

double harmonic_number(std::size_t K) {
  if (K == 0) throw InputError("harmonic number needs K >= 1");
  double sum = 0.0;
  for (std::size_t i = K; i >= 1; --i) sum += 1.0 / static_cast<double>(i);
  return sum;
}

}  // namespace oarc
