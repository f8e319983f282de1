#include "onlinearc/p_procedures.hpp"

#include <algorithm>
#include <sstream>

#include "onlinearc/errors.hpp"

namespace oarc {

// ---------------------------------------------------------------------------
// ShapeFunction

ShapeFunction ShapeFunction::identity() { return {}; }

ShapeFunction ShapeFunction::by(std::size_t K) {
  if (K == 0) throw ConfigError("BY shape needs K >= 1");
  ShapeFunction s;
  s.variant_ = Variant::BY;
  s.K_ = K;
  s.ell_ = harmonic_number(K);
  return s;
}

ShapeFunction ShapeFunction::custom(std::vector<std::pair<double, double>> atoms) {
  if (atoms.empty()) throw ConfigError("custom shape measure has no atoms");
  std::sort(atoms.begin(), atoms.end());
  ShapeFunction s;
  s.variant_ = Variant::CustomMeasure;
  double mass = 0.0;
  double acc = 0.0;
  for (const auto& [x, w] : atoms) {
    if (!(x > 0.0) || !std::isfinite(x) || !(w >= 0.0)) {
      std::ostringstream os;
      os << "invalid shape atom (" << x << ", " << w << ")";
      throw ConfigError(os.str());
    }
    mass += w;
    acc += x * w;
    s.atoms_x_.push_back(x);
    s.cumulative_.push_back(acc);
  }
  if (std::abs(mass - 1.0) > 1e-9) {
    std::ostringstream os;
    os << "shape measure has total mass " << mass << ", expected 1";
    throw ConfigError(os.str());
  }
  return s;
}

double ShapeFunction::operator()(std::size_t k) const {
  switch (variant_) {
    case Variant::Identity:
      return static_cast<double>(k);
    case Variant::BY:
      return static_cast<double>(std::min(k, K_)) / ell_;
    case Variant::CustomMeasure: {
      const auto it = std::upper_bound(atoms_x_.begin(), atoms_x_.end(), static_cast<double>(k));
      const auto n = static_cast<std::size_t>(it - atoms_x_.begin());
      return n == 0 ? 0.0 : cumulative_[n - 1];
    }
  }
  return 0.0;
}

std::string ShapeFunction::describe() const {
  switch (variant_) {
    case Variant::Identity:
      return "identity";
    case Variant::BY:
      return "by:" + std::to_string(K_);
    case Variant::CustomMeasure:
      return "custom[" + std::to_string(atoms_x_.size()) + "]";
  }
  return "";
}

std::size_t ShapeFunction::level(double p, double alpha, double gamma) const {
  if (!(gamma > 0.0)) return kInfinite;
  if (variant_ == Variant::Identity) return p_level(p, alpha, gamma);
  auto passes = [&](std::size_t k) { return shape_passes(p, (*this)(k), alpha, gamma); };
  std::size_t hint = 1;
  if (variant_ == Variant::BY) {
    if (!passes(K_)) return kInfinite;
    const double raw = p * ell_ / (alpha * gamma);
    hint = raw < static_cast<double>(K_) ? static_cast<std::size_t>(std::ceil(raw)) : K_;
  } else {
    const auto top = static_cast<std::size_t>(std::ceil(std::min(atoms_x_.back(), 9e15)));
    if (!passes(top)) return kInfinite;
    hint = top;
  }
  return first_passing_level(passes, hint);
}

// ---------------------------------------------------------------------------
// Online BH, LOND, r-LOND, online BR, TOAD

OnlineBh::OnlineBh(WeightSequence weights, double alpha) : OnlineProcedure(std::move(weights), alpha) {}

std::vector<std::size_t> OnlineBh::advance() {
  const std::size_t t = state_.time();
  auto joined = ladder_.push(p_level(state_.score(t), state_.alpha(), state_.gamma(t)));
  state_.set_k_star(ladder_.k_star());
  return joined;
}

Lond::Lond(WeightSequence weights, double alpha) : OnlineProcedure(std::move(weights), alpha) {}

std::vector<std::size_t> Lond::advance() {
  const std::size_t t = state_.time();
  const std::size_t next = state_.num_rejected() + 1;
  if (p_passes(state_.score(t), static_cast<double>(next), state_.alpha(), state_.gamma(t))) {
    state_.set_k_star(next);
    return {t};
  }
  return {};
}

RLond::RLond(WeightSequence weights, double alpha, ShapeFunction beta)
    : OnlineProcedure(std::move(weights), alpha), beta_(std::move(beta)) {}

std::vector<std::size_t> RLond::advance() {
  const std::size_t t = state_.time();
  const std::size_t next = state_.num_rejected() + 1;
  if (shape_passes(state_.score(t), beta_(next), state_.alpha(), state_.gamma(t))) {
    state_.set_k_star(next);
    return {t};
  }
  return {};
}

OnlineBr::OnlineBr(WeightSequence weights, double alpha, ShapeFunction beta)
    : OnlineProcedure(std::move(weights), alpha), beta_(std::move(beta)) {}

std::vector<std::size_t> OnlineBr::advance() {
  const std::size_t t = state_.time();
  auto joined = ladder_.push(beta_.level(state_.score(t), state_.alpha(), state_.gamma(t)));
  state_.set_k_star(ladder_.k_star());
  return joined;
}

Toad::Toad(WeightSequence weights, double alpha, DeadlineSchedule deadlines,
           std::vector<ShapeFunction> shapes)
    : OnlineProcedure(std::move(weights), alpha),
      deadlines_(std::move(deadlines)),
      shapes_(std::move(shapes)) {
  if (shapes_.empty()) throw ConfigError("TOAD needs at least one shape function");
}

Toad::Toad(WeightSequence weights, double alpha, DeadlineSchedule deadlines, ShapeFunction beta)
    : Toad(std::move(weights), alpha, std::move(deadlines), std::vector<ShapeFunction>{std::move(beta)}) {}

std::vector<std::size_t> Toad::advance() {
  const std::size_t t = state_.time();
  const ShapeFunction& beta = shapes_[std::min(t, shapes_.size()) - 1];
  auto joined = ladder_.push(beta.level(state_.score(t), state_.alpha(), state_.gamma(t)), deadlines_(t));
  state_.set_k_star(ladder_.k_star());
  return joined;
}

// ---------------------------------------------------------------------------
// Online Storey-BH

OnlineStoreyBh::OnlineStoreyBh(WeightSequence weights, double alpha, double lambda)
    : OnlineProcedure(std::move(weights), alpha), lambda_(lambda) {
  if (!(lambda >= alpha && lambda < 1.0)) {
    std::ostringstream os;
    os << "Storey lambda " << lambda << " outside [alpha, 1) with alpha = " << alpha;
    throw ConfigError(os.str());
  }
  pi0_ = (gamma_max() + state_.weights().total_mass()) / (1.0 - lambda_);
}

double OnlineStoreyBh::threshold(std::size_t i, std::size_t k) const {
  return std::min(static_cast<double>(k) * state_.alpha() * state_.gamma(i) / pi0_, lambda_);
}

std::size_t OnlineStoreyBh::level_of(std::size_t i, std::size_t cap) const {
  const double p = state_.score(i);
  const double gamma = state_.gamma(i);
  if (p > lambda_ || !(gamma > 0.0)) return kInfinite;
  const double alpha = state_.alpha();
  const double pi0 = pi0_;
  auto passes = [&](std::size_t k) { return p <= static_cast<double>(k) * alpha * gamma / pi0; };
  // Levels above the candidate count never matter.
  const double raw = p * pi0 / (alpha * gamma);
  if (raw > static_cast<double>(cap) + 2.0) return passes(cap) ? first_passing_level(passes, cap) : kInfinite;
  std::size_t k = std::max<std::size_t>(static_cast<std::size_t>(std::ceil(raw)), 1);
  if (passes(k)) {
    while (k > 1 && passes(k - 1)) --k;
    return k;
  }
  while (!passes(k)) {
    if (k > cap) return kInfinite;
    ++k;
  }
  return k;
}

std::vector<std::size_t> OnlineStoreyBh::advance() {
  const std::size_t t = state_.time();
  const double p = state_.score(t);
  const double gamma = state_.gamma(t);
  if (p > lambda_) {
    // pi0 unchanged and H_t can never be rejected.
    over_lambda_mass_ += gamma;
    return {};
  }
  candidate_mass_ += gamma;
  // (gamma_max + total) - candidate mass: nonincreasing in t exactly.
  pi0_ = (gamma_max() + state_.weights().total_mass() - candidate_mass_) / (1.0 - lambda_);
  candidates_.push_back(t);
  levels_.resize(candidates_.size());
  for (std::size_t c = 0; c < candidates_.size(); ++c) levels_[c] = level_of(candidates_[c], candidates_.size());

  // Only levels <= #candidates can satisfy c(k) >= k.
  const std::size_t n = candidates_.size();
  hist_.assign(n + 1, 0);
  for (std::size_t lv : levels_) {
    if (lv <= n) ++hist_[lv];
  }
  for (std::size_t k = 1; k <= n; ++k) hist_[k] += hist_[k - 1];
  const std::size_t old_k = state_.k_star();
  std::size_t k_star = old_k;
  for (std::size_t k = n; k > old_k; --k) {
    if (hist_[k] >= k) {
      k_star = k;
      break;
    }
  }
  state_.set_k_star(k_star);

  std::vector<std::size_t> joined;
  for (std::size_t c = 0; c < n; ++c) {
    if (levels_[c] <= k_star && !state_.is_rejected(candidates_[c])) joined.push_back(candidates_[c]);
  }
  return joined;
}

// ---------------------------------------------------------------------------
// LORD++ and SAFFRON

namespace {

double resolve_w0(double w0, double fallback, double alpha, const char* who) {
  const double value = w0 < 0.0 ? fallback : w0;
  if (!(value > 0.0 && value <= alpha)) {
    std::ostringstream os;
    os << who << " initial wealth " << value << " outside (0, alpha]";
    throw ConfigError(os.str());
  }
  return value;
}

bool within_budget(double spent, double alpha, std::size_t rejections) {
  const double budget = alpha * static_cast<double>(std::max<std::size_t>(rejections, 1));
  return spent <= budget * (1.0 + 1e-12);
}

}  // namespace

Lord::Lord(WeightSequence weights, double alpha, double w0)
    : OnlineProcedure(std::move(weights), alpha), w0_(resolve_w0(w0, alpha, alpha, "LORD")) {}

std::vector<std::size_t> Lord::advance() {
  const std::size_t t = state_.time();
  const double alpha = state_.alpha();
  const auto& taus = state_.rejected_in_order();
  double level = w0_ * state_.gamma(t);
  for (std::size_t j = 0; j < taus.size(); ++j) {
    const double g = state_.gamma(t - taus[j]);
    level += (j == 0 ? alpha - w0_ : alpha) * g;
  }
  last_level_ = level;
  spent_ += level;
  if (state_.score(t) <= level) {
    state_.set_k_star(taus.size() + 1);
    return {t};
  }
  return {};
}

bool Lord::condition_holds() const { return within_budget(spent_, state_.alpha(), state_.num_rejected()); }

Saffron::Saffron(WeightSequence weights, double alpha, double lambda, double w0)
    : OnlineProcedure(std::move(weights), alpha),
      lambda_(lambda),
      w0_(resolve_w0(w0, alpha / 2.0, alpha, "SAFFRON")) {
  if (!(lambda > 0.0 && lambda < 1.0)) {
    std::ostringstream os;
    os << "SAFFRON lambda " << lambda << " outside (0, 1)";
    throw ConfigError(os.str());
  }
  candidates_prefix_.push_back(0);
}

std::vector<std::size_t> Saffron::advance() {
  const std::size_t t = state_.time();
  const double alpha = state_.alpha();
  const auto& taus = state_.rejected_in_order();
  const std::size_t c_before = candidates_prefix_[t - 1];
  double wealth = w0_ * state_.gamma(t - c_before);
  for (std::size_t j = 0; j < taus.size(); ++j) {
    const std::size_t since = c_before - candidates_prefix_[taus[j]];
    const double g = state_.gamma(t - taus[j] - since);
    wealth += (j == 0 ? alpha - w0_ : alpha) * g;
  }
  const double level = std::min(lambda_, (1.0 - lambda_) * wealth);
  last_level_ = level;

  const double p = state_.score(t);
  const bool candidate = p <= lambda_;
  candidates_prefix_.push_back(c_before + (candidate ? 1 : 0));
  if (!candidate) spent_ += level / (1.0 - lambda_);
  if (p <= level) {
    state_.set_k_star(taus.size() + 1);
    return {t};
  }
  return {};
}

bool Saffron::condition_holds() const {
  return within_budget(spent_, state_.alpha(), state_.num_rejected());
}

}  // namespace oarc
