#include "onlinearc/boosting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "onlinearc/errors.hpp"

namespace oarc {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_sf(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

std::string to_string(TruncationVariant v) {
  switch (v) {
    case TruncationVariant::Full:
      return "full";
    case TruncationVariant::Plus:
      return "plus";
    case TruncationVariant::Minus:
      return "minus";
    case TruncationVariant::Local:
      return "local";
    case TruncationVariant::LocalPlus:
      return "local-plus";
    case TruncationVariant::LocalMinus:
      return "local-minus";
    case TruncationVariant::Toad:
      return "toad";
    case TruncationVariant::Prds:
      return "prds";
  }
  return "?";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "pass";
    case Verdict::Fail:
      return "fail";
    case Verdict::Indeterminate:
      return "indeterminate";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// TruncationSpec

namespace {

TruncationSpec make_spec(double alpha, double gamma, TruncationVariant v, std::size_t s, std::size_t k0,
                         std::size_t d) {
  TruncationSpec spec;
  spec.alpha = alpha;
  spec.gamma = gamma;
  spec.variant = v;
  spec.s = s;
  spec.lag_kstar = k0;
  spec.deadline = d;
  spec.validate();
  return spec;
}

}  // namespace

TruncationSpec TruncationSpec::full(double alpha, double gamma) {
  return make_spec(alpha, gamma, TruncationVariant::Full, kInfinite, 0, kInfinite);
}
TruncationSpec TruncationSpec::plus(double alpha, double gamma, std::size_t s) {
  return make_spec(alpha, gamma, TruncationVariant::Plus, s, 0, kInfinite);
}
TruncationSpec TruncationSpec::minus(double alpha, double gamma, std::size_t s) {
  return make_spec(alpha, gamma, TruncationVariant::Minus, s, 0, kInfinite);
}
TruncationSpec TruncationSpec::local(double alpha, double gamma, std::size_t k0) {
  return make_spec(alpha, gamma, TruncationVariant::Local, kInfinite, k0, kInfinite);
}
TruncationSpec TruncationSpec::local_plus(double alpha, double gamma, std::size_t s, std::size_t k0) {
  return make_spec(alpha, gamma, TruncationVariant::LocalPlus, s, k0, kInfinite);
}
TruncationSpec TruncationSpec::local_minus(double alpha, double gamma, std::size_t s, std::size_t k0) {
  return make_spec(alpha, gamma, TruncationVariant::LocalMinus, s, k0, kInfinite);
}
TruncationSpec TruncationSpec::toad(double alpha, double gamma, std::size_t d) {
  return make_spec(alpha, gamma, TruncationVariant::Toad, kInfinite, 0, d);
}
TruncationSpec TruncationSpec::prds(double alpha, double gamma) {
  return make_spec(alpha, gamma, TruncationVariant::Prds, kInfinite, 0, kInfinite);
}

void TruncationSpec::validate() const {
  validate_alpha(alpha);
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    std::ostringstream os;
    os << "truncation weight gamma = " << gamma << " is not a nonnegative finite number";
    throw ConfigError(os.str());
  }
  switch (variant) {
    case TruncationVariant::Plus:
    case TruncationVariant::Minus:
      if (s == 0 || s == kInfinite) throw ConfigError(to_string(variant) + " truncation needs a finite cutoff s >= 1");
      break;
    case TruncationVariant::LocalPlus:
    case TruncationVariant::LocalMinus:
      if (s == 0 || s == kInfinite) throw ConfigError(to_string(variant) + " truncation needs a finite cutoff s >= 1");
      if (lag_kstar >= s) {
        std::ostringstream os;
        os << to_string(variant) << " truncation needs lag k* + 1 <= s (k* = " << lag_kstar << ", s = " << s << ")";
        throw ConfigError(os.str());
      }
      break;
    case TruncationVariant::Local:
      if (lag_kstar == kInfinite) throw ConfigError("local truncation needs a finite lag k*");
      break;
    case TruncationVariant::Toad:
      if (deadline == 0) throw ConfigError("toad truncation needs a deadline >= 1");
      break;
    case TruncationVariant::Full:
    case TruncationVariant::Prds:
      break;
  }
}

bool TruncationSpec::has_finite_cutoff() const {
  switch (variant) {
    case TruncationVariant::Plus:
    case TruncationVariant::Minus:
    case TruncationVariant::LocalPlus:
    case TruncationVariant::LocalMinus:
      return true;
    case TruncationVariant::Toad:
      return deadline != kInfinite;
    default:
      return false;
  }
}

bool TruncationSpec::passes_through() const {
  return variant == TruncationVariant::Plus || variant == TruncationVariant::LocalPlus;
}

std::size_t TruncationSpec::first_grid_index() const {
  switch (variant) {
    case TruncationVariant::Local:
    case TruncationVariant::LocalPlus:
    case TruncationVariant::LocalMinus:
      return lag_kstar + 1;
    default:
      return 1;
  }
}

std::string TruncationSpec::describe() const {
  std::ostringstream os;
  os << to_string(variant) << "(alpha=" << alpha << ", gamma=" << gamma;
  if (s != kInfinite) os << ", s=" << s;
  if (variant == TruncationVariant::Local || variant == TruncationVariant::LocalPlus ||
      variant == TruncationVariant::LocalMinus) {
    os << ", k*=" << lag_kstar;
  }
  if (variant == TruncationVariant::Toad) {
    os << ", d=";
    if (deadline == kInfinite) {
      os << "inf";
    } else {
      os << deadline;
    }
  }
  os << ")";
  return os.str();
}

double truncate(const TruncationSpec& spec, double x) {
  if (std::isnan(x) || x < 0.0) {
    std::ostringstream os;
    os << "cannot truncate " << x << ": argument must lie in [0, inf]";
    throw InputError(os.str());
  }
  const double alpha = spec.alpha;
  const double gamma = spec.gamma;
  if (!(gamma > 0.0)) return 0.0;

  // Smallest k with x >= g_k; T(inf) sits on g_1.
  const std::size_t level = std::isinf(x) ? 1 : e_level(x, alpha, gamma);
  auto grid = [&](std::size_t k) { return k == kInfinite ? 0.0 : e_grid(k, alpha, gamma); };

  switch (spec.variant) {
    case TruncationVariant::Full:
    case TruncationVariant::Prds:
      return grid(level);
    case TruncationVariant::Plus:
      return level > spec.s ? x : grid(level);
    case TruncationVariant::Minus:
      return level > spec.s ? 0.0 : grid(level);
    case TruncationVariant::Local:
      return level == kInfinite ? 0.0 : grid(std::max(level, spec.lag_kstar + 1));
    case TruncationVariant::LocalPlus:
      return level > spec.s ? x : grid(std::max(level, spec.lag_kstar + 1));
    case TruncationVariant::LocalMinus:
      return level > spec.s ? 0.0 : grid(std::max(level, spec.lag_kstar + 1));
    case TruncationVariant::Toad:
      return level > spec.deadline ? 0.0 : grid(level);
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Closed-form expectations
//
// With a = alpha gamma, y = a b and P_k = P(bE >= g_k) = Q(delta/2 - log(k y)/delta),
// summation by parts gives
//
//   a E[T(bE)] = P_s / s + sum_{k=c0}^{s-1} P_k / (k (k+1))    [+ y Q(delta/2 + log(s y)/delta)]
//
// with c0 = k* + 1 for local variants and 1 otherwise; the bracketed term is
// the pass-through mass of the Plus family. Every term is a nonnegative
// upper-tail probability, so nothing cancels.

namespace {

struct Rescaled {
  double value = 0.0;   // H(y)
  double dvalue = 0.0;  // dH / dlog y
};

Rescaled rescaled_expectation(double delta, double log_y, std::size_t c0, std::size_t s, bool plus) {
  Rescaled r;
  const double half = 0.5 * delta;
  const double ds = static_cast<double>(s);
  const double us = half - (std::log(ds) + log_y) / delta;
  r.value = normal_sf(us) / ds;
  r.dvalue = normal_pdf(us) / (delta * ds);
  if (plus) {
    const double w = half + (std::log(ds) + log_y) / delta;
    const double y = std::exp(log_y);
    const double tail = y * normal_sf(w);
    r.value += tail;
    r.dvalue += tail - y * normal_pdf(w) / delta;
  }
  for (std::size_t k = c0; k < s; ++k) {
    const double dk = static_cast<double>(k);
    const double weight = 1.0 / (dk * (dk + 1.0));
    const double u = half - (std::log(dk) + log_y) / delta;
    r.value += normal_sf(u) * weight;
    r.dvalue += normal_pdf(u) * weight / delta;
  }
  return r;
}

std::size_t effective_cutoff(const TruncationSpec& spec) {
  return spec.variant == TruncationVariant::Toad ? spec.deadline : spec.s;
}

void require_closed_form(const TruncationSpec& spec) {
  spec.validate();
  if (!spec.has_finite_cutoff()) {
    throw ConfigError("closed-form expectation needs a finite cutoff; got " + spec.describe());
  }
}

}  // namespace

GaussianLRModel::GaussianLRModel(double d) : delta(d) {
  if (!(d > 0.0) || !std::isfinite(d)) {
    std::ostringstream os;
    os << "Gaussian likelihood-ratio shift delta = " << d << " must be positive";
    throw ConfigError(os.str());
  }
}

double expected_truncated_value(const GaussianLRModel& model, const TruncationSpec& spec, double b) {
  require_closed_form(spec);
  if (std::isnan(b) || b < 0.0) {
    std::ostringstream os;
    os << "boosting factor b = " << b << " must be nonnegative";
    throw InputError(os.str());
  }
  if (b == 0.0 || !(spec.gamma > 0.0)) return 0.0;
  const double a = spec.alpha * spec.gamma;
  const Rescaled r = rescaled_expectation(model.delta, std::log(a) + std::log(b), spec.first_grid_index(),
                                          effective_cutoff(spec), spec.passes_through());
  return r.value / a;
}

BoostSolution solve_boost_factor(const GaussianLRModel& model, const TruncationSpec& spec) {
  require_closed_form(spec);
  if (!(spec.gamma > 0.0)) {
    throw SolverError("boosting factor undefined for gamma = 0: the truncation is identically zero");
  }
  const double a = spec.alpha * spec.gamma;
  const double log_a = std::log(a);
  const std::size_t c0 = spec.first_grid_index();
  const std::size_t s = effective_cutoff(spec);
  const bool plus = spec.passes_through();

  // g(l) = E[T(e^l E)] - 1 in l = log b; g' = H'(y) / a.
  int evals = 0;
  auto g = [&](double l, double* dg) {
    ++evals;
    const Rescaled r = rescaled_expectation(model.delta, log_a + l, c0, s, plus);
    if (dg != nullptr) *dg = r.dvalue / a;
    return r.value / a - 1.0;
  };

  BoostSolution sol;
  double lo = 0.0;
  double g_lo = g(lo, nullptr);
  if (g_lo >= 0.0) {
    sol.b = 1.0;
    sol.residual = std::abs(g_lo);
    sol.iterations = evals;
    return sol;
  }
  const double l_max = std::log(kMaxBoostFactor);
  double hi = std::log(2.0);
  double g_hi = g(hi, nullptr);
  while (g_hi < 0.0) {
    if (hi >= l_max) {
      std::ostringstream os;
      os << "no boosting factor in [1, " << kMaxBoostFactor << "] for " << spec.describe()
         << " (E[T(bE)] at b_max is " << g_hi + 1.0 << ")";
      throw SolverError(os.str());
    }
    lo = hi;
    g_lo = g_hi;
    hi = std::min(hi + std::log(2.0), l_max);
    g_hi = g(hi, nullptr);
  }

  double x = 0.5 * (lo + hi);
  double dg = 0.0;
  double gx = g(x, &dg);
  for (int it = 0; it < 200; ++it) {
    if (gx == 0.0) break;
    if (gx < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    if (hi - lo <= 1e-14 * std::max(1.0, std::abs(hi))) break;
    double next = x - gx / dg;
    if (!(dg > 0.0) || !(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - x);
    x = next;
    gx = g(x, &dg);
    if (step <= 1e-15 * std::max(1.0, std::abs(x))) break;
  }
  sol.b = std::exp(x);
  sol.residual = std::abs(gx);
  sol.iterations = evals;
  return sol;
}

// ---------------------------------------------------------------------------
// Transforms

NonincreasingTransform NonincreasingTransform::reciprocal() {
  NonincreasingTransform t;
  t.psi_ = [](double u) { return u > 0.0 ? 1.0 / u : std::numeric_limits<double>::infinity(); };
  t.inverse_ = [](double y) {
    if (std::isinf(y)) return 0.0;
    if (y <= 1.0) return 1.0;
    return 1.0 / y;
  };
  t.inverse_limit_ = 1.0;
  return t;
}

NonincreasingTransform NonincreasingTransform::from_shape(const ShapeFunction& beta, double alpha, double gamma) {
  validate_alpha(alpha);
  if (!(gamma > 0.0)) throw ConfigError("shape transform needs gamma > 0");
  NonincreasingTransform t;
  t.psi_ = [beta, alpha, gamma](double u) {
    if (u <= 0.0) return std::numeric_limits<double>::infinity();
    const std::size_t k = beta.level(u, alpha, gamma);
    return k == kInfinite ? 0.0 : e_grid(k, alpha, gamma);
  };
  t.inverse_ = [beta, alpha, gamma](double y) {
    if (std::isinf(y)) return 0.0;
    if (y <= 0.0) return 1.0;
    const double r = 1.0 / (alpha * gamma * y);
    if (r >= 9e15) return std::min(1.0, beta(kMaxLevel) * alpha * gamma);
    const auto k = static_cast<std::size_t>(std::floor(r * (1.0 + 4.0 * std::numeric_limits<double>::epsilon())));
    if (k == 0) return 0.0;
    return std::min(1.0, beta(k) * alpha * gamma);
  };
  t.inverse_limit_ = std::min(1.0, beta(kMaxLevel) * alpha * gamma);
  return t;
}

NonincreasingTransform NonincreasingTransform::zero() {
  NonincreasingTransform t;
  t.psi_ = [](double u) { return u > 0.0 ? 0.0 : std::numeric_limits<double>::infinity(); };
  t.inverse_ = [](double y) { return y > 0.0 ? 0.0 : 1.0; };
  t.inverse_limit_ = 0.0;
  return t;
}

NonincreasingTransform NonincreasingTransform::from_function(std::function<double(double)> psi,
                                                             double inverse_limit) {
  NonincreasingTransform t;
  t.psi_ = std::move(psi);
  t.inverse_limit_ = inverse_limit;
  return t;
}

double NonincreasingTransform::inverse(double y) const {
  if (inverse_) return inverse_(y);
  if (std::isinf(y)) return 0.0;
  if (psi_(1.0) >= y) return 1.0;
  double lo = 0.0;  // psi(lo) >= y
  double hi = 1.0;  // psi(hi) < y
  for (int i = 0; i < 200 && hi - lo > 1e-17; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (psi_(mid) >= y) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

ConditionResult check_transform_condition(const NonincreasingTransform& psi, double alpha, double gamma,
                                          ConditionMode mode, std::size_t deadline, std::size_t k_max) {
  validate_alpha(alpha);
  ConditionResult res;
  if (!(gamma > 0.0)) {
    res.verdict = Verdict::Pass;
    return res;
  }
  constexpr double kTol = 1e-12;
  std::size_t K = k_max;
  if (mode == ConditionMode::Toad) {
    if (deadline == 0) throw ConfigError("toad condition needs a deadline >= 1");
    if (deadline != kInfinite) K = deadline;
  }
  double prev = 0.0;  // psi^{-1}(g_0) = psi^{-1}(inf)
  for (std::size_t k = 1; k <= K; ++k) {
    const double g = e_grid(k, alpha, gamma);
    const double inv = psi.inverse(g);
    if (mode == ConditionMode::Prds) {
      res.value = std::max(res.value, g * inv);
    } else {
      res.value += g * (inv - prev);
    }
    prev = inv;
    res.terms = k;
    if (res.value > 1.0 + kTol) break;
  }
  const bool exhaustive = mode == ConditionMode::Toad && deadline != kInfinite;
  if (!exhaustive && res.terms == K) {
    const double g_next = e_grid(K + 1, alpha, gamma);
    if (mode == ConditionMode::Prds) {
      res.tail_bound = g_next * psi.inverse_limit();
    } else {
      res.tail_bound = g_next * std::max(0.0, psi.inverse_limit() - prev);
    }
  }
  if (res.value > 1.0 + kTol) {
    res.verdict = Verdict::Fail;
  } else {
    const double worst = mode == ConditionMode::Prds ? std::max(res.value, res.tail_bound) : res.value + res.tail_bound;
    res.verdict = worst <= 1.0 + kTol ? Verdict::Pass : Verdict::Indeterminate;
  }
  return res;
}

// ---------------------------------------------------------------------------
// BoostFactorTable

namespace {

constexpr double kGridStep = 0.04;

}  // namespace

BoostFactorTable::BoostFactorTable(GaussianLRModel model, double alpha, WeightSequence weights,
                                   TruncationVariant variant, std::size_t s, std::size_t horizon)
    : model_(model), alpha_(alpha), weights_(std::move(weights)), variant_(variant), s_(s), horizon_(horizon) {
  validate_alpha(alpha);
  if (variant != TruncationVariant::Plus && variant != TruncationVariant::Minus &&
      variant != TruncationVariant::LocalPlus && variant != TruncationVariant::LocalMinus) {
    throw ConfigError("boosting table supports plus, minus, local-plus and local-minus; got " + to_string(variant));
  }
  if (s == 0 || s == kInfinite) throw ConfigError("boosting table needs a finite cutoff s >= 1");
  if (horizon == 0) throw ConfigError("boosting table needs a horizon >= 1");

  if (!local()) {
    exact_.assign(horizon, 1.0);
    for (std::size_t t = 1; t <= horizon; ++t) {
      if (weights_(t) > 0.0) exact_[t - 1] = solve_boost_factor(model_, spec(t)).b;
    }
    return;
  }

  double a_min = std::numeric_limits<double>::infinity();
  double a_max = 0.0;
  for (std::size_t t = 1; t <= horizon; ++t) {
    const double g = weights_(t);
    if (g > 0.0) {
      a_min = std::min(a_min, alpha_ * g);
      a_max = std::max(a_max, alpha_ * g);
    }
  }
  if (a_max == 0.0) return;
  log_y0_ = std::log(a_min) - 1.0;
  const double log_y1 = std::log(a_max * kMaxBoostFactor) + 1.0;
  step_ = kGridStep;
  grid_ = static_cast<std::size_t>(std::ceil((log_y1 - log_y0_) / step_)) + 1;
  log_h_.assign(s_ * grid_, 0.0);
  dlog_h_.assign(s_ * grid_, 0.0);

  const bool plus = variant_ == TruncationVariant::LocalPlus;
  const double delta = model_.delta;
  const double half = 0.5 * delta;
  std::vector<double> log_k(s_ + 1, 0.0);
  for (std::size_t k = 1; k <= s_; ++k) log_k[k] = std::log(static_cast<double>(k));

  for (std::size_t j = 0; j < grid_; ++j) {
    const double log_y = log_y0_ + static_cast<double>(j) * step_;
    // Base: k0 = s - 1, i.e. only the P_s / s term (plus pass-through).
    const Rescaled base = rescaled_expectation(delta, log_y, s_, s_, plus);
    double h = base.value;
    double dh = base.dvalue;
    for (std::size_t k0 = s_; k0-- > 0;) {
      if (k0 + 1 < s_) {
        const std::size_t k = k0 + 1;
        const double dk = static_cast<double>(k);
        const double weight = 1.0 / (dk * (dk + 1.0));
        const double u = half - (log_k[k] + log_y) / delta;
        h += normal_sf(u) * weight;
        dh += normal_pdf(u) * weight / delta;
      }
      log_h_[k0 * grid_ + j] = h > 0.0 ? std::log(h) : -std::numeric_limits<double>::infinity();
      dlog_h_[k0 * grid_ + j] = h > 0.0 ? dh / h : 0.0;
    }
  }
}

bool BoostFactorTable::local() const {
  return variant_ == TruncationVariant::LocalPlus || variant_ == TruncationVariant::LocalMinus;
}

TruncationSpec BoostFactorTable::spec(std::size_t t, std::size_t k0) const {
  const double gamma = weights_(t);
  switch (variant_) {
    case TruncationVariant::Plus:
      return TruncationSpec::plus(alpha_, gamma, s_);
    case TruncationVariant::Minus:
      return TruncationSpec::minus(alpha_, gamma, s_);
    case TruncationVariant::LocalPlus:
      return TruncationSpec::local_plus(alpha_, gamma, s_, k0);
    default:
      return TruncationSpec::local_minus(alpha_, gamma, s_, k0);
  }
}

double BoostFactorTable::factor(std::size_t t, std::size_t k0) const {
  const double gamma = weights_(t);
  if (!(gamma > 0.0)) return 1.0;
  if (!local()) {
    if (t <= horizon_) return exact_[t - 1];
    return solve_boost_factor(model_, spec(t)).b;
  }
  if (k0 >= s_) {
    std::ostringstream os;
    os << "local boosting needs k* + 1 <= s (k* = " << k0 << ", s = " << s_ << ")";
    throw ConfigError(os.str());
  }
  if (t > horizon_ || grid_ == 0) return solve_boost_factor(model_, spec(t, k0)).b;
  return solve_local(alpha_ * gamma, k0);
}

double BoostFactorTable::solve_local(double a, std::size_t k0) const {
  const double target = std::log(a);
  const double* G = &log_h_[k0 * grid_];
  const double* D = &dlog_h_[k0 * grid_];
  if (target > G[grid_ - 1]) {
    std::ostringstream os;
    os << "no local boosting factor in [1, " << kMaxBoostFactor << "] for a = " << a << ", k* = " << k0;
    throw SolverError(os.str());
  }
  if (target <= G[0]) return 1.0;
  // Largest j with G[j] <= target; G is nondecreasing in j.
  const std::size_t j = static_cast<std::size_t>(std::upper_bound(G, G + grid_, target) - G) - 1;
  const double g0 = G[j];
  const double g1 = G[j + 1];
  const double m0 = D[j] * step_;
  const double m1 = D[j + 1] * step_;
  auto hermite = [&](double u) {
    const double u2 = u * u;
    const double u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * g0 + (u3 - 2 * u2 + u) * m0 + (-2 * u3 + 3 * u2) * g1 + (u3 - u2) * m1;
  };
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (hermite(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double log_y = log_y0_ + (static_cast<double>(j) + 0.5 * (lo + hi)) * step_;
  return std::max(1.0, std::exp(log_y - target));
}

// ---------------------------------------------------------------------------
// BoostedOnlineEbh

BoostedOnlineEbh::BoostedOnlineEbh(WeightSequence weights, double alpha,
                                   std::shared_ptr<const BoostFactorTable> table, std::size_t batch_size,
                                   std::string name)
    : OnlineProcedure(std::move(weights), alpha),
      table_(std::move(table)),
      batch_size_(batch_size),
      name_(std::move(name)) {
  if (!table_) throw ConfigError("boosted online e-BH needs a boosting table");
  if (batch_size_ == 0) throw ConfigError("boosting batch size must be >= 1");
}

double BoostedOnlineEbh::preprocess(double score) {
  const std::size_t t = state_.time() + 1;
  std::size_t k0 = 0;
  if (table_->local()) {
    const std::size_t prev_end = ((t - 1) / batch_size_) * batch_size_;
    k0 = prev_end == 0 ? 0 : k_history_[prev_end - 1];
  }
  raw_.push_back(score);
  lag_.push_back(k0);
  const double b = table_->factor(t, k0);
  const double x = score * b;
  const TruncationVariant v = table_->variant();
  if (v == TruncationVariant::Minus || v == TruncationVariant::LocalMinus) {
    return truncate(table_->spec(t, k0), x);
  }
  return x;
}

std::vector<std::size_t> BoostedOnlineEbh::advance() {
  const std::size_t t = state_.time();
  auto joined = ladder_.push(e_level(state_.score(t), state_.alpha(), state_.gamma(t)));
  state_.set_k_star(ladder_.k_star());
  k_history_.push_back(ladder_.k_star());
  return joined;
}

}  // namespace oarc
