#include "onlinearc/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <ostream>
#include <sstream>

#include "onlinearc/boosting.hpp"
#include "onlinearc/errors.hpp"
#include "onlinearc/p_procedures.hpp"

namespace oarc {

namespace {

constexpr std::uint64_t kAdversarialStream = 0xad5e;

void check_unit_open(double v, const char* what) {
  if (!(v > 0.0 && v < 1.0)) {
    std::ostringstream os;
    os << what << " must lie in (0, 1), got " << v;
    throw ConfigError(os.str());
  }
}

ExperimentResult run_impl(const GaussianSetupConfig& cfg, const std::vector<double>& pi_grid,
                          const std::vector<RosterEntry>& roster, bool parallel) {
  cfg.validate();
  if (pi_grid.empty()) throw ConfigError("pi_A grid is empty");
  for (double pi : pi_grid) check_unit_open(pi, "pi_A");
  if (cfg.m < 2) throw ConfigError("need at least two trials (m >= 2)");
  const auto procs = prepare_roster(roster, cfg.roster_options());

  ExperimentResult result;
  result.config = cfg;
  result.pi_grid = pi_grid;
  const std::size_t npi = pi_grid.size();
  for (const auto& p : procs) {
    result.labels.push_back(p.label);
    for (std::size_t j = 0; j < npi; ++j) {
      ExperimentCell c;
      c.label = p.label;
      c.q = p.q;
      c.pi_a = pi_grid[j];
      c.trials.resize(cfg.m);
      result.cells.push_back(std::move(c));
    }
  }

  const auto total = static_cast<long long>(npi * cfg.m);
  std::exception_ptr failure;
  auto work = [&](long long idx) {
    const auto j = static_cast<std::size_t>(idx) / cfg.m;
    const auto i = static_cast<std::size_t>(idx) % cfg.m;
    GaussianSetupConfig local = cfg;
    local.pi_a = pi_grid[j];
    Rng rng = Rng::substream(cfg.seed, j, i);
    const GaussianTrial trial = generate_gaussian_trial(local, rng);
    for (std::size_t p = 0; p < procs.size(); ++p) {
      result.cells[p * npi + j].trials[i] = summarize_trial(run_procedure(procs[p], trial), cfg.n);
    }
  };

  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long long idx = 0; idx < total; ++idx) {
      try {
        work(idx);
      } catch (...) {
#pragma omp critical(oarc_failure)
        if (!failure) failure = std::current_exception();
      }
    }
  } else {
    for (long long idx = 0; idx < total; ++idx) work(idx);
  }
  if (failure) std::rethrow_exception(failure);

  for (auto& c : result.cells) c.metrics = estimate_metrics(c.trials);
  return result;
}

}  // namespace

void GaussianSetupConfig::validate() const {
  if (n == 0) throw ConfigError("n must be >= 1");
  if (m == 0) throw ConfigError("m must be >= 1");
  if (batch_size == 0) throw ConfigError("batch size must be >= 1");
  if (n % batch_size != 0) {
    std::ostringstream os;
    os << "n = " << n << " is not divisible by the batch size " << batch_size;
    throw ConfigError(os.str());
  }
  check_unit_open(pi_a, "pi_A");
  if (!(rho >= 0.0 && rho <= 1.0)) throw ConfigError("within-batch correlation must lie in [0, 1]");
  check_unit_open(q, "q");
  validate_alpha(alpha);
  if (!(lambda >= alpha && lambda < 1.0)) throw ConfigError("lambda must lie in [alpha, 1)");
  if (!(mu_a > 0.0) || !std::isfinite(mu_a)) throw ConfigError("mu_A must be positive and finite");
}

RosterOptions GaussianSetupConfig::roster_options() const {
  RosterOptions o;
  o.n = n;
  o.alpha = alpha;
  o.q = q;
  o.lambda = lambda;
  o.deadline_lag = deadline_lag;
  o.batch_size = batch_size;
  o.delta = mu_a;
  o.lord_w0 = lord_w0;
  return o;
}

GaussianTrial generate_gaussian_trial(const GaussianSetupConfig& cfg, Rng& rng) {
  cfg.validate();
  GaussianTrial out;
  out.z.resize(cfg.n);
  out.x.resize(cfg.n);
  out.pvalues.resize(cfg.n);
  out.evalues.resize(cfg.n);
  out.truth.is_null.resize(cfg.n);
  const double a = std::sqrt(cfg.rho);
  const double c = std::sqrt(1.0 - cfg.rho);
  const double mu = cfg.mu_a;
  double w = 0.0;
  for (std::size_t t = 0; t < cfg.n; ++t) {
    if (t % cfg.batch_size == 0) w = rng.normal();
    const double xi = rng.normal();
    const bool alt = rng.bernoulli(cfg.pi_a);
    const double z = a * w + c * xi;
    const double x = alt ? z + mu : z;
    out.z[t] = z;
    out.x[t] = x;
    out.truth.is_null[t] = alt ? 0 : 1;
    out.evalues[t] = std::exp(mu * x - 0.5 * mu * mu);
    out.pvalues[t] = normal_sf(cfg.literal_pvalues ? z : x);
  }
  return out;
}

void AdversarialConfig::validate() const {
  validate_alpha(alpha);
  if (K0 == 0) throw ConfigError("K0 must be >= 1");
  if (total() < K0) throw ConfigError("K must be >= K0");
  if (m == 0) throw ConfigError("m must be >= 1");
}

AdversarialPoint adversarial_point(std::vector<double> null_pvalues, std::size_t K, double alpha) {
  if (null_pvalues.empty()) throw InputError("adversarial construction needs at least one null");
  std::sort(null_pvalues.begin(), null_pvalues.end());
  const double gamma = 1.0 / static_cast<double>(K);
  AdversarialPoint pt;
  double best = -1.0;
  std::size_t best_c = 0;
  for (std::size_t j = 1; j <= null_pvalues.size(); ++j) {
    // ceil(K P / alpha), evaluated with the same predicate online BH uses.
    const std::size_t c = std::max<std::size_t>(p_level(null_pvalues[j - 1], alpha, gamma), 1);
    const double ratio = static_cast<double>(j) / static_cast<double>(c);
    if (ratio > best) {
      best = ratio;
      pt.j_star = j;
      best_c = c;
    }
  }
  pt.k1_star = best_c > pt.j_star ? best_c - pt.j_star : 0;
  pt.predicted_fdp = std::min(best, 1.0);
  return pt;
}

AdversarialTrial generate_adversarial_trial(const AdversarialConfig& cfg, Rng& rng) {
  cfg.validate();
  const std::size_t K = cfg.total();
  AdversarialTrial out;
  std::vector<double> nulls(cfg.K0);
  for (auto& p : nulls) p = rng.uniform();
  const auto pt = adversarial_point(nulls, K, cfg.alpha);
  out.j_star = pt.j_star;
  out.k1_star = pt.k1_star;
  out.predicted_fdp = pt.predicted_fdp;
  out.feasible = pt.k1_star <= K - cfg.K0;
  out.stop_time = std::min(cfg.K0 + pt.k1_star, K);
  out.pvalues = std::move(nulls);
  out.pvalues.resize(K, 1.0);
  for (std::size_t t = cfg.K0; t < out.stop_time; ++t) out.pvalues[t] = 0.0;
  out.truth.is_null.assign(K, 0);
  std::fill(out.truth.is_null.begin(), out.truth.is_null.begin() + static_cast<std::ptrdiff_t>(cfg.K0), 1);
  return out;
}

AdversarialSummary run_adversarial(const AdversarialConfig& cfg) {
  cfg.validate();
  const std::size_t K = cfg.total();
  std::vector<double> fdps(cfg.m, 0.0);
  std::vector<double> predicted(cfg.m, 0.0);
  std::vector<char> feasible(cfg.m, 0);
  const auto m = static_cast<long long>(cfg.m);
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < m; ++i) {
    Rng rng = Rng::substream(cfg.seed, kAdversarialStream, static_cast<std::uint64_t>(i));
    const auto trial = generate_adversarial_trial(cfg, rng);
    if (!trial.feasible) continue;
    OnlineBh bh(WeightSequence::uniform(K), cfg.alpha);
    for (std::size_t t = 0; t < trial.stop_time; ++t) bh.step(trial.pvalues[t]);
    feasible[static_cast<std::size_t>(i)] = 1;
    fdps[static_cast<std::size_t>(i)] = fdp(bh.rejection_set(), trial.truth);
    predicted[static_cast<std::size_t>(i)] = trial.predicted_fdp;
  }
  AdversarialSummary s;
  std::vector<double> kept_fdp;
  std::vector<double> kept_pred;
  for (std::size_t i = 0; i < cfg.m; ++i) {
    if (!feasible[i]) {
      ++s.infeasible;
      continue;
    }
    ++s.feasible;
    kept_fdp.push_back(fdps[i]);
    kept_pred.push_back(predicted[i]);
    if (fdps[i] != predicted[i]) ++s.formula_mismatches;
  }
  if (kept_fdp.size() >= 2) {
    s.stop_fdp = estimate(kept_fdp);
    s.predicted_fdp = estimate(kept_pred);
  } else if (kept_fdp.size() == 1) {
    s.stop_fdp = Estimate{kept_fdp[0], 0.0};
    s.predicted_fdp = Estimate{kept_pred[0], 0.0};
  }
  return s;
}

const ExperimentCell& ExperimentResult::cell(const std::string& label, std::size_t pi_index) const {
  const auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end() || pi_index >= pi_grid.size()) throw InputError("no result cell for '" + label + "'");
  const auto p = static_cast<std::size_t>(it - labels.begin());
  return cells[p * pi_grid.size() + pi_index];
}

ExperimentResult run_experiment(const GaussianSetupConfig& cfg, const std::vector<double>& pi_grid,
                                const std::vector<RosterEntry>& roster) {
  return run_impl(cfg, pi_grid, roster, true);
}

ExperimentResult run_experiment_serial(const GaussianSetupConfig& cfg, const std::vector<double>& pi_grid,
                                       const std::vector<RosterEntry>& roster) {
  return run_impl(cfg, pi_grid, roster, false);
}

TrialRecord run_procedure(const PreparedProcedure& proc, const GaussianTrial& trial) {
  auto p = proc.make();
  const auto& scores = proc.kind == ScoreKind::EValue ? trial.evalues : trial.pvalues;
  for (double s : scores) p->step(s);
  return make_trial_record(p->state(), trial.truth);
}

std::vector<ResultRow> to_rows(const ExperimentResult& result) {
  std::vector<ResultRow> rows;
  const auto& cfg = result.config;
  for (const auto& c : result.cells) {
    const std::pair<const char*, Estimate> metrics[] = {
        {"power", c.metrics.power}, {"fdr", c.metrics.fdr_at_end}, {"sup_fdr", c.metrics.sup_fdr}};
    for (const auto& [name, est] : metrics) {
      ResultRow r;
      r.procedure = c.label;
      r.pi_a = c.pi_a;
      r.mu_a = cfg.mu_a;
      r.q = c.q;
      r.alpha = cfg.alpha;
      r.metric = name;
      r.value = est.mean;
      r.stderr_ = est.se;
      r.n = cfg.n;
      r.m = cfg.m;
      r.seed = cfg.seed;
      rows.push_back(std::move(r));
    }
  }
  return rows;
}

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kCsvHeader << '\n';
  char buf[512];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%.10g,%.10g,%.10g,%.10g,%s,%.17g,%.17g,%zu,%zu,%llu\n", r.procedure.c_str(),
                  r.pi_a, r.mu_a, r.q, r.alpha, r.metric.c_str(), r.value, r.stderr_, r.n, r.m,
                  static_cast<unsigned long long>(r.seed));
    out << buf;
  }
}

std::vector<double> parse_pi_grid(const std::string& text) {
  auto number = [&](const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) throw ConfigError("malformed pi_A value '" + s + "' in '" + text + "'");
    return v;
  };
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ':')) parts.push_back(part);
    if (parts.size() != 3) throw ConfigError("pi_A range must be start:stop:step, got '" + text + "'");
    const double a = number(parts[0]);
    const double b = number(parts[1]);
    const double step = number(parts[2]);
    if (!(step > 0.0) || b < a) throw ConfigError("pi_A range needs step > 0 and stop >= start");
    const auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) out.push_back(a + static_cast<double>(i) * step);
  } else {
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) out.push_back(number(part));
  }
  if (out.empty()) throw ConfigError("pi_A grid is empty");
  for (double v : out) check_unit_open(v, "pi_A");
  return out;
}

}  // namespace oarc
