// oarc: command-line front end for the online ARC procedures.

#include <CLI11.hpp>

#include <cstdio>
#include <deque>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "onlinearc/boosting.hpp"
#include "onlinearc/e_procedures.hpp"
#include "onlinearc/errors.hpp"
#include "onlinearc/oracles.hpp"
#include "onlinearc/p_procedures.hpp"
#include "onlinearc/rng.hpp"
#include "onlinearc/roster.hpp"
#include "onlinearc/simulate.hpp"

namespace fs = std::filesystem;
using namespace oarc;

namespace {

struct SimulateArgs {
  GaussianSetupConfig cfg;
  std::string procedures = "oe-bh,e-lond";
  std::string pi_grid = "0.1:0.9:0.1";
  std::string output;
  bool serial = false;
};

struct StreamArgs {
  std::string kind = "e";
  std::string procedure;
  std::string weights = "geometric:0.99";
  double alpha = 0.05;
  double lambda = 0.5;
  std::size_t deadline_lag = 10;
  std::size_t horizon = 1000;
  double delta = 3.0;
};

struct BoostArgs {
  double alpha = 0.05;
  double gamma = 0.01;
  double delta = 3.0;
  std::string variant;
  std::size_t s = 0;
  std::size_t lag = 0;
};

struct AdversarialArgs {
  AdversarialConfig cfg;
  std::vector<double> alphas;
};

struct OracleArgs {
  std::vector<std::size_t> sizes = {5, 50, 500};
  std::size_t instances = 1000;
  double alpha = 0.05;
  double lambda = 0.5;
  std::uint64_t seed = 42;
};

std::string join(const std::vector<std::size_t>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(v[i]);
  }
  return s + "}";
}

WeightSequence parse_weights(const std::string& text) {
  const auto colon = text.find(':');
  const std::string form = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  try {
    if (form == "uniform") return WeightSequence::uniform(std::stoul(arg));
    if (form == "geometric") return WeightSequence::geometric(std::stod(arg));
    if (form == "list") {
      std::vector<double> w;
      std::stringstream ss(arg);
      std::string item;
      while (std::getline(ss, item, ',')) w.push_back(std::stod(item));
      return WeightSequence::explicit_list(std::move(w));
    }
  } catch (const std::logic_error& e) {
    if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const InputError*>(&e)) throw;
  }
  throw ConfigError("bad weight sequence '" + text + "'; use uniform:K, geometric:q or list:w1,w2,...");
}

void write_atomically(const fs::path& target, const std::string& content) {
  fs::path tmp = target;
  tmp += ".tmp-" + std::to_string(std::random_device{}());
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw ConfigError("cannot write to " + target.string());
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw ConfigError("write failed for " + target.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw ConfigError("cannot move results into place at " + target.string());
  }
}

int cmd_simulate(SimulateArgs& a) {
  a.cfg.validate();
  const auto grid = parse_pi_grid(a.pi_grid);
  const auto roster = parse_roster(a.procedures);
  if (a.output.empty()) throw ConfigError("--output is required");
  const fs::path target(a.output);
  const fs::path dir = target.has_parent_path() ? target.parent_path() : fs::path(".");
  if (!fs::is_directory(dir)) throw ConfigError("output directory does not exist: " + dir.string());

  const auto result = a.serial ? run_experiment_serial(a.cfg, grid, roster) : run_experiment(a.cfg, grid, roster);
  std::ostringstream csv;
  write_csv(csv, to_rows(result));
  write_atomically(target, csv.str());
  return 0;
}

int cmd_stream(const StreamArgs& a) {
  ScoreKind kind;
  if (a.kind == "e") {
    kind = ScoreKind::EValue;
  } else if (a.kind == "p") {
    kind = ScoreKind::PValue;
  } else {
    throw ConfigError("--kind must be e or p");
  }
  const std::string name = a.procedure.empty() ? (kind == ScoreKind::EValue ? "oe-bh" : "o-bh") : a.procedure;
  RosterOptions opt;
  opt.alpha = a.alpha;
  opt.lambda = a.lambda;
  opt.deadline_lag = a.deadline_lag;
  opt.n = a.horizon;
  opt.batch_size = 1;
  opt.delta = a.delta;
  opt.weights = parse_weights(a.weights);
  const auto prepared = prepare_roster({RosterEntry{name, -1.0}}, opt);
  if (prepared[0].kind != kind) {
    throw ConfigError("procedure " + name + " expects " + to_string(prepared[0].kind) + " scores");
  }
  auto proc = prepared[0].make();

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(std::cin, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    const std::string token = line.substr(b, e - b + 1);
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end != token.c_str() + token.size()) {
      throw InputError("line " + std::to_string(lineno) + ": not a number: '" + token + "'");
    }
    StepResult r;
    try {
      r = proc->step(v);
    } catch (const InputError& err) {
      throw InputError("line " + std::to_string(lineno) + ": " + err.what());
    }
    std::cout << "t=" << r.t << " k*=" << r.k_star << " rejected=" << join(proc->rejection_set().indices)
              << " new=" << join(r.newly_rejected) << '\n';
  }
  std::cout.flush();
  return 0;
}

struct BoostRow {
  TruncationVariant variant;
  std::size_t s;
  std::size_t lag;
};

int cmd_boost_factor(const BoostArgs& a) {
  std::vector<BoostRow> rows;
  if (a.variant.empty()) {
    rows = {{TruncationVariant::Plus, 10, 0},       {TruncationVariant::Plus, 100, 0},
            {TruncationVariant::Minus, 10, 0},      {TruncationVariant::Minus, 100, 0},
            {TruncationVariant::LocalPlus, 100, 2}, {TruncationVariant::LocalPlus, 100, 10},
            {TruncationVariant::LocalMinus, 100, 2}, {TruncationVariant::LocalMinus, 100, 10}};
  } else {
    TruncationVariant v;
    if (a.variant == "plus") {
      v = TruncationVariant::Plus;
    } else if (a.variant == "minus") {
      v = TruncationVariant::Minus;
    } else if (a.variant == "local-plus") {
      v = TruncationVariant::LocalPlus;
    } else if (a.variant == "local-minus") {
      v = TruncationVariant::LocalMinus;
    } else {
      throw ConfigError("--variant must be plus, minus, local-plus or local-minus");
    }
    rows = {{v, a.s, a.lag}};
  }
  const GaussianLRModel model(a.delta);
  std::printf("%-12s %6s %4s %16s %10s\n", "variant", "s", "lag", "b", "residual");
  int status = 0;
  for (const auto& r : rows) {
    TruncationSpec spec;
    switch (r.variant) {
      case TruncationVariant::Plus:
        spec = TruncationSpec::plus(a.alpha, a.gamma, r.s);
        break;
      case TruncationVariant::Minus:
        spec = TruncationSpec::minus(a.alpha, a.gamma, r.s);
        break;
      case TruncationVariant::LocalPlus:
        spec = TruncationSpec::local_plus(a.alpha, a.gamma, r.s, r.lag);
        break;
      default:
        spec = TruncationSpec::local_minus(a.alpha, a.gamma, r.s, r.lag);
        break;
    }
    try {
      const auto sol = solve_boost_factor(model, spec);
      std::printf("%-12s %6zu %4zu %16.12f %10.3g\n", to_string(r.variant).c_str(), r.s, r.lag, sol.b, sol.residual);
    } catch (const SolverError& e) {
      std::fprintf(stderr, "error: %s s=%zu lag=%zu: %s\n", to_string(r.variant).c_str(), r.s, r.lag, e.what());
      status = 3;
    }
  }
  std::fflush(stdout);
  return status;
}

int cmd_adversarial(AdversarialArgs& a) {
  if (a.alphas.empty()) a.alphas = {a.cfg.alpha};
  std::printf("%-8s %8s %8s %12s %12s %12s %10s\n", "alpha", "feasible", "excluded", "mean_fdp", "stderr",
              "fdp/alpha", "mismatch");
  for (double alpha : a.alphas) {
    AdversarialConfig c = a.cfg;
    c.alpha = alpha;
    const auto s = run_adversarial(c);
    std::printf("%-8g %8zu %8zu %12.6f %12.6f %12.4f %10zu\n", alpha, s.feasible, s.infeasible, s.stop_fdp.mean,
                s.stop_fdp.se, s.stop_fdp.mean / alpha, s.formula_mismatches);
  }
  return 0;
}

int cmd_oracle_check(const OracleArgs& a) {
  std::size_t mismatches = 0;
  for (std::size_t K : a.sizes) {
    if (K == 0) throw ConfigError("instance sizes must be >= 1");
    std::size_t bh = 0;
    std::size_t ebh = 0;
    std::size_t sbh = 0;
    for (std::size_t i = 0; i < a.instances; ++i) {
      Rng rng = Rng::substream(a.seed, K, i);
      std::vector<double> p(K);
      std::vector<double> e(K);
      for (std::size_t j = 0; j < K; ++j) {
        const double x = rng.normal() + (rng.bernoulli(0.3) ? 3.0 : 0.0);
        p[j] = normal_sf(x);
        e[j] = std::exp(3.0 * x - 4.5);
      }
      const auto w = WeightSequence::uniform(K);
      OnlineBh obh(w, a.alpha);
      OnlineEbh oebh(w, a.alpha);
      OnlineStoreyBh osbh(w, a.alpha, a.lambda);
      for (std::size_t j = 0; j < K; ++j) {
        obh.step(p[j]);
        oebh.step(e[j]);
        osbh.step(p[j]);
      }
      bh += obh.rejection_set().indices != offline_bh(p, a.alpha).indices;
      ebh += oebh.rejection_set().indices != offline_ebh(e, a.alpha).indices;
      sbh += osbh.rejection_set().indices != offline_storey_bh(p, a.alpha, a.lambda).indices;
    }
    std::printf("K=%zu instances=%zu bh_mismatch=%zu ebh_mismatch=%zu storey_mismatch=%zu\n", K, a.instances, bh,
                ebh, sbh);
    mismatches += bh + ebh + sbh;
  }
  return mismatches == 0 ? 0 : 1;
}

// CLI11 only reads config files attached to the root app, so subcommand
// files are merged by hand: keys name long options, the command line wins.
std::deque<std::pair<CLI::App*, std::string>> config_files;

void add_config(CLI::App* sub) {
  auto& slot = config_files.emplace_back(sub, "");
  sub->add_option("--config", slot.second, "flat key=value file; command-line flags take precedence");
}

void apply_config(CLI::App* sub, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  for (const auto& item : CLI::ConfigINI().from_config(in)) {
    if (item.name == "++" || item.name == "--") continue;
    if (!item.parents.empty()) throw ConfigError("config sections are not supported: [" + item.parents[0] + "]");
    CLI::Option* op = item.name == "config" ? nullptr : sub->get_option_no_throw("--" + item.name);
    if (op == nullptr) throw ConfigError("unknown key '" + item.name + "' in " + path);
    if (op->count() > 0) continue;
    op->add_result(item.inputs);
    op->run_callback();
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online ARC multiple testing: simulation, streaming and boosting tools"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "run the Gaussian batch experiment and write a CSV");
  add_config(s);
  s->add_option("--procedures", sim.procedures, "comma list of procedures (name or name:q), or all")
      ->capture_default_str();
  s->add_option("--mu-a", sim.cfg.mu_a, "alternative mean")->capture_default_str();
  s->add_option("--pi-a", sim.pi_grid, "alternative probability grid, a:b:step or a,b,c")->capture_default_str();
  s->add_option("--n", sim.cfg.n, "hypotheses per trial")->capture_default_str();
  s->add_option("--m", sim.cfg.m, "trials per grid point")->capture_default_str();
  s->add_option("--q", sim.cfg.q, "geometric weight parameter")->capture_default_str();
  s->add_option("--alpha", sim.cfg.alpha, "target level")->capture_default_str();
  s->add_option("--lambda", sim.cfg.lambda, "Storey / SAFFRON candidate threshold")->capture_default_str();
  s->add_option("--batch-size", sim.cfg.batch_size, "correlated batch size")->capture_default_str();
  s->add_option("--rho", sim.cfg.rho, "within-batch correlation")->capture_default_str();
  s->add_option("--deadline-lag", sim.cfg.deadline_lag, "TOAD deadlines d_t = t + lag")->capture_default_str();
  s->add_option("--lord-w0", sim.cfg.lord_w0, "LORD initial wealth (default alpha/10)");
  s->add_option("--seed", sim.cfg.seed, "master seed")->capture_default_str();
  s->add_flag("--literal-pvalues", sim.cfg.literal_pvalues, "p-values from Phi(-Z) instead of Phi(-X)");
  s->add_flag("--serial", sim.serial, "single-threaded runner");
  s->add_option("-o,--output", sim.output, "CSV path (required)");

  StreamArgs st;
  auto* t = app.add_subcommand("stream", "read scores from stdin, print rejection updates");
  add_config(t);
  t->add_option("--kind", st.kind, "score kind: e or p")->capture_default_str();
  t->add_option("--procedure", st.procedure, "procedure name (default oe-bh or o-bh)");
  t->add_option("--weights", st.weights, "uniform:K, geometric:q or list:w1,w2,...")->capture_default_str();
  t->add_option("--alpha", st.alpha, "target level")->capture_default_str();
  t->add_option("--lambda", st.lambda, "Storey / SAFFRON candidate threshold")->capture_default_str();
  t->add_option("--deadline-lag", st.deadline_lag, "TOAD deadlines d_t = t + lag")->capture_default_str();
  t->add_option("--horizon", st.horizon, "BY shape size and boosting horizon")->capture_default_str();
  t->add_option("--delta", st.delta, "likelihood-ratio delta for boosted procedures")->capture_default_str();

  BoostArgs bf;
  auto* b = app.add_subcommand("boost-factor", "solve boosting factors for Gaussian likelihood-ratio e-values");
  add_config(b);
  b->add_option("--alpha", bf.alpha, "target level")->capture_default_str();
  b->add_option("--gamma", bf.gamma, "weight gamma_t")->capture_default_str();
  b->add_option("--delta", bf.delta, "likelihood-ratio delta")->capture_default_str();
  auto* variant = b->add_option("--variant", bf.variant, "plus, minus, local-plus or local-minus (default: preset table)");
  b->add_option("--s", bf.s, "cutoff")->needs(variant);
  b->add_option("--lag", bf.lag, "k* at the lagged time (local variants)")->needs(variant);

  AdversarialArgs ad;
  auto* a = app.add_subcommand("adversarial", "online BH under the worst-case stopping-time construction");
  add_config(a);
  a->add_option("--K0", ad.cfg.K0, "number of nulls (placed first)")->capture_default_str();
  a->add_option("--K", ad.cfg.K, "total hypotheses (default 2 K0)");
  a->add_option("--alpha", ad.alphas, "one or more levels")->delimiter(',');
  a->add_option("--m", ad.cfg.m, "trials")->capture_default_str();
  a->add_option("--seed", ad.cfg.seed, "master seed")->capture_default_str();

  OracleArgs oc;
  auto* o = app.add_subcommand("oracle-check", "compare streaming procedures with offline oracles");
  add_config(o);
  o->add_option("--K", oc.sizes, "instance sizes")->delimiter(',');
  o->add_option("--instances", oc.instances, "random instances per size")->capture_default_str();
  o->add_option("--alpha", oc.alpha, "target level")->capture_default_str();
  o->add_option("--lambda", oc.lambda, "Storey candidate threshold")->capture_default_str();
  o->add_option("--seed", oc.seed, "master seed")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    for (const auto& [sub, path] : config_files) {
      if (sub->parsed() && !path.empty()) apply_config(sub, path);
    }
    if (s->parsed()) return cmd_simulate(sim);
    if (t->parsed()) return cmd_stream(st);
    if (b->parsed()) return cmd_boost_factor(bf);
    if (a->parsed()) return cmd_adversarial(ad);
    if (o->parsed()) return cmd_oracle_check(oc);
  } catch (const std::exception& e) {
    std::cout.flush();
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
