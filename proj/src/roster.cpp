#include "onlinearc/roster.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <sstream>
#include <tuple>

#include "onlinearc/e_procedures.hpp"
#include "onlinearc/errors.hpp"
#include "onlinearc/p_procedures.hpp"

namespace oarc {

namespace {

const std::vector<std::string> kNames = {
    "oe-bh",  "e-lond", "e-toad", "oe-bh-boost", "oe-bh-boost-plus", "oe-bh-boost-local", "oe-bh-boost-local-plus",
    "o-bh",   "lond",   "r-lond", "o-br",        "toad",             "o-sbh",             "lord",
    "saffron"};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double parse_q(const std::string& text, const std::string& entry) {
  char* end = nullptr;
  const double q = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || !(q > 0.0 && q < 1.0)) {
    throw ConfigError("bad weight parameter in procedure '" + entry + "': q must be in (0, 1)");
  }
  return q;
}

std::string format_q(double q) {
  std::ostringstream os;
  os.precision(10);
  os << q;
  return os.str();
}

}  // namespace

std::string RosterEntry::label() const { return q < 0.0 ? name : name + ":" + format_q(q); }

const std::vector<std::string>& roster_names() { return kNames; }

bool is_known_procedure(const std::string& name) {
  return std::find(kNames.begin(), kNames.end(), name) != kNames.end();
}

std::vector<RosterEntry> parse_roster(const std::string& text) {
  std::vector<RosterEntry> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    RosterEntry e;
    const auto colon = item.find(':');
    e.name = item.substr(0, colon);
    if (colon != std::string::npos) e.q = parse_q(item.substr(colon + 1), item);
    if (e.name == "all") {
      for (const auto& n : kNames) out.push_back(RosterEntry{n, e.q});
      continue;
    }
    if (!is_known_procedure(e.name)) {
      std::ostringstream os;
      os << "unknown procedure '" << e.name << "'; known:";
      for (const auto& n : kNames) os << ' ' << n;
      throw ConfigError(os.str());
    }
    out.push_back(e);
  }
  if (out.empty()) throw ConfigError("procedure list is empty");
  return out;
}

std::vector<PreparedProcedure> prepare_roster(const std::vector<RosterEntry>& entries, const RosterOptions& o) {
  validate_alpha(o.alpha);
  if (o.n == 0) throw ConfigError("horizon n must be >= 1");
  if (o.batch_size == 0) throw ConfigError("batch size must be >= 1");
  if (!(o.lambda >= o.alpha && o.lambda < 1.0)) throw ConfigError("lambda must lie in [alpha, 1)");
  if (!(o.delta > 0.0)) throw ConfigError("likelihood-ratio delta must be positive");

  using Key = std::tuple<double, TruncationVariant>;
  std::map<Key, std::shared_ptr<const BoostFactorTable>> tables;
  const std::optional<WeightSequence> fixed = o.weights;
  auto weights_for = [fixed](double q) { return fixed ? *fixed : WeightSequence::geometric(q); };
  auto table = [&](double q, TruncationVariant v) {
    auto& slot = tables[Key{q, v}];
    if (!slot) {
      slot = std::make_shared<const BoostFactorTable>(GaussianLRModel(o.delta), o.alpha, weights_for(q), v, o.n, o.n);
    }
    return slot;
  };

  const ShapeFunction by = ShapeFunction::by(o.n);
  const DeadlineSchedule lag = DeadlineSchedule::fixed_lag(o.deadline_lag);
  const double alpha = o.alpha;
  const double lambda = o.lambda;
  const double lord_w0 = o.lord_w0 < 0.0 ? o.alpha / 10.0 : o.lord_w0;
  const std::size_t batch = o.batch_size;

  std::vector<PreparedProcedure> out;
  for (const auto& e : entries) {
    PreparedProcedure p;
    p.label = e.label();
    p.name = e.name;
    p.q = e.q < 0.0 ? o.q : e.q;
    if (!(p.q > 0.0 && p.q < 1.0)) throw ConfigError("weight parameter q must be in (0, 1)");
    const double q = p.q;
    auto w = [weights_for, q] { return weights_for(q); };
    const std::string& n = e.name;
    p.kind = ScoreKind::EValue;
    if (n == "oe-bh") {
      p.make = [=] { return std::make_unique<OnlineEbh>(w(), alpha); };
    } else if (n == "e-lond") {
      p.make = [=] { return std::make_unique<ELond>(w(), alpha); };
    } else if (n == "e-toad") {
      p.make = [=] { return std::make_unique<ETOAD>(w(), alpha, lag); };
    } else if (n == "oe-bh-boost") {
      auto t = table(q, TruncationVariant::Minus);
      p.make = [=] { return std::make_unique<BoostedOnlineEbh>(w(), alpha, t, 1, n); };
    } else if (n == "oe-bh-boost-plus") {
      auto t = table(q, TruncationVariant::Plus);
      p.make = [=] { return std::make_unique<BoostedOnlineEbh>(w(), alpha, t, 1, n); };
    } else if (n == "oe-bh-boost-local") {
      auto t = table(q, TruncationVariant::LocalMinus);
      p.make = [=] { return std::make_unique<BoostedOnlineEbh>(w(), alpha, t, batch, n); };
    } else if (n == "oe-bh-boost-local-plus") {
      auto t = table(q, TruncationVariant::LocalPlus);
      p.make = [=] { return std::make_unique<BoostedOnlineEbh>(w(), alpha, t, batch, n); };
    } else {
      p.kind = ScoreKind::PValue;
      if (n == "o-bh") {
        p.make = [=] { return std::make_unique<OnlineBh>(w(), alpha); };
      } else if (n == "lond") {
        p.make = [=] { return std::make_unique<Lond>(w(), alpha); };
      } else if (n == "r-lond") {
        p.make = [=] { return std::make_unique<RLond>(w(), alpha, by); };
      } else if (n == "o-br") {
        p.make = [=] { return std::make_unique<OnlineBr>(w(), alpha, by); };
      } else if (n == "toad") {
        p.make = [=] { return std::make_unique<Toad>(w(), alpha, lag, by); };
      } else if (n == "o-sbh") {
        p.make = [=] { return std::make_unique<OnlineStoreyBh>(w(), alpha, lambda); };
      } else if (n == "lord") {
        p.make = [=] { return std::make_unique<Lord>(w(), alpha, lord_w0); };
      } else if (n == "saffron") {
        p.make = [=] { return std::make_unique<Saffron>(w(), alpha, lambda); };
      } else {
        throw ConfigError("unknown procedure '" + n + "'");
      }
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace oarc
