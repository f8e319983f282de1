#include <doctest.h>

#include <memory>
#include <string>
#include <vector>

#include "generators.hpp"
#include "onlinearc/e_procedures.hpp"
#include "onlinearc/p_procedures.hpp"
#include "onlinearc/roster.hpp"

using namespace oarc;

namespace {

struct Instance {
  std::size_t n = 0;
  double alpha = 0.05;
  WeightSequence weights = WeightSequence::uniform(1);
  std::vector<double> p;
  std::vector<double> e;
};

Instance random_instance(Rng& r, std::size_t max_len) {
  Instance in;
  in.n = gen::size_in(r, 1, max_len);
  in.alpha = gen::alpha(r);
  if (r.bernoulli(0.5)) {
    in.weights = WeightSequence::geometric(0.8 + 0.19 * r.uniform());
  } else {
    in.weights = gen::weights(r, in.n);
  }
  in.p = gen::pvalues(r, in.n);
  in.e = gen::evalues(r, in.n, in.alpha, in.weights);
  return in;
}

std::vector<PreparedProcedure> roster_for(const Instance& in, const std::string& names) {
  RosterOptions opt;
  opt.n = in.n;
  opt.alpha = in.alpha;
  opt.lambda = std::max(0.5, in.alpha);
  opt.deadline_lag = 3;
  opt.batch_size = 4;
  opt.weights = in.weights;
  return prepare_roster(parse_roster(names), opt);
}

const std::vector<double>& scores_for(const Instance& in, ScoreKind kind) {
  return kind == ScoreKind::PValue ? in.p : in.e;
}

using Run = std::vector<RejectionSet>;

template <class Proc>
Run run(Proc proc, const std::vector<double>& scores) {
  Run out;
  for (double s : scores) {
    proc.step(s);
    out.push_back(proc.rejection_set());
  }
  return out;
}

}  // namespace

TEST_CASE("every procedure is nested; fully online ones never revisit") {
  Rng r(101);
  for (int it = 0; it < 150; ++it) {
    const auto in = random_instance(r, 40);
    for (const auto& proc : roster_for(in, "all")) {
      CAPTURE(proc.label);
      auto p = proc.make();
      const auto& scores = scores_for(in, proc.kind);
      RejectionSet prev;
      for (std::size_t t = 1; t <= in.n; ++t) {
        const auto res = p->step(scores[t - 1]);
        const auto cur = p->rejection_set();
        CHECK(prev.is_subset_of(cur));
        CHECK(cur.size() == prev.size() + res.newly_rejected.size());
        if (p->fully_online()) {
          for (auto i : res.newly_rejected) CHECK(i == t);
        }
        for (std::size_t s = 1; s <= t; ++s) CHECK(p->state().rejection_set_at(s).is_subset_of(cur));
        prev = cur;
      }
    }
  }
}

TEST_CASE("rejection sets stay self-consistent") {
  Rng r(102);
  for (int it = 0; it < 300; ++it) {
    const auto in = random_instance(r, 50);
    for (const auto& proc :
         roster_for(in, "oe-bh,e-lond,e-toad,o-bh,lond,oe-bh-boost,oe-bh-boost-plus,oe-bh-boost-local")) {
      CAPTURE(proc.label);
      auto p = proc.make();
      const auto& scores = scores_for(in, proc.kind);
      for (std::size_t t = 1; t <= in.n; ++t) {
        p->step(scores[t - 1]);
        const auto stored = p->state().scores();
        CHECK(is_self_consistent(p->rejection_set().indices, stored, proc.kind, in.weights, in.alpha));
      }
    }
  }
}

TEST_CASE("LOND-type procedures are dominated by their ARC counterparts") {
  Rng r(103);
  for (int it = 0; it < 500; ++it) {
    const auto in = random_instance(r, 80);
    const auto ebh = run(OnlineEbh(in.weights, in.alpha), in.e);
    const auto elond = run(ELond(in.weights, in.alpha), in.e);
    const auto bh = run(OnlineBh(in.weights, in.alpha), in.p);
    const auto lond = run(Lond(in.weights, in.alpha), in.p);
    const auto shape = ShapeFunction::by(in.n);
    const auto br = run(OnlineBr(in.weights, in.alpha, shape), in.p);
    const auto rlond = run(RLond(in.weights, in.alpha, shape), in.p);
    for (std::size_t t = 0; t < in.n; ++t) {
      CHECK(elond[t].is_subset_of(ebh[t]));
      CHECK(lond[t].is_subset_of(bh[t]));
      CHECK(rlond[t].is_subset_of(br[t]));
    }
  }
}

TEST_CASE("raising an e-value or lowering a p-value never shrinks a rejection set") {
  Rng r(104);
  for (int it = 0; it < 500; ++it) {
    const auto in = random_instance(r, 40);
    const std::size_t j = gen::size_in(r, 0, in.n - 1);
    auto e2 = in.e;
    e2[j] = r.bernoulli(0.2) ? HUGE_VAL : e2[j] * (1.0 + 20.0 * r.uniform()) + r.uniform() * 100.0;
    auto p2 = in.p;
    p2[j] = r.bernoulli(0.2) ? 0.0 : p2[j] * r.uniform();
    const auto deadlines = DeadlineSchedule::fixed_lag(gen::size_in(r, 0, 5));

    const auto a1 = run(OnlineEbh(in.weights, in.alpha), in.e);
    const auto a2 = run(OnlineEbh(in.weights, in.alpha), e2);
    const auto b1 = run(ELond(in.weights, in.alpha), in.e);
    const auto b2 = run(ELond(in.weights, in.alpha), e2);
    const auto c1 = run(ETOAD(in.weights, in.alpha, deadlines), in.e);
    const auto c2 = run(ETOAD(in.weights, in.alpha, deadlines), e2);
    const auto d1 = run(OnlineBh(in.weights, in.alpha), in.p);
    const auto d2 = run(OnlineBh(in.weights, in.alpha), p2);
    const auto f1 = run(Lond(in.weights, in.alpha), in.p);
    const auto f2 = run(Lond(in.weights, in.alpha), p2);
    for (std::size_t t = 0; t < in.n; ++t) {
      CHECK(a1[t].is_subset_of(a2[t]));
      CHECK(b1[t].is_subset_of(b2[t]));
      CHECK(c1[t].is_subset_of(c2[t]));
      CHECK(d1[t].is_subset_of(d2[t]));
      CHECK(f1[t].is_subset_of(f2[t]));
    }
  }
}

TEST_CASE("Storey estimate only falls and thresholds only rise") {
  Rng r(105);
  for (int it = 0; it < 300; ++it) {
    const auto in = random_instance(r, 80);
    OnlineStoreyBh sbh(in.weights, in.alpha, 0.5);
    double prev_pi0 = HUGE_VAL;
    std::vector<double> prev_thr;
    for (std::size_t t = 1; t <= in.n; ++t) {
      sbh.step(in.p[t - 1]);
      CHECK(sbh.pi0_hat() <= prev_pi0 * (1.0 + 1e-12));
      prev_pi0 = sbh.pi0_hat();
      std::vector<double> thr;
      for (std::size_t i = 1; i <= t; ++i) thr.push_back(sbh.threshold(i, std::max<std::size_t>(sbh.k_star(), 1)));
      for (std::size_t i = 0; i < prev_thr.size(); ++i) CHECK(thr[i] >= prev_thr[i] * (1.0 - 1e-12));
      prev_thr = std::move(thr);
    }
  }
}
