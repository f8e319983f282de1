#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "generators.hpp"
#include "onlinearc/e_procedures.hpp"
#include "onlinearc/errors.hpp"
#include "onlinearc/metrics.hpp"
#include "onlinearc/p_procedures.hpp"

using namespace oarc;

namespace {

GroundTruth truth_from(std::vector<char> nulls) { return GroundTruth{std::move(nulls)}; }

RejectionSet set_of(std::vector<std::size_t> idx, std::size_t t) { return RejectionSet{std::move(idx), t}; }

// Random stream through online BH with a random null pattern.
TrialRecord random_record(Rng& r, std::size_t n) {
  OnlineBh bh(WeightSequence::geometric(0.95), 0.1);
  GroundTruth truth;
  for (std::size_t i = 0; i < n; ++i) {
    const bool alt = r.bernoulli(0.4);
    truth.is_null.push_back(alt ? 0 : 1);
    bh.step(normal_sf(r.normal() + (alt ? 3.0 : 0.0)));
  }
  return make_trial_record(bh.state(), truth);
}

}  // namespace

TEST_CASE("fdp examples") {
  const auto truth = truth_from({0, 1, 0});
  CHECK(fdp(set_of({}, 3), truth) == 0.0);
  CHECK(fdp(set_of({1, 2, 3}, 3), truth) == doctest::Approx(1.0 / 3.0));
  CHECK(fdp(set_of({1, 3}, 3), truth_from({1, 0, 1})) == 1.0);
  CHECK_THROWS_AS(fdp(set_of({4}, 4), truth), InputError);
  CHECK(truth.num_nulls() == 1);
  CHECK(truth.num_non_nulls() == 2);
}

TEST_CASE("trial record tracks the nested path") {
  OnlineEbh p(WeightSequence::uniform(3), 0.1);
  p.step(100.0);
  p.step(100.0);
  p.step(0.0);
  const auto rec = make_trial_record(p.state(), truth_from({1, 0, 0}));
  REQUIRE(rec.path.values.size() == 3);
  CHECK(rec.num_rejected == std::vector<std::size_t>{1, 2, 2});
  CHECK(rec.true_discoveries == std::vector<std::size_t>{0, 1, 1});
  CHECK(rec.path.values == std::vector<double>{1.0, 0.5, 0.5});
  CHECK(rec.path.sup_fdp == 1.0);
  CHECK(rec.path.sup_up_to(1) == 1.0);
  CHECK(rec.power() == 0.5);
  CHECK_THROWS_AS(make_trial_record(p.state(), truth_from({1, 0})), InputError);
}

TEST_CASE("stopping rules") {
  const std::vector<double> scores{0.1, 0.2, 0.3, 0.4};
  const std::vector<std::size_t> rej{0, 1, 1, 3};
  const ObservableHistory h{scores, rej};
  CHECK(StoppingRule::fixed_time(2).stop_time(h) == 2);
  CHECK(StoppingRule::fixed_time(9).stop_time(h) == 4);
  CHECK(StoppingRule::jth_rejection(1).stop_time(h) == 2);
  CHECK(StoppingRule::jth_rejection(2).stop_time(h) == 4);
  CHECK(StoppingRule::jth_rejection(5).stop_time(h) == 4);
  CHECK_THROWS_AS(StoppingRule::fixed_time(0), ConfigError);
  CHECK_THROWS_AS(StoppingRule::jth_rejection(0), ConfigError);
  const auto rule = StoppingRule::jth_rejection(2);
  CHECK(rule.stop_time(h) == rule.stop_time(h));
}

TEST_CASE("estimate examples") {
  std::vector<TrialSummary> t(2);
  t[0].sup_fdp = 0.2;
  t[1].sup_fdp = 0.4;
  const auto m = estimate_metrics(t);
  CHECK(m.sup_fdr.mean == doctest::Approx(0.3));
  CHECK(m.sup_fdr.se == doctest::Approx(0.1));
  CHECK(m.fdr_at_end.mean == 0.0);
  CHECK(m.fdr_at_end.se == 0.0);
  CHECK(m.trials == 2);

  std::vector<TrialSummary> zeros(10);
  const auto z = estimate_metrics(zeros);
  CHECK(z.sup_fdr.mean == 0.0);
  CHECK(z.sup_fdr.se == 0.0);
  CHECK(z.stop_fdr.se == 0.0);

  CHECK_THROWS_AS(estimate_metrics(std::vector<TrialSummary>{}), InputError);
  CHECK_THROWS_AS(estimate_metrics(std::vector<TrialSummary>(1)), InputError);

  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  const auto e = estimate(v);
  CHECK(e.mean == 2.5);
  CHECK(e.se == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0));
}

TEST_CASE("sup fdp dominates every recorded time and every stopping rule") {
  Rng r(99);
  std::vector<TrialRecord> recs;
  for (int i = 0; i < 200; ++i) recs.push_back(random_record(r, gen::size_in(r, 1, 80)));
  for (const auto& rec : recs) {
    for (double v : rec.path.values) CHECK(v <= rec.path.sup_fdp);
    CHECK(rec.path.sup_up_to(10) <= rec.path.sup_fdp);
    for (std::size_t j = 1; j <= 5; ++j) {
      const auto s = summarize_trial(rec, 1000, StoppingRule::jth_rejection(j));
      CHECK(s.stop_fdp <= s.sup_fdp);
    }
  }
  for (std::size_t j : {1u, 3u, 10u}) {
    const auto m = estimate_metrics(recs, 40, StoppingRule::jth_rejection(j));
    CHECK(m.stop_fdr.mean <= m.sup_fdr.mean);
    CHECK(m.sup_fdr_k.mean <= m.sup_fdr.mean);
    CHECK(m.fdr_at_end.mean <= m.sup_fdr.mean);
  }
}

TEST_CASE("estimates do not depend on trial order") {
  Rng r(5);
  std::vector<TrialRecord> recs;
  for (int i = 0; i < 64; ++i) recs.push_back(random_record(r, 50));
  const auto a = estimate_metrics(recs, 20, StoppingRule::fixed_time(25));
  std::reverse(recs.begin(), recs.end());
  std::rotate(recs.begin(), recs.begin() + 17, recs.end());
  const auto b = estimate_metrics(recs, 20, StoppingRule::fixed_time(25));
  CHECK(a.power.mean == doctest::Approx(b.power.mean).epsilon(1e-14));
  CHECK(a.sup_fdr.mean == doctest::Approx(b.sup_fdr.mean).epsilon(1e-14));
  CHECK(a.stop_fdr.mean == doctest::Approx(b.stop_fdr.mean).epsilon(1e-14));
  CHECK(a.sup_fdr.se == doctest::Approx(b.sup_fdr.se).epsilon(1e-12));
}
