#include <doctest.h>

#include <chrono>
#include <cmath>
#include <memory>
#include <vector>

#include "generators.hpp"
#include "onlinearc/boosting.hpp"
#include "onlinearc/e_procedures.hpp"
#include "onlinearc/errors.hpp"

using namespace oarc;

namespace {

constexpr double kAlpha = 0.05;
constexpr double kGamma = 0.01;

struct Golden {
  TruncationSpec spec;
  double published;
  double tolerance;
  double frozen;
};

std::vector<Golden> golden() {
  return {
      {TruncationSpec::plus(kAlpha, kGamma, 10), 1.165, 0.005, 1.165321912840},
      {TruncationSpec::plus(kAlpha, kGamma, 100), 1.174, 0.005, 1.173875697554},
      {TruncationSpec::minus(kAlpha, kGamma, 10), 3.071, 0.01, 3.070669153615},
      {TruncationSpec::minus(kAlpha, kGamma, 100), 1.73, 0.01, 1.732401276556},
      {TruncationSpec::local_plus(kAlpha, kGamma, 100, 2), 1.265, 0.01, 1.264572280007},
      {TruncationSpec::local_plus(kAlpha, kGamma, 100, 10), 1.541, 0.01, 1.541387405831},
      {TruncationSpec::local_minus(kAlpha, kGamma, 100, 2), 1.940, 0.01, 1.939732328779},
      {TruncationSpec::local_minus(kAlpha, kGamma, 100, 10), 2.639, 0.01, 2.638487041390},
  };
}

// Plain Monte-Carlo mean and standard error of T(b E) under the null.
std::pair<double, double> monte_carlo(const TruncationSpec& spec, double delta, double b, std::size_t draws,
                                      std::uint64_t seed) {
  Rng rng(seed);
  const GaussianLRModel model(delta);
  double sum = 0.0;
  double sq = 0.0;
  for (std::size_t i = 0; i < draws; ++i) {
    const double v = truncate(spec, b * model.evalue(rng.normal()));
    sum += v;
    sq += v * v;
  }
  const double n = static_cast<double>(draws);
  const double mean = sum / n;
  const double var = (sq - n * mean * mean) / (n - 1.0);
  return {mean, std::sqrt(var / n)};
}

}  // namespace

TEST_CASE("normal cdf reference values") {
  CHECK(normal_cdf(0.0) == 0.5);
  CHECK(std::abs(normal_cdf(1.959963984540054) - 0.975) < 1e-9);
  CHECK(std::abs(normal_cdf(-1.0) - 0.15865525393145705141) < 1e-15);
  CHECK(std::abs(normal_cdf(0.5) - 0.69146246127401310364) < 1e-15);
  CHECK(std::abs(normal_cdf(2.0) - 0.9772498680518207928) < 1e-15);
  CHECK(std::abs(normal_cdf(-8.0) - 6.2209605742717841235e-16) < 1e-27);
  CHECK(std::abs(normal_cdf(-5.0) - 2.8665157187919391167e-7) < 1e-20);
  CHECK(normal_sf(6.0) == doctest::Approx(9.8658764503769814e-10).epsilon(1e-12));
  for (double z = -8.0; z <= 8.0; z += 0.137) CHECK(std::abs(normal_cdf(z) + normal_cdf(-z) - 1.0) < 1e-12);
}

TEST_CASE("truncation examples") {
  const auto full = TruncationSpec::full(kAlpha, kGamma);
  CHECK(truncate(full, 1999.0) == doctest::Approx(1000.0));
  CHECK(truncate(full, HUGE_VAL) == doctest::Approx(2000.0));
  CHECK(truncate(full, 2000.0) == doctest::Approx(2000.0));
  CHECK(truncate(full, 0.0) == 0.0);
  const auto local = TruncationSpec::local(kAlpha, kGamma, 2);
  CHECK(truncate(local, HUGE_VAL) == doctest::Approx(2000.0 / 3.0));
  CHECK_THROWS_AS(truncate(full, -1.0), InputError);
  CHECK_THROWS_AS(truncate(full, std::nan("")), InputError);
  CHECK(truncate(TruncationSpec::full(kAlpha, 0.0), 5.0) == 0.0);

  const auto plus = TruncationSpec::plus(kAlpha, kGamma, 10);
  const auto minus = TruncationSpec::minus(kAlpha, kGamma, 10);
  CHECK(truncate(plus, 150.0) == 150.0);  // below g_10 = 200
  CHECK(truncate(minus, 150.0) == 0.0);
  CHECK(truncate(minus, 250.0) == doctest::Approx(2000.0 / 8.0));
  CHECK(truncate(TruncationSpec::toad(kAlpha, kGamma, 3), 600.0) == 0.0);
  CHECK(truncate(TruncationSpec::toad(kAlpha, kGamma, 3), 700.0) == doctest::Approx(2000.0 / 3.0));
}

TEST_CASE("truncation spec validation") {
  CHECK_THROWS_AS(TruncationSpec::plus(kAlpha, kGamma, 0), ConfigError);
  CHECK_THROWS_AS(TruncationSpec::local_minus(kAlpha, kGamma, 10, 10), ConfigError);
  CHECK_THROWS_AS(TruncationSpec::toad(kAlpha, kGamma, 0), ConfigError);
  CHECK_THROWS_AS(GaussianLRModel(0.0), ConfigError);
  CHECK_THROWS_AS(expected_truncated_value(GaussianLRModel(3.0), TruncationSpec::full(kAlpha, kGamma), 1.0),
                  ConfigError);
  CHECK_THROWS_AS(expected_truncated_value(GaussianLRModel(3.0), TruncationSpec::plus(kAlpha, kGamma, 10), -1.0),
                  InputError);
}

TEST_CASE("truncation properties") {
  Rng rng(7);
  for (int i = 0; i < 20000; ++i) {
    const double alpha = gen::alpha(rng);
    const double gamma = 0.001 + 0.2 * rng.uniform();
    const std::size_t s = gen::size_in(rng, 1, 200);
    const std::size_t lag = gen::size_in(rng, 0, s - 1);
    const double x = rng.bernoulli(0.02) ? HUGE_VAL : std::exp(8.0 * rng.uniform()) - 1.0;
    const auto full = TruncationSpec::full(alpha, gamma);
    const auto plus = TruncationSpec::plus(alpha, gamma, s);
    const auto minus = TruncationSpec::minus(alpha, gamma, s);
    const auto local = TruncationSpec::local(alpha, gamma, lag);
    const double tf = truncate(full, x);
    const double tp = truncate(plus, x);
    const double tm = truncate(minus, x);
    const double tl = truncate(local, x);
    CHECK(tl <= tf);
    CHECK(tf <= tp);
    CHECK(tp <= x);
    CHECK(tm <= tf);
    CHECK(truncate(full, tf) == tf);
    CHECK(truncate(minus, tm) == tm);
    CHECK(tl == std::min(tf, e_grid(lag + 1, alpha, gamma)));
    if (x >= e_grid(s, alpha, gamma)) {
      CHECK(tp == tf);
      CHECK(tm == tf);
    }
  }
}

TEST_CASE("boosting factors reproduce published values") {
  const GaussianLRModel model(3.0);
  const auto start = std::chrono::steady_clock::now();
  for (const auto& g : golden()) {
    CAPTURE(g.spec.describe());
    const auto sol = solve_boost_factor(model, g.spec);
    CHECK(std::abs(sol.b - g.published) <= g.tolerance);
    CHECK(sol.b == doctest::Approx(g.frozen).epsilon(1e-10));
    CHECK(sol.residual <= 1e-6);
    CHECK(std::abs(expected_truncated_value(model, g.spec, sol.b) - 1.0) <= 1e-6);
  }
  CHECK(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() < 1.0);
}

TEST_CASE("closed-form expectation agrees with Monte Carlo") {
  const GaussianLRModel model(3.0);
  std::uint64_t seed = 1000;
  for (const auto& g : golden()) {
    for (double b : {1.0, g.frozen}) {
      CAPTURE(g.spec.describe());
      CAPTURE(b);
      const auto [mean, se] = monte_carlo(g.spec, 3.0, b, 1000000, seed++);
      CHECK(std::abs(expected_truncated_value(model, g.spec, b) - mean) <= 3.0 * se + 1e-12);
      if (b == g.frozen) CHECK(mean <= 1.0 + 3.0 * se);
    }
  }
}

TEST_CASE("minus expectation equals plus minus the pass-through mass") {
  for (double delta : {1.0, 3.0, 4.5}) {
    const GaussianLRModel model(delta);
    for (std::size_t s : {1u, 7u, 100u, 1000u}) {
      for (double b : {0.5, 1.0, 2.0, 10.0}) {
        const double a = kAlpha * kGamma;
        const double pass = b * normal_cdf(-(delta / 2.0 + std::log(s * a * b) / delta));
        const double plus = expected_truncated_value(model, TruncationSpec::plus(kAlpha, kGamma, s), b);
        const double minus = expected_truncated_value(model, TruncationSpec::minus(kAlpha, kGamma, s), b);
        CHECK(std::abs(minus - (plus - pass)) <= 1e-12 * plus);
      }
    }
  }
}

TEST_CASE("boosting factor monotonicity") {
  const GaussianLRModel model(3.0);
  double prev_plus = 0.0;
  double prev_minus = HUGE_VAL;
  for (std::size_t s : {2u, 5u, 10u, 20u, 50u, 100u, 200u, 500u, 1000u}) {
    const double bp = solve_boost_factor(model, TruncationSpec::plus(kAlpha, kGamma, s)).b;
    const double bm = solve_boost_factor(model, TruncationSpec::minus(kAlpha, kGamma, s)).b;
    CHECK(bp >= prev_plus - 1e-12);
    CHECK(bm <= prev_minus + 1e-12);
    prev_plus = bp;
    prev_minus = bm;
  }
  double prev_local = 0.0;
  for (std::size_t lag = 0; lag < 100; lag += 3) {
    const double b = solve_boost_factor(model, TruncationSpec::local_minus(kAlpha, kGamma, 100, lag)).b;
    CHECK(b >= prev_local - 1e-12);
    prev_local = b;
  }
}

TEST_CASE("solver failure is reported") {
  CHECK_THROWS_AS(solve_boost_factor(GaussianLRModel(0.01), TruncationSpec::minus(kAlpha, 1e-6, 10)), SolverError);
  CHECK_THROWS_AS(solve_boost_factor(GaussianLRModel(3.0), TruncationSpec::minus(kAlpha, 0.0, 10)), SolverError);
  CHECK(expected_truncated_value(GaussianLRModel(3.0), TruncationSpec::minus(kAlpha, 0.0, 10), 2.0) == 0.0);
}

TEST_CASE("boost factor table matches the exact solver") {
  const GaussianLRModel model(3.0);
  const auto w = WeightSequence::geometric(0.99);
  for (auto v : {TruncationVariant::Plus, TruncationVariant::Minus}) {
    BoostFactorTable table(model, kAlpha, w, v, 100, 300);
    for (std::size_t t : {1u, 50u, 300u, 301u, 500u}) {
      CHECK(table.factor(t) == doctest::Approx(solve_boost_factor(model, table.spec(t)).b).epsilon(1e-12));
    }
  }
  for (auto v : {TruncationVariant::LocalPlus, TruncationVariant::LocalMinus}) {
    BoostFactorTable table(model, kAlpha, w, v, 100, 300);
    for (std::size_t t : {1u, 37u, 300u}) {
      for (std::size_t k0 : {0u, 1u, 5u, 50u, 99u}) {
        CAPTURE(t);
        CAPTURE(k0);
        CHECK(table.factor(t, k0) == doctest::Approx(solve_boost_factor(model, table.spec(t, k0)).b).epsilon(1e-8));
      }
    }
    CHECK_THROWS_AS(table.factor(1, 100), ConfigError);
  }
}

TEST_CASE("plus-boosted online e-BH rejects a superset, per run") {
  const GaussianLRModel model(3.0);
  Rng rng(17);
  for (double q : {0.9, 0.99}) {
    const auto w = WeightSequence::geometric(q);
    auto plus = std::make_shared<const BoostFactorTable>(model, kAlpha, w, TruncationVariant::Plus, 200, 200);
    for (int trial = 0; trial < 50; ++trial) {
      OnlineEbh base(w, kAlpha);
      BoostedOnlineEbh boosted(w, kAlpha, plus);
      for (int t = 0; t < 200; ++t) {
        const double z = rng.normal() + (rng.bernoulli(0.3) ? 3.0 : 0.0);
        const double e = model.evalue(z);
        base.step(e);
        boosted.step(e);
        REQUIRE(base.rejection_set().is_subset_of(boosted.rejection_set()));
      }
    }
  }
}

TEST_CASE("local boosting uses k* at the end of the previous batch") {
  const GaussianLRModel model(3.0);
  const auto w = WeightSequence::geometric(0.99);
  auto table = std::make_shared<const BoostFactorTable>(model, kAlpha, w, TruncationVariant::LocalMinus, 100, 100);
  BoostedOnlineEbh p(w, kAlpha, table, 5);
  std::vector<std::size_t> k_hist;
  Rng rng(3);
  for (int t = 0; t < 40; ++t) {
    p.step(model.evalue(rng.normal() + 3.0));
    k_hist.push_back(p.k_star());
  }
  for (std::size_t i = 1; i <= 40; ++i) {
    const std::size_t batch_start = (i - 1) / 5 * 5;  // last index of the previous batch
    const std::size_t expected = batch_start == 0 ? 0 : k_hist[batch_start - 1];
    CHECK(p.lag_kstar(i) == expected);
    CHECK(p.state().score(i) == truncate(table->spec(i, p.lag_kstar(i)),
                                         p.raw_score(i) * table->factor(i, p.lag_kstar(i))));
  }
}

TEST_CASE("p-to-e transform conditions") {
  const auto rec = NonincreasingTransform::reciprocal();
  const auto prds = check_transform_condition(rec, kAlpha, kGamma, ConditionMode::Prds);
  CHECK(prds.verdict == Verdict::Pass);
  CHECK(prds.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(check_transform_condition(rec, kAlpha, kGamma, ConditionMode::Arbitrary).verdict == Verdict::Fail);

  for (std::size_t K : {1u, 3u, 10u, 100u}) {
    const auto shape = NonincreasingTransform::from_shape(ShapeFunction::by(K), kAlpha, kGamma);
    const auto r = check_transform_condition(shape, kAlpha, kGamma, ConditionMode::Arbitrary);
    CHECK(r.verdict == Verdict::Pass);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
    double series = 0.0;
    const auto beta = ShapeFunction::by(K);
    for (std::size_t k = 1; k <= K; ++k) series += (beta(k) - beta(k - 1)) / static_cast<double>(k);
    CHECK(r.value == doctest::Approx(series).epsilon(1e-12));
  }

  const auto z = check_transform_condition(NonincreasingTransform::zero(), kAlpha, kGamma, ConditionMode::Arbitrary);
  CHECK(z.verdict == Verdict::Pass);
  CHECK(z.value == 0.0);

  // Identity shape is LOND-like: the arbitrary-dependence series diverges.
  const auto id = NonincreasingTransform::from_shape(ShapeFunction::identity(), kAlpha, kGamma);
  CHECK(check_transform_condition(id, kAlpha, kGamma, ConditionMode::Arbitrary).verdict == Verdict::Fail);
  const auto toad = check_transform_condition(id, kAlpha, kGamma, ConditionMode::Toad, 1);
  CHECK(toad.verdict == Verdict::Pass);
  CHECK(toad.value == doctest::Approx(1.0));
}

TEST_CASE("numeric inverse of a transform") {
  const auto num = NonincreasingTransform::from_function([](double u) { return u > 0.0 ? 1.0 / u : HUGE_VAL; });
  for (double y : {0.5, 1.0, 2.0, 10.0, 1e4}) {
    CHECK(num.inverse(y) == doctest::Approx(NonincreasingTransform::reciprocal().inverse(y)).epsilon(1e-12));
  }
}
