#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <mapm/montecarlo.hpp>
#include <mapm/waiting.hpp>
#include <optional>

using namespace mapm;

namespace {

// Joint tail sums over two independent geometric herald times, truncated
// far beyond any mass that matters at the p used here.
constexpr int kTail = 4000;

double direct_abs_diff_prob(double p, int k) {
  double sum = 0.0;
  for (int j = 1; j <= kTail; ++j) {
    const double pj = p * std::pow(1.0 - p, j - 1);
    if (k == 0) {
      sum += pj * pj;
    } else {
      const double shifted = p * std::pow(1.0 - p, j + k - 1);
      sum += 2.0 * pj * shifted;
    }
  }
  return sum;
}

double mc_sigma(const McEstimate& e, double reference) {
  return std::abs(e.mean - reference) / e.std_error;
}

}  // namespace

TEST_CASE("expected extremes of geometric samples") {
  const double p = 0.23;
  const double q = 1.0 - p;
  CHECK(expected_min_geometric(7, p) ==
        doctest::Approx(1.0 / (1.0 - std::pow(q, 7))).epsilon(1e-14));
  CHECK(expected_max_geometric(1, p) == doctest::Approx(1.0 / p).epsilon(1e-14));
  CHECK(expected_max_geometric(2, 1.0) == 1.0);

  // the two-sample extremes tile the two raw waiting times
  CHECK(expected_min_geometric(2, p) + expected_max_geometric(2, p) ==
        doctest::Approx(2.0 / p).epsilon(1e-13));
  CHECK(expected_max_geometric(2, p) - 1.0 / p ==
        doctest::Approx(0.5 * expected_abs_diff_geometric(p)).epsilon(1e-13));

  // binomial and series branches against a direct tail sum
  for (int n : {25, 31}) {
    double tail = 0.0;
    for (int k = 0; k < 20000; ++k)
      tail += 1.0 - std::pow(1.0 - std::pow(q, k), n);
    CHECK(expected_max_geometric(n, p) == doctest::Approx(tail).epsilon(1e-10));
  }

  CHECK_THROWS_AS(expected_max_geometric(0, p), std::invalid_argument);
  CHECK_THROWS_AS(expected_max_geometric(10001, p), std::invalid_argument);
  CHECK_THROWS_AS(expected_max_geometric(2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(expected_max_geometric(2, 1.2), std::invalid_argument);
}

TEST_CASE("herald gap distribution") {
  const double p = 0.2;
  double total = 0.0;
  for (int k = 0; k <= 200; ++k) total += prob_abs_diff_geometric(p, k);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(prob_abs_diff_geometric(p, 0) == doctest::Approx(p / (2.0 - p)).epsilon(1e-14));
  for (int k : {0, 1, 2, 5, 10})
    CHECK(prob_abs_diff_geometric(p, k) ==
          doctest::Approx(direct_abs_diff_prob(p, k)).epsilon(1e-12));

  double mean = 0.0;
  for (int k = 1; k <= 2000; ++k) mean += double(k) * prob_abs_diff_geometric(p, k);
  CHECK(expected_abs_diff_geometric(p) == doctest::Approx(mean).epsilon(1e-12));
}

TEST_CASE("laplace transforms of the herald gap") {
  const double p = 0.17, s = 0.21;
  double direct = 0.0;
  for (int k = 0; k <= 2000; ++k)
    direct += std::exp(-s * double(k)) * prob_abs_diff_geometric(p, k);
  CHECK(laplace_abs_diff_geometric(p, s) == doctest::Approx(direct).epsilon(1e-12));
  CHECK(laplace_abs_diff_geometric(p, 0.0) == doctest::Approx(1.0).epsilon(1e-12));

  const long long m = 9;
  double restricted = 0.0, acc = 0.0;
  for (int k = 0; k <= int(m); ++k) {
    restricted += std::exp(-s * double(k)) * prob_abs_diff_geometric(p, k);
    acc += prob_abs_diff_geometric(p, k);
  }
  CHECK(laplace_abs_diff_geometric_cutoff(p, s, m) == doctest::Approx(restricted).epsilon(1e-12));
  CHECK(cutoff_acceptance_n2(p, m) == doctest::Approx(acc).epsilon(1e-12));

  // an unbounded cutoff recovers the full transform and full acceptance
  CHECK(laplace_abs_diff_geometric_cutoff(p, s, 100000) ==
        doctest::Approx(laplace_abs_diff_geometric(p, s)).epsilon(1e-14));
  CHECK(cutoff_acceptance_n2(p, 100000) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(expected_attempt_rounds_n2(p, 100000) ==
        doctest::Approx(expected_max_geometric(2, p)).epsilon(1e-12));
  CHECK_THROWS_AS(expected_attempt_rounds_n2(p, -1), std::invalid_argument);
}

TEST_CASE("dephasing expectations") {
  const double p = 0.08, tau = 0.4, T = 7.0;
  SUBCASE("parallel two segments") {
    const double s = 2.0 * tau / T;
    CHECK(dephasing_expectation_parallel_n2(p, tau, T, std::nullopt, false) ==
          doctest::Approx(laplace_abs_diff_geometric(p, s) * std::exp(-2.0 * tau / T))
              .epsilon(1e-14));
    // storing the end qubits only adds communication-time storage
    const double ratio = dephasing_expectation_parallel_n2(p, tau, T, std::nullopt, true) /
                         dephasing_expectation_parallel_n2(p, tau, T, std::nullopt, false);
    CHECK(ratio == doctest::Approx(std::exp(-2.0 * tau / T)).epsilon(1e-13));
    const long long m = 11;
    CHECK(dephasing_expectation_parallel_n2(p, tau, T, m, false) ==
          doctest::Approx(laplace_abs_diff_geometric_cutoff(p, s, m) /
                          cutoff_acceptance_n2(p, m) * std::exp(-2.0 * tau / T))
              .epsilon(1e-13));
    CHECK_THROWS_AS(dephasing_expectation_parallel_n2(p, tau, T, 0, false),
                    std::invalid_argument);
    // no storage time, no decay
    CHECK(dephasing_expectation_parallel_n2(p, 0.0, T, std::nullopt, true) == 1.0);
  }
  SUBCASE("sequential chain") {
    const double s = tau / T;
    const double w = (1.0 - p) * std::exp(-s);
    const double base = p * std::exp(-s) / (1.0 - w);
    CHECK(dephasing_expectation_sequential(4, p, tau, T, false) ==
          doctest::Approx(base * base * base).epsilon(1e-14));
    // storing the ends doubles every exponent, same as halving T
    CHECK(dephasing_expectation_sequential(4, p, tau, T, true) ==
          doctest::Approx(dephasing_expectation_sequential(4, p, tau, 0.5 * T, false))
              .epsilon(1e-14));
    CHECK_THROWS_AS(dephasing_expectation_sequential(1, p, tau, T, false),
                    std::invalid_argument);
  }
  SUBCASE("jensen bound sits below the exact transform") {
    CHECK(expected_dephasing_rounds_parallel(2, p) ==
          doctest::Approx(expected_abs_diff_geometric(p)).epsilon(1e-13));
    const double s = tau / T;
    const double exact = laplace_abs_diff_geometric(p, s);
    const double bound = jensen_bound_parallel(2, p, tau, T);
    CHECK(bound <= exact);
    CHECK(bound == doctest::Approx(std::exp(-expected_abs_diff_geometric(p) * s)).epsilon(1e-13));
  }
}

TEST_CASE("aggregated waiting statistics keep the rate identity") {
  const double tau = 0.3, T = 12.0;
  for (Scheme scheme : {Scheme::parallel, Scheme::sequential}) {
    for (int n : {1, 2, 3, 4}) {
      for (bool store_ends : {false, true}) {
        const double Teff = (scheme == Scheme::parallel && n > 2)
                                ? std::numeric_limits<double>::infinity()
                                : T;
        const WaitingStats ws = waiting_stats(scheme, n, 0.12, tau, Teff, std::nullopt,
                                              store_ends);
        CHECK(ws.raw_rate * ws.acceptance_fraction ==
              doctest::Approx(1.0 / ws.expected_rounds).epsilon(1e-12));
        CHECK(ws.dephasing_factor <= 1.0);
        CHECK(ws.dephasing_factor > 0.0);
      }
    }
  }
  const WaitingStats cut = waiting_stats(Scheme::parallel, 2, 0.12, tau, T, 25, false);
  CHECK(cut.acceptance_fraction == doctest::Approx(cutoff_acceptance_n2(0.12, 25)).epsilon(1e-14));
  CHECK(cut.raw_rate * cut.acceptance_fraction ==
        doctest::Approx(1.0 / cut.expected_rounds).epsilon(1e-12));

  const WaitingStats single = waiting_stats(Scheme::parallel, 1, 0.37, tau, T, std::nullopt, false);
  CHECK(single.raw_rate == 0.37);
  CHECK(single.acceptance_fraction == 1.0);
  CHECK(single.dephasing_factor == 1.0);

  CHECK_THROWS_AS(waiting_stats(Scheme::parallel, 3, 0.1, tau, T, std::nullopt, false),
                  std::invalid_argument);
  CHECK_THROWS_AS(waiting_stats(Scheme::parallel, 3, 0.1, tau, T, 10, false),
                  std::invalid_argument);
  CHECK_THROWS_AS(waiting_stats(Scheme::sequential, 3, 0.1, tau, T, 10, false),
                  std::invalid_argument);
  CHECK_THROWS_AS(waiting_stats(Scheme::parallel, 2, 0.1, tau, T, 0, false),
                  std::invalid_argument);
}

TEST_CASE("monte carlo agrees with the closed forms") {
  McOptions opt;
  opt.p = 0.06;
  opt.trials = 200000;
  opt.seed = 77;
  opt.jobs = 4;

  SUBCASE("parallel gap transform") {
    opt.s = 0.05;
    const McResult res = simulate_waiting(opt);
    CHECK(mc_sigma(res.dephasing, laplace_abs_diff_geometric(opt.p, opt.s)) < 4.0);
    CHECK(mc_sigma(res.expected_rounds, expected_max_geometric(2, opt.p)) < 4.0);
    CHECK(res.acceptance.mean == 1.0);
    // stored end qubits double the accumulated rounds
    McOptions stored = opt;
    stored.store_ends = true;
    const McResult res2 = simulate_waiting(stored);
    CHECK(mc_sigma(res2.dephasing, laplace_abs_diff_geometric(opt.p, 2.0 * opt.s)) < 4.0);
  }
  SUBCASE("cutoff attempts") {
    opt.s = 0.04;
    opt.cutoff = 12;
    const McResult res = simulate_waiting(opt);
    const double acc = cutoff_acceptance_n2(opt.p, 12);
    CHECK(mc_sigma(res.acceptance, acc) < 4.0);
    CHECK(mc_sigma(res.dephasing,
                   laplace_abs_diff_geometric_cutoff(opt.p, opt.s, 12) / acc) < 4.0);
    CHECK(mc_sigma(res.expected_rounds, expected_attempt_rounds_n2(opt.p, 12) / acc) < 4.0);
  }
  SUBCASE("sequential chain") {
    opt.scheme = Scheme::sequential;
    opt.n = 3;
    opt.s = 0.04;
    opt.store_ends = true;
    const McResult res = simulate_waiting(opt);
    CHECK(mc_sigma(res.dephasing,
                   dephasing_expectation_sequential(3, opt.p, opt.s, 1.0, true)) < 4.0);
    CHECK(mc_sigma(res.expected_rounds, 3.0 / opt.p) < 4.0);
  }
  SUBCASE("wider parallel chains") {
    opt.n = 4;
    opt.s = 0.0;
    const McResult res = simulate_waiting(opt);
    CHECK(res.dephasing.mean == 1.0);
    CHECK(mc_sigma(res.expected_rounds, expected_max_geometric(4, opt.p)) < 4.0);
  }
}

TEST_CASE("monte carlo is deterministic and job independent") {
  McOptions opt;
  opt.p = 0.2;
  opt.s = 0.1;
  opt.trials = 50000;
  opt.seed = 1234;
  opt.jobs = 1;
  const McResult a = simulate_waiting(opt);
  opt.jobs = 7;
  const McResult b = simulate_waiting(opt);
  CHECK(a.expected_rounds.mean == b.expected_rounds.mean);
  CHECK(a.dephasing.mean == b.dephasing.mean);
  CHECK(a.acceptance.mean == b.acceptance.mean);
  opt.seed = 1235;
  const McResult c = simulate_waiting(opt);
  CHECK(a.expected_rounds.mean != c.expected_rounds.mean);
}

TEST_CASE("monte carlo argument checks") {
  McOptions opt;
  opt.p = 0.0;
  CHECK_THROWS_AS(simulate_waiting(opt), std::invalid_argument);
  opt.p = 0.5;
  opt.trials = 0;
  CHECK_THROWS_AS(simulate_waiting(opt), std::invalid_argument);
  opt.trials = 10;
  opt.s = -0.1;
  CHECK_THROWS_AS(simulate_waiting(opt), std::invalid_argument);
  opt.s = 0.0;
  opt.cutoff = 5;
  opt.scheme = Scheme::sequential;
  CHECK_THROWS_AS(simulate_waiting(opt), std::invalid_argument);
  opt.scheme = Scheme::parallel;
  opt.n = 3;
  CHECK_THROWS_AS(simulate_waiting(opt), std::invalid_argument);
}
