#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "reptalk/oracle.hpp"

using namespace reptalk;

namespace {

ExperimentPair baseline_pair() {
  return {ExperimentModel::multiplicative_linear(0.9),
          ExperimentModel::multiplicative_linear(0.4)};
}

InformationStructure baseline_structure() { return {0.6, 0.1, baseline_pair()}; }

}  // namespace

TEST_CASE("counter rng is a pure function of seed and counter") {
  CounterRng a(7), b(7);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  CHECK(CounterRng::at(7, 3) == CounterRng(7, 3).next_u64());
  CHECK(CounterRng::at(7, 0) != CounterRng::at(8, 0));
  // uniforms live in [0,1)
  CounterRng c(123);
  for (int i = 0; i < 1000; ++i) {
    const double u = c.next_uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("inverse-transform sampling reproduces the distribution") {
  SUBCASE("inverse cdf is the quantile function") {
    for (const auto& m : {ExperimentModel::multiplicative_linear(0.4),
                          ExperimentModel::hyperexponential(10)}) {
      for (double u : {0.01, 0.2, 0.5, 0.8, 0.99}) {
        for (int s : {0, 1}) {
          const double ell = inverse_cdf(m, s, u);
          CHECK(m.cdf(ell, s) == doctest::Approx(u).epsilon(1e-6));
        }
      }
    }
  }
  SUBCASE("Kolmogorov-Smirnov distance of 1e6 draws") {
    const auto m = ExperimentModel::multiplicative_linear(0.4);
    const std::uint64_t n = 1000000;
    std::vector<double> draws(n);
    for (std::uint64_t i = 0; i < n; ++i)
      draws[i] = inverse_cdf(m, 0, CounterRng::uniform_at(99, i));
    std::sort(draws.begin(), draws.end());
    double ks = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
      const double f = m.cdf(draws[i], 0);
      ks = std::max(ks, std::abs(f - static_cast<double>(i) / n));
      ks = std::max(ks, std::abs(f - static_cast<double>(i + 1) / n));
    }
    CHECK(ks < 0.002);
  }
  SUBCASE("unit mean of the likelihood ratio under state 0") {
    // int l f(l|t,0) dl = int f(l|t,1) dl = 1 for any labeled experiment
    for (const auto& m : {ExperimentModel::multiplicative_linear(0.7),
                          ExperimentModel::hyperexponential(10)}) {
      const std::uint64_t n = 200000;
      double sum = 0.0, sumsq = 0.0;
      for (std::uint64_t i = 0; i < n; ++i) {
        const double ell = inverse_cdf(m, 0, CounterRng::uniform_at(7, i));
        sum += ell;
        sumsq += ell * ell;
      }
      const double mean = sum / n;
      const double se = std::sqrt((sumsq / n - mean * mean) / n);
      CHECK(std::abs(mean - 1.0) <= 3.0 * se);
    }
  }
  SUBCASE("two-segment table hits each segment with its probability") {
    TabulatedCdf t;
    t.ell = {0.5, 1.0, 2.0};
    t.f0 = {0.0, 0.7, 1.0};
    t.f1 = {0.0, 0.5, 1.0};
    const auto m = ExperimentModel::tabulated(t);
    const std::uint64_t n = 100000;
    std::uint64_t below = 0;
    for (std::uint64_t i = 0; i < n; ++i)
      if (inverse_cdf(m, 0, CounterRng::uniform_at(3, i)) < 1.0) ++below;
    const double freq = static_cast<double>(below) / n;
    const double se = std::sqrt(0.7 * 0.3 / n);
    CHECK(std::abs(freq - 0.7) <= 3.0 * se);
  }
}

TEST_CASE("simulated game matches the analytic equilibrium quantities") {
  const InformationStructure xi = baseline_structure();
  const EquilibriumSolution sol = solve_cutoff(xi);
  REQUIRE(sol.exists);
  const OracleReport rep = simulate(xi, sol.beta, 400000, 20240817);
  for (int m = 0; m < 2; ++m)
    for (int s = 0; s < 2; ++s) {
      REQUIRE(rep.reputations_mc[m][s].present);
      CHECK(std::abs(rep.reputations_mc[m][s].mean - sol.reputations(m, s)) <=
            3.0 * rep.reputations_mc[m][s].half_width_95);
    }
  CHECK(std::abs(rep.matching_mc.mean - sol.matching_total) <=
        3.0 * rep.matching_mc.half_width_95);
  CHECK(mc_agrees(rep, sol.reputations, sol.matching_total));

  OracleReport gap = rep;
  compare_to_analytic(gap, sol.reputations, sol.matching_total);
  CHECK(gap.max_abs_gap_to_analytic < 0.01);
}

TEST_CASE("simulate is deterministic and partition-invariant") {
  const InformationStructure xi = baseline_structure();
  const EquilibriumSolution sol = solve_cutoff(xi);
  const OracleReport a = simulate(xi, sol.beta, 50000, 11, /*threads=*/1);
  const OracleReport b = simulate(xi, sol.beta, 50000, 11, /*threads=*/4);
  for (int m = 0; m < 2; ++m)
    for (int s = 0; s < 2; ++s) {
      CHECK(a.reputations_mc[m][s].mean == b.reputations_mc[m][s].mean);
      CHECK(a.reputations_mc[m][s].n == b.reputations_mc[m][s].n);
    }
  CHECK(a.matching_mc.mean == b.matching_mc.mean);
  // a different seed moves the draws
  const OracleReport c = simulate(xi, sol.beta, 50000, 12);
  CHECK(a.matching_mc.mean != c.matching_mc.mean);
}

TEST_CASE("degenerate cutoff leaves report cells empty") {
  const InformationStructure xi = baseline_structure();
  const auto bounds = belief_bounds(xi.mu, xi.pair);
  // cutoff at the top of the high type's belief range: everyone reports 0
  const OracleReport rep = simulate(xi, bounds.hi_h, 10000, 5);
  CHECK_FALSE(rep.reputations_mc[1][0].present);
  CHECK_FALSE(rep.reputations_mc[1][1].present);
  CHECK(rep.reputations_mc[0][0].present);
}

TEST_CASE("equilibrium verification flags") {
  const InformationStructure xi = baseline_structure();
  const EquilibriumSolution sol = solve_cutoff(xi);
  REQUIRE(sol.exists);

  SUBCASE("solved cutoff passes") {
    const OracleReport rep = verify_equilibrium(xi, sol.beta, 512);
    CHECK(rep.incentive_sign_ok);
    CHECK(rep.receiver_best_reply_ok);
  }
  SUBCASE("perturbed cutoffs are rejected") {
    for (double shift : {0.02, -0.02, 0.01, -0.01}) {
      const OracleReport rep = verify_equilibrium(xi, sol.beta + shift, 512);
      CHECK_FALSE(rep.incentive_sign_ok);
      CHECK_FALSE(rep.diagnostic.empty());
    }
  }
  SUBCASE("bracket endpoint is degenerate, flagged with a diagnostic") {
    const OracleReport rep =
        verify_equilibrium(xi, sol.crossing.beta_dagger_1, 512);
    CHECK_FALSE(rep.incentive_sign_ok);
    CHECK_FALSE(rep.diagnostic.empty());
  }
}

TEST_CASE("oracle agreement across the regression structures") {
  // spans both example families; n modest here, the acceptance suite runs 1e6
  const std::vector<InformationStructure> structures = {
      {0.6, 0.1, baseline_pair()},
      {0.5, 0.1, baseline_pair()},
      {0.7, 0.5, baseline_pair()},
      {0.55, 0.05,
       {ExperimentModel::multiplicative_linear(0.7),
        ExperimentModel::multiplicative_linear(0.2)}},
      {0.6, 0.3,
       {ExperimentModel::multiplicative_linear(0.7),
        ExperimentModel::multiplicative_linear(0.2)}},
      {0.55, 0.1,
       {ExperimentModel::hyperexponential(1000),
        ExperimentModel::multiplicative_linear(0.1)}},
      {0.7, 0.1,
       {ExperimentModel::hyperexponential(100),
        ExperimentModel::multiplicative_linear(0.1)}},
      {0.9, 0.2,
       {ExperimentModel::hyperexponential(1000),
        ExperimentModel::multiplicative_linear(0.1)}},
  };
  std::uint64_t seed = 1000;
  for (const auto& xi : structures) {
    CAPTURE(xi.mu);
    CAPTURE(xi.p);
    REQUIRE(validate_assumptions(xi.pair, xi.mu).overall);
    const EquilibriumSolution sol = solve_cutoff(xi);
    REQUIRE(sol.exists);
    const OracleReport mc = simulate(xi, sol.beta, 100000, seed++);
    CHECK(mc_agrees(mc, sol.reputations, sol.matching_total));
    const OracleReport flags = verify_equilibrium(xi, sol.beta, 512);
    CHECK(flags.incentive_sign_ok);
    CHECK(flags.receiver_best_reply_ok);
    // rejection power
    const OracleReport bad = verify_equilibrium(xi, sol.beta + 0.01, 512);
    CHECK_FALSE(bad.incentive_sign_ok);
  }
}
