#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "reptalk/experiments.hpp"
#include "reptalk/quadrature.hpp"

using namespace reptalk;

namespace {

std::vector<double> interior_grid(const ExperimentModel& m, int n) {
  // strictly inside the support, uniform on the compactified scale
  std::vector<double> out;
  const double ua = u_of_ell(m.support().lo);
  const double ub = u_of_ell(m.support().hi);
  for (int i = 1; i <= n; ++i)
    out.push_back(ell_of_u(ua + (ub - ua) * i / (n + 1.0)));
  return out;
}

TabulatedCdf sample_table(const ExperimentModel& m, int n) {
  TabulatedCdf t;
  const double ua = u_of_ell(m.support().lo);
  const double ub = u_of_ell(std::min(m.support().hi, 1e9));
  for (int i = 0; i <= n; ++i) {
    const double ell = ell_of_u(ua + (ub - ua) * i / static_cast<double>(n));
    t.ell.push_back(ell);
    t.f0.push_back(i == 0 ? 0.0 : i == n ? 1.0 : m.cdf(ell, 0));
    t.f1.push_back(i == 0 ? 0.0 : i == n ? 1.0 : m.cdf(ell, 1));
  }
  return t;
}

}  // namespace

TEST_CASE("multiplicative linear density and closed-form cdf") {
  auto m9 = ExperimentModel::multiplicative_linear(0.9);
  auto m4 = ExperimentModel::multiplicative_linear(0.4);

  CHECK(m9.pdf(1.0, 0) == doctest::Approx(2.0 / (0.9 * 8.0)).epsilon(1e-12));
  CHECK(m9.cdf(1.5, 0) == doctest::Approx(0.825).epsilon(1e-12));
  CHECK(m4.cdf(1.5, 0) == doctest::Approx(0.825).epsilon(1e-12));
  CHECK(m9.cdf(2.0 / 3.0, 1) == doctest::Approx(0.175).epsilon(1e-12));
  CHECK(m4.cdf(2.0 / 3.0, 1) == doctest::Approx(0.175).epsilon(1e-12));

  // supports
  CHECK(m9.support().lo == doctest::Approx(0.1 / 1.9));
  CHECK(m9.support().hi == doctest::Approx(19.0));
  CHECK(ExperimentModel::multiplicative_linear(1.0).support().hi == kInf);

  // clamping and normalization
  CHECK(m9.cdf(0.0, 0) == 0.0);
  CHECK(m9.cdf(100.0, 1) == 1.0);
  for (int s : {0, 1})
    CHECK(m4.cdf(m4.support().hi, s) == doctest::Approx(1.0).epsilon(1e-10));

  CHECK_THROWS_AS(m9.pdf(0.01, 0), std::domain_error);
}

TEST_CASE("hyperexponential density and cdf") {
  auto h1 = ExperimentModel::hyperexponential(1);
  // k = 1 collapses both mixture components to rate 1
  for (double ell : {0.1, 0.7, 2.0, 5.0})
    CHECK(h1.pdf(ell, 0) == doctest::Approx(std::exp(-ell)).epsilon(1e-12));

  for (int k : {3, 100, 1000}) {
    auto h = ExperimentModel::hyperexponential(k);
    CHECK(h.support().lo == 0.0);
    CHECK(h.support().hi == kInf);
    for (int s : {0, 1}) {
      CHECK(h.cdf(kInf, s) == 1.0);
      CHECK(h.cdf(1e12, s) == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("likelihood-ratio labeling: pdf(l,1) = l pdf(l,0)") {
  std::vector<ExperimentModel> models;
  for (double x : {0.1, 0.4, 0.9, 1.0 - 1e-6})
    models.push_back(ExperimentModel::multiplicative_linear(x));
  for (int k : {1, 10, 100, 1000})
    models.push_back(ExperimentModel::hyperexponential(k));
  for (const auto& m : models) {
    for (double ell : interior_grid(m, 64)) {
      const double f0 = m.pdf(ell, 0);
      const double f1 = m.pdf(ell, 1);
      CHECK(std::abs(f1 - ell * f0) <= 1e-9 * (1.0 + f0));
    }
  }
}

TEST_CASE("cdf/pdf consistency and quadrature cross-check") {
  std::vector<ExperimentModel> models = {
      ExperimentModel::multiplicative_linear(0.4),
      ExperimentModel::multiplicative_linear(0.9),
      ExperimentModel::hyperexponential(10),
      ExperimentModel::hyperexponential(1000),
  };
  for (const auto& m : models) {
    for (double ell : interior_grid(m, 24)) {
      for (int s : {0, 1}) {
        // central difference of the cdf reproduces the density
        const double h = 1e-6 * std::max(1.0, ell);
        if (ell - h <= m.support().lo || ell + h >= m.support().hi) continue;
        const double fd = (m.cdf(ell + h, s) - m.cdf(ell - h, s)) / (2.0 * h);
        const double f = m.pdf(ell, s);
        CHECK(std::abs(fd - f) <= 1e-5 * std::max(1.0, std::abs(f)));
        // quadrature route agrees with the closed form
        if (ell < 50.0)
          CHECK(m.cdf_by_quadrature(ell, s) ==
                doctest::Approx(m.cdf(ell, s)).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("density normalization by quadrature") {
  // total mass integrates to one in both states
  for (const auto& m : {ExperimentModel::multiplicative_linear(0.4),
                        ExperimentModel::multiplicative_linear(1.0),
                        ExperimentModel::hyperexponential(10)}) {
    const double top = std::isinf(m.support().hi) ? 1e12 : m.support().hi;
    for (int s : {0, 1})
      CHECK(m.cdf_by_quadrature(top, s) == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("assumption validation") {
  auto m9 = ExperimentModel::multiplicative_linear(0.9);
  auto m4 = ExperimentModel::multiplicative_linear(0.4);
  auto m1 = ExperimentModel::multiplicative_linear(0.1);
  auto hy = ExperimentModel::hyperexponential(1000);

  SUBCASE("mle pair passes") {
    auto rep = validate_assumptions({m9, m4}, 0.6);
    CHECK(rep.part_a);
    CHECK(rep.part_b);
    CHECK(rep.part_b_margin > 0.0);
    CHECK(rep.part_c);
    CHECK(rep.overall);
  }
  SUBCASE("hyper/mle pair passes") {
    auto rep = validate_assumptions({hy, m1}, 0.6);
    CHECK(rep.overall);
  }
  SUBCASE("inverted supports fail part a") {
    auto rep = validate_assumptions({m4, m9}, 0.6);
    CHECK_FALSE(rep.part_a);
    CHECK_FALSE(rep.overall);
  }
  SUBCASE("part c boundary") {
    auto rep = validate_assumptions({m9, m4}, 0.96);
    CHECK(rep.part_c_bound == doctest::Approx(0.95));
    CHECK_FALSE(rep.part_c);
    CHECK_FALSE(rep.overall);
  }
  SUBCASE("grid size precondition") {
    CHECK_THROWS_AS(validate_assumptions({m9, m4}, 0.6, 8), std::invalid_argument);
  }
}

TEST_CASE("state symmetry") {
  for (double x : {0.1, 0.4, 0.9, 1.0 - 1e-6}) {
    auto rep = check_symmetry(ExperimentModel::multiplicative_linear(x), 1e-9);
    CHECK(rep.symmetric);
  }
  // tabulated resample keeps symmetry within interpolation error
  auto table = ExperimentModel::tabulated(
      sample_table(ExperimentModel::multiplicative_linear(0.4), 4000));
  CHECK(check_symmetry(table, 1e-5).symmetric);
  // hyperexponential: gap reported, no symmetry claim made either way
  auto rep = check_symmetry(ExperimentModel::hyperexponential(3), 1e-9);
  CHECK(std::isfinite(rep.max_gap));
}

TEST_CASE("distance to the perfect experiment") {
  // near-step table: state-0 mass at 0, state-1 mass at 2e13; dyadic tail
  // masses keep the per-segment increment ratios exactly representable
  const double tail = std::ldexp(1.0, -44);  // 2^-44
  TabulatedCdf step;
  step.ell = {0.0, 1e-9, 1e13, 2e13};
  step.f0 = {0.0, 1.0 - 2.0 * tail, 1.0 - tail, 1.0};
  step.f1 = {0.0, std::ldexp(1.0, -52), std::ldexp(1.0, -52) + tail / 4.0, 1.0};
  CHECK(distance_to_perfect(ExperimentModel::tabulated(step)) < 1e-6);

  // hyperexponential converges weakly to the perfect experiment
  const double d10 = distance_to_perfect(ExperimentModel::hyperexponential(10));
  const double d100 = distance_to_perfect(ExperimentModel::hyperexponential(100));
  const double d1000 = distance_to_perfect(ExperimentModel::hyperexponential(1000));
  CHECK(d10 > d100);
  CHECK(d100 > d1000);
  CHECK(d1000 > 0.0);

  CHECK(distance_to_perfect(ExperimentModel::multiplicative_linear(0.9)) > 0.01);
}

TEST_CASE("tabulated cdf ingestion") {
  SUBCASE("round trip through CSV") {
    std::istringstream csv(
        "ell,F0,F1\n"
        "0.5,0,0\n"
        "1.0,0.6,0.4\n"
        "2.0,1,1\n");
    auto m = ExperimentModel::tabulated_from_csv(csv);
    CHECK(m.support().lo == 0.5);
    CHECK(m.support().hi == 2.0);
    CHECK(m.cdf(0.75, 0) == doctest::Approx(0.3));
    CHECK(m.pdf(1.5, 0) == doctest::Approx(0.4));
    CHECK(m.pdf(1.5, 1) == doctest::Approx(0.6));
  }
  SUBCASE("errors name the offending row") {
    std::istringstream csv(
        "ell,F0,F1\n"
        "0.5,0,0\n"
        "1.0,0.6,0.4\n"
        "0.9,1,1\n");
    CHECK_THROWS_WITH_AS(ExperimentModel::tabulated_from_csv(csv),
                         doctest::Contains("row 3"), config_error);
  }
  SUBCASE("bad header") {
    std::istringstream csv("l,F0,F1\n0,0,0\n1,1,1\n");
    CHECK_THROWS_AS(ExperimentModel::tabulated_from_csv(csv), config_error);
  }
  SUBCASE("non-numeric cell") {
    std::istringstream csv("ell,F0,F1\n0.5,0,0\n1.0,x,1\n");
    CHECK_THROWS_WITH_AS(ExperimentModel::tabulated_from_csv(csv),
                         doctest::Contains("row 2"), config_error);
  }
  SUBCASE("MLRP violation detected") {
    TabulatedCdf t;
    t.ell = {0.5, 1.0, 2.0};
    t.f0 = {0.0, 0.4, 1.0};
    t.f1 = {0.0, 0.5, 1.0};  // increment ratio falls from 1.25 to 0.83
    CHECK_THROWS_AS(ExperimentModel::tabulated(t), config_error);
  }
  SUBCASE("fine resample keeps the labeling identity approximately") {
    auto src = ExperimentModel::multiplicative_linear(0.4);
    auto m = ExperimentModel::tabulated(sample_table(src, 2000));
    for (double ell : interior_grid(m, 16))
      CHECK(m.pdf(ell, 1) == doctest::Approx(ell * m.pdf(ell, 0)).epsilon(2e-3));
  }
}
