#pragma once

#include <cstdint>
#include <string>

#include "reptalk/equilibrium.hpp"
#include "reptalk/rng.hpp"

namespace reptalk {

struct McEstimate {
  bool present = false;
  double mean = kNaN;
  double half_width_95 = kNaN;  // 1.96 * sample_std / sqrt(n)
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
};

struct OracleReport {
  McEstimate reputations_mc[2][2];  // [report m][state s]
  McEstimate matching_mc;
  bool incentive_sign_ok = false;
  bool receiver_best_reply_ok = false;
  double max_abs_gap_to_analytic = kNaN;  // filled by compare_to_analytic
  std::string diagnostic;
};

// Inverse-transform draw: the l solving cdf(model, l, s) = u, found by
// bisection on the compactified scale to 1e-10.
double inverse_cdf(const ExperimentModel& model, int state, double u);

double sample_signal(const ExperimentModel& model, int state, CounterRng& rng);

// Plays the game n times from primitives only (no H-based reputations): type
// by p, state by mu, signal by inverse transform, report 1 iff the induced
// state belief exceeds beta. Deterministic in (xi, beta, n, seed) and
// invariant to the worker partition.
OracleReport simulate(const InformationStructure& xi, double beta,
                      std::uint64_t n, std::uint64_t seed, int threads = 0);

// Grid best-reply checks for a candidate cutoff from any source. Sets
// incentive_sign_ok iff incentive_gap(xi, beta, b) is strictly negative at
// grid beliefs below beta and strictly positive above (points within 1e-4 of
// beta are skipped), and receiver_best_reply_ok iff the report-1 posterior
// exceeds 1/2 and the influentialness verdict agrees with the report-0
// posterior route.
OracleReport verify_equilibrium(const InformationStructure& xi, double beta,
                                int grid_size = 512);

// Fills max_abs_gap_to_analytic: largest |MC - analytic| over the present
// reputation cells and the matching payoff.
void compare_to_analytic(OracleReport& report, const Reputations& analytic,
                         double matching_total);

// True when every present MC estimate lies within 3 half-widths of its
// analytic counterpart.
bool mc_agrees(const OracleReport& report, const Reputations& analytic,
               double matching_total);

}  // namespace reptalk
