#pragma once

#include <string>
#include <vector>

#include "reptalk/equilibrium.hpp"

namespace reptalk {

// Prior state belief at which the equilibrium cutoff equals 1/2. The "below
// 1/2" branch is a tagged value, never a clamped number. betanew00_gap is the
// raw left-minus-right gap of the mu^I trichotomy inequality at mu = beta =
// 1/2 (positive: root above 1/2; negative: below; zero: binding).
struct MuIndifferent {
  bool below_half = false;
  double value = kNaN;  // meaningful iff !below_half
  double betanew00_gap = kNaN;
};

// Throws no_equilibrium_error if the pair is outside the informative family.
MuIndifferent mu_indifferent(double p, const ExperimentPair& pair);

struct MuInterval {
  double lo = kNaN;
  double hi = kNaN;
};

struct RegionReport {
  MuIndifferent mu_I;
  std::vector<MuInterval> intervals;  // maximal influential mu-intervals, sorted
  double mu_bar_low = kNaN;           // end of the influential prefix
  bool has_mu_bar_high = false;
  double mu_bar_high = kNaN;          // onset of the terminal noninfluential region
  double grid_step = kNaN;
  double mu_hi = kNaN;                // scan ceiling, min(1/(1+lo_h), 0.99)
  bool merged_boundaries = false;     // sign changes closer than 2 grid steps
};

// Scans matching_total - mu over [1/2, mu_hi) at grid_step, refines each sign
// change by bisection to 1e-8 and assembles maximal influential intervals.
RegionReport influential_intervals(double p, const ExperimentPair& pair,
                                   double grid_step = 0.002, int threads = 0);

struct PayoffRow {
  double mu = kNaN;
  double beta = kNaN;
  double matching_total = kNaN;
  double matching_h = kNaN;
  double matching_l = kNaN;
  double reservation = kNaN;
  double receiver_payoff = kNaN;
  bool influential = false;
  bool ok = false;
  std::string error;
};

struct PayoffProfile {
  std::vector<PayoffRow> rows;  // sorted by mu
  bool has_dip = false;
  double dip_location = kNaN;   // argmin of receiver_payoff when the profile
                                // is decreasing-then-increasing at grid resolution
};

PayoffProfile payoff_profile(double p, const ExperimentPair& pair,
                             const std::vector<double>& mu_grid, int threads = 0);

struct TypeDerivatives {
  double d_high = kNaN;
  double d_low = kNaN;
  double term_c = kNaN;   // dl/dmu at the solved cutoff (finite difference)
  bool one_sided = false; // mu was within two steps of the domain edge
};

// Per-type derivative of the matching payoff in mu: terms A, B, D analytic at
// ell_xi, term C by central finite difference of the solved cutoff (step 1e-4).
TypeDerivatives d_matching_d_mu(const InformationStructure& xi);

struct PDerivative {
  double value = kNaN;
  double term_a = kNaN;
  double term_b = kNaN;
  bool one_sided = false;
};

// Derivative of the total matching payoff in p: term A analytic, dl/dp by
// central finite difference (step 1e-4).
PDerivative d_matching_d_p(const InformationStructure& xi);

struct NestingViolation {
  double p_small = kNaN;
  double p_large = kNaN;
  double mu = kNaN;  // an endpoint of I_{p_small} not covered by I_{p_large}
};

struct NestingReport {
  bool nested = false;
  std::vector<NestingViolation> violations;
  bool has_strict_witness = false;
  double witness_mu = kNaN;  // endpoint that strictly expanded
  std::vector<RegionReport> per_p;
};

// Checks I_{p_i} within I_{p_{i+1}} for ascending p_list, up to grid
// resolution plus twice the refinement tolerance. Requires the high type
// within dist_threshold of the perfect experiment.
NestingReport region_nesting(const std::vector<double>& p_list,
                             const ExperimentPair& pair,
                             double grid_step = 0.002,
                             double dist_threshold = 0.05, int threads = 0);

}  // namespace reptalk
