#pragma once

#include "reptalk/beliefs.hpp"
#include "reptalk/common.hpp"
#include "reptalk/experiments.hpp"

namespace reptalk {

// The tuple (mu, p, F): prior state belief, initial reputation, experiments.
struct InformationStructure {
  double mu = 0.5;
  double p = 0.1;
  ExperimentPair pair;
};

// Market posterior on the high type per (report m, state s), v(h)=1, v(l)=0.
struct Reputations {
  double r[2][2] = {{kNaN, kNaN}, {kNaN, kNaN}};  // [m][s]
  double operator()(int m, int s) const { return r[m][s]; }
};

enum class Misleading { conformist, none, contrarian };

const char* to_string(Misleading m);

struct EquilibriumSolution {
  bool exists = false;          // pair in the informative family
  double beta = kNaN;           // cutoff state belief
  double ell = kNaN;            // same cutoff on the likelihood-ratio scale
  CrossingBeliefs crossing;
  Reputations reputations;
  double matching_total = kNaN;
  double matching_h = kNaN;
  double matching_l = kNaN;
  double reservation = kNaN;     // = mu
  double receiver_payoff = kNaN; // = max(matching_total, mu)
  bool influential = false;      // matching_total > mu, strict
  double margin = kNaN;          // matching_total - mu, raw
  Misleading misleading = Misleading::none;
  double residual = kNaN;        // indifference residual at beta
};

// r(0,s) = p H(b|h,s) / E^p[H(b|t,s)],  r(1,s) = p (1-H(b|h,s)) / E^p[1-H(b|t,s)].
// Throws degenerate_cutoff_error when a denominator vanishes.
Reputations reputations(const InformationStructure& xi, double beta);

// Sender's payoff from report 1 minus report 0 at state belief b, when the
// market conjectures cutoff beta_conjecture. Linear and increasing in b.
double incentive_gap(const InformationStructure& xi, double beta_conjecture,
                     double b);

// Receiver's matching payoff conditional on the type:
//   mu (1 - H(beta|t,1)) + (1-mu) H(beta|t,0).
double matching_payoff(const InformationStructure& xi, double beta, SenderType t);

// Solves the self-consistent indifference incentive_gap(xi, beta, beta) = 0 on
// (beta_dagger_1, beta_dagger_0) and fills every field. exists=false when the
// crossing beliefs are not ordered (no informative equilibrium).
EquilibriumSolution solve_cutoff(const InformationStructure& xi);

struct ReportPosteriors {
  double given_report_1 = kNaN;
  double given_report_0 = kNaN;
};

// Receiver's posterior that s=1 given each report under the beta-cutoff profile.
ReportPosteriors report_posteriors(const InformationStructure& xi, double beta);

}  // namespace reptalk
