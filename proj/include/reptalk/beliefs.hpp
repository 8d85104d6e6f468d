#pragma once

#include "reptalk/common.hpp"
#include "reptalk/experiments.hpp"

namespace reptalk {

// Posterior that the state is 1 after signal l: mu*l/(mu*l + 1 - mu); inf -> 1.
double belief_of_likelihood(double mu, double ell);

// Exact inverse of the above: (1-mu)/mu * beta/(1-beta); beta = 1 -> inf.
double likelihood_of_belief(double mu, double beta);

// H_{mu,F}(beta|t,s): CDF of the sender's state belief induced by her signal.
double belief_cdf(double mu, const ExperimentPair& pair, double beta,
                  SenderType t, int state);

// Beliefs induced by the four support endpoints.
struct BeliefBounds {
  double lo_h = kNaN;
  double lo_l = kNaN;
  double hi_l = kNaN;
  double hi_h = kNaN;
};

// Throws inconsistent_experiment_error if the interleaving
// lo_h < lo_l < hi_l < hi_h fails.
BeliefBounds belief_bounds(double mu, const ExperimentPair& pair);

struct CrossingBeliefs {
  double beta_dagger_0 = kNaN;
  double beta_dagger_1 = kNaN;
  // Membership in the informative family: beta_dagger_1 < beta_dagger_0.
  bool informative_family() const { return beta_dagger_1 < beta_dagger_0; }
};

// Unique root of H(beta|h,s) - H(beta|l,s) on (lo_l, hi_l), by bisection to
// 1e-10; the +/0/- sign pattern around the root is asserted and a
// single_crossing_error signals an invalid pair.
double crossing_belief(double mu, const ExperimentPair& pair, int state);

CrossingBeliefs crossing_beliefs(double mu, const ExperimentPair& pair);

// Transports a crossing belief from prior mu_prime to prior mu:
//   beta * mu * (1-mu') / (beta * (mu - mu') + mu' * (1 - mu)).
double propagate_crossing(double beta_at_mu_prime, double mu_prime, double mu);

}  // namespace reptalk
