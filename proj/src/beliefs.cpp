#include "reptalk/beliefs.hpp"

#include <cmath>

#include "reptalk/rootfind.hpp"

namespace reptalk {

double belief_of_likelihood(double mu, double ell) {
  if (std::isinf(ell)) return 1.0;
  const double num = mu * ell;
  return num / (num + 1.0 - mu);
}

double likelihood_of_belief(double mu, double beta) {
  if (beta >= 1.0) return kInf;
  return (1.0 - mu) / mu * beta / (1.0 - beta);
}

double belief_cdf(double mu, const ExperimentPair& pair, double beta,
                  SenderType t, int state) {
  return pair.by_type(t).cdf(likelihood_of_belief(mu, beta), state);
}

BeliefBounds belief_bounds(double mu, const ExperimentPair& pair) {
  BeliefBounds b;
  b.lo_h = belief_of_likelihood(mu, pair.high.support().lo);
  b.lo_l = belief_of_likelihood(mu, pair.low.support().lo);
  b.hi_l = belief_of_likelihood(mu, pair.low.support().hi);
  b.hi_h = belief_of_likelihood(mu, pair.high.support().hi);
  if (!(b.lo_h < b.lo_l && b.lo_l < b.hi_l && b.hi_l < b.hi_h))
    throw inconsistent_experiment_error(
        "belief bounds not interleaved: the high type's support must strictly "
        "contain the low type's");
  return b;
}

double crossing_belief(double mu, const ExperimentPair& pair, int state) {
  const BeliefBounds b = belief_bounds(mu, pair);
  const double lo = b.lo_l + 1e-12;
  const double hi = b.hi_l - 1e-12;
  auto diff = [&](double beta) {
    return belief_cdf(mu, pair, beta, SenderType::high, state) -
           belief_cdf(mu, pair, beta, SenderType::low, state);
  };
  const double d_lo = diff(lo);
  const double d_hi = diff(hi);
  if (!(d_lo > 0.0) || !(d_hi < 0.0))
    throw single_crossing_error(
        "H(.|h,s) - H(.|l,s) lacks the +/- bracket on the low-type belief "
        "range (state " + std::to_string(state) + "): ends " +
        std::to_string(d_lo) + ", " + std::to_string(d_hi));
  const BisectionResult r = bisect(diff, lo, hi, 1e-13);

  // Sign pattern: positive strictly left of the root, negative right.
  const double probe = 1e-6;
  const double left = std::max(lo, r.root - probe);
  const double right = std::min(hi, r.root + probe);
  if (left < r.root && !(diff(left) > 0.0))
    throw single_crossing_error("sign pattern broken left of the crossing");
  if (right > r.root && !(diff(right) < 0.0))
    throw single_crossing_error("sign pattern broken right of the crossing");
  return r.root;
}

CrossingBeliefs crossing_beliefs(double mu, const ExperimentPair& pair) {
  CrossingBeliefs c;
  c.beta_dagger_0 = crossing_belief(mu, pair, 0);
  c.beta_dagger_1 = crossing_belief(mu, pair, 1);
  return c;
}

double propagate_crossing(double beta_at_mu_prime, double mu_prime, double mu) {
  const double b = beta_at_mu_prime;
  return b * mu * (1.0 - mu_prime) /
         (b * (mu - mu_prime) + mu_prime * (1.0 - mu));
}

}  // namespace reptalk
