#include "reptalk/equilibrium.hpp"

#include <cmath>

#include "reptalk/rootfind.hpp"

namespace reptalk {

const char* to_string(Misleading m) {
  switch (m) {
    case Misleading::conformist: return "conformist";
    case Misleading::contrarian: return "contrarian";
    default: return "none";
  }
}

namespace {

struct HValues {
  double h1, l1, h0, l0;  // H(beta|t,s) per type and state
};

HValues belief_cdfs(const InformationStructure& xi, double beta) {
  return {belief_cdf(xi.mu, xi.pair, beta, SenderType::high, 1),
          belief_cdf(xi.mu, xi.pair, beta, SenderType::low, 1),
          belief_cdf(xi.mu, xi.pair, beta, SenderType::high, 0),
          belief_cdf(xi.mu, xi.pair, beta, SenderType::low, 0)};
}

}  // namespace

Reputations reputations(const InformationStructure& xi, double beta) {
  const HValues H = belief_cdfs(xi, beta);
  const double p = xi.p;
  Reputations rep;
  for (int s = 0; s < 2; ++s) {
    const double Hh = s == 0 ? H.h0 : H.h1;
    const double Hl = s == 0 ? H.l0 : H.l1;
    const double mass0 = type_mean(p, Hh, Hl);         // report 0 issued
    const double mass1 = type_mean(p, 1.0 - Hh, 1.0 - Hl);
    if (!(mass0 > 0.0) || !(mass1 > 0.0))
      throw degenerate_cutoff_error(
          "conjectured cutoff gives a zero-probability report in state " +
          std::to_string(s));
    rep.r[0][s] = p * Hh / mass0;
    rep.r[1][s] = p * (1.0 - Hh) / mass1;
  }
  return rep;
}

double incentive_gap(const InformationStructure& xi, double beta_conjecture,
                     double b) {
  const Reputations r = reputations(xi, beta_conjecture);
  return (b * r(1, 1) + (1.0 - b) * r(1, 0)) -
         (b * r(0, 1) + (1.0 - b) * r(0, 0));
}

double matching_payoff(const InformationStructure& xi, double beta, SenderType t) {
  const double h1 = belief_cdf(xi.mu, xi.pair, beta, t, 1);
  const double h0 = belief_cdf(xi.mu, xi.pair, beta, t, 0);
  return xi.mu * (1.0 - h1) + (1.0 - xi.mu) * h0;
}

EquilibriumSolution solve_cutoff(const InformationStructure& xi) {
  EquilibriumSolution sol;
  sol.reservation = xi.mu;
  try {
    sol.crossing = crossing_beliefs(xi.mu, xi.pair);
  } catch (const single_crossing_error&) {
    // a broken crossing signals a pair outside the informative family
    sol.exists = false;
    sol.receiver_payoff = xi.mu;
    return sol;
  }
  if (!sol.crossing.informative_family()) {
    // No informative equilibrium; babbling leaves the receiver at mu.
    sol.exists = false;
    sol.receiver_payoff = xi.mu;
    return sol;
  }

  const double lo = sol.crossing.beta_dagger_1 + 1e-12;
  const double hi = sol.crossing.beta_dagger_0 - 1e-12;
  auto g = [&](double beta) { return incentive_gap(xi, beta, beta); };
  const double g_lo = g(lo);
  const double g_hi = g(hi);
  if (!(g_lo < 0.0) || !(g_hi > 0.0))
    throw internal_consistency_error(
        "indifference residual not bracketed on (beta_dagger_1, beta_dagger_0): g(" +
        std::to_string(lo) + ")=" + std::to_string(g_lo) + ", g(" +
        std::to_string(hi) + ")=" + std::to_string(g_hi));
  const BisectionResult root = bisect(g, lo, hi, 1e-13);

  sol.exists = true;
  sol.beta = root.root;
  sol.ell = likelihood_of_belief(xi.mu, sol.beta);
  sol.residual = root.f_at_root;
  sol.reputations = reputations(xi, sol.beta);
  sol.matching_h = matching_payoff(xi, sol.beta, SenderType::high);
  sol.matching_l = matching_payoff(xi, sol.beta, SenderType::low);
  sol.matching_total = type_mean(xi.p, sol.matching_h, sol.matching_l);
  sol.margin = sol.matching_total - xi.mu;
  sol.influential = sol.margin > 0.0;  // ties classify as noninfluential
  sol.receiver_payoff = std::max(sol.matching_total, xi.mu);
  if (std::abs(sol.beta - 0.5) <= 1e-9)
    sol.misleading = Misleading::none;
  else
    sol.misleading = sol.beta > 0.5 ? Misleading::contrarian : Misleading::conformist;
  return sol;
}

ReportPosteriors report_posteriors(const InformationStructure& xi, double beta) {
  const HValues H = belief_cdfs(xi, beta);
  const double p = xi.p, mu = xi.mu;
  ReportPosteriors out;
  const double up1 = type_mean(p, 1.0 - H.h1, 1.0 - H.l1);  // report 1, state 1
  const double up0 = type_mean(p, 1.0 - H.h0, 1.0 - H.l0);  // report 1, state 0
  const double dn1 = type_mean(p, H.h1, H.l1);
  const double dn0 = type_mean(p, H.h0, H.l0);
  const double mass1 = mu * up1 + (1.0 - mu) * up0;
  const double mass0 = mu * dn1 + (1.0 - mu) * dn0;
  out.given_report_1 = mass1 > 0.0 ? mu * up1 / mass1 : kNaN;
  out.given_report_0 = mass0 > 0.0 ? mu * dn1 / mass0 : kNaN;
  return out;
}

}  // namespace reptalk
