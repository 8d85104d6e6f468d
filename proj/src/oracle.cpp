#include "reptalk/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "reptalk/parallel.hpp"

namespace reptalk {

double inverse_cdf(const ExperimentModel& model, int state, double u) {
  const SupportInterval& sup = model.support();
  double lo = u_of_ell(sup.lo);
  double hi = u_of_ell(sup.hi);
  // cdf is nondecreasing in l, so bisect the sign of cdf - u on the
  // compactified scale to 1e-10.
  for (int it = 0; it < 80 && (hi - lo) > 1e-10; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (model.cdf(ell_of_u(mid), state) < u)
      lo = mid;
    else
      hi = mid;
  }
  return ell_of_u(0.5 * (lo + hi));
}

double sample_signal(const ExperimentModel& model, int state, CounterRng& rng) {
  return inverse_cdf(model, state, rng.next_uniform());
}

namespace {

struct Cells {
  std::uint64_t count[2][2] = {{0, 0}, {0, 0}};  // draws per (m,s)
  std::uint64_t high[2][2] = {{0, 0}, {0, 0}};   // high-type draws per (m,s)
  std::uint64_t match = 0;                       // m == s

  void merge(const Cells& o) {
    for (int m = 0; m < 2; ++m)
      for (int s = 0; s < 2; ++s) {
        count[m][s] += o.count[m][s];
        high[m][s] += o.high[m][s];
      }
    match += o.match;
  }
};

McEstimate proportion_estimate(std::uint64_t hits, std::uint64_t n,
                               std::uint64_t seed) {
  McEstimate e;
  e.n = n;
  e.seed = seed;
  if (n == 0) return e;  // absent: cell never realized
  e.present = true;
  const double mean = static_cast<double>(hits) / static_cast<double>(n);
  e.mean = mean;
  if (n < 2) {
    e.half_width_95 = kInf;
    return e;
  }
  const double nd = static_cast<double>(n);
  const double sample_std = std::sqrt(mean * (1.0 - mean) * nd / (nd - 1.0));
  e.half_width_95 = 1.96 * sample_std / std::sqrt(nd);
  return e;
}

}  // namespace

OracleReport simulate(const InformationStructure& xi, double beta,
                      std::uint64_t n, std::uint64_t seed, int threads) {
  if (n < 10000) throw std::invalid_argument("simulate needs at least 1e4 draws");
  const int nthreads = resolve_threads(threads);
  const std::uint64_t chunk = (n + nthreads - 1) / nthreads;

  // Draw i spends counters {4i, 4i+1, 4i+2}: type, state, signal. Counters
  // are keyed by the draw index, so the merged tallies are invariant to the
  // worker partition.
  std::vector<Cells> local(static_cast<std::size_t>(nthreads));
  parallel_for(static_cast<std::size_t>(nthreads), nthreads, [&](std::size_t w) {
    Cells& c = local[w];
    const std::uint64_t begin = w * chunk;
    const std::uint64_t end = std::min(n, begin + chunk);
    for (std::uint64_t i = begin; i < end; ++i) {
      const bool is_high = CounterRng::uniform_at(seed, 4 * i) < xi.p;
      const int s = CounterRng::uniform_at(seed, 4 * i + 1) < xi.mu ? 1 : 0;
      const ExperimentModel& model = is_high ? xi.pair.high : xi.pair.low;
      const double ell =
          inverse_cdf(model, s, CounterRng::uniform_at(seed, 4 * i + 2));
      const int m = belief_of_likelihood(xi.mu, ell) > beta ? 1 : 0;
      c.count[m][s] += 1;
      if (is_high) c.high[m][s] += 1;
      if (m == s) c.match += 1;
    }
  });
  Cells total;
  for (const Cells& c : local) total.merge(c);

  OracleReport rep;
  for (int m = 0; m < 2; ++m)
    for (int s = 0; s < 2; ++s)
      rep.reputations_mc[m][s] =
          proportion_estimate(total.high[m][s], total.count[m][s], seed);
  rep.matching_mc = proportion_estimate(total.match, n, seed);
  return rep;
}

OracleReport verify_equilibrium(const InformationStructure& xi, double beta,
                                int grid_size) {
  OracleReport rep;
  const BeliefBounds bounds = belief_bounds(xi.mu, xi.pair);

  rep.incentive_sign_ok = true;
  for (int j = 1; j <= grid_size && rep.incentive_sign_ok; ++j) {
    const double b = bounds.lo_h + (bounds.hi_h - bounds.lo_h) * j /
                                       static_cast<double>(grid_size + 1);
    if (std::abs(b - beta) <= 1e-4) continue;
    double gap;
    try {
      gap = incentive_gap(xi, beta, b);
    } catch (const degenerate_cutoff_error& e) {
      rep.incentive_sign_ok = false;
      rep.diagnostic = e.what();
      break;
    }
    const bool ok = b < beta ? gap < 0.0 : gap > 0.0;
    if (!ok) {
      rep.incentive_sign_ok = false;
      rep.diagnostic = "incentive gap has the wrong sign at belief " +
                       std::to_string(b) + " (gap=" + std::to_string(gap) + ")";
    }
  }

  // Two routes to the influentialness verdict must agree: the matching-payoff
  // margin and the receiver's posterior given report 0.
  const ReportPosteriors post = report_posteriors(xi, beta);
  const double matching =
      type_mean(xi.p, matching_payoff(xi, beta, SenderType::high),
                matching_payoff(xi, beta, SenderType::low));
  const bool influential_margin = matching > xi.mu;
  const bool influential_posterior = post.given_report_0 < 0.5;
  rep.receiver_best_reply_ok =
      post.given_report_1 > 0.5 && influential_margin == influential_posterior;
  if (!rep.receiver_best_reply_ok && rep.diagnostic.empty())
    rep.diagnostic = "receiver best-reply routes disagree (posterior vs margin)";
  return rep;
}

void compare_to_analytic(OracleReport& report, const Reputations& analytic,
                         double matching_total) {
  double gap = 0.0;
  for (int m = 0; m < 2; ++m)
    for (int s = 0; s < 2; ++s)
      if (report.reputations_mc[m][s].present)
        gap = std::max(gap,
                       std::abs(report.reputations_mc[m][s].mean - analytic(m, s)));
  if (report.matching_mc.present)
    gap = std::max(gap, std::abs(report.matching_mc.mean - matching_total));
  report.max_abs_gap_to_analytic = gap;
}

bool mc_agrees(const OracleReport& report, const Reputations& analytic,
               double matching_total) {
  for (int m = 0; m < 2; ++m)
    for (int s = 0; s < 2; ++s) {
      const McEstimate& e = report.reputations_mc[m][s];
      if (e.present && std::abs(e.mean - analytic(m, s)) > 3.0 * e.half_width_95)
        return false;
    }
  const McEstimate& e = report.matching_mc;
  return !e.present ||
         std::abs(e.mean - matching_total) <= 3.0 * e.half_width_95;
}

}  // namespace reptalk
