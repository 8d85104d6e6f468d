#include "reptalk/regions.hpp"

#include <algorithm>
#include <cmath>

#include "reptalk/parallel.hpp"
#include "reptalk/rootfind.hpp"

namespace reptalk {

namespace {

double upper_mu_bound(const ExperimentPair& pair) {
  return 1.0 / (1.0 + pair.high.support().lo);
}

double scan_ceiling(const ExperimentPair& pair) {
  const double bound = upper_mu_bound(pair);
  return bound < 1.0 ? bound : 0.99;
}

double cutoff_at(double p, const ExperimentPair& pair, double mu) {
  const EquilibriumSolution sol = solve_cutoff({mu, p, pair});
  if (!sol.exists)
    throw no_equilibrium_error("pair leaves the informative family at mu=" +
                               std::to_string(mu));
  return sol.beta;
}

double matching_minus_mu(double p, const ExperimentPair& pair, double mu) {
  const EquilibriumSolution sol = solve_cutoff({mu, p, pair});
  if (!sol.exists)
    throw no_equilibrium_error("pair leaves the informative family at mu=" +
                               std::to_string(mu));
  return sol.margin;
}

// Left minus right side of the trichotomy inequality at mu = beta = 1/2: the
// sender's reputation gain from report 1 versus report 0 under truthful
// likely-state reporting at the symmetric prior.
double trichotomy_gap(double p, const ExperimentPair& pair) {
  auto H = [&](SenderType t, int s) { return belief_cdf(0.5, pair, 0.5, t, s); };
  const double h1 = H(SenderType::high, 1), l1 = H(SenderType::low, 1);
  const double h0 = H(SenderType::high, 0), l0 = H(SenderType::low, 0);
  const double lhs = (1.0 - h1) / type_mean(p, 1.0 - h1, 1.0 - l1) -
                     h1 / type_mean(p, h1, l1);
  const double rhs = h0 / type_mean(p, h0, l0) -
                     (1.0 - h0) / type_mean(p, 1.0 - h0, 1.0 - l0);
  return lhs - rhs;
}

}  // namespace

MuIndifferent mu_indifferent(double p, const ExperimentPair& pair) {
  const CrossingBeliefs c = crossing_beliefs(0.5, pair);
  if (!c.informative_family())
    throw no_equilibrium_error("mu_indifferent: pair not in the informative family");

  MuIndifferent out;
  out.betanew00_gap = trichotomy_gap(p, pair);
  const double phi_half = cutoff_at(p, pair, 0.5) - 0.5;
  if (phi_half > 1e-9) {
    // Cutoff already above 1/2 at the noisiest prior: the root lies below 1/2.
    out.below_half = true;
    return out;
  }
  // Walk a ladder of priors toward the bound and bisect on the first rung
  // where the cutoff clears 1/2. Evaluating only as high as needed matters:
  // near mu = 1 the belief-to-likelihood map loses precision in 1-beta.
  const double mu_max = std::min(upper_mu_bound(pair) - 1e-9, 1.0 - 1e-7);
  double lo = 0.5;
  double hi = kNaN;
  for (double rung : {0.6, 0.75, 0.9, 0.99, mu_max}) {
    if (rung <= lo || rung > mu_max) continue;
    if (cutoff_at(p, pair, rung) - 0.5 > 0.0) {
      hi = rung;
      break;
    }
    lo = rung;
  }
  if (std::isnan(hi))
    throw internal_consistency_error(
        "cutoff failed to rise above 1/2 before the prior-belief bound");
  // beta is strictly increasing in mu, so shrink toward the sign change even
  // if phi(1/2) sits on numerical zero.
  out.value = bisect_monotone_up(
      [&](double mu) { return cutoff_at(p, pair, mu) - 0.5; }, lo, hi, 1e-9);
  return out;
}

RegionReport influential_intervals(double p, const ExperimentPair& pair,
                                   double grid_step, int threads) {
  if (!(grid_step > 0.0 && grid_step <= 0.005))
    throw std::invalid_argument("grid_step must lie in (0, 0.005]");

  RegionReport rep;
  rep.grid_step = grid_step;
  rep.mu_hi = scan_ceiling(pair);

  // The scan must stay strictly below the real prior-belief bound, but the
  // 0.99 stand-in for an unbounded-support high type is itself a valid prior,
  // so the grid ends exactly there whatever the step.
  const bool inclusive = upper_mu_bound(pair) >= 1.0;
  std::vector<double> grid;
  for (double mu = 0.5;
       inclusive ? mu <= rep.mu_hi + 1e-12 : mu < rep.mu_hi - 1e-12;
       mu += grid_step)
    grid.push_back(mu);
  if (inclusive && !grid.empty() && grid.back() < rep.mu_hi - 1e-12)
    grid.push_back(rep.mu_hi);
  if (grid.size() < 2)
    throw std::invalid_argument("prior-belief range too narrow for the grid step");

  std::vector<double> margin(grid.size(), kNaN);
  std::vector<std::string> errors(grid.size());
  std::vector<char> no_eq(grid.size(), 0);
  parallel_for(grid.size(), threads, [&](std::size_t i) {
    try {
      margin[i] = matching_minus_mu(p, pair, grid[i]);
    } catch (const no_equilibrium_error& e) {
      errors[i] = e.what();
      no_eq[i] = 1;
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (errors[i].empty()) continue;
    if (no_eq[i]) throw no_equilibrium_error(errors[i]);
    throw internal_consistency_error("grid solve failed at mu=" +
                                     std::to_string(grid[i]) + ": " + errors[i]);
  }

  // Influential iff margin > 0 strictly; refine each flip to 1e-8 in mu.
  auto influential = [&](std::size_t i) { return margin[i] > 0.0; };
  std::vector<double> boundaries;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (influential(i) == influential(i + 1)) continue;
    double lo = grid[i], hi = grid[i + 1];
    const bool down = influential(i);  // margin crosses from + to -
    for (int it = 0; it < 64 && (hi - lo) > 1e-8; ++it) {
      const double mid = 0.5 * (lo + hi);
      const bool pos = matching_minus_mu(p, pair, mid) > 0.0;
      if (pos == down)
        lo = mid;
      else
        hi = mid;
    }
    boundaries.push_back(0.5 * (lo + hi));
  }

  // The generic root structure is intractable; flips closer than two grid
  // steps are below resolution, so drop the blip and flag it.
  for (std::size_t j = 0; j + 1 < boundaries.size();) {
    if (boundaries[j + 1] - boundaries[j] < 2.0 * grid_step) {
      boundaries.erase(boundaries.begin() + j, boundaries.begin() + j + 2);
      rep.merged_boundaries = true;
    } else {
      ++j;
    }
  }

  bool status = influential(0);
  double open_lo = status ? 0.5 : kNaN;
  for (double b : boundaries) {
    if (status) {
      rep.intervals.push_back({open_lo, b});
    } else {
      open_lo = b;
    }
    status = !status;
  }
  if (status)  // still influential at the scan ceiling
    rep.intervals.push_back({open_lo, grid.back()});

  if (!boundaries.empty()) {
    rep.mu_bar_low = boundaries.front();
    if (!status) {  // terminal region noninfluential
      rep.has_mu_bar_high = true;
      rep.mu_bar_high = boundaries.back();
    }
  }

  try {
    rep.mu_I = mu_indifferent(p, pair);
  } catch (const solver_error&) {
    // intervals already prove equilibria exist on the grid; leave mu_I unset
  }
  return rep;
}

PayoffProfile payoff_profile(double p, const ExperimentPair& pair,
                             const std::vector<double>& mu_grid, int threads) {
  PayoffProfile prof;
  prof.rows.resize(mu_grid.size());
  parallel_for(mu_grid.size(), threads, [&](std::size_t i) {
    PayoffRow& row = prof.rows[i];
    row.mu = mu_grid[i];
    row.reservation = mu_grid[i];
    if (!(row.mu >= 0.5 && row.mu < 1.0)) {
      row.error = "mu outside [1/2, 1)";
      return;
    }
    if (row.mu >= upper_mu_bound(pair)) {
      row.error = "mu violates assumption (c): not below 1/(1+lo_h)";
      return;
    }
    try {
      const EquilibriumSolution sol = solve_cutoff({mu_grid[i], p, pair});
      if (!sol.exists) {
        row.error = "no informative equilibrium";
        return;
      }
      row.beta = sol.beta;
      row.matching_total = sol.matching_total;
      row.matching_h = sol.matching_h;
      row.matching_l = sol.matching_l;
      row.receiver_payoff = sol.receiver_payoff;
      row.influential = sol.influential;
      row.ok = true;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  });

  // Dip: the profile must fall to a minimum and rise again at grid resolution.
  std::vector<std::size_t> ok_idx;
  for (std::size_t i = 0; i < prof.rows.size(); ++i)
    if (prof.rows[i].ok) ok_idx.push_back(i);
  if (ok_idx.size() >= 3) {
    const double slack = 1e-9;
    std::size_t arg = ok_idx[0];
    for (std::size_t i : ok_idx)
      if (prof.rows[i].receiver_payoff < prof.rows[arg].receiver_payoff) arg = i;
    bool shape_ok =
        prof.rows[ok_idx.front()].receiver_payoff >
            prof.rows[arg].receiver_payoff + slack &&
        prof.rows[ok_idx.back()].receiver_payoff >
            prof.rows[arg].receiver_payoff + slack;
    for (std::size_t j = 0; j + 1 < ok_idx.size() && shape_ok; ++j) {
      const double a = prof.rows[ok_idx[j]].receiver_payoff;
      const double b = prof.rows[ok_idx[j + 1]].receiver_payoff;
      if (ok_idx[j + 1] <= arg)
        shape_ok = b <= a + slack;
      else if (ok_idx[j] >= arg)
        shape_ok = b >= a - slack;
    }
    if (shape_ok) {
      prof.has_dip = true;
      prof.dip_location = prof.rows[arg].mu;
    }
  }
  return prof;
}

TypeDerivatives d_matching_d_mu(const InformationStructure& xi) {
  const EquilibriumSolution sol = solve_cutoff(xi);
  if (!sol.exists)
    throw no_equilibrium_error("d_matching_d_mu: no informative equilibrium");
  const double h = 1e-4;
  const double mu_cap = std::min(upper_mu_bound(xi.pair), 1.0);

  TypeDerivatives out;
  auto ell_at = [&](double mu) {
    return solve_cutoff({mu, xi.p, xi.pair}).ell;
  };
  if (xi.mu - 2.0 * h < 0.5) {
    out.one_sided = true;
    out.term_c = (ell_at(xi.mu + h) - sol.ell) / h;
  } else if (xi.mu + 2.0 * h > mu_cap) {
    out.one_sided = true;
    out.term_c = (sol.ell - ell_at(xi.mu - h)) / h;
  } else {
    out.term_c = (ell_at(xi.mu + h) - ell_at(xi.mu - h)) / (2.0 * h);
  }

  auto per_type = [&](SenderType t) {
    const ExperimentModel& m = xi.pair.by_type(t);
    const double a = 1.0 - m.cdf(sol.ell, 1);
    const double b = m.cdf(sol.ell, 0);
    const double d =
        (1.0 - xi.mu) * m.pdf(sol.ell, 0) - xi.mu * m.pdf(sol.ell, 1);
    return a - b + out.term_c * d;
  };
  out.d_high = per_type(SenderType::high);
  out.d_low = per_type(SenderType::low);
  return out;
}

PDerivative d_matching_d_p(const InformationStructure& xi) {
  const EquilibriumSolution sol = solve_cutoff(xi);
  if (!sol.exists)
    throw no_equilibrium_error("d_matching_d_p: no informative equilibrium");
  const double h = 1e-4;

  PDerivative out;
  auto ell_at = [&](double p) { return solve_cutoff({xi.mu, p, xi.pair}).ell; };
  double dl_dp;
  if (xi.p - 2.0 * h < 0.0) {
    out.one_sided = true;
    dl_dp = (ell_at(xi.p + h) - sol.ell) / h;
  } else if (xi.p + 2.0 * h > 1.0) {
    out.one_sided = true;
    dl_dp = (sol.ell - ell_at(xi.p - h)) / h;
  } else {
    dl_dp = (ell_at(xi.p + h) - ell_at(xi.p - h)) / (2.0 * h);
  }

  out.term_a = sol.matching_h - sol.matching_l;
  const double misleading_mass = type_mean(
      xi.p,
      (1.0 - xi.mu) * xi.pair.high.pdf(sol.ell, 0) - xi.mu * xi.pair.high.pdf(sol.ell, 1),
      (1.0 - xi.mu) * xi.pair.low.pdf(sol.ell, 0) - xi.mu * xi.pair.low.pdf(sol.ell, 1));
  out.term_b = dl_dp * misleading_mass;
  out.value = out.term_a + out.term_b;
  return out;
}

NestingReport region_nesting(const std::vector<double>& p_list,
                             const ExperimentPair& pair, double grid_step,
                             double dist_threshold, int threads) {
  const double dist = distance_to_perfect(pair.high);
  if (!(dist < dist_threshold))
    throw std::invalid_argument(
        "region_nesting requires a near-perfect high type: distance " +
        std::to_string(dist) + " >= threshold " + std::to_string(dist_threshold));
  if (!std::is_sorted(p_list.begin(), p_list.end()))
    throw std::invalid_argument("p_list must be ascending");

  NestingReport rep;
  rep.nested = true;
  for (double p : p_list)
    rep.per_p.push_back(influential_intervals(p, pair, grid_step, threads));

  const double tol = grid_step + 2e-8;
  for (std::size_t i = 0; i + 1 < rep.per_p.size(); ++i) {
    const auto& small = rep.per_p[i].intervals;
    const auto& large = rep.per_p[i + 1].intervals;
    for (const MuInterval& I : small) {
      const MuInterval* container = nullptr;
      for (const MuInterval& J : large)
        if (J.lo <= I.lo + tol && I.hi <= J.hi + tol) {
          container = &J;
          break;
        }
      if (!container) {
        rep.nested = false;
        rep.violations.push_back({p_list[i], p_list[i + 1], I.lo});
        continue;
      }
      if (I.lo - container->lo > tol) {
        rep.has_strict_witness = true;
        rep.witness_mu = container->lo;
      }
      if (container->hi - I.hi > tol) {
        rep.has_strict_witness = true;
        rep.witness_mu = container->hi;
      }
    }
  }
  return rep;
}

}  // namespace reptalk
