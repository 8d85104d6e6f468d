#include "reptalk/serialize.hpp"

#include <cmath>

#include "reptalk/emit.hpp"

namespace reptalk {

void write_assumption_report_json(std::ostream& os, const AssumptionReport& rep) {
  JsonWriter w(os);
  w.begin_object()
      .kv("part_a", rep.part_a)
      .kv("part_b", rep.part_b)
      .kv("part_b_margin", rep.part_b_margin)
      .kv("part_b_worst_ell", rep.part_b_worst_ell)
      .kv("part_c", rep.part_c)
      .kv("part_c_bound", rep.part_c_bound)
      .kv("overall", rep.overall)
      .end_object();
  os << '\n';
}

void write_solution_json(std::ostream& os, const EquilibriumSolution& sol) {
  JsonWriter w(os);
  w.begin_object();
  w.kv("exists", sol.exists);
  w.kv("beta", sol.beta);
  w.kv("ell", sol.ell);
  w.key("crossing")
      .begin_object()
      .kv("beta_dagger_0", sol.crossing.beta_dagger_0)
      .kv("beta_dagger_1", sol.crossing.beta_dagger_1)
      .end_object();
  w.key("reputations")
      .begin_object()
      .kv("r00", sol.reputations(0, 0))
      .kv("r01", sol.reputations(0, 1))
      .kv("r10", sol.reputations(1, 0))
      .kv("r11", sol.reputations(1, 1))
      .end_object();
  w.kv("matching_total", sol.matching_total);
  w.kv("matching_h", sol.matching_h);
  w.kv("matching_l", sol.matching_l);
  w.kv("reservation", sol.reservation);
  w.kv("receiver_payoff", sol.receiver_payoff);
  w.kv("influential", sol.influential);
  w.kv("margin", sol.margin);
  w.kv("misleading", to_string(sol.misleading));
  w.kv("residual", sol.residual);
  w.end_object();
  os << '\n';
}

void write_region_report_json(JsonWriter& w, const RegionReport& rep) {
  w.begin_object();
  if (rep.mu_I.below_half)
    w.kv("mu_I", "below 1/2");
  else if (std::isnan(rep.mu_I.value))
    w.kv_null("mu_I");
  else
    w.kv("mu_I", rep.mu_I.value);
  w.kv("betanew00_gap", rep.mu_I.betanew00_gap);
  w.key("intervals").begin_array();
  for (const MuInterval& iv : rep.intervals)
    w.begin_array().value(iv.lo).value(iv.hi).end_array();
  w.end_array();
  w.kv("mu_bar_low", rep.mu_bar_low);
  if (rep.has_mu_bar_high)
    w.kv("mu_bar_high", rep.mu_bar_high);
  else
    w.kv_null("mu_bar_high");
  w.kv("grid_step", rep.grid_step);
  w.kv("mu_hi", rep.mu_hi);
  w.kv("merged_boundaries", rep.merged_boundaries);
  w.end_object();
}

namespace {

void write_mc(JsonWriter& w, const McEstimate& e) {
  w.begin_object();
  if (e.present) {
    w.kv("mean", e.mean);
    w.kv("half_width_95", e.half_width_95);
  } else {
    w.kv_null("mean");
    w.kv_null("half_width_95");
  }
  w.kv("n", e.n);
  w.end_object();
}

}  // namespace

void write_oracle_report_json(std::ostream& os, double beta,
                              const OracleReport& rep, bool mc_agrees,
                              std::uint64_t seed, std::uint64_t draws) {
  JsonWriter w(os);
  w.begin_object();
  w.kv("beta", beta);
  w.key("reputations_mc").begin_object();
  w.key("r00");
  write_mc(w, rep.reputations_mc[0][0]);
  w.key("r01");
  write_mc(w, rep.reputations_mc[0][1]);
  w.key("r10");
  write_mc(w, rep.reputations_mc[1][0]);
  w.key("r11");
  write_mc(w, rep.reputations_mc[1][1]);
  w.end_object();
  w.key("matching_mc");
  write_mc(w, rep.matching_mc);
  w.kv("incentive_sign_ok", rep.incentive_sign_ok);
  w.kv("receiver_best_reply_ok", rep.receiver_best_reply_ok);
  w.kv("mc_agrees", mc_agrees);
  w.kv("max_abs_gap_to_analytic", rep.max_abs_gap_to_analytic);
  w.kv("seed", seed);
  w.kv("draws", draws);
  w.kv("diagnostic", rep.diagnostic);
  w.end_object();
  os << '\n';
}

const char* const kProfileCsvHeader =
    "mu,beta,matching_total,matching_h,matching_l,reservation,receiver_payoff,"
    "influential,error";

void write_profile_csv(std::ostream& os, const PayoffProfile& profile) {
  os << kProfileCsvHeader << '\n';
  for (const PayoffRow& r : profile.rows)
    csv_row(os, {fmt_real(r.mu), fmt_real(r.beta), fmt_real(r.matching_total),
                 fmt_real(r.matching_h), fmt_real(r.matching_l),
                 fmt_real(r.reservation), fmt_real(r.receiver_payoff),
                 r.ok ? (r.influential ? "1" : "0") : "", r.error});
}

}  // namespace reptalk
