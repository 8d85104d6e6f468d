#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "reptalk/common.hpp"

namespace reptalk {

// Closed support [lo, hi] on the likelihood-ratio scale; hi may be +inf.
struct SupportInterval {
  double lo = 0.0;
  double hi = 0.0;
};

// Multiplicative linear experiment with weight x in (0,1] on the informative
// component. Density f(l|t,s) = ((1-s)+s*l) * 2/(x*(1+l)^3) on
// [(1-x)/(1+x), (1+x)/(1-x)].
struct MultiplicativeLinear {
  double x;
};

// Simple hyperexponential experiment on [0,inf]:
//   f(l|t,s) = (1-s+s*l) * [ (1-1/k) k e^{-k l} + (1/k) b_k e^{-b_k l} ],
// b_k = k/(k^2-k+1). Blackwell more informative for higher k.
struct SimpleHyperexponential {
  int k;
  double slow_rate() const {
    const double kd = static_cast<double>(k);
    return kd / (kd * kd - kd + 1.0);
  }
};

// Piecewise-linear CDF pair on a shared grid (density piecewise-constant).
struct TabulatedCdf {
  std::vector<double> ell;
  std::vector<double> f0;
  std::vector<double> f1;
};

class ExperimentModel {
 public:
  static ExperimentModel multiplicative_linear(double x);
  static ExperimentModel hyperexponential(int k);
  static ExperimentModel tabulated(TabulatedCdf table);
  // CSV with header "ell,F0,F1", rows sorted strictly increasing in ell.
  // Validation errors name the offending row.
  static ExperimentModel tabulated_from_csv(std::istream& in);
  static ExperimentModel tabulated_from_csv_file(const std::string& path);

  const SupportInterval& support() const { return support_; }

  // Density at l; throws std::domain_error outside the closed support.
  double pdf(double ell, int state) const;

  // Distribution function at l; clamps to 0/1 below/above the support.
  double cdf(double ell, int state) const;

  // Independent route: integrates pdf by adaptive quadrature on the
  // compactified scale. Cross-check path only.
  double cdf_by_quadrature(double ell, int state, double abs_tol = 1e-10) const;

  bool is_tabulated() const { return std::holds_alternative<TabulatedCdf>(family_); }
  const TabulatedCdf* tabulated_grid() const { return std::get_if<TabulatedCdf>(&family_); }

  // Short descriptor, e.g. "mle:0.9", "hyper:1000", "table:<n rows>".
  std::string describe() const;

 private:
  ExperimentModel() = default;
  std::variant<MultiplicativeLinear, SimpleHyperexponential, TabulatedCdf> family_;
  SupportInterval support_;
};

struct ExperimentPair {
  ExperimentModel high;
  ExperimentModel low;

  const ExperimentModel& by_type(SenderType t) const {
    return t == SenderType::high ? high : low;
  }
};

struct AssumptionReport {
  bool part_a = false;
  bool part_b = false;
  double part_b_margin = kNaN;     // min over the grid of the four hazard-rate gaps
  double part_b_worst_ell = kNaN;  // where the minimum is attained
  bool part_c = false;
  double part_c_bound = kNaN;      // 1/(1 + lo_h)
  bool overall = false;
};

// Checks (a) from the supports, (b) on a grid strictly inside the low type's
// support (both states, both hazard orientations), (c) as mu < 1/(1+lo_h).
// Failures are reported, never thrown.
AssumptionReport validate_assumptions(const ExperimentPair& pair, double mu,
                                      int grid_size = 512);

struct SymmetryReport {
  bool symmetric = false;
  double max_gap = kNaN;  // max_l in [lo,1] |F(l|t,0) - (1 - F(1/l|t,1))|
};

SymmetryReport check_symmetry(const ExperimentModel& model, double tol);

// Levy-Prokhorov distance to the perfect experiment (point mass at 0 in state
// 0, at inf in state 1), max over states, computed on the compactified scale.
double distance_to_perfect(const ExperimentModel& model);

}  // namespace reptalk
