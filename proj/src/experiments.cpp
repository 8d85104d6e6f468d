#include "reptalk/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "reptalk/quadrature.hpp"
#include "reptalk/rootfind.hpp"

namespace reptalk {

namespace {

// Closed-form CDF of the multiplicative linear experiment. With
// z = 1/2 + (l-1)/(2x(1+l)):
//   F(l|t,0) = (1+x) z - x z^2,   F(l|t,1) = (1-x) z + x z^2.
double mle_z(double x, double ell) {
  if (std::isinf(ell)) return 0.5 + 1.0 / (2.0 * x);
  return 0.5 + (ell - 1.0) / (2.0 * x * (1.0 + ell));
}

double mle_cdf(double x, double ell, int state) {
  const double z = mle_z(x, ell);
  return state == 0 ? (1.0 + x) * z - x * z * z : (1.0 - x) * z + x * z * z;
}

double mle_pdf(double x, double ell, int state) {
  if (std::isinf(ell)) return 0.0;
  const double base = 2.0 / (x * (1.0 + ell) * (1.0 + ell) * (1.0 + ell));
  return (state == 0 ? 1.0 : ell) * base;
}

// Hyperexponential mixture weights. The state-1 CDF integrates the
// length-biased components: int_0^L l a e^{-a l} dl = (1/a)(1 - e^{-aL}(1+aL)).
double one_minus_exp_one_plus(double t) {
  // 1 - e^{-t}(1+t), stable for small t
  return -std::expm1(-t) - t * std::exp(-t);
}

double hyper_mix(int k, double ell) {
  const double kd = static_cast<double>(k);
  const double b = kd / (kd * kd - kd + 1.0);
  double fast;
  if (k >= 100) {
    // log/expm1 space keeps k e^{-k l} finite and monotone at large k
    fast = std::exp(std::log(kd) - kd * ell);
  } else {
    fast = kd * std::exp(-kd * ell);
  }
  return (1.0 - 1.0 / kd) * fast + (1.0 / kd) * b * std::exp(-b * ell);
}

double hyper_pdf(int k, double ell, int state) {
  if (std::isinf(ell)) return 0.0;
  return (state == 0 ? 1.0 : ell) * hyper_mix(k, ell);
}

double hyper_cdf(int k, double ell, int state) {
  if (std::isinf(ell)) return 1.0;
  const double kd = static_cast<double>(k);
  const double b = kd / (kd * kd - kd + 1.0);
  if (state == 0) {
    return (1.0 - 1.0 / kd) * (-std::expm1(-kd * ell)) +
           (1.0 / kd) * (-std::expm1(-b * ell));
  }
  const double w_fast = (kd - 1.0) / (kd * kd);
  const double w_slow = (kd * kd - kd + 1.0) / (kd * kd);
  return w_fast * one_minus_exp_one_plus(kd * ell) +
         w_slow * one_minus_exp_one_plus(b * ell);
}

std::size_t tab_segment(const std::vector<double>& grid, double ell) {
  // index i with grid[i] <= ell < grid[i+1]; last segment for ell == back()
  auto it = std::upper_bound(grid.begin(), grid.end(), ell);
  std::size_t i = static_cast<std::size_t>(it - grid.begin());
  if (i == 0) return 0;
  if (i >= grid.size()) return grid.size() - 2;
  return i - 1;
}

double tab_cdf(const TabulatedCdf& t, double ell, int state) {
  const std::vector<double>& f = state == 0 ? t.f0 : t.f1;
  if (ell <= t.ell.front()) return 0.0;
  if (ell >= t.ell.back()) return 1.0;
  const std::size_t i = tab_segment(t.ell, ell);
  const double w = (ell - t.ell[i]) / (t.ell[i + 1] - t.ell[i]);
  return f[i] + w * (f[i + 1] - f[i]);
}

double tab_pdf(const TabulatedCdf& t, double ell, int state) {
  const std::vector<double>& f = state == 0 ? t.f0 : t.f1;
  const std::size_t i = tab_segment(t.ell, ell);
  return (f[i + 1] - f[i]) / (t.ell[i + 1] - t.ell[i]);
}

void validate_table(const TabulatedCdf& t) {
  auto fail = [](std::size_t row, const std::string& what) {
    // rows are 1-based data rows, matching the CSV after its header
    throw config_error("table row " + std::to_string(row + 1) + ": " + what);
  };
  const std::size_t n = t.ell.size();
  if (n < 2 || t.f0.size() != n || t.f1.size() != n)
    throw config_error("table needs at least two complete (ell,F0,F1) rows");
  if (!(t.ell.front() >= 0.0)) fail(0, "ell must be nonnegative");
  if (t.f0.front() != 0.0 || t.f1.front() != 0.0)
    fail(0, "F0 and F1 must be 0 at the lower support end");
  if (t.f0.back() != 1.0 || t.f1.back() != 1.0)
    fail(n - 1, "F0 and F1 must be 1 at the upper support end");
  double prev_ratio = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!(t.ell[i + 1] > t.ell[i])) fail(i + 1, "ell not strictly increasing");
    const double d0 = t.f0[i + 1] - t.f0[i];
    const double d1 = t.f1[i + 1] - t.f1[i];
    if (!(d0 > 0.0)) fail(i + 1, "F0 not strictly increasing");
    if (!(d1 > 0.0)) fail(i + 1, "F1 not strictly increasing");
    const double ratio = d1 / d0;
    if (ratio < prev_ratio * (1.0 - 1e-12))
      fail(i + 1, "density-increment ratio F1'/F0' decreases (MLRP violated)");
    // Likelihood-ratio labeling, integrated over the segment: the increment
    // ratio is the mean likelihood ratio there and must lie in [ell_i, ell_{i+1}].
    if (ratio < t.ell[i] * (1.0 - 1e-9) - 1e-12 ||
        ratio > t.ell[i + 1] * (1.0 + 1e-9) + 1e-12)
      fail(i + 1, "increment ratio " + std::to_string(ratio) +
                      " outside the segment's likelihood-ratio range");
    prev_ratio = ratio;
  }
}

}  // namespace

ExperimentModel ExperimentModel::multiplicative_linear(double x) {
  if (!(x > 0.0 && x <= 1.0))
    throw config_error("multiplicative linear weight x must lie in (0,1]");
  ExperimentModel m;
  m.family_ = MultiplicativeLinear{x};
  m.support_.lo = (1.0 - x) / (1.0 + x);
  m.support_.hi = x == 1.0 ? kInf : (1.0 + x) / (1.0 - x);
  return m;
}

ExperimentModel ExperimentModel::hyperexponential(int k) {
  if (k < 1) throw config_error("hyperexponential index k must be a positive integer");
  ExperimentModel m;
  m.family_ = SimpleHyperexponential{k};
  m.support_ = {0.0, kInf};
  return m;
}

ExperimentModel ExperimentModel::tabulated(TabulatedCdf table) {
  validate_table(table);
  ExperimentModel m;
  m.support_ = {table.ell.front(), table.ell.back()};
  m.family_ = std::move(table);
  return m;
}

ExperimentModel ExperimentModel::tabulated_from_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw config_error("empty table CSV");
  auto strip = [](std::string s) {
    s.erase(0, s.find_first_not_of(" \t\r"));
    s.erase(s.find_last_not_of(" \t\r") + 1);
    return s;
  };
  if (strip(line) != "ell,F0,F1")
    throw config_error("table CSV header must be exactly 'ell,F0,F1', got '" +
                       strip(line) + "'");
  TabulatedCdf t;
  std::size_t row = 1;  // data rows, 1-based
  while (std::getline(in, line)) {
    if (strip(line).empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    double vals[3];
    for (int c = 0; c < 3; ++c) {
      if (!std::getline(ls, cell, ','))
        throw config_error("table CSV row " + std::to_string(row) +
                           ": expected 3 comma-separated values");
      try {
        std::size_t used = 0;
        vals[c] = std::stod(strip(cell), &used);
        if (used != strip(cell).size()) throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw config_error("table CSV row " + std::to_string(row) +
                           ": '" + strip(cell) + "' is not a decimal real");
      }
    }
    t.ell.push_back(vals[0]);
    t.f0.push_back(vals[1]);
    t.f1.push_back(vals[2]);
    ++row;
  }
  return tabulated(std::move(t));
}

ExperimentModel ExperimentModel::tabulated_from_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open table CSV '" + path + "'");
  return tabulated_from_csv(in);
}

double ExperimentModel::pdf(double ell, int state) const {
  if (ell < support_.lo || ell > support_.hi)
    throw std::domain_error("pdf: likelihood ratio " + std::to_string(ell) +
                            " outside the support");
  if (const auto* m = std::get_if<MultiplicativeLinear>(&family_))
    return mle_pdf(m->x, ell, state);
  if (const auto* h = std::get_if<SimpleHyperexponential>(&family_))
    return hyper_pdf(h->k, ell, state);
  return tab_pdf(std::get<TabulatedCdf>(family_), ell, state);
}

double ExperimentModel::cdf(double ell, int state) const {
  if (std::isnan(ell)) return kNaN;
  if (ell <= support_.lo) return 0.0;
  if (ell >= support_.hi) return 1.0;
  if (const auto* m = std::get_if<MultiplicativeLinear>(&family_))
    return std::min(1.0, std::max(0.0, mle_cdf(m->x, ell, state)));
  if (const auto* h = std::get_if<SimpleHyperexponential>(&family_))
    return std::min(1.0, std::max(0.0, hyper_cdf(h->k, ell, state)));
  return tab_cdf(std::get<TabulatedCdf>(family_), ell, state);
}

double ExperimentModel::cdf_by_quadrature(double ell, int state,
                                          double abs_tol) const {
  if (ell <= support_.lo) return 0.0;
  const double u_lo = u_of_ell(support_.lo);
  const double u_hi = std::min(u_of_ell(ell), u_of_ell(support_.hi));
  auto integrand = [&](double u) {
    if (u >= 1.0) return 0.0;
    const double l = ell_of_u(u);
    const double jac = 1.0 / ((1.0 - u) * (1.0 - u));
    return pdf(std::min(std::max(l, support_.lo), support_.hi), state) * jac;
  };
  return integrate(integrand, u_lo, u_hi, abs_tol);
}

std::string ExperimentModel::describe() const {
  std::ostringstream os;
  if (const auto* m = std::get_if<MultiplicativeLinear>(&family_))
    os << "mle:" << m->x;
  else if (const auto* h = std::get_if<SimpleHyperexponential>(&family_))
    os << "hyper:" << h->k;
  else
    os << "table:" << std::get<TabulatedCdf>(family_).ell.size() << " rows";
  return os.str();
}

AssumptionReport validate_assumptions(const ExperimentPair& pair, double mu,
                                      int grid_size) {
  if (grid_size < 32) throw std::invalid_argument("grid_size must be >= 32");
  AssumptionReport rep;
  const SupportInterval& sh = pair.high.support();
  const SupportInterval& sl = pair.low.support();
  rep.part_a = sh.lo < sl.lo && sl.hi < sh.hi;

  rep.part_c_bound = 1.0 / (1.0 + sh.lo);
  rep.part_c = mu < rep.part_c_bound;

  if (rep.part_a) {
    // Both hazard orientations, both states, on a grid strictly inside the low
    // type's support. Geometric when the interval is positive and finite;
    // otherwise uniform on the compactified scale.
    rep.part_b_margin = kInf;
    const int n = grid_size;
    const bool geometric = sl.lo > 0.0 && std::isfinite(sl.hi);
    const double ua = u_of_ell(sl.lo), ub = u_of_ell(sl.hi);
    for (int i = 1; i <= n; ++i) {
      const double t = static_cast<double>(i) / (n + 1);
      const double ell = geometric ? sl.lo * std::pow(sl.hi / sl.lo, t)
                                   : ell_of_u(ua + t * (ub - ua));
      for (int s = 0; s < 2; ++s) {
        const double fl = pair.low.pdf(ell, s);
        const double fh = pair.high.pdf(ell, s);
        const double Fl = pair.low.cdf(ell, s);
        const double Fh = pair.high.cdf(ell, s);
        const double rev = fl / Fl - fh / Fh;
        const double haz = fl / (1.0 - Fl) - fh / (1.0 - Fh);
        for (double gap : {rev, haz}) {
          if (gap < rep.part_b_margin) {
            rep.part_b_margin = gap;
            rep.part_b_worst_ell = ell;
          }
        }
      }
    }
    rep.part_b = rep.part_b_margin > 0.0;
  }
  rep.overall = rep.part_a && rep.part_b && rep.part_c;
  return rep;
}

SymmetryReport check_symmetry(const ExperimentModel& model, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("symmetry tolerance must be positive");
  SymmetryReport rep;
  rep.max_gap = 0.0;
  const double lo = std::min(model.support().lo, 1.0);
  const double ua = u_of_ell(lo), ub = u_of_ell(1.0);
  const int n = 512;
  for (int i = 0; i <= n; ++i) {
    const double u = ua + (ub - ua) * static_cast<double>(i) / n;
    const double ell = ell_of_u(u);
    const double mirror = ell == 0.0 ? kInf : 1.0 / ell;
    const double gap =
        std::abs(model.cdf(ell, 0) - (1.0 - model.cdf(mirror, 1)));
    rep.max_gap = std::max(rep.max_gap, gap);
  }
  rep.symmetric = rep.max_gap < tol;
  return rep;
}

double distance_to_perfect(const ExperimentModel& model) {
  // State 0: inf{eps : F~(eps|0) >= 1-eps}; state 1: inf{eps : F~(1-eps|1) <= eps},
  // on the compactified scale. Both gap functions are nondecreasing in eps.
  auto f_tilde = [&](double u, int s) { return model.cdf(ell_of_u(u), s); };
  const double d0 = bisect_monotone_up(
      [&](double eps) { return f_tilde(eps, 0) - (1.0 - eps); }, 0.0, 1.0, 1e-9);
  const double d1 = bisect_monotone_up(
      [&](double eps) { return eps - f_tilde(1.0 - eps, 1); }, 0.0, 1.0, 1e-9);
  return std::max(d0, d1);
}

}  // namespace reptalk
