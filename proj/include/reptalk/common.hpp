#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace reptalk {

// Sender quality. The high type's experiment is the more informative one.
enum class SenderType { high = 0, low = 1 };

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Compactified likelihood-ratio scale u = l/(1+l), mapping [0,inf] onto [0,1].
inline double u_of_ell(double ell) {
  if (std::isinf(ell)) return 1.0;
  return ell / (1.0 + ell);
}

inline double ell_of_u(double u) {
  if (u >= 1.0) return kInf;
  return u / (1.0 - u);
}

// p-weighted expectation over the sender type, E^p[g(t)] = p g(h) + (1-p) g(l).
inline double type_mean(double p, double g_high, double g_low) {
  return p * g_high + (1.0 - p) * g_low;
}

struct solver_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Experiment pair fails the support/ordering requirements it was declared with.
struct inconsistent_experiment_error : solver_error {
  using solver_error::solver_error;
};

// H(.|h,s) - H(.|l,s) did not change sign exactly once on the low-type belief range.
struct single_crossing_error : solver_error {
  using solver_error::solver_error;
};

// A reputation denominator vanished: the conjectured cutoff left the informative range.
struct degenerate_cutoff_error : solver_error {
  using solver_error::solver_error;
};

// A bracket that theory guarantees failed numerically; carries diagnostics.
struct internal_consistency_error : solver_error {
  using solver_error::solver_error;
};

// Requested an equilibrium object for a pair outside the informative family.
struct no_equilibrium_error : solver_error {
  using solver_error::solver_error;
};

// Malformed tables, CSV and config input.
struct config_error : solver_error {
  using solver_error::solver_error;
};

}  // namespace reptalk
