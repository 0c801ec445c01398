#pragma once

/// Stability analysis of IMEX tableaux: DIRK and penalized stability
/// functions, the infinite-stiffness limit R(alpha, inf), weak-AP ranges,
/// and absolute-monotonicity radii/regions; reproduces the scheme summary
/// table as CSV.

#include <string>
#include <vector>

#include "apkin/tableau.hpp"

namespace apkin {

/// Closed z-interval (monotonicity) or open alpha-interval (weak AP);
/// hi may be +infinity. A degenerate {0} monotonicity region is {0, 0}.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct StabilityReport {
  std::string name;
  std::string type;  ///< "A", "CK", or "ARS"
  bool gsa = false;
  bool aa = false;
  bool aa_c = false;
  std::vector<Interval> am_intervals;       ///< penalized absolute-monotonicity region
  std::vector<Interval> weak_ap_intervals;  ///< |R(alpha,inf)| < 1
  std::vector<double> r_inf_alphas;         ///< sample points for R(alpha,inf)
  std::vector<double> r_inf_values;
  std::string error;  ///< nonempty when analysis failed for this scheme
};

/// Stability function of the DIRK part, R(z) = 1 - z w^T (I + zA)^{-1} e.
double dirk_stability(const ImexTableau& t, double z);

/// Penalized stability function
/// R(alpha, z) = 1 - z (w - (alpha-1) w~)^T (I + z(A - (alpha-1) A~))^{-1} e.
double penalized_stability(const ImexTableau& t, double alpha, double z);

/// Exact limit R(alpha, inf) by algebraic elimination (block elimination for
/// CK/ARS types whose first implicit stage is explicit). Returns +/-infinity
/// when the limit diverges.
double stability_at_infinity(const ImexTableau& t, double alpha);

/// Maximal open sub-intervals of (0, alpha_max) where |R(alpha,inf)| < 1;
/// an interval reaching alpha_max is reported as unbounded. Endpoints refined
/// by bisection to 1e-8.
std::vector<Interval> weak_ap_range(const ImexTableau& t, double alpha_max = 16.0,
                                    double resolution = 1e-4);

/// Largest z such that (I+zA)^{-1} e >= 0 and (I+zA)^{-1} A e >= 0 hold
/// componentwise on [0, z]; +infinity when they hold up to z_max. The
/// z-independent weight conditions (1 - w^T A^{-1} e >= 0, w^T A^{-1} >= 0)
/// are checked once when A is invertible and force a zero radius if violated.
double monotonicity_radius_standard(const ImexTableau& t, double z_max = 1e6);

/// Absolute-monotonicity region of the penalized scheme: z >= 0 where
/// (I+zA)^{-1} e >= 0, (I+zA)^{-1}(A - A~) e >= 0 and (I+zA)^{-1} A~ >= 0
/// componentwise. z = 0 is trivially monotone (the step is the identity);
/// the degenerate {0} is reported only when no nondegenerate interval exists.
std::vector<Interval> monotonicity_region_penalized(const ImexTableau& t, double z_max = 1e6);

/// One report per scheme; per-scheme failures are recorded, not propagated.
std::vector<StabilityReport> table1_report(const std::map<std::string, ImexTableau>& schemes);

/// CSV with header name,type,gsa,aa,aa_c,am_intervals,weak_ap_intervals,
/// R_inf_alpha_samples; fields containing commas are double-quoted.
std::string stability_report_csv(const std::vector<StabilityReport>& reports);

std::string format_intervals(const std::vector<Interval>& intervals, bool open_alpha);

}  // namespace apkin
