#pragma once

// Closed-form criterion functions for the reverse Hardy / Copson family and
// the forward power-weight family, with grid and root-finding helpers.

#include <cstddef>
#include <functional>
#include <span>
#include <tuple>
#include <vector>

#include "steckin/error.hpp"
#include "steckin/scan.hpp"

namespace steckin::criteria {

/// (p/(1-r))^p, the sharp constant of the weighted reverse inequality.
double best_constant(double p, double r);

/// Base-case criterion in the original normalization. Defined on
/// [1/3, 1/2); at p = 1/3 it returns the limit 3 - 2*sqrt(2).
double crit14(double p);

/// Same quantity written with t = p/(1-p) and a = (3 - 1/p)/2.
double crit27(double p);

/// The shift a(p) = (3 - 1/p)/2 that makes the step criterion hold.
double critical_shift(double p);

double phi45(double y, double p, double r, double a);

double lemma1_f(double x, double t);
double lemma1_g(double x, double t);

double f35(double x, double p, double alpha);

/// Throws SingularParameterError for p >= 1/2 - 1e-6 and ParameterError
/// when 1/p - alpha - 1 <= 0.
double h36(double alpha, double p);

double ineq32_margin(double y, double alpha, double p);

double h1(double y, double alpha, double p);
double h2(double y, double alpha, double p);

struct Threshold {
  double value = 0.0;
  /// Final bracket; f(lo) and f(hi) have opposite signs.
  double lo = 0.0;
  double hi = 0.0;
  double f_lo = 0.0;
  double f_hi = 0.0;
  int iterations = 0;
};

/// Bisection for the boundary of a validity region: margin(lo) >= 0 and
/// margin(hi) < 0. Returns the lo (valid) side of the final bracket.
Threshold bisect(const std::function<double(double)>& margin, double lo, double hi,
                 double tol, int max_iter = 200);

/// Scans `points` abscissae from lo to hi and bisects the first transition
/// from margin >= 0 to margin < 0. BracketError when margin(lo) < 0 or no
/// transition is found.
Threshold first_failure_root(const std::function<double(double)>& margin, double lo,
                             double hi, std::size_t points, double tol);

/// Root of crit14 in (1/3, 1/2). Brackets by a coarse scan with
/// `scan_points` samples, then bisects.
Threshold p_star(double tol = 1e-9, std::size_t scan_points = 1000);
double threshold_p_star(double tol = 1e-9);

/// Largest alpha in (0, 1/p - 1) with h36(alpha, p) >= 0.
Threshold alpha0_sub_half_bracket(double p, double tol = 1e-10,
                                  std::size_t scan_points = 1000);
double alpha0_sub_half(double p);

/// Closed-form sufficient alpha for 0 < p < 1/2:
/// p <= 2/((alpha+2)(alpha+1)) when alpha >= 1, p <= 1/(alpha+2) otherwise.
double alpha_sufficient_sub_half(double p);

struct Alpha0 {
  double alpha0 = 0.0;
  /// Roots of h1(0) and h1(1) for 1 < p <= 2; unused (NaN) for p > 2.
  double alpha1 = 0.0;
  double alpha2 = 0.0;
};

Alpha0 alpha0_super_one_detail(double p, double tol = 1e-10);
double alpha0_super_one(double p);

/// Scan results for the two-variable lemma: f >= 0, g >= 0 and g
/// nondecreasing in x along every t-row.
struct Lemma1Scan {
  ScanResult2D f;
  ScanResult2D g;
  bool g_monotone = true;
  bool pass() const { return f.pass && g.pass && g_monotone; }
};

Lemma1Scan scan_lemma1(const GridSpec& x_grid = {0.0, 1.0, 2001, 0},
                       const GridSpec& t_grid = {0.505, 0.995, 199, 0},
                       unsigned jobs = 1);

/// Element-wise evaluation over equally sized parameter columns, e.g.
/// batch(phi45, ys, ps, rs, as).
template <class F, class... Cols>
std::vector<double> batch(F&& f, const Cols&... cols) {
  const std::size_t n = std::get<0>(std::tie(cols...)).size();
  detail::require(((cols.size() == n) && ...), "batch columns differ in length");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = f(cols[i]...);
  return out;
}

}  // namespace steckin::criteria
