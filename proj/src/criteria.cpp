#include "steckin/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "steckin/error.hpp"
#include "steckin/parallel.hpp"

namespace steckin::criteria {

using detail::require;

namespace {

constexpr double kThird = 1.0 / 3.0;
constexpr double kHalfGuard = 1e-6;

void require_unit(double x, const char* name) {
  require(x >= 0.0 && x <= 1.0, std::string(name) + " must lie in [0, 1]");
}

void require_crit_domain(double p) {
  require(p >= kThird && p < 0.5, "criterion needs 1/3 <= p < 1/2");
}

}  // namespace

double best_constant(double p, double r) {
  require(p > 0.0 && p < 1.0, "best_constant needs 0 < p < 1");
  require(r > 0.0 && r < 1.0, "best_constant needs 0 < r < 1");
  return std::pow(p / (1.0 - r), p);
}

double critical_shift(double p) {
  require(p > 0.0, "critical_shift needs p > 0");
  return (3.0 - 1.0 / p) / 2.0;
}

double crit14(double p) {
  require_crit_domain(p);
  if (p == kThird) return 3.0 - 2.0 * std::sqrt(2.0);
  const double e = 1.0 / (1.0 - p);
  const double k = (1.0 - p) / p;
  return std::pow(2.0, p * e) * (std::pow(k, e) - k) -
         std::pow(1.0 + critical_shift(p), e);
}

double crit27(double p) {
  require_crit_domain(p);
  if (p == kThird) return 3.0 - 2.0 * std::sqrt(2.0);
  const double t = p / (1.0 - p);
  return std::pow(2.0, t) / t * (std::pow(t, -t) - 1.0) -
         std::pow(1.0 + critical_shift(p), 1.0 + t);
}

double phi45(double y, double p, double r, double a) {
  require_unit(y, "y");
  require(p > 0.0 && p < 1.0 && r > 0.0 && r < 1.0, "phi45 needs 0 < p, r < 1");
  require(1.0 + a * y > 0.0, "phi45 needs 1 + a*y > 0");
  const double e = 1.0 / (1.0 - p);
  const double k = (1.0 - r) / p;
  return std::pow(1.0 + (a + k - 1.0) * y, e) -
         std::pow(1.0 + y, -r * e) * std::pow(1.0 + a * y, e) - k * y;
}

double lemma1_f(double x, double t) {
  require_unit(x, "x");
  require(t > 0.5 && t < 1.0, "lemma1 needs 1/2 < t < 1");
  return std::pow(1.0 + x, 1.0 + t) -
         std::pow(1.0 + 2.0 * t * x, -t) * std::pow(1.0 + (2.0 * t - 1.0) * x, 1.0 + t) -
         2.0 * x;
}

double lemma1_g(double x, double t) {
  require_unit(x, "x");
  require(t > 0.5 && t < 1.0, "lemma1 needs 1/2 < t < 1");
  return 1.0 - std::pow(1.0 + 2.0 * t * x, -t - 2.0) *
                   std::pow(1.0 + (2.0 * t - 1.0) * x, t - 1.0) *
                   std::pow(1.0 + x, 1.0 - t);
}

double f35(double x, double p, double alpha) {
  require_unit(x, "x");
  require(p > 0.0 && p < 0.5, "f35 needs 0 < p < 1/2");
  require(alpha > 0.0 && alpha < 1.0 / p, "f35 needs 0 < alpha < 1/p");
  const double e = 1.0 / (1.0 - p);
  const double u = 1.0 / p - alpha - 1.0;
  return std::pow(1.0 + u * x, e) - std::pow(1.0 + x, -alpha * p * e) -
         (1.0 - alpha * p) / p * x;
}

double h36(double alpha, double p) {
  require(p > 0.0, "h36 needs p > 0");
  if (p >= 0.5 - kHalfGuard)
    throw SingularParameterError("h36 is singular for p >= 1/2");
  require(alpha > 0.0 && alpha < 1.0 / p, "h36 needs 0 < alpha < 1/p");
  const double u = 1.0 / p - alpha - 1.0;
  require(u > 0.0, "h36 needs 1/p - alpha - 1 > 0");
  const double base = u * u / (alpha * ((alpha - 1.0) * p + 1.0));
  return std::pow(base, (1.0 - p) / (1.0 - 2.0 * p)) *
             ((2.0 + (alpha - 2.0) * p) / (1.0 - 2.0 * p)) -
         u;
}

double ineq32_margin(double y, double alpha, double p) {
  require_unit(y, "y");
  require(p > 1.0, "ineq32 needs p > 1");
  require(alpha >= 1.0, "ineq32 needs alpha >= 1");
  const double lin = (1.0 - 1.0 / (p * alpha)) * alpha * y;
  return 1.0 - std::pow(lin + std::pow(1.0 - y, alpha), p - 1.0) *
                   (lin + std::pow(1.0 + y, 1.0 - alpha));
}

double h1(double y, double alpha, double p) {
  require(p > 1.0 && p <= 2.0, "h1 needs 1 < p <= 2");
  const double s = alpha * (alpha - 1.0);
  const double c = 1.0 - 1.0 / p;
  return s * p / 2.0 - c * c + s * (p - 1.0) * (p - 2.0) / (2.0 * p) * y +
         s * s * (p - 1.0) / 4.0 * y * y;
}

double h2(double y, double alpha, double p) {
  require(p > 2.0, "h2 needs p > 2");
  const double s = alpha * (alpha - 1.0);
  require(s <= 2.0 / p * (1.0 + 1e-12), "h2 needs alpha(alpha-1) <= 2/p");
  return s * p / 2.0 - (1.0 - 1.0 / p) / 2.0 + (p - 1.0) * s / 2.0 * y -
         p * (p - 1.0) * s * s / 8.0 * y * y;
}

Threshold bisect(const std::function<double(double)>& margin, double lo, double hi,
                 double tol, int max_iter) {
  require(tol > 0.0, "bisection tolerance must be positive");
  Threshold out{lo, lo, hi, margin(lo), margin(hi), 0};
  if (!(out.f_lo >= 0.0 && out.f_hi < 0.0))
    throw BracketError("bisection bracket has no sign change");
  while (out.hi - out.lo > tol && out.iterations < max_iter) {
    const double mid = 0.5 * (out.lo + out.hi);
    const double fm = margin(mid);
    ++out.iterations;
    // fm == 0 counts as valid, so ties move lo up; NaN counts as failure.
    if (fm >= 0.0) {
      out.lo = mid;
      out.f_lo = fm;
    } else {
      out.hi = mid;
      out.f_hi = fm;
    }
  }
  out.value = out.lo;
  return out;
}

Threshold first_failure_root(const std::function<double(double)>& margin, double lo,
                             double hi, std::size_t points, double tol) {
  require(points >= 2, "root scan needs at least two points");
  const GridSpec g{lo, hi, points, 0};
  double prev_x = g.at(0);
  if (!(margin(prev_x) >= 0.0))
    throw BracketError("root scan: left end is already outside the valid region");
  for (std::size_t i = 1; i < points; ++i) {
    const double x = g.at(i);
    if (!(margin(x) >= 0.0)) return bisect(margin, prev_x, x, tol);
    prev_x = x;
  }
  throw BracketError("root scan: no sign change found");
}

Threshold p_star(double tol, std::size_t scan_points) {
  // 1/2 itself is excluded from the crit14 domain; stop one step short.
  const double hi = 0.5 - (0.5 - kThird) / static_cast<double>(scan_points);
  return first_failure_root([](double p) { return crit14(p); }, kThird, hi, scan_points,
                            tol);
}

double threshold_p_star(double tol) { return p_star(tol).value; }

Threshold alpha0_sub_half_bracket(double p, double tol, std::size_t scan_points) {
  require(p > 0.0, "alpha0_sub_half needs p > 0");
  if (p >= 0.5 - kHalfGuard)
    throw SingularParameterError("alpha0_sub_half is singular for p >= 1/2");
  // h36 -> +inf as alpha -> 0 and h36 ~ -(1/p - alpha - 1) < 0 near the top.
  const double top = 1.0 / p - 1.0;
  const double step = top / static_cast<double>(scan_points + 1);
  return first_failure_root([p](double a) { return h36(a, p); }, step, top - step,
                            scan_points, tol);
}

double alpha0_sub_half(double p) { return alpha0_sub_half_bracket(p).value; }

double alpha_sufficient_sub_half(double p) {
  require(p > 0.0 && p < 0.5, "alpha_sufficient_sub_half needs 0 < p < 1/2");
  if (p >= kThird) return 1.0 / p - 2.0;
  return (-3.0 + std::sqrt(1.0 + 8.0 / p)) / 2.0;
}

Alpha0 alpha0_super_one_detail(double p, double tol) {
  require(p > 1.0, "alpha0_super_one needs p > 1");
  constexpr std::size_t kPoints = 1000;
  Alpha0 out;
  if (p <= 2.0) {
    const double top = 1.0 + 1.0 / p;
    out.alpha1 = first_failure_root([p](double a) { return -h1(0.0, a, p); }, 1.0, top,
                                    kPoints, tol)
                     .value;
    out.alpha2 = first_failure_root([p](double a) { return -h1(1.0, a, p); }, 1.0, top,
                                    kPoints, tol)
                     .value;
    out.alpha0 = std::min(out.alpha1, out.alpha2);
  } else {
    // Largest alpha with alpha(alpha-1) <= 2/p.
    const double top = 0.5 * (1.0 + std::sqrt(1.0 + 8.0 / p));
    out.alpha1 = out.alpha2 = std::numeric_limits<double>::quiet_NaN();
    out.alpha0 = first_failure_root([p](double a) { return -h2(1.0, a, p); }, 1.0, top,
                                    kPoints, tol)
                     .value;
  }
  return out;
}

double alpha0_super_one(double p) { return alpha0_super_one_detail(p).alpha0; }

Lemma1Scan scan_lemma1(const GridSpec& x_grid, const GridSpec& t_grid, unsigned jobs) {
  x_grid.validate();
  t_grid.validate();
  require(x_grid.lo == 0.0, "lemma1 scan starts at x = 0");
  ScanOptions opts;
  opts.exact_zero_at_lo = true;
  opts.jobs = jobs;
  Lemma1Scan out;
  out.f = scan_min_2d(lemma1_f, x_grid, t_grid, opts);
  out.g = scan_min_2d(lemma1_g, x_grid, t_grid, opts);

  std::vector<char> row_ok(t_grid.count, 1);
  parallel_for(t_grid.count, jobs, [&](std::size_t jb, std::size_t je) {
    for (std::size_t j = jb; j < je; ++j) {
      const double t = t_grid.at(j);
      double prev = 0.0;  // g(0, t) = 0 exactly
      for (std::size_t i = 1; i < x_grid.count; ++i) {
        const double g = lemma1_g(x_grid.at(i), t);
        if (!margin_passes(g - prev, g)) {
          row_ok[j] = 0;
          break;
        }
        prev = g;
      }
    }
  });
  out.g_monotone = std::all_of(row_ok.begin(), row_ok.end(), [](char c) { return c != 0; });
  return out;
}

}  // namespace steckin::criteria
