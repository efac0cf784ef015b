#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace steckin {

struct GridSpec {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t count = 2001;
  int max_refine_depth = 3;

  void validate() const;
  double at(std::size_t i) const;
};

struct ScanResult {
  double min_margin = 0.0;
  double argmin = 0.0;
  bool pass = true;
  int refine_depth_used = 0;
};

struct ScanOptions {
  /// Treat f(lo) as exactly zero instead of evaluating it (double root at
  /// the left endpoint).
  bool exact_zero_at_lo = false;
  double tol = 1e-12;
  /// Refine when |min| < refine_trigger * scale.
  double refine_trigger = 1e-9;
  unsigned jobs = 1;
};

/// Pass rule shared by every scan: min >= -tol * max(1, |scale|).
bool margin_passes(double min_margin, double scale, double tol = 1e-12);

/// Minimum of f over the grid. Near-zero minima trigger up to
/// grid.max_refine_depth rounds of 10x refinement around the argmin.
/// Ties resolve to the smallest abscissa, independent of opts.jobs.
ScanResult scan_min(const std::function<double(double)>& f, const GridSpec& grid,
                    const ScanOptions& opts = {});

struct ScanResult2D {
  double min_margin = 0.0;
  double argmin_x = 0.0;
  double argmin_y = 0.0;
  bool pass = true;
};

/// Plain tensor-grid minimum (no refinement), deterministic in jobs.
ScanResult2D scan_min_2d(const std::function<double(double, double)>& f,
                         const GridSpec& gx, const GridSpec& gy,
                         const ScanOptions& opts = {});

/// Outcome of a per-index condition n = 1..N (induction criteria, matrix
/// conditions). slack[n-1] is the normalized margin at n; negative fails.
struct SequenceVerdict {
  ScanResult scan;
  std::vector<double> slack;
  /// First failing n (1-based), 0 when every n passes.
  std::size_t first_failure = 0;
  /// The n = N condition was dropped because its input was unavailable.
  bool last_dropped = false;

  bool pass() const { return scan.pass; }
};

SequenceVerdict summarize_slack(std::vector<double> slack, double tol = 1e-12);

}  // namespace steckin
