#include "steckin/scan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "steckin/error.hpp"
#include "steckin/parallel.hpp"

namespace steckin {

void GridSpec::validate() const {
  detail::require(lo < hi, "grid needs lo < hi");
  detail::require(count >= 2, "grid needs at least two points");
  detail::require(max_refine_depth >= 0, "refine depth must be nonnegative");
}

double GridSpec::at(std::size_t i) const {
  if (i + 1 == count) return hi;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
}

bool margin_passes(double min_margin, double scale, double tol) {
  return min_margin >= -tol * std::max(1.0, std::abs(scale));
}

namespace {

struct Best {
  double value = std::numeric_limits<double>::infinity();
  std::size_t index = 0;
};

// NaN compares as a failure so it is never silently skipped.
bool better(double v, std::size_t i, const Best& b) {
  if (std::isnan(v)) return !std::isnan(b.value) || i < b.index;
  if (std::isnan(b.value)) return false;
  return v < b.value || (v == b.value && i < b.index);
}

Best grid_min(const std::function<double(double)>& f, const GridSpec& g,
              bool zero_at_lo, unsigned jobs) {
  const std::size_t workers = std::max(1u, jobs);
  std::vector<Best> partial(workers);
  const std::size_t chunk = (g.count + workers - 1) / workers;
  parallel_for(workers, jobs, [&](std::size_t wb, std::size_t we) {
    for (std::size_t w = wb; w < we; ++w) {
      Best local;
      const std::size_t end = std::min(g.count, (w + 1) * chunk);
      for (std::size_t i = w * chunk; i < end; ++i) {
        const double v = (i == 0 && zero_at_lo) ? 0.0 : f(g.at(i));
        if (better(v, i, local)) local = {v, i};
      }
      partial[w] = local;
    }
  });
  Best best;
  for (const auto& b : partial)
    if (better(b.value, b.index, best)) best = b;
  return best;
}

}  // namespace

ScanResult scan_min(const std::function<double(double)>& f, const GridSpec& grid,
                    const ScanOptions& opts) {
  grid.validate();
  Best best = grid_min(f, grid, opts.exact_zero_at_lo, opts.jobs);
  ScanResult out;
  out.min_margin = best.value;
  out.argmin = grid.at(best.index);

  GridSpec current = grid;
  std::size_t current_index = best.index;
  for (int depth = 1; depth <= grid.max_refine_depth; ++depth) {
    const double scale = std::max(1.0, std::abs(out.min_margin));
    if (std::isnan(out.min_margin) || std::abs(out.min_margin) >= opts.refine_trigger * scale)
      break;
    const double h = (current.hi - current.lo) / static_cast<double>(current.count - 1);
    const double x = current.at(current_index);
    GridSpec finer{std::max(grid.lo, x - h), std::min(grid.hi, x + h), 21, 0};
    if (!(finer.lo < finer.hi)) break;
    const bool zero_lo = opts.exact_zero_at_lo && finer.lo == grid.lo;
    const Best b = grid_min(f, finer, zero_lo, opts.jobs);
    out.refine_depth_used = depth;
    if (b.value < out.min_margin) {
      out.min_margin = b.value;
      out.argmin = finer.at(b.index);
    }
    current = finer;
    current_index = b.index;
  }
  out.pass = !std::isnan(out.min_margin) &&
             margin_passes(out.min_margin, out.min_margin, opts.tol);
  return out;
}

ScanResult2D scan_min_2d(const std::function<double(double, double)>& f,
                         const GridSpec& gx, const GridSpec& gy,
                         const ScanOptions& opts) {
  gx.validate();
  gy.validate();
  std::vector<Best> rows(gy.count);
  parallel_for(gy.count, opts.jobs, [&](std::size_t jb, std::size_t je) {
    for (std::size_t j = jb; j < je; ++j) {
      const double y = gy.at(j);
      Best local;
      for (std::size_t i = 0; i < gx.count; ++i) {
        const double v = (i == 0 && opts.exact_zero_at_lo) ? 0.0 : f(gx.at(i), y);
        if (better(v, i, local)) local = {v, i};
      }
      rows[j] = local;
    }
  });
  ScanResult2D out;
  Best best;
  std::size_t best_row = 0;
  for (std::size_t j = 0; j < rows.size(); ++j) {
    const std::size_t flat = j * gx.count + rows[j].index;
    if (better(rows[j].value, flat, best)) {
      best = {rows[j].value, flat};
      best_row = j;
    }
  }
  out.min_margin = best.value;
  out.argmin_x = gx.at(best.index - best_row * gx.count);
  out.argmin_y = gy.at(best_row);
  out.pass = !std::isnan(best.value) && margin_passes(best.value, best.value, opts.tol);
  return out;
}

SequenceVerdict summarize_slack(std::vector<double> slack, double tol) {
  SequenceVerdict v;
  Best best;
  for (std::size_t i = 0; i < slack.size(); ++i) {
    if (better(slack[i], i, best)) best = {slack[i], i};
    const bool ok = !std::isnan(slack[i]) && margin_passes(slack[i], slack[i], tol);
    if (!ok && v.first_failure == 0) v.first_failure = i + 1;
  }
  v.scan.min_margin = slack.empty() ? 0.0 : best.value;
  v.scan.argmin = slack.empty() ? 0.0 : static_cast<double>(best.index + 1);
  v.scan.pass = v.first_failure == 0;
  v.slack = std::move(slack);
  return v;
}

}  // namespace steckin
