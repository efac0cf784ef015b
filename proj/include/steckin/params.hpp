#pragma once

#include <optional>

#include "steckin/error.hpp"

namespace steckin {

/// Exponent bundle shared by the criteria, chains and oracle modules.
///
/// `alpha` is the power exponent of the generalized families and
/// `alpha_opt` the tuning exponent of the main weight construction. The two
/// never appear in the same inequality, so setting both is rejected.
struct Params {
  double p = 0.5;
  double r = 0.5;
  std::optional<double> alpha;
  double beta = 1.0;
  double a = 0.0;
  std::optional<double> alpha_opt;

  double q() const { return p / (p - 1.0); }
  double t() const { return p / (1.0 - p); }
  double tuning() const { return alpha_opt.value_or(1.0 / p - 1.0); }

  double power() const {
    detail::require(alpha.has_value(), "power exponent alpha is not set");
    return *alpha;
  }

  void check_exclusive() const {
    detail::require(!(alpha && alpha_opt),
                    "alpha and alpha_opt cannot both be set");
  }

  void check_reverse() const {
    detail::require(p > 0.0 && p < 1.0, "reverse family needs 0 < p < 1");
    detail::require(r > 0.0 && r < 1.0, "reverse family needs 0 < r < 1");
  }
};

}  // namespace steckin
