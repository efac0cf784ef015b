#pragma once

// Brute-force evaluation of the truncated inequality families: ratios,
// ratio minimization over the nonnegative cone, extremal probes,
// counterexample search and duality cross-checks.
//
// Every infinite sum is truncated at N. For finitely supported vectors the
// truncated tail sums are exact, so a ratio below a proven constant is a
// genuine counterexample.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "steckin/params.hpp"
#include "steckin/rng.hpp"

namespace steckin::oracle {

enum class FamilyKind {
  reverse_hardy,     // sum (1/n sum_{k>=n} a_k)^p >= c sum a^p
  weighted_reverse,  // sum n^-r (sum_{k>=n} a_k)^p >= c sum a_n^p n^{p-r}
  dual,              // sum (n^{(r-p)/p} sum_{k<=n} a_k k^{-r/p})^q <= c sum a^q
  alpha_reverse,     // weights alpha k^{alpha-1} / n^alpha on tails
  mean_reverse,      // Stolarsky-mean weights on tails
  alpha_forward,     // weights alpha k^{alpha-1} / n^alpha on heads, p > 1
  mean_forward,      // Stolarsky-mean weighted means, p > 1; beta = inf gives k^{alpha-1}
  beta_limit,        // mean_reverse (minus) in the limit beta -> inf
};

enum class MeanSign { plus, minus };

std::string_view to_string(FamilyKind k);
FamilyKind family_from_string(std::string_view name);

struct InequalityFamily {
  FamilyKind kind = FamilyKind::reverse_hardy;
  Params params;
  std::size_t N = 0;
  MeanSign sign = MeanSign::plus;

  /// Reverse families pass when ratio >= constant, the others when
  /// ratio <= constant.
  bool reverse() const;
  double constant() const;
  void validate() const;
};

/// Left and right sums of the truncated inequality (constant excluded).
struct RatioParts {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio() const { return lhs / rhs; }
};

RatioParts ratio_parts(const InequalityFamily& family, std::span<const double> a);
double ratio(const InequalityFamily& family, std::span<const double> a);

/// True when ratio violates the family's inequality with its constant,
/// relative tolerance tol.
bool violates(const InequalityFamily& family, double ratio_value, double tol = 1e-12);

struct MinimizeOptions {
  std::uint64_t seed = kDefaultSeed;
  int restarts = 8;
  /// Iterations per restart (one multiplicative update of every coordinate).
  int max_iters = 5000;
  /// Total ratio evaluations across restarts; 0 means unlimited.
  std::size_t eval_budget = 0;
  unsigned jobs = 1;
};

struct RatioCertificate {
  InequalityFamily family;
  double best_ratio = 0.0;
  double theoretical_constant = 0.0;
  std::vector<double> extremal_vector;
  int iterations = 0;
  std::uint64_t seed = 0;
  bool converged = false;
  std::size_t evaluations = 0;
  int best_restart = 0;

  bool pass(double tol = 1e-9) const;
};

/// Minimizes the ratio of a reverse family over positive vectors of length
/// N. Restart 0 and 1 start from the extremal family (eps = 0.1, 0.01), the
/// rest from log-uniform random vectors. Deterministic in (family, seed,
/// restarts) for every jobs value.
RatioCertificate minimize_ratio(const InequalityFamily& family,
                                const MinimizeOptions& opts = {});

/// a_n = n^{-1-(1-r)/p-eps} for the weighted families and n^{-1/p-eps} for
/// the alpha / mean ones.
std::vector<double> extremal_sequence(const InequalityFamily& family, double eps);
double extremal_ratio(const InequalityFamily& family, double eps);

/// Unit vectors, extremal sequences, then (reverse families) the minimizer.
/// Returns the first violating vector found within `budget` evaluations.
std::optional<std::vector<double>> find_counterexample(const InequalityFamily& family,
                                                       std::size_t budget,
                                                       std::uint64_t seed = kDefaultSeed);

/// Worst ratio (smallest for reverse families, largest otherwise) over
/// `samples` seeded log-uniform positive vectors.
double random_extreme_ratio(const InequalityFamily& family, int samples, std::uint64_t seed,
                            unsigned jobs = 1);

struct DualTrial {
  double dual_ratio = 0.0;
  double weighted_ratio = 0.0;
  bool dual_ok = false;
  bool weighted_ok = false;
};

/// Per-trial results; every draw is multiplied by `scale`.
std::vector<DualTrial> dual_pair_trials(double p, double r, std::size_t N, int trials,
                                        std::uint64_t seed, double scale = 1.0);
bool dual_pair_check(double p, double r, std::size_t N, int trials, std::uint64_t seed);

/// L_r(x, y) = ((x^r - y^r) / (r (x - y)))^{1/(r-1)}.
double stolarsky_mean(double r_index, double x, double y);

/// L_beta^{alpha-1}(x, y). Extends to beta = 1 (identric mean) and
/// beta = +inf (max) by continuity.
double mean_weight(double beta, double alpha, double x, double y);

struct MeanFamilyResult {
  double ratio = 0.0;
  double constant = 0.0;
  /// sum_{i<=n} L(i, i-1) <= n^alpha / alpha and L(k +- 1, k) >= k^{alpha-1}.
  bool bounds_hold = false;
};

MeanFamilyResult mean_family_ratio(double alpha, double beta, MeanSign sign, double p,
                                   std::span<const double> a);

double beta_limit_ratio(double alpha, double p, std::span<const double> a);

/// FNV-1a over the little-endian IEEE-754 bytes, as 16 hex digits.
std::string vector_hash(std::span<const double> v);

std::string certificate_json(const RatioCertificate& cert);
void write_vector_csv(std::ostream& os, std::span<const double> v);

}  // namespace steckin::oracle
