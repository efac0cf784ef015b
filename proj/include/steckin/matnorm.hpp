#pragma once

// Factorable lower-triangular matrices a_{nk} = lambda_k / Lambda_n (k <= n),
// lp-norm lower bounds and the per-n sufficient conditions for upper bounds.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "steckin/rng.hpp"
#include "steckin/scan.hpp"

namespace steckin::matnorm {

struct FactorableMatrix {
  /// lambda_1..lambda_N and Lambda_1..Lambda_N.
  std::vector<double> lambda;
  std::vector<double> Lambda;
  /// lambda_{N+1}, known when the matrix comes from a closed-form generator.
  std::optional<double> lambda_next;
  /// Lambda_n = sum_{k<=n} lambda_k by construction. Informational only.
  bool weighted_mean = false;
  std::string name;

  std::size_t N() const { return lambda.size(); }
  void validate() const;
};

/// lambda_k = alpha k^{alpha-1}, Lambda_n = n^alpha.
FactorableMatrix power_weights(double alpha, std::size_t N);
/// lambda_k = 1, Lambda_n = n.
FactorableMatrix cesaro(std::size_t N);
/// lambda_k = L_beta^{alpha-1}(k, k-1), Lambda_n = sum_{k<=n} lambda_k.
FactorableMatrix stolarsky(double alpha, double beta, std::size_t N);
/// CSV with columns lambda,Lambda (header required); lambda_{N+1} unknown.
FactorableMatrix from_csv(const std::string& path);

/// Parses `power-weights(alpha)`, `cesaro`, `stolarsky(alpha,beta)` or
/// `csv:<path>`. N is ignored for csv input.
FactorableMatrix make_matrix(const std::string& spec, std::size_t N);

std::vector<double> apply(const FactorableMatrix& m, std::span<const double> x);
std::vector<double> apply_transpose(const FactorableMatrix& m, std::span<const double> y);

/// ||A x||_p / ||x||_p computed directly.
double norm_ratio(const FactorableMatrix& m, std::span<const double> x, double p);

struct NormEstimate {
  double lower_bound = 0.0;
  std::vector<double> witness;
  int iterations = 0;
  bool converged = false;
  /// Best-so-far ratio after each iteration (entry 0 is the start vector).
  std::vector<double> history;
};

using NormObserver = std::function<void(int iteration, double ratio, std::span<const double> x)>;

/// Boyd's alternating dual-map iteration x <- (A^T (A x)^{p-1})^{1/(p-1)},
/// started at x_n = n^{-3/(2p)} with a seeded +-1% jitter. Stops when the
/// relative gain of an iteration drops below 1e-13 (converged) or after
/// `iters` iterations. The observer sees every iterate and its ratio.
NormEstimate lp_norm_lower(const FactorableMatrix& m, double p, int iters = 2000,
                           std::uint64_t seed = kDefaultSeed,
                           const NormObserver& observer = {});

/// T_n = sum_{k<=n} lambda_k prod_{i=k}^n b_i^{1/(p-1)} against
/// (p/(p-L)) (Lambda_n + a lambda_n); slack is 1 - T_n / rhs.
SequenceVerdict check_thm31(const FactorableMatrix& m, double p, double L, double a);

/// Per-n condition with Lambda_0 = lambda_0 = 0; slack is rhs / lhs - 1.
SequenceVerdict check_cor1(const FactorableMatrix& m, double p, double L, double a);

/// Largest ||Ax||_p/||x||_p over `samples` seeded random nonnegative vectors.
double max_random_ratio(const FactorableMatrix& m, double p, int samples, std::uint64_t seed,
                        unsigned jobs = 1);

struct ForwardFamilyReport {
  double constant = 0.0;
  double max_ratio_12 = 0.0;
  double max_ratio_13 = 0.0;
  double max_ratio_35 = 0.0;
  bool ok_12 = true;
  bool ok_13 = true;
  bool ok_35 = true;
  /// The mean forms need alpha >= 1; the Stolarsky form also needs beta >= alpha.
  bool applicable_13 = false;
  bool applicable_35 = false;
  /// sum_{i<=n} i^{alpha-1} >= n^alpha / alpha for every n (alpha >= 1).
  bool domination = true;

  bool pass() const { return ok_12 && ok_13 && ok_35 && domination; }
};

ForwardFamilyReport verify_forward_family_report(double alpha, double beta, double p,
                                                 std::size_t N, int samples,
                                                 std::uint64_t seed, unsigned jobs = 1);
bool verify_forward_family(double alpha, double beta, double p, std::size_t N, int samples,
                           std::uint64_t seed);

}  // namespace steckin::matnorm
