#pragma once

// Weight-sequence constructions and the finite induction conditions they
// must satisfy. All sequences are stored 0-based: b[n-1] holds b_n.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "steckin/params.hpp"
#include "steckin/scan.hpp"

namespace steckin::chains {

enum class Construction { main, alternative, section4, nu };

std::string_view to_string(Construction c);
Construction construction_from_string(std::string_view name);

struct WeightChain {
  Params params;
  std::size_t N = 0;
  /// b_1..b_N; empty for constructions without b.
  std::vector<double> b;
  /// w_1..w_{N+1}; empty for the nu construction.
  std::vector<double> w;
  /// nu_1..nu_{N+1}; empty unless construction is nu.
  std::vector<double> nu;
  Construction tag = Construction::main;
  /// Largest relative residual of the construction's defining identity.
  double identity_residual = 0.0;
};

/// b_n = c^{-alpha_opt/(1-p)} n^{p/(1-p)} / (n+a)^{1/(1-p)} + (n/(n+1))^{r/(1-p)}
/// with c = (p/(1-r))^p, and w_1 = 1, w_{n+1} = w_n b_n^{1-p}.
WeightChain build_b_chain(double p, double r, double a, double alpha_opt, std::size_t N);
WeightChain build_b_chain(double p, double r, double a, std::size_t N);

/// sum_{k<=n} prod_{i=k}^n b_i^{p-1} >= (n+a) c^{1+alpha_opt}, evaluated with
/// the recursion T_n = (T_{n-1} + 1) b_n^{p-1}. Slack is T_n / rhs - 1.
SequenceVerdict verify_induction_43(const WeightChain& chain);

/// The partial-product sums T_1..T_N of the recursion above.
std::vector<double> partial_product_sums(std::span<const double> b, double p);

WeightChain build_nu_chain(double p, double r, double a, std::size_t N);

/// Per-n dual criterion; slack is lhs / rhs - 1.
SequenceVerdict verify_303(const WeightChain& chain);

WeightChain build_w_chain_sec4(double p, double alpha, std::size_t N);

/// Slack is rhs / lhs - 1; a nonpositive right-hand difference fails.
SequenceVerdict verify_35(const WeightChain& chain);

/// Variant b_n with shift c = (1/p - 1)/2 (closed-form solve, no iteration).
WeightChain alternative_b_chain(double p, std::size_t N);

/// For m = 1..N checks U_m >= (m + 1 + c) t with U_m = T_m + 1; slack is
/// U_m / rhs - 1. m = 1 is the base case, m >= 2 the induction steps.
SequenceVerdict verify_alternative(const WeightChain& chain);

/// Sufficient step condition b_m^{p-1} (m+c) t + 1 - (m+1+c) t for m >= 2.
double alternative_step_slack(const WeightChain& chain, std::size_t m);

/// Sides of the partial-sum inequality sum a_n^p <= rhs(w, a).
struct Sides {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds(double tol = 1e-12) const;
};

Sides sides_51(std::span<const double> w, std::span<const double> a, double p);
bool verify_51(std::span<const double> w, std::span<const double> a, double p);

Sides sides_lemma61(std::span<const double> lambda, std::span<const double> a,
                    std::span<const double> mu, std::span<const double> eta, double p);
bool verify_lemma61(std::span<const double> lambda, std::span<const double> a,
                    std::span<const double> mu, std::span<const double> eta, double p);

/// Evaluated at the conjugate exponent q = p/(p-1) < 0. lambda and nu have
/// n + 1 entries, a has n. Sides are (weighted S_i^q sum, sum a_i^q).
Sides sides_302(std::span<const double> lambda, std::span<const double> a,
                std::span<const double> nu, double p);
bool verify_302(std::span<const double> lambda, std::span<const double> a,
                std::span<const double> nu, double p);

/// CSV with header n,b,w,nu,slack; absent entries are written empty.
void write_chain_csv(std::ostream& os, const WeightChain& chain,
                     std::span<const double> slack);

}  // namespace steckin::chains
