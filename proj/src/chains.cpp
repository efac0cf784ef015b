#include "steckin/chains.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "steckin/criteria.hpp"
#include "steckin/error.hpp"
#include "steckin/format.hpp"

namespace steckin::chains {

using detail::require;

namespace {

double rel_diff(double x, double y) {
  return std::abs(x - y) / std::max({std::abs(x), std::abs(y), 1e-300});
}

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    comp_ += std::abs(sum_) >= std::abs(x) ? (sum_ - t) + x : (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

void fill_w_from_b(WeightChain& c) {
  const double p = c.params.p;
  c.w.assign(c.N + 1, 1.0);
  double residual = 0.0;
  for (std::size_t n = 0; n < c.N; ++n) {
    c.w[n + 1] = c.w[n] * std::pow(c.b[n], 1.0 - p);
    residual = std::max(residual, rel_diff(std::pow(c.b[n], p - 1.0), c.w[n] / c.w[n + 1]));
  }
  c.identity_residual = residual;
}

void require_chain(const WeightChain& c, Construction tag) {
  require(c.tag == tag, std::string("chain built by '") + std::string(to_string(c.tag)) +
                            "', verifier expects '" + std::string(to_string(tag)) + "'");
}

bool nearly_leq(double lhs, double rhs, double tol) {
  if (std::isnan(lhs) || std::isnan(rhs)) return false;
  if (lhs <= rhs) return true;
  return lhs - rhs <= tol * std::max(std::abs(lhs), std::abs(rhs));
}

}  // namespace

std::string_view to_string(Construction c) {
  switch (c) {
    case Construction::main: return "main";
    case Construction::alternative: return "alternative";
    case Construction::section4: return "section4";
    case Construction::nu: return "nu";
  }
  return "?";
}

Construction construction_from_string(std::string_view name) {
  for (auto c : {Construction::main, Construction::alternative, Construction::section4,
                 Construction::nu})
    if (to_string(c) == name) return c;
  throw ParameterError("unknown construction '" + std::string(name) + "'");
}

WeightChain build_b_chain(double p, double r, double a, double alpha_opt, std::size_t N) {
  require(p > 0.0 && p < 1.0 && r > 0.0 && r < 1.0, "main chain needs 0 < p, r < 1");
  require(a > -1.0, "main chain needs n + a > 0 for every n >= 1");
  require(N >= 1, "chain length must be positive");
  WeightChain c;
  c.params.p = p;
  c.params.r = r;
  c.params.a = a;
  c.params.alpha_opt = alpha_opt;
  c.N = N;
  c.tag = Construction::main;
  const double e = 1.0 / (1.0 - p);
  const double lead = std::pow(criteria::best_constant(p, r), -alpha_opt * e);
  c.b.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    const double n = static_cast<double>(i + 1);
    c.b[i] = lead * std::pow(n, p * e) / std::pow(n + a, e) + std::pow(n / (n + 1.0), r * e);
  }
  fill_w_from_b(c);
  return c;
}

WeightChain build_b_chain(double p, double r, double a, std::size_t N) {
  return build_b_chain(p, r, a, 1.0 / p - 1.0, N);
}

std::vector<double> partial_product_sums(std::span<const double> b, double p) {
  std::vector<double> T(b.size());
  double prev = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    prev = (prev + 1.0) * std::pow(b[i], p - 1.0);
    T[i] = prev;
  }
  return T;
}

SequenceVerdict verify_induction_43(const WeightChain& chain) {
  require_chain(chain, Construction::main);
  const auto& P = chain.params;
  const double scale = std::pow(criteria::best_constant(P.p, P.r), 1.0 + P.tuning());
  const auto T = partial_product_sums(chain.b, P.p);
  std::vector<double> slack(chain.N);
  for (std::size_t i = 0; i < chain.N; ++i)
    slack[i] = T[i] / ((static_cast<double>(i + 1) + P.a) * scale) - 1.0;
  return summarize_slack(std::move(slack));
}

WeightChain build_nu_chain(double p, double r, double a, std::size_t N) {
  require(p > 0.0 && p < 1.0 && r > 0.0 && r < 1.0, "nu chain needs 0 < p, r < 1");
  require(a > -1.0, "nu chain needs n + a > 0 for every n >= 1");
  require(N >= 1, "chain length must be positive");
  WeightChain c;
  c.params.p = p;
  c.params.r = r;
  c.params.a = a;
  c.N = N;
  c.tag = Construction::nu;
  c.nu.assign(N + 1, 0.0);
  const double slope = (1.0 - r) / p;
  for (std::size_t i = 1; i <= N; ++i) {
    const double n = static_cast<double>(i + 1);
    c.nu[i] = (n + a - 1.0) / slope;
  }
  return c;
}

SequenceVerdict verify_303(const WeightChain& chain) {
  require_chain(chain, Construction::nu);
  const double p = chain.params.p;
  const double r = chain.params.r;
  const double e = 1.0 / (1.0 - p);
  const double k = std::pow(p / (1.0 - r), p * e);
  std::vector<double> slack(chain.N);
  for (std::size_t i = 0; i < chain.N; ++i) {
    const double n = static_cast<double>(i + 1);
    const double lhs = std::pow(1.0 + chain.nu[i], e) / std::pow(n, r * e) -
                       std::pow(chain.nu[i + 1], e) / std::pow(n + 1.0, r * e);
    const double rhs = std::pow(n, (p - r) * e) * k;
    slack[i] = lhs / rhs - 1.0;
  }
  return summarize_slack(std::move(slack));
}

WeightChain build_w_chain_sec4(double p, double alpha, std::size_t N) {
  require(p > 0.0 && p < 0.5, "section4 chain needs 0 < p < 1/2");
  require(alpha > 0.0, "section4 chain needs alpha > 0");
  require(1.0 / p - alpha > 0.0, "section4 chain needs 1/p - alpha > 0");
  require(N >= 1, "chain length must be positive");
  WeightChain c;
  c.params.p = p;
  c.params.alpha = alpha;
  c.N = N;
  c.tag = Construction::section4;
  const double u = 1.0 / p - alpha - 1.0;
  c.w.assign(N + 1, 1.0);
  for (std::size_t i = 1; i <= N; ++i) {
    const double n = static_cast<double>(i);
    c.w[i] = (n + u) / n * c.w[i - 1];
  }
  CompensatedSum sum;
  double residual = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double n = static_cast<double>(i + 1);
    sum.add(c.w[i]);
    residual = std::max(residual, rel_diff(sum.value(), (n + u) / (u + 1.0) * c.w[i]));
  }
  c.identity_residual = residual;
  return c;
}

SequenceVerdict verify_35(const WeightChain& chain) {
  require_chain(chain, Construction::section4);
  const double p = chain.params.p;
  const double alpha = chain.params.power();
  const double e = 1.0 / (p - 1.0);
  const double s = alpha * p / (1.0 - p);
  const double k = std::pow(alpha * p / (1.0 - alpha * p), p / (p - 1.0));
  CompensatedSum sum;
  std::vector<double> slack(chain.N);
  for (std::size_t i = 0; i < chain.N; ++i) {
    const double n = static_cast<double>(i + 1);
    sum.add(chain.w[i]);
    const double lhs = std::pow(sum.value(), e);
    const double diff = std::pow(chain.w[i], e) / std::pow(n, s) -
                        std::pow(chain.w[i + 1], e) / std::pow(n + 1.0, s);
    const double rhs = k * std::pow(alpha * std::pow(n, alpha - 1.0), p / (1.0 - p)) * diff;
    slack[i] = rhs / lhs - 1.0;
  }
  return summarize_slack(std::move(slack));
}

WeightChain alternative_b_chain(double p, std::size_t N) {
  require(p > 1.0 / 3.0 && p < 0.5, "alternative chain needs 1/3 < p < 1/2");
  require(N >= 1, "chain length must be positive");
  WeightChain c;
  c.params.p = p;
  c.params.r = p;
  c.N = N;
  c.tag = Construction::alternative;
  const double t = p / (1.0 - p);
  const double shift = (1.0 / p - 1.0) / 2.0;
  c.params.a = shift;
  c.b.resize(N);
  c.b[0] = 1.0 / (std::pow(2.0, t) * (1.0 - std::pow(t, t)));
  for (std::size_t i = 1; i < N; ++i) {
    const double n = static_cast<double>(i + 1);
    const double den = std::pow(n, -t) - std::pow(n + shift, -1.0 - t) / t;
    if (!(den > 0.0))
      throw ParameterError("alternative chain: b_n is not positive at n = " +
                           std::to_string(i + 1));
    c.b[i] = 1.0 / (std::pow(n + 1.0, t) * den);
  }
  fill_w_from_b(c);
  // b_1 is pinned by 1 = t^{-t} (1 - 1/(2^t b_1)).
  const double base = std::pow(t, -t) * (1.0 - 1.0 / (std::pow(2.0, t) * c.b[0]));
  c.identity_residual = std::max(c.identity_residual, std::abs(base - 1.0));
  return c;
}

SequenceVerdict verify_alternative(const WeightChain& chain) {
  require_chain(chain, Construction::alternative);
  const double p = chain.params.p;
  const double t = p / (1.0 - p);
  const double shift = chain.params.a;
  std::vector<double> slack(chain.N);
  double U = 1.0;
  for (std::size_t i = 0; i < chain.N; ++i) {
    const double m = static_cast<double>(i + 1);
    U = std::pow(chain.b[i], p - 1.0) * U + 1.0;
    slack[i] = U / ((m + 1.0 + shift) * t) - 1.0;
  }
  return summarize_slack(std::move(slack));
}

double alternative_step_slack(const WeightChain& chain, std::size_t m) {
  require_chain(chain, Construction::alternative);
  require(m >= 2 && m <= chain.N, "step slack needs 2 <= m <= N");
  const double p = chain.params.p;
  const double t = p / (1.0 - p);
  const double shift = chain.params.a;
  const double mm = static_cast<double>(m);
  return std::pow(chain.b[m - 1], p - 1.0) * (mm + shift) * t + 1.0 - (mm + 1.0 + shift) * t;
}

bool Sides::holds(double tol) const { return nearly_leq(lhs, rhs, tol); }

Sides sides_51(std::span<const double> w, std::span<const double> a, double p) {
  require(p > 0.0 && p < 1.0, "verify_51 needs 0 < p < 1");
  require(!w.empty() && w.size() == a.size(), "w and a must have equal positive length");
  const std::size_t N = w.size();
  std::vector<double> W(N);
  double acc = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    require(w[i] > 0.0, "w must be positive");
    require(a[i] >= 0.0, "a must be nonnegative");
    acc += w[i];
    W[i] = acc;
  }
  Sides s;
  double tail_w = 0.0;
  double tail_a = 0.0;
  for (std::size_t i = N; i-- > 0;) {
    tail_w += std::pow(W[i], -1.0 / (1.0 - p));
    tail_a += a[i];
    s.rhs += w[i] * std::pow(tail_w, 1.0 - p) * std::pow(tail_a, p);
    s.lhs += std::pow(a[i], p);
  }
  return s;
}

bool verify_51(std::span<const double> w, std::span<const double> a, double p) {
  return sides_51(w, a, p).holds();
}

Sides sides_lemma61(std::span<const double> lambda, std::span<const double> a,
                    std::span<const double> mu, std::span<const double> eta, double p) {
  require(p != 0.0 && p < 1.0, "verify_lemma61 needs p != 0 and p < 1");
  const std::size_t n = lambda.size();
  require(n >= 2, "verify_lemma61 needs n >= 2");
  require(a.size() == n && mu.size() == n && eta.size() == n,
          "verify_lemma61 sequences must have equal length");
  for (std::size_t i = 0; i < n; ++i) {
    require(lambda[i] > 0.0 && a[i] > 0.0 && mu[i] > 0.0 && eta[i] > 0.0,
            "verify_lemma61 sequences must be positive");
    require(p > 0.0 ? mu[i] <= eta[i] : mu[i] >= eta[i],
            p > 0.0 ? "verify_lemma61 needs mu <= eta for 0 < p < 1"
                    : "verify_lemma61 needs mu >= eta for p < 0");
  }
  const double q = p / (p - 1.0);
  const double ip = 1.0 / p;
  auto gap = [&](std::size_t i) {
    return std::pow(std::pow(mu[i], q) - std::pow(eta[i], q), 1.0 / q);
  };
  std::vector<double> S(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) S[i] = acc += lambda[i] * a[i];

  Sides s;
  for (std::size_t i = 1; i + 1 < n; ++i)
    s.lhs += (mu[i] - gap(i + 1)) * std::pow(S[i], ip);
  s.lhs += mu[n - 1] * std::pow(S[n - 1], ip);
  s.rhs = gap(1) * std::pow(lambda[0], ip) * std::pow(a[0], ip);
  for (std::size_t i = 1; i < n; ++i)
    s.rhs += eta[i] * std::pow(lambda[i], ip) * std::pow(a[i], ip);
  return s;
}

bool verify_lemma61(std::span<const double> lambda, std::span<const double> a,
                    std::span<const double> mu, std::span<const double> eta, double p) {
  return sides_lemma61(lambda, a, mu, eta, p).holds();
}

Sides sides_302(std::span<const double> lambda, std::span<const double> a,
                std::span<const double> nu, double p) {
  require(p > 0.0 && p < 1.0, "verify_302 needs 0 < p < 1");
  const std::size_t n = a.size();
  require(n >= 1, "verify_302 needs n >= 1");
  require(lambda.size() == n + 1 && nu.size() == n + 1,
          "lambda and nu need n + 1 entries");
  require(nu[0] == 0.0, "verify_302 needs nu_1 = 0");
  for (std::size_t i = 0; i <= n; ++i) {
    require(lambda[i] > 0.0, "lambda must be positive");
    require(nu[i] >= 0.0, "nu must be nonnegative");
    if (i < n) require(a[i] > 0.0, "a must be positive (negative exponent)");
  }
  const double q = p / (p - 1.0);
  Sides s;
  double S = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    S += lambda[i] * a[i];
    const double coef = std::pow(1.0 + nu[i], 1.0 - q) / std::pow(lambda[i], q) -
                        std::pow(nu[i + 1], 1.0 - q) / std::pow(lambda[i + 1], q);
    s.lhs += coef * std::pow(S, q);
    s.rhs += std::pow(a[i], q);
  }
  return s;
}

bool verify_302(std::span<const double> lambda, std::span<const double> a,
                std::span<const double> nu, double p) {
  return sides_302(lambda, a, nu, p).holds();
}

void write_chain_csv(std::ostream& os, const WeightChain& chain,
                     std::span<const double> slack) {
  os << "n,b,w,nu,slack\n";
  const std::size_t rows =
      std::max({chain.b.size(), chain.w.size(), chain.nu.size(), slack.size()});
  auto cell = [&](const auto& v, std::size_t i) {
    return i < v.size() ? format_double(v[i]) : std::string();
  };
  for (std::size_t i = 0; i < rows; ++i) {
    os << (i + 1) << ',' << cell(chain.b, i) << ',' << cell(chain.w, i) << ','
       << cell(chain.nu, i) << ',' << cell(slack, i) << '\n';
  }
}

}  // namespace steckin::chains
