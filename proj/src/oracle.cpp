#include "steckin/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>

#include <json.hpp>

#include "steckin/error.hpp"
#include "steckin/format.hpp"
#include "steckin/parallel.hpp"

namespace steckin::oracle {

using detail::require;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// LHS = sum_n outer_n (S_n)^e with S_n the tail (or head) sum of inner_k a_k;
// RHS = sum_n weight_n a_n^e.
struct SumForm {
  bool tail = true;
  double exponent = 1.0;
  std::vector<double> outer;
  std::vector<double> inner;
  std::vector<double> weight;
};

double nd(std::size_t i) { return static_cast<double>(i + 1); }

SumForm make_form(const InequalityFamily& f) {
  f.validate();
  const std::size_t N = f.N;
  const auto& P = f.params;
  SumForm s;
  s.outer.resize(N);
  s.inner.assign(N, 1.0);
  s.weight.assign(N, 1.0);
  s.exponent = P.p;
  switch (f.kind) {
    case FamilyKind::reverse_hardy:
      for (std::size_t i = 0; i < N; ++i) s.outer[i] = std::pow(nd(i), -P.p);
      break;
    case FamilyKind::weighted_reverse:
      for (std::size_t i = 0; i < N; ++i) {
        s.outer[i] = std::pow(nd(i), -P.r);
        s.weight[i] = std::pow(nd(i), P.p - P.r);
      }
      break;
    case FamilyKind::dual:
      s.tail = false;
      s.exponent = P.q();
      for (std::size_t i = 0; i < N; ++i) {
        s.outer[i] = std::pow(nd(i), (P.r - P.p) / P.p * P.q());
        s.inner[i] = std::pow(nd(i), -P.r / P.p);
      }
      break;
    case FamilyKind::alpha_reverse:
    case FamilyKind::alpha_forward: {
      s.tail = f.kind == FamilyKind::alpha_reverse;
      const double al = P.power();
      for (std::size_t i = 0; i < N; ++i) {
        s.outer[i] = std::pow(nd(i), -al * P.p);
        s.inner[i] = al * std::pow(nd(i), al - 1.0);
      }
      break;
    }
    case FamilyKind::mean_reverse:
    case FamilyKind::mean_forward:
    case FamilyKind::beta_limit: {
      const double al = P.power();
      const double beta = f.kind == FamilyKind::beta_limit ? kInf : P.beta;
      s.tail = f.kind != FamilyKind::mean_forward;
      double denom = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        const double n = nd(i);
        denom += mean_weight(beta, al, n, n - 1.0);
        s.outer[i] = std::pow(denom, -P.p);
        if (f.kind == FamilyKind::mean_forward)
          s.inner[i] = mean_weight(beta, al, n, n - 1.0);
        else if (f.kind == FamilyKind::beta_limit)
          s.inner[i] = std::pow(n, al - 1.0);
        else if (f.sign == MeanSign::plus)
          s.inner[i] = mean_weight(beta, al, n + 1.0, n);
        else
          s.inner[i] = mean_weight(beta, al, n - 1.0, n);
      }
      break;
    }
  }
  return s;
}

void inner_sums(const SumForm& s, std::span<const double> a, std::vector<double>& S) {
  const std::size_t N = a.size();
  S.resize(N);
  double acc = 0.0;
  if (s.tail) {
    for (std::size_t i = N; i-- > 0;) S[i] = acc += s.inner[i] * a[i];
  } else {
    for (std::size_t i = 0; i < N; ++i) S[i] = acc += s.inner[i] * a[i];
  }
}

RatioParts evaluate(const SumForm& s, std::span<const double> a, std::vector<double>& S) {
  inner_sums(s, a, S);
  RatioParts r;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (S[i] > 0.0) r.lhs += s.outer[i] * std::pow(S[i], s.exponent);
    if (a[i] > 0.0) r.rhs += s.weight[i] * std::pow(a[i], s.exponent);
  }
  return r;
}

// d log R / d log a_k for strictly positive a.
void log_gradient(const SumForm& s, std::span<const double> a, const std::vector<double>& S,
                  const RatioParts& parts, std::vector<double>& g) {
  const std::size_t N = a.size();
  const double e = s.exponent;
  g.resize(N);
  double acc = 0.0;
  auto term = [&](std::size_t n) { return s.outer[n] * e * std::pow(S[n], e - 1.0); };
  if (s.tail) {
    for (std::size_t k = 0; k < N; ++k) {
      acc += term(k);
      g[k] = a[k] * s.inner[k] * acc / parts.lhs;
    }
  } else {
    for (std::size_t k = N; k-- > 0;) {
      acc += term(k);
      g[k] = a[k] * s.inner[k] * acc / parts.lhs;
    }
  }
  for (std::size_t k = 0; k < N; ++k)
    g[k] -= e * s.weight[k] * std::pow(a[k], e) / parts.rhs;
}

struct Descent {
  double ratio = kInf;
  std::vector<double> a;
  int iterations = 0;
  bool converged = false;
  std::size_t evaluations = 0;
};

// Multiplicative updates a_k <- a_k exp(-eta g_k) on every coordinate, with
// step halving on failure. The vector is renormalized to max a_k = 1.
Descent descend(const SumForm& s, std::vector<double> a, int max_iters, std::size_t budget) {
  const std::size_t N = a.size();
  std::vector<double> S, g, x(N), trial(N);
  Descent out;
  for (std::size_t k = 0; k < N; ++k) x[k] = std::log(a[k]);
  auto to_vec = [&](const std::vector<double>& logs, std::vector<double>& v) {
    const double top = *std::max_element(logs.begin(), logs.end());
    for (std::size_t k = 0; k < N; ++k) v[k] = std::exp(std::max(logs[k] - top, -700.0));
  };
  to_vec(x, a);
  RatioParts parts = evaluate(s, a, S);
  ++out.evaluations;
  double R = parts.ratio();
  double eta = 0.5;
  std::vector<double> xt(N);
  while (out.iterations < max_iters && (budget == 0 || out.evaluations < budget)) {
    log_gradient(s, a, S, parts, g);
    bool accepted = false;
    while (budget == 0 || out.evaluations < budget) {
      for (std::size_t k = 0; k < N; ++k) xt[k] = x[k] - eta * g[k];
      to_vec(xt, trial);
      std::vector<double> St;
      const RatioParts tp = evaluate(s, trial, St);
      ++out.evaluations;
      const double Rt = tp.ratio();
      if (Rt < R) {
        const double rel = (R - Rt) / R;
        x.swap(xt);
        a.swap(trial);
        S.swap(St);
        parts = tp;
        R = Rt;
        eta = std::min(eta * 1.5, 1e3);
        accepted = true;
        if (rel < 1e-10) out.converged = true;
        break;
      }
      eta *= 0.5;
      if (eta < 1e-16) {
        out.converged = true;
        break;
      }
    }
    ++out.iterations;
    if (!accepted || out.converged) break;
  }
  out.ratio = R;
  out.a = std::move(a);
  return out;
}

std::vector<double> random_positive(std::size_t N, Rng& rng) {
  std::vector<double> v(N);
  for (auto& x : v) x = rng.log_uniform(1e-3, 1e3);
  return v;
}

}  // namespace

std::string_view to_string(FamilyKind k) {
  switch (k) {
    case FamilyKind::reverse_hardy: return "reverse-hardy";
    case FamilyKind::weighted_reverse: return "weighted-reverse";
    case FamilyKind::dual: return "dual";
    case FamilyKind::alpha_reverse: return "alpha-reverse";
    case FamilyKind::mean_reverse: return "mean-reverse";
    case FamilyKind::alpha_forward: return "alpha-forward";
    case FamilyKind::mean_forward: return "mean-forward";
    case FamilyKind::beta_limit: return "beta-limit";
  }
  return "?";
}

FamilyKind family_from_string(std::string_view name) {
  for (auto k : {FamilyKind::reverse_hardy, FamilyKind::weighted_reverse, FamilyKind::dual,
                 FamilyKind::alpha_reverse, FamilyKind::mean_reverse,
                 FamilyKind::alpha_forward, FamilyKind::mean_forward, FamilyKind::beta_limit})
    if (to_string(k) == name) return k;
  throw ParameterError("unknown inequality family '" + std::string(name) + "'");
}

bool InequalityFamily::reverse() const {
  switch (kind) {
    case FamilyKind::dual:
    case FamilyKind::alpha_forward:
    case FamilyKind::mean_forward: return false;
    default: return true;
  }
}

double InequalityFamily::constant() const {
  const double p = params.p;
  switch (kind) {
    case FamilyKind::reverse_hardy: return std::pow(p / (1.0 - p), p);
    case FamilyKind::weighted_reverse: return std::pow(p / (1.0 - params.r), p);
    case FamilyKind::dual: return std::pow(p / (1.0 - params.r), params.q());
    case FamilyKind::alpha_reverse:
    case FamilyKind::mean_reverse:
    case FamilyKind::beta_limit: {
      const double ap = params.power() * p;
      return std::pow(ap / (1.0 - ap), p);
    }
    case FamilyKind::alpha_forward:
    case FamilyKind::mean_forward: {
      const double ap = params.power() * p;
      return std::pow(ap / (ap - 1.0), p);
    }
  }
  return 0.0;
}

void InequalityFamily::validate() const {
  const auto& P = params;
  const double p = P.p;
  require(N >= 1, "truncation length N must be positive");
  switch (kind) {
    case FamilyKind::reverse_hardy:
      require(p > 0.0 && p < 1.0, "reverse-hardy needs 0 < p < 1");
      break;
    case FamilyKind::weighted_reverse:
    case FamilyKind::dual:
      P.check_reverse();
      break;
    case FamilyKind::alpha_reverse: {
      require(p > 0.0 && p < 1.0, "alpha-reverse needs 0 < p < 1");
      const double al = P.power();
      require(al > 0.0 && al < 1.0 / p, "alpha-reverse needs 0 < alpha < 1/p");
      break;
    }
    case FamilyKind::mean_reverse: {
      require(p > 0.0 && p < 1.0, "mean-reverse needs 0 < p < 1");
      const double al = P.power();
      require(al > 0.0 && al < 1.0 / p, "mean-reverse needs 0 < alpha < 1/p");
      if (sign == MeanSign::plus)
        require(P.beta > 0.0 && std::max(1.0, P.beta) <= al,
                "mean-reverse (plus) needs beta > 0 and max(1, beta) <= alpha");
      else
        require(al > 0.0 && al < 1.0 && P.beta >= al,
                "mean-reverse (minus) needs 0 < alpha < 1 and beta >= alpha");
      break;
    }
    case FamilyKind::beta_limit: {
      require(p > 0.0 && p < 1.0, "beta-limit needs 0 < p < 1");
      const double al = P.power();
      require(al > 0.0 && al < 1.0, "beta-limit needs 0 < alpha < 1");
      break;
    }
    case FamilyKind::alpha_forward:
    case FamilyKind::mean_forward: {
      const double al = P.power();
      require(p > 1.0 && al > 0.0 && al * p > 1.0, "forward family needs p > 1, alpha p > 1");
      if (kind == FamilyKind::mean_forward)
        require(al >= 1.0 && P.beta >= al, "mean-forward needs beta >= alpha >= 1");
      break;
    }
  }
}

RatioParts ratio_parts(const InequalityFamily& family, std::span<const double> a) {
  require(a.size() == family.N, "vector length must equal N");
  const bool positive = family.kind == FamilyKind::dual;
  bool any = false;
  for (double x : a) {
    require(positive ? x > 0.0 : x >= 0.0,
            positive ? "dual family needs strictly positive entries"
                     : "entries must be nonnegative");
    any = any || x > 0.0;
  }
  if (!any) throw UndefinedRatioError("ratio is undefined for the zero vector");
  const SumForm s = make_form(family);
  std::vector<double> S;
  return evaluate(s, a, S);
}

double ratio(const InequalityFamily& family, std::span<const double> a) {
  return ratio_parts(family, a).ratio();
}

bool violates(const InequalityFamily& family, double r, double tol) {
  const double c = family.constant();
  return family.reverse() ? r < c * (1.0 - tol) : r > c * (1.0 + tol);
}

bool RatioCertificate::pass(double tol) const {
  return family.reverse() ? best_ratio >= theoretical_constant - tol
                          : best_ratio <= theoretical_constant + tol;
}

RatioCertificate minimize_ratio(const InequalityFamily& family, const MinimizeOptions& opts) {
  family.validate();
  require(family.reverse(), "minimize_ratio needs a reverse family");
  require(family.N >= 2, "minimize_ratio needs N >= 2");
  require(opts.restarts >= 1, "minimize_ratio needs at least one restart");
  const SumForm s = make_form(family);
  const auto restarts = static_cast<std::size_t>(opts.restarts);
  const std::size_t budget = opts.eval_budget == 0 ? 0 : std::max<std::size_t>(1, opts.eval_budget / restarts);

  std::vector<Descent> runs(restarts);
  parallel_for(restarts, opts.jobs, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      std::vector<double> start;
      if (i < 2) {
        start = extremal_sequence(family, i == 0 ? 0.1 : 0.01);
      } else {
        Rng rng = Rng::stream(opts.seed, i);
        start = random_positive(family.N, rng);
      }
      runs[i] = descend(s, std::move(start), opts.max_iters, budget);
    }
  });

  std::size_t best = 0;
  for (std::size_t i = 1; i < restarts; ++i)
    if (runs[i].ratio < runs[best].ratio) best = i;

  RatioCertificate cert;
  cert.family = family;
  cert.best_ratio = runs[best].ratio;
  cert.theoretical_constant = family.constant();
  cert.extremal_vector = runs[best].a;
  cert.iterations = runs[best].iterations;
  cert.seed = opts.seed;
  cert.converged = runs[best].converged;
  cert.best_restart = static_cast<int>(best);
  for (const auto& r : runs) cert.evaluations += r.evaluations;
  return cert;
}

std::vector<double> extremal_sequence(const InequalityFamily& family, double eps) {
  family.validate();
  require(eps > 0.0, "extremal family needs eps > 0");
  const auto& P = family.params;
  double decay = 0.0;
  switch (family.kind) {
    case FamilyKind::weighted_reverse: decay = 1.0 + (1.0 - P.r) / P.p; break;
    case FamilyKind::dual: throw ParameterError("no extremal family for the dual form");
    default: decay = 1.0 / P.p; break;
  }
  std::vector<double> a(family.N);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::pow(nd(i), -decay - eps);
  return a;
}

double extremal_ratio(const InequalityFamily& family, double eps) {
  return ratio(family, extremal_sequence(family, eps));
}

std::optional<std::vector<double>> find_counterexample(const InequalityFamily& family,
                                                       std::size_t budget,
                                                       std::uint64_t seed) {
  family.validate();
  std::size_t used = 0;
  auto check = [&](const std::vector<double>& a) {
    ++used;
    return violates(family, ratio(family, a));
  };
  if (family.kind != FamilyKind::dual) {
    for (std::size_t k = 0; k < family.N && used < budget; ++k) {
      std::vector<double> e(family.N, 0.0);
      e[k] = 1.0;
      if (check(e)) return e;
    }
    for (double eps : {0.1, 0.01, 0.001}) {
      if (used >= budget) return std::nullopt;
      auto a = extremal_sequence(family, eps);
      if (check(a)) return a;
    }
  } else {
    Rng rng = Rng::stream(seed, 0);
    for (int i = 0; i < 16 && used < budget; ++i) {
      auto a = random_positive(family.N, rng);
      if (check(a)) return a;
    }
  }
  if (family.reverse() && family.N >= 2 && used < budget) {
    MinimizeOptions opts;
    opts.seed = seed;
    opts.eval_budget = budget - used;
    auto cert = minimize_ratio(family, opts);
    if (violates(family, cert.best_ratio)) return cert.extremal_vector;
  }
  return std::nullopt;
}

double random_extreme_ratio(const InequalityFamily& family, int samples, std::uint64_t seed,
                            unsigned jobs) {
  family.validate();
  require(samples >= 1, "need at least one sample");
  const SumForm s = make_form(family);
  std::vector<double> r(static_cast<std::size_t>(samples));
  parallel_for(r.size(), jobs, [&](std::size_t b, std::size_t e) {
    std::vector<double> S;
    for (std::size_t i = b; i < e; ++i) {
      Rng rng = Rng::stream(seed, i);
      r[i] = evaluate(s, random_positive(family.N, rng), S).ratio();
    }
  });
  return family.reverse() ? *std::min_element(r.begin(), r.end())
                          : *std::max_element(r.begin(), r.end());
}

std::vector<DualTrial> dual_pair_trials(double p, double r, std::size_t N, int trials,
                                        std::uint64_t seed, double scale) {
  require(scale > 0.0, "scale must be positive");
  InequalityFamily dual{FamilyKind::dual, {}, N};
  dual.params.p = p;
  dual.params.r = r;
  InequalityFamily weighted = dual;
  weighted.kind = FamilyKind::weighted_reverse;
  dual.validate();
  std::vector<DualTrial> out(static_cast<std::size_t>(std::max(trials, 0)));
  for (std::size_t i = 0; i < out.size(); ++i) {
    Rng r1 = Rng::stream(seed, 2 * i);
    Rng r2 = Rng::stream(seed, 2 * i + 1);
    auto a = random_positive(N, r1);
    auto b = random_positive(N, r2);
    for (auto& x : a) x = std::max(x, 1e-6) * scale;
    for (auto& x : b) x *= scale;
    auto& t = out[i];
    t.dual_ratio = ratio(dual, a);
    t.weighted_ratio = ratio(weighted, b);
    t.dual_ok = !violates(dual, t.dual_ratio);
    t.weighted_ok = !violates(weighted, t.weighted_ratio);
  }
  return out;
}

bool dual_pair_check(double p, double r, std::size_t N, int trials, std::uint64_t seed) {
  const auto res = dual_pair_trials(p, r, N, trials, seed);
  return std::all_of(res.begin(), res.end(),
                     [](const DualTrial& t) { return t.dual_ok && t.weighted_ok; });
}

namespace {

// L_r^{r-1}(x, y) = (x^r - y^r) / (r (x - y)) for x > y >= 0, written to
// avoid cancellation when x and y are close.
double power_mean_kernel(double r, double x, double y) {
  if (y == 0.0) return std::pow(x, r - 1.0) / r;
  const double h = (x - y) / y;
  return std::pow(y, r - 1.0) * std::expm1(r * std::log1p(h)) / (r * h);
}

}  // namespace

double stolarsky_mean(double r_index, double x, double y) {
  if (r_index == 0.0 || r_index == 1.0)
    throw ParameterError("stolarsky_mean supports r not in {0, 1}");
  require(x > 0.0 && y >= 0.0, "stolarsky_mean needs x > 0, y >= 0");
  if (x == y) throw ParameterError("stolarsky_mean needs x != y");
  if (x < y) std::swap(x, y);
  require(y > 0.0 || r_index > 0.0, "stolarsky_mean with a zero argument needs r > 0");
  return std::pow(power_mean_kernel(r_index, x, y), 1.0 / (r_index - 1.0));
}

double mean_weight(double beta, double alpha, double x, double y) {
  require(x >= 0.0 && y >= 0.0 && x != y, "mean weight needs distinct nonnegative x, y");
  if (x < y) std::swap(x, y);
  if (std::isinf(beta) && beta > 0.0) return std::pow(x, alpha - 1.0);
  if (beta == 1.0) {
    // Identric mean: log I = (x log x - y log y)/(x - y) - 1.
    const double logI = y == 0.0 ? std::log(x) - 1.0
                                 : std::log(x) + y * std::log1p((x - y) / y) / (x - y) - 1.0;
    return std::exp((alpha - 1.0) * logI);
  }
  require(beta != 0.0, "mean weight does not support beta = 0");
  require(y > 0.0 || beta > 0.0, "mean weight with a zero argument needs beta > 0");
  return std::pow(power_mean_kernel(beta, x, y), (alpha - 1.0) / (beta - 1.0));
}

MeanFamilyResult mean_family_ratio(double alpha, double beta, MeanSign sign, double p,
                                   std::span<const double> a) {
  InequalityFamily f{FamilyKind::mean_reverse, {}, a.size(), sign};
  f.params.p = p;
  f.params.alpha = alpha;
  f.params.beta = beta;
  f.validate();
  MeanFamilyResult out;
  out.ratio = ratio(f, a);
  out.constant = f.constant();
  out.bounds_hold = true;
  double denom = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double n = nd(i);
    denom += mean_weight(beta, alpha, n, n - 1.0);
    const double inner = sign == MeanSign::plus ? mean_weight(beta, alpha, n + 1.0, n)
                                                : mean_weight(beta, alpha, n - 1.0, n);
    const double cap = std::pow(n, alpha) / alpha;
    const double floor = std::pow(n, alpha - 1.0);
    if (denom > cap * (1.0 + 1e-12) || inner < floor * (1.0 - 1e-12)) out.bounds_hold = false;
  }
  return out;
}

double beta_limit_ratio(double alpha, double p, std::span<const double> a) {
  InequalityFamily f{FamilyKind::beta_limit, {}, a.size()};
  f.params.p = p;
  f.params.alpha = alpha;
  return ratio(f, a);
}

std::string vector_hash(std::span<const double> v) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (double x : v) {
    const auto bits = std::bit_cast<std::uint64_t>(x);
    for (int b = 0; b < 8; ++b) {
      h ^= (bits >> (8 * b)) & 0xFFu;
      h *= 0x100000001b3ULL;
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string certificate_json(const RatioCertificate& cert) {
  const auto& P = cert.family.params;
  nlohmann::ordered_json j;
  j["family"] = to_string(cert.family.kind);
  nlohmann::ordered_json params;
  params["p"] = P.p;
  params["r"] = P.r;
  if (P.alpha) params["alpha"] = *P.alpha;
  params["beta"] = P.beta;
  params["a"] = P.a;
  if (cert.family.kind == FamilyKind::mean_reverse)
    params["sign"] = cert.family.sign == MeanSign::plus ? "plus" : "minus";
  j["params"] = params;
  j["N"] = cert.family.N;
  j["best_ratio"] = cert.best_ratio;
  j["constant"] = cert.theoretical_constant;
  j["pass"] = cert.pass();
  j["seed"] = cert.seed;
  j["iterations"] = cert.iterations;
  j["converged"] = cert.converged;
  j["vector_hash"] = vector_hash(cert.extremal_vector);
  return j.dump(2);
}

void write_vector_csv(std::ostream& os, std::span<const double> v) {
  os << "n,a\n";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i + 1) << ',' << format_double(v[i]) << '\n';
}

}  // namespace steckin::oracle
