#include "steckin/matnorm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <regex>
#include <sstream>

#include "steckin/error.hpp"
#include "steckin/oracle.hpp"
#include "steckin/parallel.hpp"

namespace steckin::matnorm {

using detail::require;

namespace {

double nd(std::size_t i) { return static_cast<double>(i + 1); }

double pnorm_pow(std::span<const double> v, double p) {
  double s = 0.0;
  for (double x : v) s += std::pow(std::abs(x), p);
  return s;
}

void require_p(double p) { require(p > 1.0, "matrix norm needs p > 1"); }

void require_shift(const FactorableMatrix& m, double p, double L, double a) {
  m.validate();
  require_p(p);
  require(L > 0.0 && L < p, "condition needs 0 < L < p");
  for (std::size_t i = 0; i < m.N(); ++i)
    require(m.Lambda[i] + a * m.lambda[i] > 0.0, "condition needs Lambda_n + a lambda_n > 0");
}

std::vector<double> random_nonnegative(std::size_t N, Rng& rng) {
  std::vector<double> x(N);
  bool any = false;
  // Half the draws are noisy power laws, the rest log-uniform with zeros.
  const bool power_law = rng.uniform() < 0.5;
  const double decay = rng.uniform(0.0, 2.0);
  for (std::size_t i = 0; i < N; ++i) {
    const double noise = rng.log_uniform(1e-3, 1e3);
    if (power_law) {
      x[i] = std::pow(nd(i), -decay) * std::pow(noise, 0.1);
    } else {
      x[i] = rng.uniform() < 0.2 ? 0.0 : noise;
    }
    any = any || x[i] > 0.0;
  }
  if (!any) x[0] = 1.0;
  return x;
}

}  // namespace

void FactorableMatrix::validate() const {
  require(!lambda.empty(), "matrix dimension must be positive");
  require(lambda.size() == Lambda.size(), "lambda and Lambda differ in length");
  for (std::size_t i = 0; i < lambda.size(); ++i)
    require(lambda[i] > 0.0 && Lambda[i] > 0.0, "lambda and Lambda must be positive");
  if (lambda_next) require(*lambda_next > 0.0, "lambda_{N+1} must be positive");
}

FactorableMatrix power_weights(double alpha, std::size_t N) {
  require(alpha > 0.0, "power weights need alpha > 0");
  require(N >= 1, "matrix dimension must be positive");
  FactorableMatrix m;
  m.lambda.resize(N);
  m.Lambda.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    m.lambda[i] = alpha * std::pow(nd(i), alpha - 1.0);
    m.Lambda[i] = std::pow(nd(i), alpha);
  }
  m.lambda_next = alpha * std::pow(nd(N), alpha - 1.0);
  m.weighted_mean = alpha == 1.0;
  std::ostringstream os;
  os << "power-weights(" << alpha << ")";
  m.name = os.str();
  return m;
}

FactorableMatrix cesaro(std::size_t N) {
  require(N >= 1, "matrix dimension must be positive");
  FactorableMatrix m;
  m.lambda.assign(N, 1.0);
  m.Lambda.resize(N);
  for (std::size_t i = 0; i < N; ++i) m.Lambda[i] = nd(i);
  m.lambda_next = 1.0;
  m.weighted_mean = true;
  m.name = "cesaro";
  return m;
}

FactorableMatrix stolarsky(double alpha, double beta, std::size_t N) {
  require(N >= 1, "matrix dimension must be positive");
  FactorableMatrix m;
  m.lambda.resize(N);
  m.Lambda.resize(N);
  double acc = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    m.lambda[i] = oracle::mean_weight(beta, alpha, nd(i), nd(i) - 1.0);
    m.Lambda[i] = acc += m.lambda[i];
  }
  m.lambda_next = oracle::mean_weight(beta, alpha, nd(N), nd(N) - 1.0);
  m.weighted_mean = true;
  std::ostringstream os;
  os << "stolarsky(" << alpha << "," << beta << ")";
  m.name = os.str();
  return m;
}

FactorableMatrix from_csv(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "cannot open matrix csv '" + path + "'");
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), "matrix csv is empty");
  FactorableMatrix m;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    require(comma != std::string::npos, "matrix csv rows need two columns");
    try {
      m.lambda.push_back(std::stod(line.substr(0, comma)));
      m.Lambda.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::logic_error&) {
      throw ParameterError("matrix csv has a non-numeric cell: " + line);
    }
  }
  m.name = "csv:" + path;
  m.validate();
  return m;
}

FactorableMatrix make_matrix(const std::string& spec, std::size_t N) {
  if (spec.rfind("csv:", 0) == 0) return from_csv(spec.substr(4));
  if (spec == "cesaro") return cesaro(N);
  static const std::regex call(R"(^([a-z-]+)\(([^)]*)\)$)");
  std::smatch mt;
  require(std::regex_match(spec, mt, call), "unknown matrix generator '" + spec + "'");
  std::vector<double> args;
  std::stringstream ss(mt[2].str());
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      args.push_back(std::stod(tok));
    } catch (const std::logic_error&) {
      throw ParameterError("bad generator argument '" + tok + "'");
    }
  }
  const std::string name = mt[1].str();
  if (name == "power-weights" && args.size() == 1) return power_weights(args[0], N);
  if (name == "stolarsky" && args.size() == 2) return stolarsky(args[0], args[1], N);
  throw ParameterError("unknown matrix generator '" + spec + "'");
}

std::vector<double> apply(const FactorableMatrix& m, std::span<const double> x) {
  require(x.size() == m.N(), "vector length must equal N");
  std::vector<double> y(x.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    acc += m.lambda[i] * x[i];
    y[i] = acc / m.Lambda[i];
  }
  return y;
}

std::vector<double> apply_transpose(const FactorableMatrix& m, std::span<const double> y) {
  require(y.size() == m.N(), "vector length must equal N");
  std::vector<double> x(y.size());
  double acc = 0.0;
  for (std::size_t i = y.size(); i-- > 0;) {
    acc += y[i] / m.Lambda[i];
    x[i] = m.lambda[i] * acc;
  }
  return x;
}

double norm_ratio(const FactorableMatrix& m, std::span<const double> x, double p) {
  require_p(p);
  const double den = pnorm_pow(x, p);
  if (!(den > 0.0)) throw UndefinedRatioError("norm ratio is undefined for the zero vector");
  return std::pow(pnorm_pow(matnorm::apply(m, x), p) / den, 1.0 / p);
}

NormEstimate lp_norm_lower(const FactorableMatrix& m, double p, int iters, std::uint64_t seed,
                           const NormObserver& observer) {
  m.validate();
  require_p(p);
  require(iters >= 0, "iteration count must be nonnegative");
  const std::size_t N = m.N();
  Rng rng(seed);
  std::vector<double> x(N);
  for (std::size_t i = 0; i < N; ++i)
    x[i] = std::pow(nd(i), -1.5 / p) * (1.0 + 0.01 * rng.uniform(-1.0, 1.0));

  NormEstimate est;
  double ratio = norm_ratio(m, x, p);
  est.lower_bound = ratio;
  est.witness = x;
  est.history.push_back(ratio);
  if (observer) observer(0, ratio, x);

  for (int it = 1; it <= iters; ++it) {
    auto y = matnorm::apply(m, x);
    for (auto& v : y) v = std::pow(v, p - 1.0);
    auto z = apply_transpose(m, y);
    const double top = *std::max_element(z.begin(), z.end());
    for (std::size_t i = 0; i < N; ++i) x[i] = std::pow(z[i] / top, 1.0 / (p - 1.0));
    ratio = norm_ratio(m, x, p);
    est.iterations = it;
    if (observer) observer(it, ratio, x);
    const double gain = (ratio - est.lower_bound) / est.lower_bound;
    if (ratio > est.lower_bound) {
      est.lower_bound = ratio;
      est.witness = x;
    }
    est.history.push_back(est.lower_bound);
    if (gain < 1e-13) {
      est.converged = true;
      break;
    }
  }
  return est;
}

SequenceVerdict check_thm31(const FactorableMatrix& m, double p, double L, double a) {
  require_shift(m, p, L, a);
  const std::size_t N = m.N();
  const std::size_t count = m.lambda_next ? N : N - 1;
  const double c = p / (p - L);
  std::vector<double> slack(count);
  double T = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double lam = m.lambda[i];
    const double ratio = lam / m.Lambda[i];
    const double next = i + 1 < N ? m.lambda[i + 1] : *m.lambda_next;
    const double b = (p - L) / p * std::pow(1.0 + a * ratio, p - 1.0) * ratio + lam / next;
    T = (T + lam) * std::pow(b, 1.0 / (p - 1.0));
    slack[i] = 1.0 - T / (c * (m.Lambda[i] + a * lam));
  }
  auto v = summarize_slack(std::move(slack));
  v.last_dropped = !m.lambda_next;
  return v;
}

SequenceVerdict check_cor1(const FactorableMatrix& m, double p, double L, double a) {
  require_shift(m, p, L, a);
  const std::size_t N = m.N();
  const std::size_t count = m.lambda_next ? N : N - 1;
  std::vector<double> slack(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double lam = m.lambda[i];
    const double Lam = m.Lambda[i];
    const double lam_prev = i > 0 ? m.lambda[i - 1] : 0.0;
    const double Lam_prev = i > 0 ? m.Lambda[i - 1] : 0.0;
    const double next = i + 1 < N ? m.lambda[i + 1] : *m.lambda_next;
    const double shift = std::pow(1.0 + a * lam / Lam, p - 1.0);
    const double lhs = (p - L) / p * shift + Lam / next;
    const double inner = (1.0 - L / p) * lam / Lam + Lam_prev / Lam + a * lam_prev / Lam;
    require(inner > 0.0, "check_cor1 condition has a nonpositive base");
    const double rhs = Lam / lam * shift * std::pow(inner, 1.0 - p);
    slack[i] = rhs / lhs - 1.0;
  }
  auto v = summarize_slack(std::move(slack));
  v.last_dropped = !m.lambda_next;
  return v;
}

double max_random_ratio(const FactorableMatrix& m, double p, int samples, std::uint64_t seed,
                        unsigned jobs) {
  m.validate();
  require_p(p);
  require(samples >= 1, "need at least one sample");
  std::vector<double> r(static_cast<std::size_t>(samples));
  parallel_for(r.size(), jobs, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      Rng rng = Rng::stream(seed, i);
      r[i] = norm_ratio(m, random_nonnegative(m.N(), rng), p);
    }
  });
  return *std::max_element(r.begin(), r.end());
}

ForwardFamilyReport verify_forward_family_report(double alpha, double beta, double p,
                                                 std::size_t N, int samples,
                                                 std::uint64_t seed, unsigned jobs) {
  require(samples >= 1, "need at least one sample");
  using oracle::FamilyKind;
  oracle::InequalityFamily f12{FamilyKind::alpha_forward, {}, N};
  f12.params.p = p;
  f12.params.alpha = alpha;
  f12.params.beta = beta;
  f12.validate();
  auto f13 = f12;
  f13.kind = FamilyKind::mean_forward;
  f13.params.beta = std::numeric_limits<double>::infinity();
  auto f35 = f12;
  f35.kind = FamilyKind::mean_forward;

  ForwardFamilyReport rep;
  rep.constant = f12.constant();
  rep.applicable_13 = alpha >= 1.0;
  rep.applicable_35 = alpha >= 1.0 && beta >= alpha;

  struct Sample {
    double r12 = 0.0, r13 = 0.0, r35 = 0.0;
  };
  std::vector<Sample> res(static_cast<std::size_t>(samples));
  parallel_for(res.size(), jobs, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      Rng rng = Rng::stream(seed, i);
      const auto x = random_nonnegative(N, rng);
      res[i].r12 = oracle::ratio(f12, x);
      if (rep.applicable_13) res[i].r13 = oracle::ratio(f13, x);
      if (rep.applicable_35) res[i].r35 = oracle::ratio(f35, x);
    }
  });
  for (const auto& s : res) {
    rep.max_ratio_12 = std::max(rep.max_ratio_12, s.r12);
    rep.max_ratio_13 = std::max(rep.max_ratio_13, s.r13);
    rep.max_ratio_35 = std::max(rep.max_ratio_35, s.r35);
  }
  const double cap = rep.constant + 1e-9;
  rep.ok_12 = rep.max_ratio_12 <= cap;
  rep.ok_13 = !rep.applicable_13 || rep.max_ratio_13 <= cap;
  rep.ok_35 = !rep.applicable_35 || rep.max_ratio_35 <= cap;

  if (alpha >= 1.0) {
    double acc = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      acc += std::pow(nd(i), alpha - 1.0);
      if (acc < std::pow(nd(i), alpha) / alpha * (1.0 - 1e-12)) {
        rep.domination = false;
        break;
      }
    }
  }
  return rep;
}

bool verify_forward_family(double alpha, double beta, double p, std::size_t N, int samples,
                           std::uint64_t seed) {
  return verify_forward_family_report(alpha, beta, p, N, samples, seed).pass();
}

}  // namespace steckin::matnorm
