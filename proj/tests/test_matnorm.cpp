#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <vector>

#include "steckin/criteria.hpp"
#include "steckin/matnorm.hpp"
#include "steckin/oracle.hpp"

using namespace steckin;
using namespace steckin::matnorm;

namespace {

std::vector<double> draw(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.log_uniform(1e-3, 1e3);
  return v;
}

std::vector<std::vector<double>> dense(const FactorableMatrix& m) {
  const std::size_t N = m.N();
  std::vector<std::vector<double>> A(N, std::vector<double>(N, 0.0));
  for (std::size_t n = 0; n < N; ++n)
    for (std::size_t k = 0; k <= n; ++k) A[n][k] = m.lambda[k] / m.Lambda[n];
  return A;
}

// Largest singular value by power iteration on A^T A of the dense matrix.
double sigma_max(const FactorableMatrix& m) {
  const auto A = dense(m);
  const std::size_t N = m.N();
  std::vector<double> x(N, 1.0), y(N), z(N);
  double s = 0.0;
  for (int it = 0; it < 20000; ++it) {
    for (std::size_t n = 0; n < N; ++n) {
      y[n] = 0.0;
      for (std::size_t k = 0; k < N; ++k) y[n] += A[n][k] * x[k];
    }
    for (std::size_t k = 0; k < N; ++k) {
      z[k] = 0.0;
      for (std::size_t n = 0; n < N; ++n) z[k] += A[n][k] * y[n];
    }
    double norm = 0.0;
    for (double v : z) norm += v * v;
    norm = std::sqrt(norm);
    for (std::size_t k = 0; k < N; ++k) x[k] = z[k] / norm;
    if (std::abs(std::sqrt(norm) - s) < 1e-15) break;
    s = std::sqrt(norm);
  }
  return s;
}

}  // namespace

TEST_CASE("apply examples") {
  const auto c = cesaro(20);
  for (double y : matnorm::apply(c, std::vector<double>(20, 1.0)))
    CHECK(y == doctest::Approx(1.0));
  const double al = 1.7;
  const auto m = power_weights(al, 30);
  std::vector<double> e1(30, 0.0);
  e1[0] = 1.0;
  const auto y = matnorm::apply(m, e1);
  for (std::size_t n = 0; n < 30; ++n)
    CHECK(y[n] == doctest::Approx(al / std::pow(n + 1.0, al)).epsilon(1e-14));
}

TEST_CASE("prefix-sum apply equals the dense product") {
  Rng rng(kDefaultSeed);
  const auto m = stolarsky(1.5, 0.5, 50);
  const auto x = draw(rng, 50);
  const auto A = dense(m);
  const auto y = matnorm::apply(m, x);
  for (std::size_t n = 0; n < 50; ++n) {
    double s = 0.0;
    for (std::size_t k = 0; k < 50; ++k) s += A[n][k] * x[k];
    CHECK(std::abs(y[n] - s) <= 1e-12 * s);
  }
  // Transpose: <A x, v> = <x, A^T v>.
  const auto v = draw(rng, 50);
  const auto w = apply_transpose(m, v);
  double l = 0.0, r = 0.0;
  for (std::size_t i = 0; i < 50; ++i) {
    l += y[i] * v[i];
    r += x[i] * w[i];
  }
  CHECK(l == doctest::Approx(r).epsilon(1e-12));
}

TEST_CASE("apply is linear and monotone") {
  Rng rng(4);
  const auto m = power_weights(1.3, 40);
  for (int t = 0; t < 20; ++t) {
    const auto x = draw(rng, 40), z = draw(rng, 40);
    std::vector<double> s(40), big(x);
    for (std::size_t i = 0; i < 40; ++i) {
      s[i] = 2.0 * x[i] + 3.0 * z[i];
      big[i] += z[i];
    }
    const auto ax = matnorm::apply(m, x), az = matnorm::apply(m, z);
    const auto as = matnorm::apply(m, s), ab = matnorm::apply(m, big);
    for (std::size_t i = 0; i < 40; ++i) {
      CHECK(as[i] == doctest::Approx(2.0 * ax[i] + 3.0 * az[i]).epsilon(1e-13));
      CHECK(ab[i] >= ax[i]);
    }
  }
}

TEST_CASE("generators") {
  const auto s = stolarsky(2.0, 2.0, 10);
  CHECK(s.Lambda.back() == doctest::Approx(50.0).epsilon(1e-14));
  CHECK(s.weighted_mean);
  CHECK(make_matrix("power-weights(1.1)", 5).lambda[1] ==
        doctest::Approx(1.1 * std::pow(2.0, 0.1)));
  CHECK(make_matrix("cesaro", 5).Lambda[4] == 5.0);
  CHECK(make_matrix("stolarsky(2,3)", 5).N() == 5);
  CHECK_THROWS_AS(make_matrix("power-weights(x)", 5), ParameterError);
  CHECK_THROWS_AS(make_matrix("hilbert", 5), ParameterError);
  CHECK_THROWS_AS(power_weights(-1.0, 5), ParameterError);

  const auto path = std::filesystem::temp_directory_path() / "steckin_matrix.csv";
  {
    std::ofstream f(path);
    f << "lambda,Lambda\n";
    for (int n = 1; n <= 30; ++n) f << 1.0 << ',' << n << '\n';
  }
  const auto m = make_matrix("csv:" + path.string(), 0);
  CHECK(m.N() == 30);
  CHECK_FALSE(m.lambda_next.has_value());
  const auto v = check_thm31(m, 2.0, 1.0, 0.0);
  CHECK(v.last_dropped);
  CHECK(v.slack.size() == 29);
  std::filesystem::remove(path);
}

TEST_CASE("norm estimate: 1x1 and small dense oracle") {
  FactorableMatrix one;
  one.lambda = {3.0};
  one.Lambda = {4.0};
  CHECK(lp_norm_lower(one, 2.5).lower_bound == doctest::Approx(0.75).epsilon(1e-15));
  for (const auto& m : {cesaro(40), power_weights(1.2, 40), stolarsky(0.5, 2.0, 40)}) {
    const auto est = lp_norm_lower(m, 2.0, 20000);
    CHECK(est.lower_bound == doctest::Approx(sigma_max(m)).epsilon(1e-8));
    CHECK(est.lower_bound <= sigma_max(m) * (1.0 + 1e-12));
  }
}

TEST_CASE("Cesaro p = 2 at N = 1e4 matches the largest singular value") {
  // 1.81799913: largest singular value of the 1e4 finite Cesaro section,
  // computed by an independent sparse SVD.
  std::vector<double> ratios;
  const auto m = cesaro(10000);
  const auto est = lp_norm_lower(m, 2.0, 2000, kDefaultSeed,
                                 [&](int, double r, std::span<const double> x) {
                                   CHECK(std::abs(norm_ratio(m, x, 2.0) - r) <= 1e-10 * r);
                                   ratios.push_back(r);
                                 });
  CHECK(std::abs(est.lower_bound - 1.81799913) < 5e-8);
  CHECK(est.lower_bound < 2.0);
  CHECK(std::abs(norm_ratio(m, est.witness, 2.0) - est.lower_bound) <= 1e-10 * est.lower_bound);
  for (std::size_t i = 1; i < est.history.size(); ++i) CHECK(est.history[i] >= est.history[i - 1]);
  CHECK(ratios.size() == est.history.size());
}

TEST_CASE("norm estimate grows with N") {
  double prev = 0.0;
  for (std::size_t N : {10u, 100u, 1000u, 5000u}) {
    const double v = lp_norm_lower(cesaro(N), 3.0).lower_bound;
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("power weights stay below the forward constant at every iteration") {
  const double al = 1.1, p = 2.0;
  REQUIRE(al <= criteria::alpha0_super_one(p));
  const double cap = al * p / (al * p - 1.0);
  const auto m = power_weights(al, 10000);
  lp_norm_lower(m, p, 2000, kDefaultSeed,
                [&](int, double r, std::span<const double>) { CHECK(r <= cap + 1e-9); });
}

TEST_CASE("check_thm31 condition") {
  const double p = 2.0;
  const auto ok = check_thm31(power_weights(1.1, 10000), p, 1.0 / 1.1, 0.0);
  CHECK(ok.pass());
  CHECK_FALSE(ok.last_dropped);
  const auto bad = check_thm31(power_weights(1.5, 10000), p, 1.0 / 1.5, 0.0);
  CHECK_FALSE(bad.pass());
  CHECK(check_thm31(cesaro(10000), p, 1.0, 0.0).pass());

  // n = 1: lambda_1 b_1^{1/(p-1)} <= (p/(p-L)) (Lambda_1 + a lambda_1).
  const double al = 1.3, L = 0.6, a = 0.4, pp = 1.7;
  const auto m = power_weights(al, 3);
  const double l1 = m.lambda[0], L1 = m.Lambda[0], l2 = m.lambda[1];
  const double b1 = (pp - L) / pp * std::pow(1.0 + a * l1 / L1, pp - 1.0) * l1 / L1 + l1 / l2;
  const double expect = 1.0 - l1 * std::pow(b1, 1.0 / (pp - 1.0)) / (pp / (pp - L) * (L1 + a * l1));
  CHECK(check_thm31(m, pp, L, a).slack[0] == doctest::Approx(expect).epsilon(1e-14));
  CHECK_THROWS_AS(check_thm31(m, pp, 2.0, 0.0), ParameterError);
  CHECK_THROWS_AS(check_thm31(m, pp, L, -5.0), ParameterError);
}

TEST_CASE("check_cor1 tracks ineq32") {
  const double al = 1.1, p = 2.0;
  const auto v = check_cor1(power_weights(al, 10000), p, 1.0 / al, 0.0);
  CHECK(v.pass());
  for (std::size_t n = 1; n <= 10000; n += (n < 100 ? 1 : 97)) {
    const double g = criteria::ineq32_margin(1.0 / n, al, p);
    if (std::abs(g) < 1e-13) continue;
    CHECK(((v.slack[n - 1] >= 0) == (g >= 0)));
  }
  CHECK(check_cor1(cesaro(10000), 2.0, 1.0, 0.0).pass());
}

TEST_CASE("check_cor1 passing implies check_thm31 passing") {
  int violations = 0;
  for (double al : {1.0, 1.05, 1.1, 1.15, 1.19, 1.25, 1.5})
    for (double p : {1.5, 2.0, 3.0})
      for (double a : {0.0, 0.5}) {
        const auto m = power_weights(al, 2000);
        const double L = 1.0 / al;
        const auto c = check_cor1(m, p, L, a);
        const auto t = check_thm31(m, p, L, a);
        // Every prefix on which check_cor1 holds must also pass check_thm31.
        const std::size_t cor_ok = c.first_failure == 0 ? c.slack.size() : c.first_failure - 1;
        for (std::size_t n = 0; n < cor_ok; ++n)
          if (!margin_passes(t.slack[n], t.slack[n])) ++violations;
      }
  CHECK(violations == 0);
}

TEST_CASE("random vectors respect a certified bound") {
  for (double al : {1.0, 1.1})
    for (double p : {1.5, 2.0}) {
      const auto m = power_weights(al, 300);
      const double L = 1.0 / al;
      if (!check_thm31(m, p, L, 0.0).pass()) continue;
      CHECK(max_random_ratio(m, p, 100, kDefaultSeed) <= p / (p - L) + 1e-9);
    }
  const auto m = power_weights(1.1, 300);
  CHECK(max_random_ratio(m, 2.0, 40, 9, 1) == max_random_ratio(m, 2.0, 40, 9, 4));
}

TEST_CASE("forward families") {
  const auto rep = verify_forward_family_report(1.1, 2.0, 2.0, 1000, 100, kDefaultSeed);
  CHECK(rep.ok_12);
  CHECK(rep.ok_13);
  CHECK(rep.ok_35);
  CHECK(rep.domination);
  CHECK(rep.applicable_35);
  CHECK(verify_forward_family(1.1, 2.0, 2.0, 1000, 100, kDefaultSeed));
  CHECK(rep.constant == doctest::Approx(std::pow(2.2 / 1.2, 2.0)));

  // alpha = 1: all three forms are Hardy's inequality.
  const auto h = verify_forward_family_report(1.0, 1.0, 2.0, 200, 20, 5);
  CHECK(h.max_ratio_12 == doctest::Approx(h.max_ratio_13).epsilon(1e-12));
  CHECK(h.max_ratio_12 == doctest::Approx(h.max_ratio_35).epsilon(1e-12));
  CHECK(h.constant == doctest::Approx(4.0));

  oracle::InequalityFamily f12{oracle::FamilyKind::alpha_forward, {}, 100};
  f12.params.p = 2.0;
  f12.params.alpha = 4.0;
  std::vector<double> e1(100, 0.0);
  e1[0] = 1.0;
  CHECK(oracle::violates(f12, oracle::ratio(f12, e1)));
}
