#include <doctest.h>

#include <cmath>
#include <vector>

#include "steckin/criteria.hpp"
#include "steckin/rng.hpp"

using namespace steckin;
using namespace steckin::criteria;

namespace {

// Reference values from a 40-digit evaluation of the closed forms.
constexpr double kCrit346 = 0.0071881534257121244;
constexpr double kCrit347 = -0.0058218060690001357;
constexpr double kCrit35 = -0.044889954203516994;
constexpr double kCrit36 = -0.17562148887268127;
constexpr double kPStar = 0.3465525689474661568;

double rel(double x, double y) { return std::abs(x - y) / std::abs(y); }

// Plain long-double bisection, used as an oracle for the root finders.
template <class F>
long double bisect_ld(F f, long double lo, long double hi) {
  for (int i = 0; i < 200; ++i) {
    const long double mid = (lo + hi) / 2;
    if ((f(mid) >= 0) == (f(lo) >= 0)) lo = mid;
    else hi = mid;
  }
  return lo;
}

}  // namespace

TEST_CASE("best constant") {
  CHECK(best_constant(0.5, 0.5) == 1.0);
  CHECK(best_constant(0.3, 0.3) == doctest::Approx(0.77554493241403623).epsilon(1e-14));
  CHECK(best_constant(1.0 / 3, 1.0 / 3) == doctest::Approx(std::cbrt(0.5)).epsilon(1e-14));
  CHECK_THROWS_AS(best_constant(1.0, 0.5), ParameterError);
  CHECK_THROWS_AS(best_constant(0.5, 0.0), ParameterError);
}

TEST_CASE("crit14 against high-precision values") {
  CHECK(rel(crit14(0.346), kCrit346) < 1e-10);
  CHECK(rel(crit14(0.347), kCrit347) < 1e-10);
  CHECK(rel(crit14(0.35), kCrit35) < 1e-10);
  CHECK(rel(crit14(0.36), kCrit36) < 1e-10);
  CHECK(crit14(1.0 / 3.0) == doctest::Approx(3.0 - 2.0 * std::sqrt(2.0)).epsilon(1e-15));
  CHECK(crit14(1.0 / 3.0 + 1e-9) == doctest::Approx(3.0 - 2.0 * std::sqrt(2.0)).epsilon(1e-7));
  CHECK_THROWS_AS(crit14(0.3), ParameterError);
  CHECK_THROWS_AS(crit14(0.5), ParameterError);
}

TEST_CASE("crit27 agrees with crit14 in sign and value") {
  for (int i = 1; i < 200; ++i) {
    const double p = 1.0 / 3 + (0.5 - 1.0 / 3) * i / 200.0;
    const double a = crit14(p), b = crit27(p);
    CHECK((a >= 0) == (b >= 0));
    CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)));
  }
  CHECK(crit27(0.346) > 0.0);
}

TEST_CASE("the two parts of crit27 are monotone in p") {
  double prev_lead = 1e300, prev_shift = -1e300;
  for (int i = 1; i < 200; ++i) {
    const double p = 1.0 / 3 + (0.5 - 1.0 / 3) * i / 200.0;
    const double t = p / (1 - p);
    const double lead = std::pow(2.0, t) / t * (std::pow(t, -t) - 1.0);
    const double shift = std::pow(1.0 + critical_shift(p), 1.0 / (1.0 - p));
    CHECK(lead < prev_lead);
    CHECK(shift > prev_shift);
    prev_lead = lead;
    prev_shift = shift;
  }
}

TEST_CASE("phi45") {
  for (double p : {0.2, 0.34, 0.45})
    for (double r : {0.1, 0.5})
      for (double a : {-0.5, 0.0, 2.0}) CHECK(phi45(0.0, p, r, a) == 0.0);
  const double p = 0.34;
  ScanOptions o;
  o.exact_zero_at_lo = true;
  const auto ok = scan_min([&](double y) { return phi45(y, p, p, critical_shift(p)); },
                           {0.0, 1.0, 2001, 3}, o);
  CHECK(ok.pass);
  const auto bad = scan_min(
      [](double y) { return phi45(y, 0.4, 0.4, critical_shift(0.4) - 0.05); },
      {0.0, 1.0, 2001, 3}, o);
  CHECK(bad.min_margin < 0.0);
  CHECK_THROWS_AS(phi45(1.5, 0.3, 0.3, 0.0), ParameterError);
}

TEST_CASE("lemma1 point values") {
  CHECK(lemma1_f(0.0, 0.7) == 0.0);
  CHECK(lemma1_g(0.0, 0.7) == 0.0);
  CHECK(lemma1_f(1.0, 0.75) == doctest::Approx(0.34098823119410874).epsilon(1e-13));
  CHECK(lemma1_g(1.0, 0.6) == doctest::Approx(0.84207876571515602).epsilon(1e-13));
  CHECK_THROWS_AS(lemma1_f(0.5, 0.5), ParameterError);
}

TEST_CASE("lemma1 scan on the full grid") {
  const auto s = scan_lemma1();
  CHECK(s.f.min_margin >= -1e-12);
  CHECK(s.g.min_margin >= -1e-12);
  CHECK(s.g_monotone);
  CHECK(s.pass());
  const auto s4 = scan_lemma1({0.0, 1.0, 2001, 0}, {0.505, 0.995, 199, 0}, 4);
  CHECK(s4.f.min_margin == s.f.min_margin);
  CHECK(s4.g.argmin_y == s.g.argmin_y);
}

TEST_CASE("f35 reduces to phi45 at alpha = 1") {
  Rng rng(kDefaultSeed);
  for (int i = 0; i < 100; ++i) {
    const double x = rng.uniform();
    const double p = rng.uniform(0.01, 0.49);
    const double a = f35(x, p, 1.0), b = phi45(x, p, p, 0.0);
    CHECK(std::abs(a - b) <= 1e-13 * std::max(1e-300, std::abs(b)) + 1e-16);
  }
  CHECK(f35(0.0, 0.2, 2.0) == 0.0);
  CHECK(f35(1.0, 1.0 / 6, 2.0) >= 0.0);
}

TEST_CASE("h36 values and domain") {
  CHECK(rel(h36(1.0, 0.25), 26.0) < 1e-12);
  CHECK(h36(2.0, 1.0 / 6) == doctest::Approx(13.216361226850375).epsilon(1e-12));
  CHECK_THROWS_AS(h36(1.0, 0.5), SingularParameterError);
  CHECK_THROWS_AS(h36(1.0, 0.5 - 1e-7), SingularParameterError);
  CHECK_THROWS_AS(h36(3.0, 0.3), ParameterError);
}

TEST_CASE("a passing a = 0, r = p scan of phi45 implies h36(1, p) >= 0") {
  int passes = 0;
  for (int i = 1; i < 49; ++i) {
    const double p = i / 100.0;
    ScanOptions o;
    o.exact_zero_at_lo = true;
    const auto s = scan_min([p](double y) { return phi45(y, p, p, 0.0); }, {0.0, 1.0, 2001, 3}, o);
    if (s.pass) {
      ++passes;
      CHECK_MESSAGE(h36(1.0, p) >= 0.0, "p = " << p);
    }
  }
  CHECK(passes == 33);
  // The converse fails: h36 stays positive past the unshifted scan's boundary.
  CHECK(h36(1.0, 0.36) > 0.0);
  CHECK(h36(1.0, 0.4) < 0.0);
}

TEST_CASE("ineq32 margin") {
  CHECK(ineq32_margin(0.0, 1.3, 2.0) == 0.0);
  CHECK(ineq32_margin(1.0, 1.0 + 1.0 / 2.0 + 0.2, 2.0) < 0.0);
  ScanOptions o;
  o.exact_zero_at_lo = true;
  CHECK(scan_min([](double y) { return ineq32_margin(y, 1.1, 2.0); }, {}, o).pass);
}

TEST_CASE("h1 and h2") {
  for (double a : {1.0, 1.1, 1.3}) CHECK(h1(0.0, a, 2.0) == doctest::Approx(a * (a - 1) - 0.25));
  const double a0 = alpha0_super_one(1.5) - 1e-4;
  for (int i = 0; i <= 1000; ++i) CHECK(h1(i / 1000.0, a0, 1.5) <= 0.0);
  const double a3 = alpha0_super_one(3.0);
  CHECK(std::abs(h2(1.0, a3, 3.0)) < 1e-9);
  CHECK(a3 == doctest::Approx(1.1238120189726389).epsilon(1e-9));
  CHECK_THROWS_AS(h1(0.0, 1.1, 2.5), ParameterError);
  CHECK_THROWS_AS(h2(0.0, 1.1, 2.0), ParameterError);
  CHECK_THROWS_AS(h2(0.0, 3.0, 3.0), ParameterError);
}

TEST_CASE("p* bracket, accuracy and resolution independence") {
  const auto th = p_star(1e-9);
  CHECK(th.value >= 0.346);
  CHECK(th.value <= 0.350);
  CHECK(std::abs(th.value - kPStar) < 2e-9);
  CHECK(th.f_lo >= 0.0);
  CHECK(th.f_hi < 0.0);
  CHECK(th.iterations <= 60);
  CHECK(std::abs(p_star(1e-9, 2000).value - th.value) < 1e-9);
  // crit14 > 0 below the root and < 0 above, sampled.
  for (int i = 0; i < 100; ++i) {
    const double lo = 1.0 / 3 + (th.lo - 1.0 / 3) * i / 100.0;
    const double hi = th.hi + (0.5 - 1e-9 - th.hi) * i / 100.0;
    CHECK(crit14(lo) > 0.0);
    CHECK(crit14(hi) < 0.0);
  }
  CHECK(threshold_p_star() == th.value);
}

TEST_CASE("bisect rejects a bracket without sign change") {
  CHECK_THROWS_AS(bisect([](double x) { return x; }, 1.0, 2.0, 1e-9), BracketError);
  CHECK_THROWS_AS(first_failure_root([](double) { return 1.0; }, 0.0, 1.0, 10, 1e-9),
                  BracketError);
}

TEST_CASE("alpha0 below one half") {
  CHECK(alpha0_sub_half(1.0 / 6) >= 2.0);
  CHECK(alpha0_sub_half(1.0 / 3) >= 1.0);
  CHECK(alpha0_sub_half(1.0 / 6) == doctest::Approx(3.3735346601490206).epsilon(1e-9));
  CHECK(alpha0_sub_half(0.25) == doctest::Approx(2.0040496593542352).epsilon(1e-9));
  CHECK(alpha0_sub_half(0.4) == doctest::Approx(0.89513668034473635).epsilon(1e-9));
  for (double p : {0.05, 1.0 / 6, 0.25, 1.0 / 3, 0.4, 0.45}) {
    const double a0 = alpha0_sub_half(p);
    CHECK(a0 >= alpha_sufficient_sub_half(p) - 1e-9);
    CHECK(h36(a0, p) >= 0.0);
    if (a0 + 0.01 < 1.0 / p - 1.0) CHECK(h36(a0 + 0.01, p) < 0.0);
  }
  CHECK_THROWS_AS(alpha0_sub_half(0.5), SingularParameterError);
}

TEST_CASE("alpha0 above one") {
  // alpha(alpha - 1) = sqrt(5) - 2 at p = 2.
  const double exact = (1.0 + std::sqrt(4.0 * std::sqrt(5.0) - 7.0)) / 2.0;
  CHECK(std::abs(alpha0_super_one(2.0) - exact) < 1e-9);
  const auto d = alpha0_super_one_detail(1.5);
  CHECK(d.alpha1 == doctest::Approx(1.1309898162000304).epsilon(1e-9));
  CHECK(d.alpha2 == doctest::Approx(1.1416856380499126).epsilon(1e-9));
  for (double p : {1.1, 1.5, 2.0}) {
    const auto e = alpha0_super_one_detail(p);
    CHECK(e.alpha1 <= 1.0 + 1.0 / p);
    CHECK(e.alpha2 <= 1.0 + 1.0 / p);
    const auto oracle = bisect_ld([p](long double a) { return -h1(1.0, double(a), p); }, 1.0L,
                                  1.0L + 1.0L / p);
    CHECK(std::abs(e.alpha2 - double(oracle)) < 1e-9);
  }
  CHECK_THROWS_AS(alpha0_super_one(1.0), ParameterError);
}

TEST_CASE("alpha0(2) against a brute-force sign scan of h1") {
  double last_ok = 1.0;
  for (int i = 0; i <= 10000; ++i) {
    const double a = 1.0 + i * 1e-4;
    if (h1(0.0, a, 2.0) <= 0.0 && h1(1.0, a, 2.0) <= 0.0) last_ok = a;
    else break;
  }
  CHECK(std::abs(alpha0_super_one(2.0) - last_ok) <= 1e-4);
}

TEST_CASE("batch evaluation over columns") {
  const std::vector<double> ys{0.0, 0.5, 1.0}, ps{0.3, 0.3, 0.3}, rs{0.3, 0.3, 0.3},
      as{0.0, 0.0, 0.0};
  const auto v = batch(phi45, ys, ps, rs, as);
  for (std::size_t i = 0; i < v.size(); ++i) CHECK(v[i] == phi45(ys[i], 0.3, 0.3, 0.0));
  CHECK_THROWS_AS(batch(phi45, ys, ps, rs, std::vector<double>{0.0}), ParameterError);
}
