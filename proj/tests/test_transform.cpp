#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "coshtx/error.hpp"
#include "coshtx/quadrature.hpp"
#include "coshtx/transform.hpp"
#include "test_util.hpp"

using namespace coshtx;
using testutil::rel_err;

namespace {

PsiFunction uniform_psi() { return PsiFunction::from_measure(MeasureSpec::uniform(0, 1)); }

std::vector<PsiFunction> even_corpus() {
  return {
      catalog_get("const", {{"c", 2.5}}),
      catalog_get("cosh"),
      catalog_get("sinhc"),
      catalog_get("erf-gauss"),
      catalog_get("bmv", {{"xi", 2}, {"eta", 5}}),
      catalog_get("coshcos", {{"delta", 2.19}}),
      catalog_get("expsq"),
      uniform_psi(),
      PsiFunction::from_measure(MeasureSpec::atom(0.4, 0.3) + MeasureSpec::atom(1.5, 0.7)),
      PsiFunction::from_measure(MeasureSpec::gauss2u()),
      PsiFunction::from_series({1.0, 0.5, 0.25, 0.125}),
  };
}

// Entries whose underlying measure has compact support.
std::vector<PsiFunction> compact_corpus() {
  return {
      catalog_get("cosh"),
      catalog_get("sinhc"),
      catalog_get("bmv", {{"xi", 1}, {"eta", 0}}),
      catalog_get("bmv", {{"xi", 0.5}, {"eta", 10}}),
      catalog_get("coshcos", {{"delta", 2.19}}),
      uniform_psi(),
      PsiFunction::from_measure(MeasureSpec::atom(0.4, 0.3) + MeasureSpec::atom(1.5, 0.7)),
  };
}

}  // namespace

TEST_CASE("eval examples") {
  const auto u = uniform_psi();
  CHECK(rel_err(eval_psi(u, 2.0), 1.8134302039) < 1e-10);
  CHECK(rel_err(eval_psi(u, 2.0), std::sinh(2.0) / 2.0) < 1e-13);
  CHECK(eval_psi(u, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  const auto a1 = PsiFunction::from_measure(MeasureSpec::atom(1.0));
  CHECK(rel_err(eval_psi(a1, 1.0), 1.5430806348) < 1e-10);
  CHECK(rel_err(eval_psi_prime(u, 2.0), (2 * std::cosh(2.0) - std::sinh(2.0)) / 4.0) < 1e-12);
  CHECK(rel_err(eval_psi_prime(a1, 1.0), std::sinh(1.0)) < 1e-13);
  CHECK(eval_psi_prime(u, 0.0) == 0.0);
  CHECK(rel_err(eval_phi(u, 4.0), std::sinh(2.0) / 2.0) < 1e-13);
  CHECK(rel_err(eval_phi(PsiFunction::from_measure(MeasureSpec::atom(2.0)), 9.0), 201.7156361224) <
        1e-10);
}

TEST_CASE("eval_log examples") {
  CHECK(rel_err(eval_log_psi(catalog_get("expsq"), 20.0), 400.0) < 1e-15);
  CHECK(eval_log_psi(catalog_get("cosh"), 0.0) == 0.0);
  CHECK(rel_err(eval_log_psi(catalog_get("cosh"), 100.0), 99.3068528194) < 1e-11);
  // Past exp overflow the log form stays accurate.
  const double x = 1000.0;
  CHECK(rel_err(eval_log_psi(catalog_get("cosh"), x), x - std::log(2.0)) < 1e-15);
  CHECK_THROWS_AS(eval_psi(catalog_get("cosh"), x), Error);
}

TEST_CASE("catalog examples") {
  CHECK(eval_psi(catalog_get("sinhc"), 0.0) == 1.0);
  CHECK(eval_psi(catalog_get("erf-gauss"), 0.0) == 1.0);
  const auto b = catalog_get("bmv", {{"xi", 1}, {"eta", 0}});
  for (double x : {-3.0, -0.5, 0.0, 0.7, 4.0}) CHECK(rel_err(eval_psi(b, x), std::cosh(x)) < 1e-15);
  CHECK_THROWS_AS(catalog_get("nope"), Error);
  CHECK_THROWS_AS(catalog_get("bmv", {{"xi", -1}}), Error);
  CHECK_THROWS_AS(catalog_get("sinhc", {{"q", 1}}), Error);
  try {
    catalog_get("nope");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownCatalogEntry);
  }
}

TEST_CASE("erf-gauss matches its defining integral") {
  const auto p = catalog_get("erf-gauss");
  for (double x : {0.0, 1.0, 2.0, 4.0}) {
    const double q = quad::integrate(
        [x](double u) { return 2.0 * u * std::cosh(x * u) * std::exp(-u * u); }, 0.0, 40.0);
    CHECK(rel_err(eval_psi(p, x), q) < 1e-10);
  }
}

TEST_CASE("series_coeffs examples") {
  const auto s = series_coeffs(uniform_psi(), 4);
  for (int n = 0; n <= 4; ++n) CHECK(rel_err(s.value(n), 1.0 / (2 * n + 1)) < 1e-12);
  const auto a = series_coeffs(PsiFunction::from_measure(MeasureSpec::atom(1.5, 0.4)), 6);
  for (int n = 0; n <= 6; ++n) CHECK(rel_err(a.value(n), 0.4 * std::pow(1.5, 2 * n)) < 1e-13);
  const auto g = series_coeffs(PsiFunction::from_measure(MeasureSpec::gauss2u()), 3);
  const double fact[] = {1, 1, 2, 6};
  for (int n = 0; n <= 3; ++n) CHECK(rel_err(g.value(n), fact[n]) < 1e-10);
  // Catalog closed forms agree with the measures they stand for.
  const auto sc = series_coeffs(catalog_get("sinhc"), 10);
  const auto erf = series_coeffs(catalog_get("erf-gauss"), 10);
  for (int n = 0; n <= 10; ++n) {
    CHECK(rel_err(sc.value(n), 1.0 / (2 * n + 1)) < 1e-13);
    CHECK(rel_err(erf.value(n), std::tgamma(n + 1.0)) < 1e-12);
  }
}

TEST_CASE("growth_rate examples") {
  CHECK(std::fabs(growth_rate(catalog_get("cosh")).b0 - 1.0) < 1e-3);
  CHECK(growth_rate(catalog_get("const", {{"c", 3}})).b0 == 0.0);
  const auto g = growth_rate(catalog_get("expsq"));
  CHECK(g.superexponential);
  CHECK(std::isinf(g.b0));
}

TEST_CASE("classify_H examples") {
  const auto cc = classify_H(catalog_get("coshcos", {{"delta", 2.19}}).taylor_coeffs(16));
  CHECK(cc.tag == HTag::Hk);
  CHECK(cc.k == 4);
  CHECK(cc.positive_at_zero);
  CHECK(classify_H(catalog_get("exp").taylor_coeffs(16)).tag == HTag::HBullet);
  CHECK(classify_H(catalog_get("cosh").taylor_coeffs(16)).tag == HTag::H2Bullet);
  CHECK(classify_H(catalog_get("const").taylor_coeffs(16)).tag == HTag::Constant);
  const std::vector<double> neg{1, 0, -1, 0, 1, 0, 1, 0, 1};
  CHECK(classify_H(neg).tag == HTag::None);
  CHECK(classify_H(neg).negative_indices == std::vector<int>{2});
}

TEST_CASE("coshcos Taylor coefficients from the closed forms") {
  const double delta = 2.19;
  const auto a = catalog_get("coshcos", {{"delta", delta}}).taylor_coeffs(12);
  // cosh x + cos x = 2 sum x^{4k}/(4k)!: the x^2 terms cancel exactly.
  CHECK(a[0] == doctest::Approx(2.0 + delta).epsilon(1e-15));
  CHECK(a[2] == 0.0);
  CHECK(rel_err(a[4], 2.0 / 24.0) < 1e-15);
  CHECK(rel_err(a[8], 2.0 / 40320.0) < 1e-14);
  // Independent check of the x^4 coefficient: fourth central difference at 0.
  const auto p = catalog_get("coshcos", {{"delta", delta}});
  const double h = 0.05;
  const double d4 = (eval_psi(p, 2 * h) - 4 * eval_psi(p, h) + 6 * eval_psi(p, 0.0) -
                     4 * eval_psi(p, -h) + eval_psi(p, -2 * h)) /
                    std::pow(h, 4);
  CHECK(std::fabs(d4 / 24.0 - a[4]) < 1e-3);
}

TEST_CASE("evenness is bit-exact") {
  std::mt19937_64 gen(3);
  for (const auto& p : even_corpus())
    for (int i = 0; i < 40; ++i) {
      const double x = testutil::uniform(gen, 0.0, 8.0);
      CHECK(eval_psi(p, x) == eval_psi(p, -x));
      CHECK(eval_log_psi(p, x) == eval_log_psi(p, -x));
    }
}

TEST_CASE("derivative matches central differences") {
  const double h = 1e-5;
  for (const auto& p : compact_corpus())
    for (double x = -5.0; x <= 5.0; x += 0.25) {
      const double fd = (eval_psi(p, x + h) - eval_psi(p, x - h)) / (2 * h);
      const double d = eval_psi_prime(p, x);
      CHECK(std::fabs(d - fd) <= 1e-6 * std::max(1.0, std::fabs(d)));
    }
}

TEST_CASE("series reproduces psi for compact measures") {
  const std::vector<PsiFunction> ps{
      uniform_psi(),
      PsiFunction::from_measure(MeasureSpec::atom(0.4, 0.3) + MeasureSpec::atom(1.5, 0.7)),
      PsiFunction::from_measure(MeasureSpec::table({0.0, 0.5, 1.0, 1.5}, {0.0, 1.0, 0.5, 0.0})),
      PsiFunction::from_measure(MeasureSpec::uniform(0.5, 2.0, 0.5) + MeasureSpec::atom(0.3, 0.25)),
  };
  for (const auto& p : ps) {
    const auto g = series_coeffs(p, 30);
    for (double x = -3.0; x <= 3.0; x += 0.25) {
      long double s = 0;
      for (int n = 0; n <= 30; ++n)
        s += std::exp(static_cast<long double>(g.log_abs(n)) + 2 * n * std::log(std::fabs(x) + 0.0L) -
                      std::lgamma(2.0L * n + 1));
      if (x == 0.0) s = g.value(0);
      CHECK(std::fabs(eval_psi(p, x) - static_cast<double>(s)) <= 1e-10 * eval_psi(p, x));
    }
  }
}

TEST_CASE("exp of eval_log agrees with eval") {
  for (const auto& p : even_corpus())
    for (double x = 0.0; x <= 25.0; x += 0.5) {
      double v;
      try {
        v = eval_psi(p, x);
      } catch (const Error&) {
        continue;
      }
      if (!std::isfinite(v)) continue;
      CHECK(std::fabs(std::exp(eval_log_psi(p, x)) - v) <= 1e-10 * v);
    }
}

TEST_CASE("psi is positive on a probe grid") {
  for (const auto& p : even_corpus())
    for (double x = 0.0; x <= 10.0; x += 0.1) CHECK(eval_log_psi(p, x) > -700.0);
}

TEST_CASE("series input validation") {
  CHECK_THROWS_AS(PsiFunction::from_series({0.0, 1.0}), Error);
  CHECK_THROWS_AS(PsiFunction::from_series({1.0, NAN}), Error);
  const auto s = PsiFunction::from_series({1.0, 0.5});
  CHECK(rel_err(eval_psi(s, 2.0), 1.0 + 0.5 * 4.0) < 1e-15);
}

TEST_CASE("exp is flagged as not even") {
  const auto e = catalog_get("exp");
  CHECK_FALSE(e.even());
  CHECK_FALSE(e.annotations().empty());
}

TEST_CASE("coshcos threshold") {
  const double c = std::cosh(std::numbers::pi);
  CHECK(rel_err(coshcos_threshold(), 2 * c / (c - 1)) < 1e-15);
  CHECK(coshcos_threshold() == doctest::Approx(2.1888226).epsilon(1e-7));
}

TEST_CASE("psi JSON round trip") {
  for (const auto& p : even_corpus()) {
    const auto back = psi_from_json(nlohmann::json::parse(psi_to_json(p).dump()));
    for (double x : {0.0, 0.3, 1.7, 4.0}) CHECK(eval_log_psi(back, x) == eval_log_psi(p, x));
  }
  CHECK_THROWS_AS(psi_from_json(nlohmann::json::parse(R"({"catalog": {"nam": "x"}})")), Error);
  CHECK_THROWS_AS(psi_from_json(nlohmann::json::parse(R"({})")), Error);
}
