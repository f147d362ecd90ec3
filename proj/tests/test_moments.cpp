#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "coshtx/error.hpp"
#include "coshtx/moments.hpp"
#include "coshtx/operators.hpp"
#include "coshtx/support.hpp"
#include "test_util.hpp"

using namespace coshtx;
using testutil::rel_err;

namespace {

MomentSequence from_fn(int N, double (*logf)(int)) {
  std::vector<double> l;
  for (int n = 0; n <= N; ++n) l.push_back(logf(n));
  return MomentSequence::from_logs(l);
}

double log_uniform(int n) { return -std::log(2.0 * n + 1); }
double log_fact(int n) { return std::lgamma(n + 1.0); }

MomentSequence atom_moments(const std::vector<Atom>& atoms, int N) {
  std::vector<double> v;
  for (int n = 0; n <= N; ++n) {
    long double s = 0;
    for (const auto& a : atoms) s += a.w * std::pow(static_cast<long double>(a.u), 2 * n);
    v.push_back(static_cast<double>(s));
  }
  return MomentSequence::from_values(v);
}

}  // namespace

TEST_CASE("is_stieltjes examples") {
  CHECK(is_stieltjes(from_fn(21, log_uniform), 10).verdict == TestVerdict::Consistent);
  std::vector<double> geo;
  for (int n = 0; n <= 21; ++n) geo.push_back(std::pow(1.3, n));
  CHECK(is_stieltjes(MomentSequence::from_values(geo), 10).verdict != TestVerdict::Refuted);

  const auto cc = catalog_get("coshcos", {{"delta", 2.19}});
  std::vector<double> s;
  for (int n = 0; n <= 21; ++n) s.push_back(eval_psi(cc, 0.1 * n));
  const auto r = is_stieltjes(MomentSequence::from_values(s), 10);
  CHECK(r.verdict == TestVerdict::Refuted);
  REQUIRE(r.failure);
  // Oracle: Eigen on the explicit Hankel at the reported (m, shift).
  const int m = r.failure->m, sh = r.failure->shift;
  Eigen::MatrixXd h(m + 1, m + 1);
  for (int i = 0; i <= m; ++i)
    for (int j = 0; j <= m; ++j) h(i, j) = s[i + j + sh];
  CHECK(testutil::eigen_min_eig_normalized(h) <= -kNotPsdTol);
}

TEST_CASE("factorial_growth_test examples") {
  const auto f = factorial_growth_test(from_fn(40, log_fact));
  CHECK(f.verdict == GrowthVerdict::Vanishing);
  for (int n = 2; n <= 20; ++n) CHECK(f.r[n] <= 1.0 / n);

  std::vector<double> c;
  for (int n = 0; n <= 40; ++n) c.push_back(2 * n * std::log(1.7));
  CHECK(factorial_growth_test(MomentSequence::from_logs(c)).verdict == GrowthVerdict::Vanishing);

  std::vector<double> big;
  for (int n = 0; n <= 40; ++n) big.push_back(std::lgamma(2.0 * n + 1) + n * std::log(2.0));
  const auto b = factorial_growth_test(MomentSequence::from_logs(big));
  CHECK(b.verdict == GrowthVerdict::NonVanishing);
  CHECK(b.r.back() == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("carleman_determinacy examples") {
  CHECK(carleman_determinacy(from_fn(60, log_uniform)).verdict == CarlemanVerdict::Determinate);
  CHECK(carleman_determinacy(from_fn(60, log_fact)).verdict == CarlemanVerdict::Determinate);
  // q^{-n^2/2} with q = e^{-2}: log gamma_n = n^2.
  std::vector<double> l;
  for (int n = 0; n <= 60; ++n) l.push_back(static_cast<double>(n) * n);
  const auto r = carleman_determinacy(MomentSequence::from_logs(l));
  CHECK(r.verdict == CarlemanVerdict::Inconclusive);
  CHECK(r.label == "heuristic");
}

TEST_CASE("recover_measure examples") {
  const double c = 1.3;
  const auto one = recover_measure(atom_moments({{c, 1.0}}, 4), 1);
  REQUIRE(one.nodes.size() == 1);
  CHECK(rel_err(one.measure.atoms()[0].u, c) < 1e-12);
  CHECK(rel_err(one.weights[0], 1.0) < 1e-12);

  const auto u = recover_measure(from_fn(12, log_uniform), 4);
  REQUIRE(u.nodes.size() == 4);
  for (double t : u.nodes) {
    CHECK(t > 0.0);
    CHECK(t <= 1.0 + 1e-6);
  }
  // Oracle: re-integrate the recovered atoms and compare with 1/(2n+1).
  for (int n = 0; n <= 7; ++n) {
    long double s = 0;
    for (std::size_t i = 0; i < 4; ++i) s += u.weights[i] * std::pow(static_cast<long double>(u.nodes[i]), n);
    CHECK(rel_err(static_cast<double>(s), 1.0 / (2 * n + 1)) <= 1e-10);
  }

  const auto f = recover_measure(from_fn(12, log_fact), 3);
  REQUIRE(f.nodes.size() == 3);
  for (int n = 0; n <= 5; ++n) {
    long double s = 0;
    for (std::size_t i = 0; i < 3; ++i) s += f.weights[i] * std::pow(static_cast<long double>(f.nodes[i]), n);
    CHECK(rel_err(static_cast<double>(s), std::tgamma(n + 1.0)) <= 1e-8);
  }
  // The 3-point Gauss-Laguerre nodes are the roots of L_3.
  const double lag[] = {0.41577455678347908, 2.2942803602790417, 6.2899450829374792};
  for (int i = 0; i < 3; ++i) CHECK(rel_err(f.nodes[i], lag[i]) < 1e-9);
}

TEST_CASE("recover_measure rejects rank-deficient data") {
  CHECK_THROWS_AS(recover_measure(atom_moments({{2.0, 1.0}}, 8), 3), Error);
  try {
    recover_measure(atom_moments({{2.0, 1.0}}, 8), 3);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IllConditioned);
  }
}

TEST_CASE("round trip through the transform for atomic measures") {
  std::mt19937_64 gen(42);
  for (int trial = 0; trial < 40; ++trial) {
    const int k = 1 + static_cast<int>(gen() % 3);
    std::vector<Atom> atoms;
    double u = testutil::uniform(gen, 0.1, 0.6);
    for (int i = 0; i < k; ++i) {
      atoms.push_back({u, testutil::uniform(gen, 0.2, 1.0)});
      u += testutil::uniform(gen, 0.3, 0.8);
    }
    const auto p = PsiFunction::from_measure(MeasureSpec(atoms, {}));
    const auto rec = recover_measure(series_coeffs(p, 2 * k + 2), k);
    REQUIRE(rec.measure.atoms().size() == static_cast<std::size_t>(k));
    auto got = rec.measure.atoms();
    std::sort(got.begin(), got.end(), [](const Atom& a, const Atom& b) { return a.u < b.u; });
    for (int i = 0; i < k; ++i) {
      CHECK(std::fabs(got[i].u - atoms[i].u) < 1e-8);
      CHECK(std::fabs(got[i].w - atoms[i].w) < 1e-8);
    }
    CHECK(support_sup(rec.measure) <= support_from_moments(series_coeffs(p, 40)).estimate * (1 + 1e-3));
  }
}

TEST_CASE("genuine transforms give Stieltjes series") {
  const std::vector<PsiFunction> ps{
      catalog_get("sinhc"), catalog_get("cosh"), catalog_get("erf-gauss"),
      catalog_get("bmv", {{"xi", 0.5}, {"eta", 10}}),
      PsiFunction::from_measure(MeasureSpec::atom(0.4, 0.3) + MeasureSpec::atom(1.5, 0.7)),
      PsiFunction::from_measure(MeasureSpec::uniform(0.5, 2.0, 0.5) + MeasureSpec::atom(0.3, 0.25)),
      PsiFunction::from_measure(MeasureSpec::table({0.0, 0.5, 1.0, 1.5}, {0.0, 1.0, 0.5, 0.0}))};
  for (const auto& p : ps)
    for (int m = 2; m <= 8; m += 3) CHECK(is_stieltjes(series_coeffs(p, 2 * m + 1), m).verdict != TestVerdict::Refuted);
}

TEST_CASE("expsq orbit sequence has the Gaussian closed form") {
  const auto p = catalog_get("expsq");
  const std::vector<std::pair<double, double>> cases{{0.0, 1.0}, {1.0, 0.5}, {-2.0, 0.3}};
  for (const auto& [x, a] : cases) {
    const auto T = AffineMap::translation({a});
    const double xs[] = {x};
    const auto s = orbit_sequence(p, T, xs, 8);
    // alpha r^n q^{-n^2/2} with alpha = e^{x^2}, r = e^{2xa}, q = e^{-2a^2}.
    for (int n = 0; n <= 8; ++n) {
      const double lg = x * x + n * 2 * x * a + 0.5 * n * n * 2 * a * a;
      CHECK(rel_err(std::exp(s.log_abs(n)), std::exp(lg)) < 1e-12);
    }
  }
}
