#include <doctest.h>

#include <cmath>

#include "coshtx/support.hpp"
#include "test_util.hpp"

using namespace coshtx;

namespace {

MomentSequence uniform_moments(int N) {
  std::vector<double> l;
  for (int n = 0; n <= N; ++n) l.push_back(-std::log(2.0 * n + 1));
  return MomentSequence::from_logs(l);
}

MomentSequence atom_moments(double c, int N) {
  std::vector<double> l;
  for (int n = 0; n <= N; ++n) l.push_back(2 * n * std::log(c));
  return MomentSequence::from_logs(l);
}

std::vector<std::pair<PsiFunction, double>> compact_corpus() {
  return {
      {catalog_get("const"), 0.0},
      {PsiFunction::from_measure(MeasureSpec::atom(0.5)), 0.5},
      {PsiFunction::from_measure(MeasureSpec::atom(1.0)), 1.0},
      {PsiFunction::from_measure(MeasureSpec::atom(2.0)), 2.0},
      {PsiFunction::from_measure(MeasureSpec::uniform(0, 1)), 1.0},
      {PsiFunction::from_measure(MeasureSpec::atom(0.4, 0.3) + MeasureSpec::atom(1.5, 0.7)), 1.5},
      {PsiFunction::from_measure(MeasureSpec::atom(0.8, 0.9) + MeasureSpec::atom(1.2, 0.1)), 1.2},
  };
}

}  // namespace

TEST_CASE("support_from_moments examples") {
  const auto u = support_from_moments(uniform_moments(200));
  // Closed-form root test s_n = (2n+1)^{-1/2n}.
  CHECK(u.tail == doctest::Approx(std::pow(401.0, -1.0 / 400)).epsilon(1e-12));
  CHECK(std::fabs(u.estimate - 1.0) <= 0.02);
  CHECK(support_from_moments(atom_moments(2.0, 60)).estimate == doctest::Approx(2.0).epsilon(1e-12));
  std::vector<double> f;
  for (int n = 0; n <= 200; ++n) f.push_back(std::lgamma(n + 1.0));
  const auto fe = support_from_moments(MomentSequence::from_logs(f));
  CHECK(fe.infinite);
  CHECK(std::isinf(fe.estimate));
}

TEST_CASE("support_from_logderiv examples") {
  const auto u = support_from_logderiv(catalog_get("sinhc"), 50.0);
  // g(x) = coth x - 1/x.
  CHECK(u.tail == doctest::Approx(1.0 / std::tanh(50.0) - 1.0 / 50.0).epsilon(1e-12));
  CHECK(std::fabs(u.estimate - 1.0) <= 0.05);
  for (const auto& [x, g] : u.curve) CHECK(g == doctest::Approx(1.0 / std::tanh(x) - 1.0 / x).epsilon(1e-9));
  CHECK(support_from_logderiv(catalog_get("const")).estimate == 0.0);
  const auto c = support_from_logderiv(catalog_get("cosh"));
  for (const auto& [x, g] : c.curve) CHECK(g == doctest::Approx(std::tanh(x)).epsilon(1e-12));
  CHECK(c.estimate == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("support_from_phi examples") {
  CHECK(support_from_phi(catalog_get("cosh")).estimate == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(support_from_phi(catalog_get("const")).estimate == 0.0);
  CHECK(std::fabs(support_from_phi(catalog_get("sinhc"), 2500.0).estimate - 1.0) <= 0.05);
}

TEST_CASE("support_agreement examples") {
  for (const auto& e : support_agreement(catalog_get("sinhc")).estimates) {
    CHECK(e.estimate >= 0.95);
    CHECK(e.estimate <= 1.05);
  }
  for (const auto& e : support_agreement(PsiFunction::from_measure(MeasureSpec::atom(2.0))).estimates) {
    CHECK(e.estimate >= 1.9);
    CHECK(e.estimate <= 2.1);
  }
  const auto x = support_agreement(catalog_get("expsq"));
  int infinite = 0;
  for (const auto& e : x.estimates)
    if ((e.method == "moments" || e.method == "logderiv") && std::isinf(e.estimate)) ++infinite;
  CHECK(infinite == 2);
}

TEST_CASE("root test never exceeds the support") {
  for (const auto& [p, sup] : compact_corpus()) {
    const auto e = support_from_moments(series_coeffs(p, 120));
    for (const auto& [n, s] : e.curve) CHECK(s <= sup + 1e-9);
  }
}

TEST_CASE("log-derivative never exceeds the support") {
  for (const auto& [p, sup] : compact_corpus()) {
    const auto e = support_from_logderiv(p, 50.0);
    for (const auto& [x, g] : e.curve) CHECK(g <= sup + 1e-9);
  }
}

TEST_CASE("estimators agree with the support on the corpus") {
  for (const auto& [p, sup] : compact_corpus()) {
    for (const auto& e : support_agreement(p).estimates) {
      INFO(p.label(), " ", e.method);
      if (sup == 0.0)
        CHECK(std::fabs(e.estimate) <= 1e-6);
      else
        CHECK(std::fabs(e.estimate - sup) <= 0.05 * sup);
    }
  }
}
