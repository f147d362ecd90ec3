// Exercises the shared library strictly through its C interface.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>

#include "coshtx/coshtx.h"

TEST_CASE("version and status strings") {
  CHECK(std::string(coshtx_version()) == "0.1.0");
  CHECK(std::string(coshtx_status_string(COSHTX_OK)) == "ok");
  CHECK(std::string(coshtx_status_string(COSHTX_ERR_ILL_CONDITIONED)) == "ill-conditioned");
}

TEST_CASE("catalog psi evaluation") {
  const char* keys[] = {"xi", "eta"};
  const double vals[] = {1.0, 0.0};
  coshtx_psi* p = nullptr;
  REQUIRE(coshtx_psi_catalog("bmv", keys, vals, 2, &p) == COSHTX_OK);
  double v = 0;
  CHECK(coshtx_psi_eval(p, 1.0, &v) == COSHTX_OK);
  CHECK(v == doctest::Approx(std::cosh(1.0)).epsilon(1e-15));
  CHECK(coshtx_psi_eval_log(p, 100.0, &v) == COSHTX_OK);
  CHECK(v == doctest::Approx(99.3068528194).epsilon(1e-12));
  CHECK(coshtx_psi_eval_prime(p, 1.0, &v) == COSHTX_OK);
  CHECK(v == doctest::Approx(std::sinh(1.0)).epsilon(1e-14));
  CHECK(coshtx_psi_eval_phi(p, 4.0, &v) == COSHTX_OK);
  CHECK(v == doctest::Approx(std::cosh(2.0)).epsilon(1e-14));
  double b0 = 0, a0 = 0;
  CHECK(coshtx_psi_growth_rate(p, &b0, &a0) == COSHTX_OK);
  CHECK(b0 == doctest::Approx(1.0).epsilon(1e-3));
  // Overflow in the linear domain is reported, the log form is not.
  CHECK(coshtx_psi_eval(p, 1000.0, &v) == COSHTX_ERR_OVERFLOW);
  CHECK(std::strlen(coshtx_last_error()) > 0);
  coshtx_psi_free(p);
}

TEST_CASE("catalog errors map to status codes") {
  coshtx_psi* p = nullptr;
  CHECK(coshtx_psi_catalog("nope", nullptr, nullptr, 0, &p) == COSHTX_ERR_UNKNOWN_CATALOG);
  const char* keys[] = {"xi"};
  const double bad[] = {-1.0};
  CHECK(coshtx_psi_catalog("bmv", keys, bad, 1, &p) == COSHTX_ERR_BAD_PARAMS);
  CHECK(coshtx_psi_from_json("{not json", &p) == COSHTX_ERR_INVALID_INPUT);
  CHECK(coshtx_psi_eval(nullptr, 0.0, nullptr) == COSHTX_ERR_INVALID_INPUT);
  CHECK(p == nullptr);
}

TEST_CASE("measures and series coefficients") {
  coshtx_measure* m = nullptr;
  REQUIRE(coshtx_measure_from_json(R"({"densities": [{"kind": "uniform", "a": 0, "b": 1}]})", &m) ==
          COSHTX_OK);
  double g = 0;
  CHECK(coshtx_measure_moment(m, 3, &g) == COSHTX_OK);
  CHECK(g == doctest::Approx(1.0 / 7).epsilon(1e-13));
  CHECK(coshtx_measure_support_sup(m, &g) == COSHTX_OK);
  CHECK(g == 1.0);
  coshtx_psi* p = nullptr;
  REQUIRE(coshtx_psi_from_measure(m, &p) == COSHTX_OK);
  double c[5];
  CHECK(coshtx_psi_series_coeffs(p, 4, c) == COSHTX_OK);
  for (int n = 0; n <= 4; ++n) CHECK(c[n] == doctest::Approx(1.0 / (2 * n + 1)).epsilon(1e-12));
  coshtx_psi_free(p);
  coshtx_measure_free(m);

  REQUIRE(coshtx_psi_catalog("erf-gauss", nullptr, nullptr, 0, &p) == COSHTX_OK);
  double big[301];
  CHECK(coshtx_psi_series_coeffs(p, 300, big) == COSHTX_ERR_OVERFLOW);
  CHECK(coshtx_psi_log_series_coeffs(p, 300, big) == COSHTX_OK);
  CHECK(big[300] == doctest::Approx(std::lgamma(301.0)).epsilon(1e-12));
  coshtx_psi_free(p);
}

TEST_CASE("affine maps and Radon-Nikodym derivative") {
  coshtx_psi* p = nullptr;
  REQUIRE(coshtx_psi_catalog("cosh", nullptr, nullptr, 0, &p) == COSHTX_OK);
  coshtx_affine* T = nullptr;
  const double a[] = {1.0};
  REQUIRE(coshtx_affine_create(1, nullptr, a, &T) == COSHTX_OK);
  const double x[] = {0.0};
  double h = 0;
  CHECK(coshtx_rn_derivative(p, T, x, &h) == COSHTX_OK);
  CHECK(h == doctest::Approx(std::cosh(1.0)).epsilon(1e-14));
  coshtx_affine_free(T);
  const double singular[] = {1, 2, 2, 4};
  const double a2[] = {0, 0};
  CHECK(coshtx_affine_create(2, singular, a2, &T) == COSHTX_ERR_INVALID_INPUT);
  CHECK(coshtx_affine_from_json(R"({"kappa": 2, "a": [1]})", &T) == COSHTX_ERR_INVALID_INPUT);
  coshtx_psi_free(p);
}

TEST_CASE("bundles") {
  coshtx_bundle* b = nullptr;
  const double u[] = {1.0, 1.0 / 3, 1.0 / 5, 1.0 / 7, 1.0 / 9, 1.0 / 11, 1.0 / 13, 1.0 / 15, 1.0 / 17};
  REQUIRE(coshtx_recover(u, 9, 4, &b) == COSHTX_OK);
  CHECK(coshtx_bundle_ok(b) == 1);
  CHECK(std::string(coshtx_bundle_report(b)).find("nodes") != std::string::npos);
  bool residuals = false;
  for (size_t i = 0; i < coshtx_bundle_file_count(b); ++i)
    if (std::string(coshtx_bundle_file_name(b, i)) == "residuals.csv") residuals = true;
  CHECK(residuals);
  CHECK(coshtx_bundle_file_name(b, 1000) == nullptr);
  coshtx_bundle_free(b);

  const double atom[] = {1, 4, 16, 64, 256, 1024, 4096};
  CHECK(coshtx_recover(atom, 7, 3, &b) == COSHTX_ERR_ILL_CONDITIONED);

  REQUIRE(coshtx_example_count() == 7);
  CHECK(std::string(coshtx_example_id(0)) == "sinhc");
  CHECK(coshtx_example_id(7) == nullptr);
  REQUIRE(coshtx_reproduce("sinhc", &b) == COSHTX_OK);
  CHECK(coshtx_bundle_ok(b) == 1);
  coshtx_bundle_free(b);
  CHECK(coshtx_reproduce("nope", &b) == COSHTX_ERR_INVALID_INPUT);
}

TEST_CASE("classify is deterministic through the C API") {
  coshtx_psi* p = nullptr;
  const char* keys[] = {"delta"};
  const double d[] = {2.19};
  REQUIRE(coshtx_psi_catalog("coshcos", keys, d, 1, &p) == COSHTX_OK);
  coshtx_affine* T = nullptr;
  REQUIRE(coshtx_affine_from_json(R"({"kappa": 1, "a": [0.1]})", &T) == COSHTX_OK);
  coshtx_bundle *b1 = nullptr, *b2 = nullptr;
  REQUIRE(coshtx_classify(p, T, 10, 7, &b1) == COSHTX_OK);
  REQUIRE(coshtx_classify(p, T, 10, 7, &b2) == COSHTX_OK);
  CHECK(std::string(coshtx_bundle_report(b1)) == coshtx_bundle_report(b2));
  CHECK(std::string(coshtx_bundle_report(b1)).find("hankel-witness") != std::string::npos);
  coshtx_bundle_free(b1);
  coshtx_bundle_free(b2);
  coshtx_affine_free(T);
  coshtx_psi_free(p);
}
