#include <doctest.h>

#include <cmath>

#include "coshtx/report.hpp"
#include "coshtx/verification.hpp"

using namespace coshtx;

TEST_CASE("number formatting keeps 17 significant digits") {
  CHECK(report::format_double(1.0) == "1.0");
  CHECK(report::format_double(0.1) == "0.10000000000000001");
  CHECK(report::format_double(INFINITY) == "inf");
  CHECK(report::dump(report::Json{{"x", INFINITY}}, 0) == R"({"x":"inf"})");
  const double x = 2.0 / 3.0;
  CHECK(report::read_double(nlohmann::json::parse(report::format_double(x))) == x);
  const auto j = nlohmann::json::parse(report::dump(report::Json{{"x", -INFINITY}}));
  CHECK(report::read_double(j["x"]) == -INFINITY);
}

TEST_CASE("reports are byte-identical across runs") {
  const auto p = catalog_get("coshcos", {{"delta", 2.19}});
  const auto a = report::dump(report::analyze_psi(p).report);
  const auto b = report::dump(report::analyze_psi(p).report);
  CHECK(a == b);
  ClassifyPlan plan;
  plan.seed = 5;
  const auto T = AffineMap::translation({0.1});
  CHECK(report::dump(report::classify(p, T, plan).report) == report::dump(report::classify(p, T, plan).report));
}

TEST_CASE("reports re-parse as JSON") {
  const std::vector<PsiFunction> ps{catalog_get("sinhc"), catalog_get("const"), catalog_get("expsq")};
  for (const auto& p : ps) {
    const auto bundle = report::analyze_psi(p);
    const auto j = nlohmann::json::parse(report::dump(bundle.report));
    CHECK(j.contains("psi"));
    CHECK(j.contains("growth_rate"));
    CHECK(j.contains("h_class"));
    CHECK(j.contains("support"));
  }
}

TEST_CASE("analyze-psi examples") {
  const auto s = nlohmann::json::parse(report::dump(report::analyze_psi(catalog_get("sinhc")).report));
  CHECK(s["exponential_convexity"]["verdict"] == "consistent");
  CHECK(std::fabs(report::read_double(s["growth_rate"]["b0"]) - 1.0) < 0.05);
  CHECK(s["h_class"]["tag"] == "H_2bullet");

  const auto c = nlohmann::json::parse(report::dump(report::analyze_psi(catalog_get("const")).report));
  CHECK(c["exponential_convexity"]["verdict"] == "consistent");
  CHECK(report::read_double(c["growth_rate"]["b0"]) == 0.0);
  CHECK(c["h_class"]["tag"] == "constant");

  const auto e = nlohmann::json::parse(report::dump(report::analyze_psi(catalog_get("expsq")).report));
  CHECK(e["exponential_convexity"]["verdict"] == "consistent");
  CHECK(std::isinf(report::read_double(e["growth_rate"]["b0"])));
  CHECK(e["h_class_phi"]["tag"] == "H_bullet");
}

TEST_CASE("every documented example reproduces") {
  for (const auto& id : verification::example_ids()) {
    INFO(id);
    const auto b = verification::reproduce(id);
    CHECK(b.ok);
  }
  CHECK_THROWS(verification::criteria_for("nope"));
}
