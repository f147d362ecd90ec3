#include "coshtx/verification.hpp"

#include <cmath>
#include <cstdio>
#include <algorithm>
#include <random>
#include <tuple>

#include "coshtx/error.hpp"

namespace coshtx::verification {

using report::Json;

namespace {

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

CriterionResult start(int id, std::string name) {
  CriterionResult r;
  r.id = id;
  r.name = std::move(name);
  return r;
}

double rel(double got, double want) { return std::fabs(got - want) / std::fabs(want); }

CriterionResult c1() {
  CriterionResult r = start(1, "closed-form transform of uniform[0,1]");
  const auto p = PsiFunction::from_measure(MeasureSpec::uniform(0.0, 1.0));
  double worst = 0.0;
  for (double x : {0.0, 0.5, 1.0, 2.0, 5.0, 10.0}) {
    const double want = x == 0.0 ? 1.0 : std::sinh(x) / x;
    worst = std::max(worst, rel(p.eval(x), want));
  }
  r.pass = worst <= 1e-12;
  r.numbers["max_rel_error"] = worst;
  r.detail = fmt("max relative error %.3g (tol 1e-12)", worst);
  return r;
}

CriterionResult c2() {
  CriterionResult r = start(2, "error-function identity for 2u exp(-u^2)");
  const auto q = PsiFunction::from_measure(MeasureSpec::gauss2u());
  const auto c = catalog_get("erf-gauss");
  double worst = 0.0;
  for (double x : {0.0, 1.0, 2.0, 4.0}) worst = std::max(worst, rel(q.eval(x), c.eval(x)));
  r.pass = worst <= 1e-8;
  r.numbers["max_rel_error"] = worst;
  r.detail = fmt("max relative error %.3g (tol 1e-8)", worst);
  return r;
}

CriterionResult c3() {
  CriterionResult r = start(3, "factorial growth of gamma_n = n!");
  std::vector<double> logs;
  for (int n = 0; n <= 20; ++n) logs.push_back(std::lgamma(n + 1.0));
  const auto fg = factorial_growth_test(MomentSequence::from_logs(logs, "n!"));
  bool bound = true;
  for (int n = 2; n <= 20; ++n)
    if (fg.r[n] > 1.0 / n) bound = false;
  r.pass = fg.verdict == GrowthVerdict::Vanishing && bound;
  r.numbers["verdict"] = to_string(fg.verdict);
  r.numbers["r_n_le_1_over_n"] = bound;
  r.detail = std::string("verdict ") + to_string(fg.verdict) + (bound ? ", r_n <= 1/n" : ", r_n bound violated");
  return r;
}

CriterionResult c4() {
  CriterionResult r = start(4, "support trio");
  bool ok = true;
  std::string detail;
  for (const auto& [name, m, lo, hi] :
       {std::tuple{"uniform", MeasureSpec::uniform(0.0, 1.0), 0.95, 1.05},
        std::tuple{"atom2", MeasureSpec::atom(2.0), 1.9, 2.1}}) {
    const auto p = PsiFunction::from_measure(m);
    const auto sa = support_agreement(p);
    Json est;
    for (const auto& e : sa.estimates) {
      est[e.method] = e.estimate;
      if (!(e.estimate >= lo && e.estimate <= hi)) ok = false;
      detail += std::string(name) + "." + e.method + "=" + report::format_double(e.estimate) + " ";
    }
    r.numbers[name] = est;
  }
  r.pass = ok;
  r.detail = detail;
  return r;
}

CriterionResult c5() {
  CriterionResult r = start(5, "BMV family exponential convexity");
  double worst = INFINITY;
  for (const auto& [xi, eta] : {std::pair{1.0, 0.0}, std::pair{2.0, 5.0}, std::pair{0.5, 10.0}}) {
    const auto p = catalog_get("bmv", {{"xi", xi}, {"eta", eta}});
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      std::mt19937_64 g(seed);
      std::vector<double> pts;
      while (pts.size() < 8) {
        const double x = -3.0 + 6.0 * static_cast<double>(g() >> 11) * 0x1.0p-53;
        if (std::find(pts.begin(), pts.end(), x) == pts.end()) pts.push_back(x);
      }
      worst = std::min(worst, min_eig_normalized(gram_matrix(p, pts)).min_eigenvalue);
    }
  }
  r.pass = worst >= -1e-9;
  r.numbers["min_eigenvalue"] = worst;
  r.detail = fmt("min normalized eigenvalue %.3g (tol -1e-9)", worst);
  return r;
}

CriterionResult c6() {
  CriterionResult r = start(6, "cosh + cos + delta counterexample");
  const double delta = coshcos_threshold();
  const auto p = catalog_get("coshcos", {{"delta", delta}});
  const auto lc = logconvexity_test(p, 20.0, 0.01);
  std::vector<double> v;
  for (int n = 0; n <= 21; ++n) v.push_back(p.eval(0.1 * n));
  const auto st = is_stieltjes(MomentSequence::from_values(v, "psi(0.1 n)"), 10);
  const bool refuted = st.failure && st.failure->report.witness_form < 0.0;
  r.pass = lc.yes && refuted;
  r.numbers["delta"] = delta;
  r.numbers["min_theta_over_psi_sq"] = lc.min_ratio;
  r.numbers["stieltjes"] = report::to_json(st);
  r.detail = fmt("delta %.17g, min Theta/psi^2 %.3g", delta, lc.min_ratio) +
             (refuted ? fmt(", Hankel refuted at m=%g shift=%g", st.failure->m, st.failure->shift)
                      : std::string(", no Hankel refutation"));
  return r;
}

CriterionResult c7() {
  CriterionResult r = start(7, "e^{x^2}: orbit structure and unboundedness");
  const auto p = catalog_get("expsq");
  double worst = 0.0;
  bool stieltjes = true;
  for (const auto& [x, a] : {std::pair{0.0, 1.0}, std::pair{1.0, 0.5}, std::pair{-2.0, 0.3}}) {
    const double alpha = std::exp(x * x), rr = std::exp(2.0 * x * a), q = std::exp(-2.0 * a * a);
    for (int n = 0; n <= 8; ++n) {
      const double want = alpha * std::pow(rr, n) * std::pow(q, -0.5 * n * n);
      worst = std::max(worst, rel(p.eval(std::fabs(x + n * a)), want));
    }
    const auto seq = orbit_sequence(p, AffineMap::translation({a}), std::vector<double>{x}, 11);
    if (is_stieltjes(seq, 5).verdict != TestVerdict::Consistent) stieltjes = false;
  }
  const auto nr = operator_norm_sq(p, AffineMap::translation({1.0}));
  r.pass = worst <= 1e-12 && stieltjes && nr.verdict == Boundedness::Unbounded;
  r.numbers["max_rel_error"] = worst;
  r.numbers["stieltjes_m5"] = stieltjes;
  r.numbers["bounded"] = to_string(nr.verdict);
  r.detail = fmt("structure error %.3g, ", worst) + (stieltjes ? "Hankel m<=5 psd, " : "Hankel failed, ") +
             "bounded=" + to_string(nr.verdict);
  return r;
}

CriterionResult c8() {
  CriterionResult r = start(8, "norm formula for cosh with translation symbol");
  const auto p = catalog_get("cosh");
  double worst = 0.0;
  for (double a : {0.5, 1.0, 2.0}) {
    const auto nr = operator_norm_sq(p, AffineMap::translation({a}));
    worst = std::max(worst, nr.verdict == Boundedness::Bounded ? rel(nr.norm_sq, std::exp(a)) : INFINITY);
  }
  r.pass = worst <= 1e-4;
  r.numbers["max_rel_error"] = worst;
  r.detail = fmt("max relative error vs e^{|a|} %.3g (tol 1e-4)", worst);
  return r;
}

CriterionResult c9() {
  CriterionResult r = start(9, "measure recovery round trip");
  const auto two = PsiFunction::from_measure(MeasureSpec({{0.4, 0.3}, {1.5, 0.7}}, {}));
  const auto rec = recover_measure(series_coeffs(two, 6), 2);
  const auto& at = rec.measure.atoms();
  const double e2 = std::max({std::fabs(at[0].u - 0.4), std::fabs(at[0].w - 0.3),
                              std::fabs(at[1].u - 1.5), std::fabs(at[1].w - 0.7)});
  const auto uni = PsiFunction::from_measure(MeasureSpec::uniform(0.0, 1.0));
  const auto ru = recover_measure(series_coeffs(uni, 8), 4);
  double res = 0.0;
  for (double v : ru.residuals) res = std::max(res, v);
  bool nodes_ok = true;
  for (double t : ru.nodes) nodes_ok = nodes_ok && t >= 0.0 && t <= 1.0 + 1e-6;
  r.pass = e2 <= 1e-8 && res <= 1e-10 && nodes_ok;
  r.numbers["two_atom_max_error"] = e2;
  r.numbers["uniform_max_residual"] = res;
  r.numbers["uniform_nodes_in_range"] = nodes_ok;
  r.detail = fmt("two-atom error %.3g, uniform residual %.3g", e2, res);
  return r;
}

CriterionResult c10() {
  CriterionResult r = start(10, "Stieltjes/Hankel soundness and CPD");
  const std::vector<std::pair<std::string, MeasureSpec>> corpus{
      {"uniform", MeasureSpec::uniform(0.0, 1.0)},
      {"gauss2u", MeasureSpec::gauss2u()},
      {"atom0.5", MeasureSpec::atom(0.5)},
      {"atom1", MeasureSpec::atom(1.0)},
      {"atom2", MeasureSpec::atom(2.0)},
      {"two-atom", MeasureSpec({{0.4, 0.3}, {1.5, 0.7}}, {})},
      {"uniform+atom", MeasureSpec::uniform(0.5, 2.0, 0.5) + MeasureSpec::atom(0.3, 0.25)},
      {"table", MeasureSpec::table({0.0, 0.5, 1.0, 1.5}, {0.0, 1.0, 0.5, 0.0})}};
  double worst = INFINITY;
  for (const auto& [name, m] : corpus) {
    const auto seq = series_coeffs(PsiFunction::from_measure(m), 13);
    for (int mm = 0; mm <= 6; ++mm)
      for (int s = 0; s <= 1; ++s)
        worst = std::min(worst, min_eig_normalized(hankel(seq, mm, s)).min_eigenvalue);
  }
  std::vector<double> n2, n4;
  for (int n = 0; n <= 10; ++n) {
    n2.push_back(double(n) * n);
    n4.push_back(double(n) * n * n * n);
  }
  const auto a = is_cpd(MomentSequence::from_values(n2, "n^2"), 5);
  const auto b = is_cpd(MomentSequence::from_values(n4, "n^4"), 5);
  const bool cpd_ok = a.verdict == TestVerdict::Consistent && b.verdict == TestVerdict::Refuted &&
                      b.witness_form < 0.0;
  r.pass = worst >= -1e-9 && cpd_ok;
  r.numbers["corpus_min_eigenvalue"] = worst;
  r.numbers["cpd_n2"] = to_string(a.verdict);
  r.numbers["cpd_n4"] = to_string(b.verdict);
  r.numbers["n4_witness_form"] = b.witness_form;
  r.detail = fmt("corpus min eigenvalue %.3g, n^4 witness form %.6g", worst, b.witness_form);
  return r;
}

CriterionResult c11() {
  CriterionResult r = start(11, "strong-continuity trend");
  const auto p = catalog_get("sinhc");
  const auto sot = sot_continuity_check(p, std::vector<double>{0.0}, TestFunction::SmoothBump,
                                        {{0.1}, {0.05}, {0.025}});
  const double r1 = sot.norms[0] / sot.norms[1], r2 = sot.norms[1] / sot.norms[2];
  r.pass = sot.monotone && sot.norms[2] < sot.norms[1] && sot.norms[1] < sot.norms[0] &&
           r1 >= 3.2 && r1 <= 4.8 && r2 >= 3.2 && r2 <= 4.8;
  r.numbers["norms"] = sot.norms;
  r.numbers["ratios"] = {r1, r2};
  r.detail = fmt("ratios %.4g, %.4g (band [3.2, 4.8])", r1, r2);
  return r;
}

CriterionResult c12() {
  CriterionResult r = start(12, "classifier shortcuts");
  const auto s = catalog_get("sinhc");
  const auto y1 = classify_cosubnormal(s, AffineMap::translation({0.7}));
  const auto y2 = classify_cosubnormal(s, AffineMap::translation({0.7, 0.2}));
  const double th = 0.6;
  const Matrix rot = Matrix::from_rows({{std::cos(th), -std::sin(th)}, {std::sin(th), std::cos(th)}});
  const auto u = classify_cosubnormal(catalog_get("const"), AffineMap(rot, {0.3, -0.4}));
  const auto n = classify_cosubnormal(s, AffineMap(Matrix::from_rows({{-1.0}}), {0.3}));
  bool unitary_note = false;
  for (const auto& note : u.notes)
    if (note.find("unitary") != std::string::npos) unitary_note = true;
  r.pass = y1.cosubnormal.verdict == CosubVerdict::Yes && y2.cosubnormal.verdict == CosubVerdict::Yes &&
           u.cosubnormal.verdict == CosubVerdict::Yes && unitary_note &&
           n.cosubnormal.verdict == CosubVerdict::No;
  r.numbers["sinhc_k1"] = to_string(y1.cosubnormal.verdict);
  r.numbers["sinhc_k2"] = to_string(y2.cosubnormal.verdict);
  r.numbers["const_rotation"] = to_string(u.cosubnormal.verdict);
  r.numbers["sinhc_reflection"] = to_string(n.cosubnormal.verdict);
  r.detail = std::string("sinhc/I+a: ") + to_string(y1.cosubnormal.verdict) + "," +
             to_string(y2.cosubnormal.verdict) + "; const/rotation: " + to_string(u.cosubnormal.verdict) +
             (unitary_note ? " (unitary note)" : "") + "; sinhc/-I: " + to_string(n.cosubnormal.verdict);
  return r;
}

}  // namespace

CriterionResult run_criterion(int id) {
  using Fn = CriterionResult (*)();
  static constexpr Fn table[] = {c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11, c12};
  require(id >= 1 && id <= 12, "criterion id must be 1..12");
  try {
    return table[id - 1]();
  } catch (const Error& e) {
    CriterionResult r = start(id, "criterion " + std::to_string(id));
    r.detail = std::string("error ") + to_string(e.code()) + ": " + e.what();
    return r;
  }
}

std::vector<CriterionResult> verify_all() {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= 12; ++id) out.push_back(run_criterion(id));
  return out;
}

std::vector<std::string> example_ids() {
  return {"sinhc", "erf-gauss", "bmv", "coshcos", "expsq", "unitary-const", "support-trio"};
}

std::vector<int> criteria_for(const std::string& id) {
  if (id == "sinhc") return {1};
  if (id == "erf-gauss") return {2, 3};
  if (id == "bmv") return {5};
  if (id == "coshcos") return {6};
  if (id == "expsq") return {7};
  if (id == "unitary-const") return {12};
  if (id == "support-trio") return {4};
  fail(ErrorCode::InvalidInput, "unknown example id '" + id + "'");
}

Json to_json(const CriterionResult& r) {
  Json j;
  j["id"] = r.id;
  j["name"] = r.name;
  j["pass"] = r.pass;
  j["detail"] = r.detail;
  j["numbers"] = r.numbers.is_null() ? Json::object() : r.numbers;
  return j;
}

namespace {

report::Bundle bundle_of(const std::vector<CriterionResult>& rs) {
  report::Bundle b;
  b.report["criteria"] = Json::array();
  std::vector<std::vector<double>> rows;
  for (const auto& r : rs) {
    b.report["criteria"].push_back(to_json(r));
    b.ok = b.ok && r.pass;
    rows.push_back({static_cast<double>(r.id), r.pass ? 1.0 : 0.0});
  }
  b.report["pass"] = b.ok;
  b.files["criteria.csv"] = report::csv({"id", "pass"}, rows);
  return b;
}

}  // namespace

report::Bundle reproduce(const std::string& example_id) {
  std::vector<CriterionResult> rs;
  for (int id : criteria_for(example_id)) rs.push_back(run_criterion(id));
  auto b = bundle_of(rs);
  b.report["example"] = example_id;
  return b;
}

report::Bundle verify() { return bundle_of(verify_all()); }

}  // namespace coshtx::verification
