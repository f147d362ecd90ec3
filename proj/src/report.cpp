#include "coshtx/report.hpp"

#include <cmath>
#include <cstdio>

#include "coshtx/error.hpp"

namespace coshtx::report {

namespace {

void write(const Json& j, int indent, int depth, std::string& out) {
  const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent) * (depth + 1), ' ') : "";
  const std::string close_pad = indent > 0 ? std::string(static_cast<std::size_t>(indent) * depth, ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  const char* colon = indent > 0 ? ": " : ":";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{";
      out += nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) {
          out += ",";
          out += nl;
        }
        first = false;
        out += pad + Json(it.key()).dump() + colon;
        write(it.value(), indent, depth + 1, out);
      }
      out += nl + close_pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Flat numeric arrays stay on one line.
      bool flat = true;
      for (const auto& v : j)
        if (v.is_structured()) flat = false;
      out += "[";
      if (!flat) out += nl;
      bool first = true;
      for (const auto& v : j) {
        if (!first) {
          out += ",";
          out += flat ? (indent > 0 ? " " : "") : nl;
        }
        first = false;
        if (!flat) out += pad;
        write(v, indent, depth + 1, out);
      }
      if (!flat) out += nl + close_pad;
      out += "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (std::isnan(v))
        out += "null";
      else if (std::isinf(v))
        out += v > 0 ? "\"inf\"" : "\"-inf\"";
      else
        out += format_double(v);
      return;
    }
    default:
      out += j.dump();
  }
}

Json vec(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(x);
  return a;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s = buf;
  // Keep a float marker so integers-valued doubles re-parse as floats.
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

std::string dump(const Json& j, int indent) {
  std::string out;
  write(j, indent, 0, out);
  if (indent > 0) out += "\n";
  return out;
}

double read_double(const nlohmann::json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    fail(ErrorCode::InvalidInput, "expected a number, got '" + s + "'");
  }
  if (j.is_null()) return NAN;
  require(j.is_number(), "expected a number");
  return j.get<double>();
}

Json to_json(const SymmetricMatrixReport& r) {
  Json j;
  j["dim"] = r.dim;
  j["min_eigenvalue"] = r.min_eigenvalue;
  j["raw_min_eigenvalue"] = r.raw_min_eigenvalue;
  j["scale"] = r.scale;
  j["verdict"] = to_string(r.verdict);
  if (!r.witness.empty()) {
    j["witness_vector"] = vec(r.witness);
    j["witness_form"] = r.witness_form;
    j["witness_form_log_scale"] = r.witness_log_scale;
  }
  return j;
}

Json to_json(const ExpConvexResult& r) {
  Json j;
  j["verdict"] = to_string(r.verdict);
  j["min_eigenvalue"] = r.min_eigenvalue;
  if (r.failure) {
    j["failure"] = {{"xi", r.failure->xi}, {"t", r.failure->t}, {"m", r.failure->m}};
    j["failure"]["report"] = to_json(r.failure->report);
  }
  j["cases"] = Json::array();
  for (const auto& c : r.cases)
    j["cases"].push_back({{"xi", c.xi},
                          {"t", c.t},
                          {"m", c.m},
                          {"min_eigenvalue", c.report.min_eigenvalue},
                          {"verdict", to_string(c.report.verdict)}});
  return j;
}

Json to_json(const StieltjesResult& r) {
  Json j;
  j["verdict"] = to_string(r.verdict);
  j["m_max"] = r.m_max;
  j["min_eigenvalue"] = r.min_eigenvalue;
  if (r.failure) {
    j["failure"] = {{"m", r.failure->m}, {"shift", r.failure->shift}};
    j["failure"]["report"] = to_json(r.failure->report);
  }
  return j;
}

Json to_json(const FactorialGrowthResult& r) {
  Json j;
  j["verdict"] = to_string(r.verdict);
  j["r"] = vec(std::vector<double>(r.r.begin() + 1, r.r.end()));
  return j;
}

Json to_json(const CarlemanResult& r) {
  Json j;
  j["verdict"] = to_string(r.verdict);
  j["label"] = r.label;
  j["partial_sum"] = r.partial_sums.back();
  j["raabe_tail"] = vec(std::vector<double>(r.raabe.end() - 3, r.raabe.end()));
  return j;
}

Json to_json(const RecoveredMeasure& r) {
  Json j;
  j["measure"] = measure_to_json(r.measure);
  j["nodes_t"] = vec(r.nodes);
  j["weights"] = vec(r.weights);
  j["residuals"] = vec(r.residuals);
  double mx = 0.0;
  for (double v : r.residuals) mx = std::max(mx, v);
  j["max_residual"] = mx;
  j["hankel_min_eigenvalue"] = r.hankel_min_eigenvalue;
  return j;
}

Json to_json(const SupportEstimate& e) {
  Json j;
  j["method"] = e.method;
  j["estimate"] = e.estimate;
  j["interval"] = {e.lo, e.hi};
  j["tail"] = e.tail;
  j["infinite"] = e.infinite;
  return j;
}

Json to_json(const SupportAgreement& a) {
  Json j;
  j["estimates"] = Json::array();
  for (const auto& e : a.estimates) j["estimates"].push_back(to_json(e));
  j["disagreements"] = Json::object();
  for (const auto& [k, v] : a.disagreements) j["disagreements"][k] = v;
  j["max_disagreement"] = a.max_disagreement;
  j["flagged"] = a.flagged;
  return j;
}

Json to_json(const HClass& h) {
  Json j;
  j["tag"] = h.name();
  if (h.tag == HTag::Hk) j["k"] = h.k;
  j["prefix_certified"] = h.prefix_certified;
  j["positive_at_zero"] = h.positive_at_zero;
  if (!h.negative_indices.empty()) j["negative_indices"] = h.negative_indices;
  return j;
}

Json to_json(const GrowthRate& g) {
  return Json{{"b0", g.b0}, {"a0", g.a0}, {"superexponential", g.superexponential}};
}

Json to_json(const NormResult& r) {
  Json j;
  j["verdict"] = to_string(r.verdict);
  if (r.verdict != Boundedness::Unbounded) j["norm_sq"] = r.norm_sq;
  j["method"] = r.method;
  if (!std::isnan(r.tail_estimate)) j["tail_estimate"] = r.tail_estimate;
  if (!r.argmax.empty()) j["argmax"] = vec(r.argmax);
  return j;
}

Json to_json(const LogConvexResult& r) {
  Json j;
  j["verdict"] = r.yes ? "yes" : "no";
  j["min_theta_over_psi_sq"] = r.min_ratio;
  if (r.witness_x) j["witness_x"] = *r.witness_x;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

Json to_json(const CosubnormalResult& r) {
  Json j;
  j["verdict"] = to_string(r.verdict);
  j["reason"] = r.reason;
  j["m"] = r.m;
  if (r.witness) {
    const auto& w = *r.witness;
    j["witness"] = {{"x", vec(w.x)},
                    {"m", w.m},
                    {"shift", w.shift},
                    {"vector", vec(w.vector)},
                    {"form", w.form},
                    {"form_log_scale", w.form_log_scale},
                    {"min_eigenvalue", w.min_eigenvalue}};
  }
  return j;
}

Json to_json(const ClassificationReport& r) {
  Json j;
  j["bounded"] = to_json(r.bounded);
  j["cosubnormal"] = to_json(r.cosubnormal);
  j["cohyponormal_logconvex"] = r.cohyponormal_logconvex ? to_json(*r.cohyponormal_logconvex) : Json("n/a");
  j["h_class"] = to_json(r.h_class);
  j["support_estimates"] = Json::object();
  for (const auto& [k, v] : r.support_estimates) j["support_estimates"][k] = v;
  j["notes"] = r.notes;
  j["sample_points"] = Json::array();
  for (const auto& x : r.sample_points) j["sample_points"].push_back(vec(x));
  return j;
}

std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  std::string s;
  for (std::size_t i = 0; i < header.size(); ++i) s += (i ? "," : "") + header[i];
  s += "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      // CSV has no int/float distinction to preserve, so integral values print bare.
      std::string f = format_double(r[i]);
      if (f.size() > 2 && f.compare(f.size() - 2, 2, ".0") == 0) f.resize(f.size() - 2);
      s += (i ? "," : "") + f;
    }
    s += "\n";
  }
  return s;
}

std::string csv_curve(const std::string& xname, const std::string& yname,
                      const std::vector<std::pair<double, double>>& curve) {
  std::vector<std::vector<double>> rows;
  for (const auto& [x, y] : curve) rows.push_back({x, y});
  return csv({xname, yname}, rows);
}

Bundle analyze_psi(const PsiFunction& p, const AnalyzeOptions& opt) {
  require(opt.m_max >= 1 && opt.m_max <= 30, "m_max must be 1..30");
  require(opt.x_max >= 20.0, "x_max must be at least 20");
  require(opt.series_terms >= 2 * opt.m_max + 1 && opt.series_terms >= 10,
          "series_terms must cover 2 m_max + 1 and be at least 10");
  Bundle b;
  Json& j = b.report;
  j["psi"] = psi_to_json(p);
  j["label"] = p.label();
  j["annotations"] = p.annotations();

  bool even_ok = true;
  double min_psi = INFINITY;
  for (int i = 0; i <= 40; ++i) {
    const double x = 0.25 * i;
    if (p.eval_log(x) != p.eval_log(-x)) even_ok = false;
    min_psi = std::min(min_psi, p.eval_log(x));
  }
  j["probes"] = {{"even", p.even() && even_ok}, {"min_log_psi_on_0_10", min_psi}};

  j["exponential_convexity"] = to_json(is_exponentially_convex(p));
  const GrowthRate g = growth_rate(p);
  j["growth_rate"] = to_json(g);

  j["h_class"] = to_json(classify_H(p.taylor_coeffs(32)));
  if (!p.even()) {
    j["support"] = "n/a";
    j["series"] = "n/a";
    return b;
  }
  // phi(x) = psi(sqrt x) has Taylor coefficients gamma_n/(2n)!.
  {
    const auto a = p.taylor_coeffs(64);
    std::vector<double> phi;
    for (int n = 0; 2 * n <= 64; ++n) phi.push_back(a[2 * n]);
    j["h_class_phi"] = to_json(classify_H(phi));
  }

  const SupportAgreement sa = support_agreement(p, opt.x_max);
  j["support"] = to_json(sa);
  for (const auto& e : sa.estimates)
    if (!e.curve.empty())
      b.files["support_" + e.method + ".csv"] =
          csv_curve(e.method == "moments" ? "n" : "x", e.method == "moments" ? "s_n" : "g", e.curve);

  Json& s = j["series"];
  try {
    const MomentSequence seq = series_coeffs(p, opt.series_terms);
    s["gamma"] = vec(seq.values());
    s["log_gamma"] = vec(seq.logs());
    std::vector<std::vector<double>> rows;
    for (std::size_t n = 0; n < seq.size(); ++n)
      rows.push_back({static_cast<double>(n), seq.value(n), seq.log_abs(n)});
    b.files["series.csv"] = csv({"n", "gamma_n", "log_gamma_n"}, rows);

    s["stieltjes"] = to_json(is_stieltjes(seq, opt.m_max));
    const auto fg = factorial_growth_test(seq);
    s["factorial_growth"] = to_json(fg);
    std::vector<std::pair<double, double>> rc;
    for (std::size_t n = 1; n < fg.r.size(); ++n) rc.emplace_back(n, fg.r[n]);
    b.files["factorial_growth.csv"] = csv_curve("n", "r_n", rc);
    if (seq.all_positive())
      s["carleman"] = to_json(carleman_determinacy(seq));
    else
      s["carleman"] = "n/a (zero moments)";
  } catch (const Error& e) {
    s["error"] = std::string(to_string(e.code())) + ": " + e.what();
  }
  return b;
}

Bundle classify(const PsiFunction& p, const AffineMap& T, const ClassifyPlan& plan) {
  Bundle b;
  b.report["psi"] = psi_to_json(p);
  b.report["operator"] = affine_to_json(T);
  b.report["seed"] = plan.seed;
  b.report["m"] = plan.m;
  const ClassificationReport r = classify_cosubnormal(p, T, plan);
  const Json body = to_json(r);
  for (const auto& [k, v] : body.items()) b.report[k] = v;
  return b;
}

Bundle recover(const MomentSequence& seq, int k) {
  Bundle b;
  const RecoveredMeasure r = recover_measure(seq, k);
  b.report = to_json(r);
  std::vector<std::vector<double>> rows;
  for (std::size_t n = 0; n < r.residuals.size(); ++n)
    rows.push_back({static_cast<double>(n), seq.value(n), r.residuals[n]});
  b.files["residuals.csv"] = csv({"n", "gamma_n", "relative_residual"}, rows);
  return b;
}

}  // namespace coshtx::report
