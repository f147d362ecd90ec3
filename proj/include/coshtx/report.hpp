#pragma once

// JSON/CSV rendering of analysis results. Floats are written with 17
// significant digits; infinities become the strings "inf"/"-inf", NaN null.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "coshtx/moments.hpp"
#include "coshtx/operators.hpp"
#include "coshtx/posdef.hpp"
#include "coshtx/support.hpp"
#include "coshtx/transform.hpp"
#include "json.hpp"

namespace coshtx::report {

using Json = nlohmann::ordered_json;

std::string dump(const Json& j, int indent = 2);
/// 17-significant-digit rendering used for every float in JSON and CSV.
std::string format_double(double v);
/// Inverse of the inf/-inf string convention for numbers read back.
double read_double(const nlohmann::json& j);

Json to_json(const SymmetricMatrixReport& r);
Json to_json(const ExpConvexResult& r);
Json to_json(const StieltjesResult& r);
Json to_json(const FactorialGrowthResult& r);
Json to_json(const CarlemanResult& r);
Json to_json(const RecoveredMeasure& r);
Json to_json(const SupportEstimate& e);
Json to_json(const SupportAgreement& a);
Json to_json(const HClass& h);
Json to_json(const GrowthRate& g);
Json to_json(const NormResult& r);
Json to_json(const LogConvexResult& r);
Json to_json(const CosubnormalResult& r);
Json to_json(const ClassificationReport& r);

std::string csv(const std::vector<std::string>& header,
                const std::vector<std::vector<double>>& rows);
std::string csv_curve(const std::string& xname, const std::string& yname,
                      const std::vector<std::pair<double, double>>& curve);

/// Report plus named CSV side files.
struct Bundle {
  Json report;
  std::map<std::string, std::string> files;  // file name -> contents
  bool ok = true;                            // acceptance status (reproduce/verify)
};

struct AnalyzeOptions {
  int m_max = 10;          // Stieltjes order on the series prefix
  double x_max = 50.0;     // log-derivative support estimator reach
  int series_terms = 40;   // gamma_0..gamma_{series_terms}
};

Bundle analyze_psi(const PsiFunction& p, const AnalyzeOptions& opt = {});
Bundle classify(const PsiFunction& p, const AffineMap& T, const ClassifyPlan& plan = {});
Bundle recover(const MomentSequence& seq, int k);

}  // namespace coshtx::report
