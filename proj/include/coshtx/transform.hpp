#pragma once

// psi(x) = integral of cosh(xu) dnu(u), its derivatives, the built-in catalogue
// of closed forms, growth-rate estimation and Taylor-class tagging.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "coshtx/measure.hpp"
#include "coshtx/moment_sequence.hpp"
#include "json.hpp"

namespace coshtx {

enum class CatalogKind { Const, Cosh, Sinhc, ErfGauss, Bmv, CoshCos, ExpSq, Exp };

struct CatalogEntry {
  CatalogKind kind = CatalogKind::Cosh;
  double c = 1.0;      // const
  double xi = 1.0;     // bmv
  double eta = 0.0;    // bmv
  double delta = 0.0;  // coshcos

  std::string name() const;
  std::map<std::string, double> params() const;
};

struct SeriesSpec {
  std::vector<double> coeffs;  // c_n of sum c_n x^{2n}
};

/// 2 cosh(pi) / (cosh(pi) - 1): smallest delta making cosh + cos + delta log-convex.
double coshcos_threshold();

class PsiFunction {
 public:
  using Source = std::variant<MeasureSpec, CatalogEntry, SeriesSpec>;

  static PsiFunction from_measure(MeasureSpec m);
  static PsiFunction from_catalog(CatalogEntry e);
  static PsiFunction from_series(std::vector<double> coeffs);

  const Source& source() const { return source_; }
  bool is_measure() const { return std::holds_alternative<MeasureSpec>(source_); }
  bool is_catalog() const { return std::holds_alternative<CatalogEntry>(source_); }
  bool is_series() const { return std::holds_alternative<SeriesSpec>(source_); }
  const CatalogEntry* catalog() const { return std::get_if<CatalogEntry>(&source_); }
  const MeasureSpec* measure() const { return std::get_if<MeasureSpec>(&source_); }

  bool even() const { return even_; }
  bool eval_log_capable() const { return log_capable_; }
  bool is_constant() const;
  const std::vector<std::string>& annotations() const { return annotations_; }
  std::string label() const;

  double eval(double x) const;             // throws Overflow
  double eval_log(double x) const;
  double eval_prime(double x) const;       // odd for even psi
  double eval_log_prime(double x) const;   // x > 0; -inf where psi' vanishes
  double eval_second(double x) const;
  double eval_phi(double x) const;         // psi(sqrt x), x >= 0

  /// Taylor coefficients alpha_0..alpha_N at 0, produced analytically.
  std::vector<double> taylor_coeffs(int N) const;
  /// log gamma_0..log gamma_N (-inf for a zero moment); even psi only.
  std::vector<double> log_gammas(int N) const;

 private:
  explicit PsiFunction(Source s);
  void probe_positive() const;

  Source source_;
  bool even_ = true;
  bool log_capable_ = true;
  std::vector<std::string> annotations_;
};

inline double eval_psi(const PsiFunction& p, double x) { return p.eval(x); }
inline double eval_log_psi(const PsiFunction& p, double x) { return p.eval_log(x); }
inline double eval_psi_prime(const PsiFunction& p, double x) { return p.eval_prime(x); }
inline double eval_phi(const PsiFunction& p, double x) { return p.eval_phi(x); }

/// gamma_0..gamma_N carried in log form, so orders beyond double range survive.
MomentSequence series_coeffs(const PsiFunction& p, int N);

PsiFunction catalog_get(const std::string& name,
                        const std::map<std::string, double>& params = {});

struct GrowthRate {
  double b0 = 0.0;  // +inf when superexponential
  double a0 = 1.0;
  bool superexponential = false;
};

std::vector<double> default_growth_grid();
GrowthRate growth_rate(const PsiFunction& p, std::span<const double> grid);
inline GrowthRate growth_rate(const PsiFunction& p) {
  const auto g = default_growth_grid();
  return growth_rate(p, g);
}

enum class HTag { Hk, H0, HBullet, H2Bullet, Constant, None };

struct HClass {
  HTag tag = HTag::None;
  int k = 0;                          // Hk only
  bool prefix_certified = true;       // verdict only covers alpha_0..alpha_N
  bool positive_at_zero = false;      // alpha_0 > 0
  std::vector<int> negative_indices;  // nonempty forces tag None
  std::string name() const;
};

HClass classify_H(std::span<const double> coeffs);

PsiFunction psi_from_json(const nlohmann::json& j);
nlohmann::ordered_json psi_to_json(const PsiFunction& p);

}  // namespace coshtx
