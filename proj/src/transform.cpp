#include "coshtx/transform.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "coshtx/error.hpp"
#include "coshtx/special.hpp"

namespace coshtx {

using special::kInf;
using special::kLn2;

namespace {

constexpr double kHalfSqrtPi = 0.88622692545275801365;  // sqrt(pi)/2
constexpr int kSeriesCap = 500;

double checked(double v, const char* what) {
  if (!std::isfinite(v))
    fail(ErrorCode::Overflow, std::string(what) + " is not representable in double");
  return v;
}

double lfact(int n) { return std::lgamma(n + 1.0); }

// sum_{n>=1} 2n r^{2n-1}/(2n+1)!, the derivative of sinh(r)/r, for |r| < 1.
double sinhc_prime_series(double r) {
  double s = 0.0, pw = r, f = 6.0;  // r^{2n-1}, (2n+1)!
  for (int n = 1; n <= 12; ++n) {
    s += 2.0 * n * pw / f;
    pw *= r * r;
    f *= (2.0 * n + 2.0) * (2.0 * n + 3.0);
  }
  return s;
}

// sum_{n>=1} 2n (2n-1) r^{2n-2}/(2n+1)!, for |r| < 1.
double sinhc_second_series(double r) {
  double s = 0.0, pw = 1.0, f = 6.0;
  for (int n = 1; n <= 12; ++n) {
    s += 2.0 * n * (2.0 * n - 1.0) * pw / f;
    pw *= r * r;
    f *= (2.0 * n + 2.0) * (2.0 * n + 3.0);
  }
  return s;
}

// (r cosh r - sinh r)/r^3, positive, -> 1/3 at r = 0.
double bmv_q(double r) {
  if (r < 1.0) {
    double s = 0.0, pw = 1.0, f = 6.0;
    for (int n = 1; n <= 12; ++n) {
      s += 2.0 * n * pw / f;
      pw *= r * r;
      f *= (2.0 * n + 2.0) * (2.0 * n + 3.0);
    }
    return s;
  }
  return (r * std::cosh(r) - std::sinh(r)) / (r * r * r);
}

// 2 sum_{j>=1} x^{4j-p}/(4j-p)! for p in {1, 2}; the small-x forms of
// sinh - sin and cosh - cos, which cancel to leading order.
double coshcos_series(double x, int p) {
  double s = 0.0;
  for (int j = 1; j <= 6; ++j) {
    const int e = 4 * j - p;
    s += std::pow(x, e) / std::exp(lfact(e));
  }
  return 2.0 * s;
}

double log_bmv_sum(int n, double xi, double eta) {
  // log sum_{k>=n} C(k,n) xi^n eta^{k-n} / (2k)!
  const double base = n * std::log(xi);
  if (eta == 0.0) return base - std::lgamma(2.0 * n + 1.0);
  double acc = -kInf;
  for (int k = n; k < n + 400; ++k) {
    const double t = lfact(k) - lfact(n) - lfact(k - n) + base +
                     (k - n) * std::log(eta) - std::lgamma(2.0 * k + 1.0);
    acc = special::log_add(acc, t);
    if (k > n + 2 && t < acc - 45.0) break;
  }
  return acc;
}

// sum_n c_n d^o/dx^o x^{2n}, truncated once terms are negligible and shrinking.
double series_linear(const std::vector<double>& c, double x, int order) {
  special::CompensatedSum s;
  double prev = kInf;
  const int cap = std::min<int>(c.size(), kSeriesCap);
  for (int n = 0; n < cap; ++n) {
    if (c[n] == 0.0) continue;
    const int e = 2 * n - order;
    if (e < 0) continue;
    double k = 1.0;
    for (int i = 0; i < order; ++i) k *= (2 * n - i);
    const double term = c[n] * k * std::pow(x, e);
    s.add(term);
    const double cur = s.value();
    if (std::fabs(term) < 1e-17 * std::fabs(cur) && std::fabs(term) < prev) break;
    prev = std::fabs(term);
  }
  return s.value();
}

// Log-domain counterpart for nonnegative coefficients and x > 0.
double series_log(const std::vector<double>& c, double x, int order) {
  std::vector<double> terms;
  const int cap = std::min<int>(c.size(), kSeriesCap);
  const double lx = std::log(x);
  for (int n = 0; n < cap; ++n) {
    if (c[n] <= 0.0) continue;
    const int e = 2 * n - order;
    if (e < 0) continue;
    double lk = 0.0;
    for (int i = 0; i < order; ++i) lk += std::log(2.0 * n - i);
    terms.push_back(std::log(c[n]) + lk + (e == 0 ? 0.0 : e * lx));
  }
  return special::log_sum_exp(terms);
}

}  // namespace

double coshcos_threshold() {
  const double ch = std::cosh(std::numbers::pi);
  return 2.0 * ch / (ch - 1.0);
}

std::string CatalogEntry::name() const {
  switch (kind) {
    case CatalogKind::Const: return "const";
    case CatalogKind::Cosh: return "cosh";
    case CatalogKind::Sinhc: return "sinhc";
    case CatalogKind::ErfGauss: return "erf-gauss";
    case CatalogKind::Bmv: return "bmv";
    case CatalogKind::CoshCos: return "coshcos";
    case CatalogKind::ExpSq: return "expsq";
    case CatalogKind::Exp: return "exp";
  }
  return "?";
}

std::map<std::string, double> CatalogEntry::params() const {
  switch (kind) {
    case CatalogKind::Const: return {{"c", c}};
    case CatalogKind::Bmv: return {{"eta", eta}, {"xi", xi}};
    case CatalogKind::CoshCos: return {{"delta", delta}};
    default: return {};
  }
}

PsiFunction::PsiFunction(Source s) : source_(std::move(s)) {}

PsiFunction PsiFunction::from_measure(MeasureSpec m) {
  require(!m.empty() && m.total_mass() > 0.0, "psi needs a nonzero measure");
  return PsiFunction(std::move(m));
}

PsiFunction PsiFunction::from_catalog(CatalogEntry e) {
  auto bad = [](const std::string& w) { fail(ErrorCode::BadParams, w); };
  switch (e.kind) {
    case CatalogKind::Const:
      if (!(std::isfinite(e.c) && e.c > 0.0)) bad("const: c must be positive and finite");
      break;
    case CatalogKind::Bmv:
      if (!(std::isfinite(e.xi) && e.xi > 0.0)) bad("bmv: xi must be positive");
      if (!(std::isfinite(e.eta) && e.eta >= 0.0)) bad("bmv: eta must be nonnegative");
      break;
    case CatalogKind::CoshCos:
      if (!(std::isfinite(e.delta) && e.delta > -2.0))
        bad("coshcos: delta must exceed -2 for positivity");
      break;
    default:
      break;
  }
  PsiFunction p(e);
  if (e.kind == CatalogKind::Exp) {
    p.even_ = false;
    p.annotations_.push_back("exp is not even; usable only where evenness is not required");
  }
  if (e.kind == CatalogKind::CoshCos && e.delta < coshcos_threshold())
    p.annotations_.push_back("delta below 2cosh(pi)/(cosh(pi)-1); psi is not log-convex");
  p.probe_positive();
  return p;
}

PsiFunction PsiFunction::from_series(std::vector<double> coeffs) {
  require(!coeffs.empty(), "series needs at least one coefficient");
  for (double c : coeffs) require(std::isfinite(c), "series coefficients must be finite");
  require(coeffs[0] > 0.0, "series needs c_0 > 0");
  if (coeffs.size() > static_cast<std::size_t>(kSeriesCap))
    fail(ErrorCode::InvalidInput, "series longer than 500 terms");
  PsiFunction p(SeriesSpec{std::move(coeffs)});
  const auto& c = std::get<SeriesSpec>(p.source_).coeffs;
  p.log_capable_ = std::all_of(c.begin(), c.end(), [](double v) { return v >= 0.0; });
  p.probe_positive();
  return p;
}

void PsiFunction::probe_positive() const {
  for (int i = 0; i <= 40; ++i) {
    const double x = 0.25 * i;
    double v;
    try {
      v = eval_log(x);
    } catch (const Error&) {
      continue;  // out of range but not shown negative
    }
    if (std::isnan(v) || v == -kInf)
      fail(ErrorCode::BadParams, "psi is not positive at x = " + std::to_string(x));
  }
}

bool PsiFunction::is_constant() const {
  if (const auto* m = measure()) {
    if (!m->densities().empty()) return false;
    return std::all_of(m->atoms().begin(), m->atoms().end(),
                       [](const Atom& a) { return a.u == 0.0; });
  }
  if (const auto* e = catalog()) return e->kind == CatalogKind::Const;
  const auto& c = std::get<SeriesSpec>(source_).coeffs;
  return std::all_of(c.begin() + 1, c.end(), [](double v) { return v == 0.0; });
}

std::string PsiFunction::label() const {
  if (const auto* e = catalog()) {
    std::string s = "catalog:" + e->name();
    const auto params = e->params();
    char sep = '(';
    for (const auto& [k, v] : params) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%c%s=%.17g", sep, k.c_str(), v);
      s += buf;
      sep = ',';
    }
    if (!params.empty()) s += ')';
    return s;
  }
  return is_measure() ? "measure" : "series";
}

double PsiFunction::eval(double x) const {
  if (is_measure()) return checked(std::exp(eval_log(x)), "psi(x)");
  if (is_series()) {
    const auto& c = std::get<SeriesSpec>(source_).coeffs;
    return checked(series_linear(c, std::fabs(x), 0), "psi(x)");
  }
  const CatalogEntry& e = *catalog();
  const double ax = std::fabs(x);
  double v = 0.0;
  switch (e.kind) {
    case CatalogKind::Const: v = e.c; break;
    case CatalogKind::Cosh: v = std::cosh(ax); break;
    case CatalogKind::Sinhc: v = special::sinhc(ax); break;
    case CatalogKind::ErfGauss:
      v = ax < 50.0 ? 1.0 + kHalfSqrtPi * ax * std::erf(0.5 * ax) * std::exp(0.25 * ax * ax)
                    : std::exp(eval_log(ax));
      break;
    case CatalogKind::Bmv: v = std::cosh(std::sqrt(e.xi * ax * ax + e.eta)); break;
    case CatalogKind::CoshCos: v = std::cosh(ax) + std::cos(ax) + e.delta; break;
    case CatalogKind::ExpSq: v = std::exp(ax * ax); break;
    case CatalogKind::Exp: v = std::exp(x); break;
  }
  return checked(v, "psi(x)");
}

double PsiFunction::eval_log(double x) const {
  const double ax = std::fabs(x);
  if (const auto* m = measure())
    return log_integrate_measure(*m, [ax](double u) { return special::log_cosh(ax * u); });
  if (is_series()) {
    const auto& c = std::get<SeriesSpec>(source_).coeffs;
    const double v = series_linear(c, ax, 0);
    if (std::isfinite(v)) return v > 0.0 ? std::log(v) : std::nan("");
    if (!log_capable_) fail(ErrorCode::Overflow, "series psi(x) out of range");
    return series_log(c, ax, 0);
  }
  const CatalogEntry& e = *catalog();
  switch (e.kind) {
    case CatalogKind::Const: return std::log(e.c);
    case CatalogKind::Cosh: return special::log_cosh(ax);
    case CatalogKind::Sinhc: return special::log_sinhc(ax);
    case CatalogKind::ErfGauss: {
      if (ax == 0.0) return 0.0;
      if (ax < 50.0) return std::log(eval(ax));
      const double la = std::log(kHalfSqrtPi * ax * std::erf(0.5 * ax)) + 0.25 * ax * ax;
      return special::log1p_exp(la);
    }
    case CatalogKind::Bmv: return special::log_cosh(std::sqrt(e.xi * ax * ax + e.eta));
    case CatalogKind::CoshCos:
      if (ax > 30.0)
        return ax - kLn2 +
               std::log1p(std::exp(-2.0 * ax) + 2.0 * (std::cos(ax) + e.delta) * std::exp(-ax));
      return std::log(std::cosh(ax) + std::cos(ax) + e.delta);
    case CatalogKind::ExpSq: return ax * ax;
    case CatalogKind::Exp: return x;
  }
  return std::nan("");
}

double PsiFunction::eval_prime(double x) const {
  if (x == 0.0 && even_) return 0.0;
  const double sgn = x < 0.0 ? -1.0 : 1.0;
  if (is_measure()) return sgn * checked(std::exp(eval_log_prime(std::fabs(x))), "psi'(x)");
  if (is_series()) {
    const auto& c = std::get<SeriesSpec>(source_).coeffs;
    return checked(series_linear(c, x, 1), "psi'(x)");
  }
  const CatalogEntry& e = *catalog();
  const double ax = std::fabs(x);
  double v = 0.0;
  switch (e.kind) {
    case CatalogKind::Const: v = 0.0; break;
    case CatalogKind::Cosh: v = std::sinh(ax); break;
    case CatalogKind::Sinhc:
      v = ax < 1.0 ? sinhc_prime_series(ax)
                   : (ax * std::cosh(ax) - std::sinh(ax)) / (ax * ax);
      break;
    case CatalogKind::ErfGauss:
      v = kHalfSqrtPi * std::erf(0.5 * ax) * std::exp(0.25 * ax * ax) * (1.0 + 0.5 * ax * ax) +
          0.5 * ax;
      break;
    case CatalogKind::Bmv: v = e.xi * ax * special::sinhc(std::sqrt(e.xi * ax * ax + e.eta)); break;
    case CatalogKind::CoshCos:
      v = ax < 1.0 ? coshcos_series(ax, 1) : std::sinh(ax) - std::sin(ax);
      break;
    case CatalogKind::ExpSq: v = 2.0 * ax * std::exp(ax * ax); break;
    case CatalogKind::Exp: return checked(std::exp(x), "psi'(x)");
  }
  return sgn * checked(v, "psi'(x)");
}

double PsiFunction::eval_log_prime(double x) const {
  require(x > 0.0, "log psi' needs x > 0");
  if (const auto* m = measure())
    return log_integrate_measure(*m, [x](double u) {
      return u > 0.0 ? std::log(u) + special::log_sinh(x * u) : -kInf;
    });
  if (is_series()) {
    const auto& c = std::get<SeriesSpec>(source_).coeffs;
    const double v = series_linear(c, x, 1);
    if (std::isfinite(v)) return v > 0.0 ? std::log(v) : (v == 0.0 ? -kInf : std::nan(""));
    if (!log_capable_) fail(ErrorCode::Overflow, "series psi'(x) out of range");
    return series_log(c, x, 1);
  }
  const CatalogEntry& e = *catalog();
  switch (e.kind) {
    case CatalogKind::Const: return -kInf;
    case CatalogKind::Cosh: return special::log_sinh(x);
    case CatalogKind::Sinhc:
      if (x < 1.0) return std::log(sinhc_prime_series(x));
      // x cosh x - sinh x = e^x ((x-1) + (x+1) e^{-2x}) / 2
      return x - kLn2 + std::log((x - 1.0) + (x + 1.0) * std::exp(-2.0 * x)) - 2.0 * std::log(x);
    case CatalogKind::ErfGauss:
      return special::log_add(std::log(kHalfSqrtPi * std::erf(0.5 * x) * (1.0 + 0.5 * x * x)) +
                                  0.25 * x * x,
                              std::log(0.5 * x));
    case CatalogKind::Bmv:
      return std::log(e.xi * x) + special::log_sinhc(std::sqrt(e.xi * x * x + e.eta));
    case CatalogKind::CoshCos:
      if (x > 30.0)
        return x - kLn2 + std::log1p(-std::exp(-2.0 * x) - 2.0 * std::sin(x) * std::exp(-x));
      return std::log(x < 1.0 ? coshcos_series(x, 1) : std::sinh(x) - std::sin(x));
    case CatalogKind::ExpSq: return std::log(2.0 * x) + x * x;
    case CatalogKind::Exp: return x;
  }
  return std::nan("");
}

double PsiFunction::eval_second(double x) const {
  const double ax = std::fabs(x);
  if (const auto* m = measure())
    return checked(std::exp(log_integrate_measure(*m, [ax](double u) {
                     return u > 0.0 ? 2.0 * std::log(u) + special::log_cosh(ax * u) : -kInf;
                   })),
                   "psi''(x)");
  if (is_series()) {
    const auto& c = std::get<SeriesSpec>(source_).coeffs;
    return checked(series_linear(c, ax, 2), "psi''(x)");
  }
  const CatalogEntry& e = *catalog();
  double v = 0.0;
  switch (e.kind) {
    case CatalogKind::Const: v = 0.0; break;
    case CatalogKind::Cosh: v = std::cosh(ax); break;
    case CatalogKind::Sinhc:
      v = ax < 1.0 ? sinhc_second_series(ax)
                   : ((ax * ax + 2.0) * std::sinh(ax) - 2.0 * ax * std::cosh(ax)) / (ax * ax * ax);
      break;
    case CatalogKind::ErfGauss:
      v = 1.0 + 0.25 * ax * ax +
          kHalfSqrtPi * std::erf(0.5 * ax) * std::exp(0.25 * ax * ax) *
              (1.5 * ax + 0.25 * ax * ax * ax);
      break;
    case CatalogKind::Bmv: {
      const double r = std::sqrt(e.xi * ax * ax + e.eta);
      v = e.xi * special::sinhc(r) + e.xi * e.xi * ax * ax * bmv_q(r);
      break;
    }
    case CatalogKind::CoshCos:
      v = ax < 1.0 ? coshcos_series(ax, 2) : std::cosh(ax) - std::cos(ax);
      break;
    case CatalogKind::ExpSq: v = (2.0 + 4.0 * ax * ax) * std::exp(ax * ax); break;
    case CatalogKind::Exp: v = std::exp(x); break;
  }
  return checked(v, "psi''(x)");
}

double PsiFunction::eval_phi(double x) const {
  require(x >= 0.0, "phi needs x >= 0");
  return eval(std::sqrt(x));
}

std::vector<double> PsiFunction::log_gammas(int N) const {
  require(N >= 0, "N must be nonnegative");
  require(even_, "moments exist only for even psi");
  std::vector<double> out(N + 1, -kInf);
  if (const auto* m = measure()) {
    for (int n = 0; n <= N; ++n) {
      out[n] = log_moment(*m, n);
      if (std::isnan(out[n]) || out[n] == kInf)
        fail(ErrorCode::DivergentMoment, "moment of order " + std::to_string(n) + " diverges");
    }
    return out;
  }
  if (is_series()) {
    const auto& c = std::get<SeriesSpec>(source_).coeffs;
    for (int n = 0; n <= N && n < static_cast<int>(c.size()); ++n) {
      require(c[n] >= 0.0, "log moments need nonnegative series coefficients");
      out[n] = c[n] > 0.0 ? std::log(c[n]) + std::lgamma(2.0 * n + 1.0) : -kInf;
    }
    return out;
  }
  const CatalogEntry& e = *catalog();
  for (int n = 0; n <= N; ++n) {
    switch (e.kind) {
      case CatalogKind::Const: out[n] = n == 0 ? std::log(e.c) : -kInf; break;
      case CatalogKind::Cosh: out[n] = 0.0; break;
      case CatalogKind::Sinhc: out[n] = -std::log(2.0 * n + 1.0); break;
      case CatalogKind::ErfGauss: out[n] = lfact(n); break;
      case CatalogKind::Bmv:
        out[n] = std::lgamma(2.0 * n + 1.0) + log_bmv_sum(n, e.xi, e.eta);
        break;
      case CatalogKind::CoshCos:
        out[n] = n == 0 ? std::log(2.0 + e.delta) : (n % 2 == 0 ? kLn2 : -kInf);
        break;
      case CatalogKind::ExpSq: out[n] = std::lgamma(2.0 * n + 1.0) - lfact(n); break;
      case CatalogKind::Exp: break;
    }
  }
  return out;
}

std::vector<double> PsiFunction::taylor_coeffs(int N) const {
  require(N >= 0, "N must be nonnegative");
  std::vector<double> a(N + 1, 0.0);
  if (const auto* e = catalog()) {
    if (e->kind == CatalogKind::Exp) {
      for (int k = 0; k <= N; ++k) a[k] = std::exp(-lfact(k));
      return a;
    }
    if (e->kind == CatalogKind::Const) {
      a[0] = e->c;
      return a;
    }
    if (e->kind == CatalogKind::CoshCos) {
      a[0] = 2.0 + e->delta;
      for (int k = 4; k <= N; k += 4) a[k] = 2.0 * std::exp(-lfact(k));
      return a;
    }
  }
  if (is_series()) {
    const auto& c = std::get<SeriesSpec>(source_).coeffs;
    for (int n = 0; 2 * n <= N && n < static_cast<int>(c.size()); ++n) a[2 * n] = c[n];
    return a;
  }
  const auto lg = log_gammas(N / 2);
  for (int n = 0; 2 * n <= N; ++n)
    a[2 * n] = lg[n] == -kInf ? 0.0 : std::exp(lg[n] - std::lgamma(2.0 * n + 1.0));
  return a;
}

MomentSequence series_coeffs(const PsiFunction& p, int N) {
  require(N >= 2, "series_coeffs needs N >= 2");
  require(p.even(), "series_coeffs needs an even psi");
  if (p.is_series()) {
    const auto& c = std::get<SeriesSpec>(p.source()).coeffs;
    if (std::any_of(c.begin(), c.end(), [](double v) { return v < 0.0; })) {
      std::vector<double> vals(N + 1, 0.0);
      for (int n = 0; n <= N && n < static_cast<int>(c.size()); ++n)
        vals[n] = checked(c[n] * std::exp(std::lgamma(2.0 * n + 1.0)), "gamma_n");
      return MomentSequence::from_values(std::move(vals), p.label());
    }
  }
  return MomentSequence::from_logs(p.log_gammas(N), p.label());
}

PsiFunction catalog_get(const std::string& name, const std::map<std::string, double>& params) {
  CatalogEntry e;
  std::vector<std::string> allowed;
  if (name == "const") {
    e.kind = CatalogKind::Const;
    allowed = {"c"};
  } else if (name == "cosh") {
    e.kind = CatalogKind::Cosh;
  } else if (name == "sinhc") {
    e.kind = CatalogKind::Sinhc;
  } else if (name == "erf-gauss") {
    e.kind = CatalogKind::ErfGauss;
  } else if (name == "bmv") {
    e.kind = CatalogKind::Bmv;
    allowed = {"xi", "eta"};
  } else if (name == "coshcos") {
    e.kind = CatalogKind::CoshCos;
    e.delta = coshcos_threshold();
    allowed = {"delta"};
  } else if (name == "expsq") {
    e.kind = CatalogKind::ExpSq;
  } else if (name == "exp") {
    e.kind = CatalogKind::Exp;
  } else {
    fail(ErrorCode::UnknownCatalogEntry, "unknown catalog entry '" + name + "'");
  }
  for (const auto& [k, v] : params) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
      fail(ErrorCode::BadParams, "catalog entry '" + name + "' has no parameter '" + k + "'");
    if (k == "c") e.c = v;
    if (k == "xi") e.xi = v;
    if (k == "eta") e.eta = v;
    if (k == "delta") e.delta = v;
  }
  return PsiFunction::from_catalog(e);
}

std::vector<double> default_growth_grid() {
  std::vector<double> g;
  for (int i = 1; i <= 200; ++i) g.push_back(i);
  return g;
}

GrowthRate growth_rate(const PsiFunction& p, std::span<const double> grid) {
  require(grid.size() >= 4, "growth grid needs at least 4 points");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    require(grid[i] > 0.0, "growth grid must be positive");
    if (i > 0) require(grid[i] > grid[i - 1], "growth grid must be increasing");
  }
  const double xm = grid.back();
  require(xm >= 20.0, "growth grid must reach x = 20");

  GrowthRate r;
  const double lm = p.eval_log(xm);
  // Grid point closest to x_max / 2 for the doubling test.
  std::size_t ih = 0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (std::fabs(grid[i] - 0.5 * xm) < std::fabs(grid[ih] - 0.5 * xm)) ih = i;
  const double lh = p.eval_log(grid[ih]);
  if (lm > 0.0 && lh > 0.0 && (lm / xm) / (lh / grid[ih]) > 1.05) {
    r.b0 = kInf;
    r.a0 = kInf;
    r.superexponential = true;
    return r;
  }

  const std::size_t lo = grid.size() / 2;
  const double n = static_cast<double>(grid.size() - lo);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = lo; i < grid.size(); ++i) {
    const double x = grid[i], y = p.eval_log(grid[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double icpt = (sy - slope * sx) / n;
  r.b0 = slope < 1e-12 ? 0.0 : slope;
  r.a0 = std::exp(r.b0 == 0.0 ? sy / n : icpt);
  return r;
}

std::string HClass::name() const {
  switch (tag) {
    case HTag::Hk: return "H_" + std::to_string(k);
    case HTag::H0: return "H_0";
    case HTag::HBullet: return "H_bullet";
    case HTag::H2Bullet: return "H_2bullet";
    case HTag::Constant: return "constant";
    case HTag::None: return "none";
  }
  return "none";
}

HClass classify_H(std::span<const double> a) {
  require(a.size() >= 9, "classify_H needs alpha_0..alpha_8");
  HClass h;
  for (std::size_t i = 0; i < a.size(); ++i) {
    require(std::isfinite(a[i]), "Taylor coefficients must be finite");
    if (a[i] < 0.0) h.negative_indices.push_back(static_cast<int>(i));
  }
  h.positive_at_zero = a[0] > 0.0;
  if (!h.negative_indices.empty()) return h;

  std::size_t first = 0;
  for (std::size_t i = 1; i < a.size(); ++i)
    if (a[i] > 0.0) {
      first = i;
      break;
    }
  if (first == 0) {
    if (a[0] > 0.0) h.tag = HTag::Constant;
    return h;
  }
  bool all_pos = true, even_pattern = true;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i] > 0.0)) all_pos = false;
    if (i % 2 == 0 ? !(a[i] > 0.0) : a[i] != 0.0) even_pattern = false;
  }
  if (even_pattern) {
    h.tag = HTag::H2Bullet;
  } else if (all_pos) {
    h.tag = HTag::HBullet;
  } else {
    h.tag = HTag::Hk;
    h.k = static_cast<int>(first);
  }
  return h;
}

PsiFunction psi_from_json(const nlohmann::json& j) {
  require(j.is_object() && j.size() == 1,
          "psi JSON must have exactly one of 'catalog', 'measure', 'series'");
  try {
    if (j.contains("catalog")) {
      const auto& c = j["catalog"];
      require(c.is_object(), "'catalog' must be an object");
      for (auto it = c.begin(); it != c.end(); ++it)
        require(it.key() == "name" || it.key() == "params",
                "unknown catalog field '" + it.key() + "'");
      std::map<std::string, double> params;
      if (c.contains("params")) params = c["params"].get<std::map<std::string, double>>();
      return catalog_get(c.at("name").get<std::string>(), params);
    }
    if (j.contains("measure")) return PsiFunction::from_measure(measure_from_json(j["measure"]));
    if (j.contains("series")) {
      const auto& s = j["series"];
      require(s.is_object() && s.size() == 1 && s.contains("coeffs"),
              "'series' must be {\"coeffs\": [...]}");
      return PsiFunction::from_series(s["coeffs"].get<std::vector<double>>());
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::InvalidInput, std::string("psi JSON: ") + e.what());
  }
  fail(ErrorCode::InvalidInput, "psi JSON must have one of 'catalog', 'measure', 'series'");
}

nlohmann::ordered_json psi_to_json(const PsiFunction& p) {
  nlohmann::ordered_json j;
  if (const auto* e = p.catalog()) {
    j["catalog"]["name"] = e->name();
    j["catalog"]["params"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : e->params()) j["catalog"]["params"][k] = v;
  } else if (const auto* m = p.measure()) {
    j["measure"] = measure_to_json(*m);
  } else {
    j["series"]["coeffs"] = std::get<SeriesSpec>(p.source()).coeffs;
  }
  return j;
}

}  // namespace coshtx
