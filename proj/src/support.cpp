#include "coshtx/support.hpp"

#include <algorithm>
#include <cmath>

#include "coshtx/error.hpp"
#include "coshtx/special.hpp"

namespace coshtx {

using special::kInf;

namespace {

struct LineFit {
  double intercept, slope;
};

LineFit fit(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return {(sy - slope * sx) / n, slope};
}

double log_ratio_deriv(const PsiFunction& p, double x) {
  const double lp = p.eval_log_prime(x);
  return lp == -kInf ? 0.0 : std::exp(lp - p.eval_log(x));
}

double rel_gap(double a, double b) {
  if (std::isinf(a) && std::isinf(b)) return 0.0;
  if (std::isinf(a) || std::isinf(b)) return kInf;
  const double m = std::max(std::fabs(a), std::fabs(b));
  return m == 0.0 ? 0.0 : std::fabs(a - b) / m;
}

}  // namespace

SupportEstimate support_from_moments(const MomentSequence& seq) {
  const int N = seq.order();
  require(N >= 10, "support_from_moments needs N >= 10");
  require(seq.sign(0) > 0, "support_from_moments needs gamma_0 > 0");
  SupportEstimate e;
  e.method = "moments";
  std::vector<double> ns, ss;
  for (int n = 1; n <= N; ++n) {
    require(seq.sign(n) >= 0, "support_from_moments needs nonnegative moments");
    if (seq.sign(n) == 0) continue;
    const double s = std::exp(seq.log_abs(n) / (2.0 * n));
    e.curve.emplace_back(n, s);
    ns.push_back(n);
    ss.push_back(s);
  }
  if (ns.size() < 5) {
    // gamma_n = 0 for (almost) all n >= 1: the measure sits at 0.
    e.estimate = e.lo = e.hi = e.tail = ss.empty() ? 0.0 : ss.back();
    return e;
  }
  e.tail = ss.back();

  // Growth like a power of n: equal log-increments across the last two doublings.
  auto at = [&](double n) {
    std::size_t best = 0;
    for (std::size_t i = 0; i < ns.size(); ++i)
      if (std::fabs(ns[i] - n) < std::fabs(ns[best] - n)) best = i;
    return ss[best];
  };
  const double nN = ns.back();
  const double l1 = std::log(at(nN) / at(nN / 2.0));
  const double l0 = std::log(at(nN / 2.0) / at(nN / 4.0));
  if (l1 > std::log(1.05) && l1 >= 0.75 * l0) {
    e.infinite = true;
    e.estimate = e.lo = e.hi = kInf;
    return e;
  }

  const std::size_t k0 = ns.size() - 5;
  std::vector<double> x1, x2, y;
  for (std::size_t i = k0; i < ns.size(); ++i) {
    x1.push_back(1.0 / ns[i]);
    x2.push_back(std::log(ns[i]) / ns[i]);
    y.push_back(ss[i]);
  }
  const double e1 = fit(x1, y).intercept;
  const double e2 = fit(x2, y).intercept;
  e.estimate = e1;
  e.lo = std::min({e1, e2, e.tail});
  e.hi = std::max({e1, e2, e.tail});
  return e;
}

SupportEstimate support_from_logderiv(const PsiFunction& p, double x_max) {
  require(x_max >= 20.0, "support_from_logderiv needs x_max >= 20");
  SupportEstimate e;
  e.method = "logderiv";
  constexpr int kPerOctave = 8, kOctaves = 12;
  double best = 0.0;
  for (int i = kPerOctave * kOctaves; i >= 0; --i) {
    const double x = x_max * std::exp2(-static_cast<double>(i) / kPerOctave);
    const double g = log_ratio_deriv(p, x);
    e.curve.emplace_back(x, g);
    best = std::max(best, g);
  }
  e.tail = e.curve.back().second;
  const double half = log_ratio_deriv(p, 0.5 * x_max);
  if (half > 0.0 && e.tail > 1.05 * half) {
    e.infinite = true;
    e.estimate = e.lo = e.hi = kInf;
    return e;
  }
  e.estimate = best;
  e.lo = best;
  e.hi = std::max(best, e.tail);
  return e;
}

SupportEstimate support_from_phi(const PsiFunction& p, double x_max) {
  require(x_max >= 400.0, "support_from_phi needs x_max >= 400 (sqrt x_max >= 20)");
  SupportEstimate e;
  e.method = "phi";
  constexpr int kPerOctave = 8, kOctaves = 16;
  // sqrt(y) phi'(y)/phi(y) = psi'(sqrt y) / (2 psi(sqrt y)).
  auto h = [&](double y) { return 0.5 * log_ratio_deriv(p, std::sqrt(y)); };
  for (int i = kPerOctave * kOctaves; i >= 0; --i) {
    const double y = x_max * std::exp2(-static_cast<double>(i) / kPerOctave);
    e.curve.emplace_back(y, h(y));
  }
  e.tail = 2.0 * e.curve.back().second;
  const double quarter = 2.0 * h(0.25 * x_max);
  if (quarter > 0.0 && e.tail > 1.05 * quarter) {
    e.infinite = true;
    e.estimate = e.lo = e.hi = kInf;
    return e;
  }
  double best = 0.0;
  for (const auto& [y, v] : e.curve) best = std::max(best, 2.0 * v);
  e.estimate = e.tail;
  e.lo = std::min(e.tail, best);
  e.hi = std::max(e.tail, best);
  return e;
}

SupportAgreement support_agreement(const PsiFunction& p, double x_max) {
  require(p.even(), "support_agreement needs an even psi");
  SupportAgreement a;
  try {
    a.estimates.push_back(support_from_moments(series_coeffs(p, 200)));
  } catch (const Error& err) {
    if (err.code() != ErrorCode::DivergentMoment) throw;
    SupportEstimate e;
    e.method = "moments";
    e.infinite = true;
    e.estimate = e.lo = e.hi = kInf;
    a.estimates.push_back(e);
  }
  a.estimates.push_back(support_from_logderiv(p, x_max));
  a.estimates.push_back(support_from_phi(p, x_max * x_max));
  const GrowthRate g = growth_rate(p);
  SupportEstimate ge;
  ge.method = "growth";
  ge.estimate = ge.lo = ge.hi = ge.tail = g.b0;
  ge.infinite = g.superexponential;
  a.estimates.push_back(ge);

  for (std::size_t i = 0; i < a.estimates.size(); ++i)
    for (std::size_t j = i + 1; j < a.estimates.size(); ++j) {
      const double gap = rel_gap(a.estimates[i].estimate, a.estimates[j].estimate);
      a.disagreements.emplace_back(a.estimates[i].method + "|" + a.estimates[j].method, gap);
      a.max_disagreement = std::max(a.max_disagreement, gap);
    }
  a.flagged = a.max_disagreement > 0.1;
  return a;
}

}  // namespace coshtx
