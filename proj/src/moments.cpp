#include "coshtx/moments.hpp"

#include <algorithm>
#include <cmath>

#include "coshtx/error.hpp"
#include "coshtx/linalg.hpp"
#include "coshtx/special.hpp"

namespace coshtx {

using special::kInf;

const char* to_string(GrowthVerdict v) {
  switch (v) {
    case GrowthVerdict::Vanishing: return "vanishing";
    case GrowthVerdict::NonVanishing: return "non-vanishing";
    case GrowthVerdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

const char* to_string(CarlemanVerdict v) {
  return v == CarlemanVerdict::Determinate ? "determinate (Carleman)" : "inconclusive";
}

StieltjesResult is_stieltjes(const MomentSequence& seq, int m_max) {
  require(m_max >= 0 && 2 * m_max + 1 <= seq.order(), "is_stieltjes needs 2 m_max + 1 <= N");
  StieltjesResult res;
  res.m_max = m_max;
  res.min_eigenvalue = kInf;
  bool borderline = false;
  for (int m = 0; m <= m_max && !res.failure; ++m) {
    for (int shift = 0; shift <= 1; ++shift) {
      HankelCase hc{m, shift, min_eig_normalized(hankel(seq, m, shift))};
      res.min_eigenvalue = std::min(res.min_eigenvalue, hc.report.min_eigenvalue);
      if (hc.report.verdict == PsdVerdict::Borderline) borderline = true;
      const bool failed = hc.report.verdict == PsdVerdict::NotPsd;
      if (failed) res.failure = hc;
      res.cases.push_back(std::move(hc));
      if (failed) break;
    }
  }
  res.verdict = res.failure ? TestVerdict::Refuted
                            : (borderline ? TestVerdict::Borderline : TestVerdict::Consistent);
  return res;
}

FactorialGrowthResult factorial_growth_test(const MomentSequence& seq) {
  const int N = seq.order();
  require(N >= 8, "factorial_growth_test needs N >= 8");
  for (std::size_t n = 0; n < seq.size(); ++n)
    require(seq.sign(n) >= 0, "factorial_growth_test needs nonnegative moments");
  FactorialGrowthResult res;
  res.r.assign(N + 1, std::nan(""));
  for (int n = 1; n <= N; ++n)
    res.r[n] = std::exp((seq.log_abs(n) - std::lgamma(2.0 * n + 1.0)) / n);

  const double rN = res.r[N], rH = res.r[N / 2];
  const bool decreasing = res.r[N] < res.r[N - 1] && res.r[N - 1] < res.r[N - 2];
  if (decreasing && rN < 0.6 * rH) {
    res.verdict = GrowthVerdict::Vanishing;
  } else if (rN > 0.0 && rN >= 0.9 * rH && std::fabs(rN / res.r[N - 1] - 1.0) <= 0.05) {
    res.verdict = GrowthVerdict::NonVanishing;
  }
  return res;
}

CarlemanResult carleman_determinacy(const MomentSequence& seq) {
  const int N = seq.order();
  require(N >= 10, "carleman_determinacy needs N >= 10");
  require(seq.all_positive(), "carleman_determinacy needs positive moments");
  CarlemanResult res;
  res.terms.assign(N + 1, std::nan(""));
  res.partial_sums.assign(N + 1, 0.0);
  res.raabe.assign(N + 1, std::nan(""));
  double s = 0.0;
  for (int n = 1; n <= N; ++n) {
    res.terms[n] = std::exp(-seq.log_abs(n) / (2.0 * n));
    s += res.terms[n];
    res.partial_sums[n] = s;
    if (n >= 2) res.raabe[n] = n * (1.0 - res.terms[n] / res.terms[n - 1]);
  }
  bool divergent = true;
  for (int n = N - 2; n <= N; ++n)
    if (!(res.raabe[n] <= 1.0)) divergent = false;
  if (divergent) res.verdict = CarlemanVerdict::Determinate;
  return res;
}

RecoveredMeasure recover_measure(const MomentSequence& seq, int k) {
  require(k >= 1 && 2 * k <= seq.order(), "recover_measure needs 1 <= k and 2k <= N");
  require(seq.all_positive(), "recover_measure needs positive moments");

  RecoveredMeasure out;
  const auto pre = min_eig_normalized(hankel(seq, k - 1, 0));
  out.hankel_min_eigenvalue = pre.min_eigenvalue;
  if (!(pre.min_eigenvalue > 1e-10))
    fail(ErrorCode::IllConditioned, "moment Hankel matrix is not numerically positive definite");

  // Rescale t -> t / c so the used moments are O(1).
  const int top = 2 * k - 1;
  const double logc = (seq.log_abs(top) - seq.log_abs(0)) / top;
  std::vector<double> s(top + 1);
  for (int n = 0; n <= top; ++n) {
    s[n] = std::exp(seq.log_abs(n) - n * logc);
    if (!std::isfinite(s[n]) || s[n] <= 0.0)
      fail(ErrorCode::IllConditioned, "rescaled moments left double range");
  }

  // Rows 0..k-1 of the upper Cholesky factor of [s_{i+j}]_{i,j<=k}.
  Matrix r(k, k + 1);
  for (int i = 0; i < k; ++i) {
    double d = s[2 * i];
    for (int l = 0; l < i; ++l) d -= r(l, i) * r(l, i);
    if (!(d > 1e-14 * s[2 * i]))
      fail(ErrorCode::IllConditioned, "Cholesky breakdown at row " + std::to_string(i));
    r(i, i) = std::sqrt(d);
    for (int j = i + 1; j <= k; ++j) {
      double v = s[i + j];
      for (int l = 0; l < i; ++l) v -= r(l, i) * r(l, j);
      r(i, j) = v / r(i, i);
    }
  }
  std::vector<double> diag(k), off(k > 1 ? k - 1 : 0);
  for (int i = 0; i < k; ++i) {
    diag[i] = r(i, i + 1) / r(i, i) - (i > 0 ? r(i - 1, i) / r(i - 1, i - 1) : 0.0);
    if (i + 1 < k) off[i] = r(i + 1, i + 1) / r(i, i);
  }
  const SymmetricEigen eig = tridiagonal_eigen(diag, off);

  const double c = std::exp(logc);
  std::vector<Atom> atoms;
  for (int i = 0; i < k; ++i) {
    double t = eig.values[i];
    if (t < -1e-12) fail(ErrorCode::IllConditioned, "negative Gauss node");
    t = std::max(t, 0.0);
    const double v0 = eig.vectors(0, i);
    const double w = seq.value(0) * v0 * v0;
    if (!(w > 0.0)) fail(ErrorCode::IllConditioned, "non-positive Gauss weight");
    out.nodes.push_back(t * c);
    out.weights.push_back(w);
    atoms.push_back({std::sqrt(t * c), w});
  }
  out.measure = MeasureSpec(std::move(atoms), {});

  for (int n = 0; n <= top; ++n) {
    special::CompensatedSum acc;
    for (int i = 0; i < k; ++i)
      acc.add(out.weights[i] * (n == 0 ? 1.0 : std::pow(out.nodes[i], n)));
    const double g = seq.value(n);
    out.residuals.push_back(std::fabs(acc.value() - g) / g);
  }
  return out;
}

}  // namespace coshtx
