#include "coshtx/posdef.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "coshtx/error.hpp"
#include "coshtx/special.hpp"

namespace coshtx {

using special::kInf;

namespace {

constexpr std::size_t kMaxDim = 64;

PsdVerdict decide(double lambda, double scale) {
  if (lambda >= -kPsdTol * scale) return PsdVerdict::Psd;
  if (lambda <= -kNotPsdTol * scale) return PsdVerdict::NotPsd;
  return PsdVerdict::Borderline;
}

// Hankel-patterned log matrix [L_{i+j}] from a vector of logs.
SymMatrix hankel_from_logs(std::span<const double> logs, int m) {
  Matrix lm(m + 1, m + 1);
  for (int i = 0; i <= m; ++i)
    for (int j = 0; j <= m; ++j) lm(i, j) = logs[i + j];
  return SymMatrix::from_logs(lm);
}

}  // namespace

const char* to_string(PsdVerdict v) {
  switch (v) {
    case PsdVerdict::Psd: return "psd";
    case PsdVerdict::NotPsd: return "not-psd";
    case PsdVerdict::Borderline: return "borderline";
  }
  return "?";
}

const char* to_string(TestVerdict v) {
  switch (v) {
    case TestVerdict::Consistent: return "consistent";
    case TestVerdict::Refuted: return "refuted";
    case TestVerdict::Borderline: return "borderline";
  }
  return "?";
}

SymMatrix SymMatrix::from_linear(const Matrix& m) {
  require(m.rows() == m.cols(), "matrix must be square");
  SymMatrix s;
  const std::size_t n = m.rows();
  s.log_abs_ = Matrix(n, n);
  s.sign_ = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double v = m(i, j);
      if (!std::isfinite(v)) fail(ErrorCode::NonFiniteEntry, "matrix entry is not finite");
      require(v == m(j, i), "matrix must be symmetric");
      s.log_abs_(i, j) = v == 0.0 ? -kInf : std::log(std::fabs(v));
      s.sign_(i, j) = v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
    }
  return s;
}

SymMatrix SymMatrix::from_logs(const Matrix& logs) {
  require(logs.rows() == logs.cols(), "matrix must be square");
  SymMatrix s;
  const std::size_t n = logs.rows();
  s.log_abs_ = logs;
  s.sign_ = Matrix(n, n, 1.0);
  s.log_domain_ = true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double v = logs(i, j);
      if (std::isnan(v) || v == kInf)
        fail(ErrorCode::NonFiniteEntry, "log-domain entry is not finite");
      if (v == -kInf) s.sign_(i, j) = 0.0;
      require(v == logs(j, i), "matrix must be symmetric");
    }
  return s;
}

double SymMatrix::linear(std::size_t i, std::size_t j) const {
  return sign(i, j) == 0 ? 0.0 : sign(i, j) * std::exp(log_abs(i, j));
}

Matrix SymMatrix::to_linear() const {
  Matrix m(dim(), dim());
  for (std::size_t i = 0; i < dim(); ++i)
    for (std::size_t j = 0; j < dim(); ++j) m(i, j) = linear(i, j);
  return m;
}

FormValue quadratic_form(const SymMatrix& m, std::span<const double> w) {
  require(w.size() == m.dim(), "witness length must match the matrix");
  const std::size_t n = m.dim();
  double c = -kInf;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (w[i] != 0.0 && w[j] != 0.0 && m.sign(i, j) != 0)
        c = std::max(c, std::log(std::fabs(w[i])) + std::log(std::fabs(w[j])) + m.log_abs(i, j));
  if (c == -kInf) return {};
  special::CompensatedSum s;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (w[i] == 0.0 || w[j] == 0.0 || m.sign(i, j) == 0) continue;
      const double mag =
          std::exp(std::log(std::fabs(w[i])) + std::log(std::fabs(w[j])) + m.log_abs(i, j) - c);
      const int sg = m.sign(i, j) * (w[i] > 0 ? 1 : -1) * (w[j] > 0 ? 1 : -1);
      s.add(sg * mag);
    }
  return {s.value(), c};
}

SymMatrix gram_matrix(const PsiFunction& p, std::span<const double> points) {
  require(!points.empty() && points.size() <= kMaxDim, "gram_matrix takes 1..64 points");
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      require(points[i] != points[j], "gram_matrix points must be distinct");
  const std::size_t n = points.size();
  std::map<double, double> cache;
  Matrix lm(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      const double x = points[i] + points[j];
      auto it = cache.find(x);
      if (it == cache.end()) {
        const double v = p.eval_log(x);
        if (std::isnan(v)) fail(ErrorCode::Overflow, "log psi could not be evaluated");
        it = cache.emplace(x, v).first;
      }
      lm(i, j) = lm(j, i) = it->second;
    }
  return SymMatrix::from_logs(lm);
}

SymMatrix gram_matrix(const std::function<double(double)>& f, std::span<const double> points) {
  require(!points.empty() && points.size() <= kMaxDim, "gram_matrix takes 1..64 points");
  const std::size_t n = points.size();
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) m(i, j) = m(j, i) = f(points[i] + points[j]);
  return SymMatrix::from_linear(m);
}

SymMatrix hankel(const MomentSequence& seq, int m, int shift) {
  require(m >= 0 && (shift == 0 || shift == 1), "hankel needs m >= 0 and shift in {0,1}");
  require(2 * m + shift <= seq.order(), "hankel needs 2m + shift <= N");
  require(m + 1 <= static_cast<int>(kMaxDim), "hankel dimension capped at 64");
  bool positive = true;
  for (int k = shift; k <= 2 * m + shift; ++k)
    if (seq.sign(k) <= 0) positive = false;
  if (positive) {
    std::vector<double> logs(seq.logs().begin() + shift, seq.logs().begin() + 2 * m + shift + 1);
    return hankel_from_logs(logs, m);
  }
  Matrix lin(m + 1, m + 1);
  for (int i = 0; i <= m; ++i)
    for (int j = 0; j <= m; ++j) lin(i, j) = seq.value(i + j + shift);
  return SymMatrix::from_linear(lin);
}

SymmetricMatrixReport min_eig_normalized(const SymMatrix& m) {
  const std::size_t n = m.dim();
  require(n >= 1 && n <= kMaxDim, "min_eig_normalized takes dimension 1..64");
  std::vector<double> d(n, 0.0);  // log D_ii^{-1}
  for (std::size_t i = 0; i < n; ++i)
    if (m.sign(i, i) > 0) d[i] = 0.5 * m.log_abs(i, i);

  Matrix nm(n, n);
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j)
      nm(i, j) = m.sign(i, j) == 0 ? 0.0 : m.sign(i, j) * std::exp(m.log_abs(i, j) - d[i] - d[j]);
    scale = std::max(scale, nm(i, i));
  }
  if (scale <= 0.0) scale = 1.0;

  SymmetricMatrixReport r;
  r.dim = static_cast<int>(n);
  r.scale = scale;
  const SymmetricEigen eig = symmetric_eigen(nm);
  r.min_eigenvalue = eig.values.front();

  r.raw_min_eigenvalue = std::nan("");
  bool representable = true;
  for (std::size_t i = 0; i < n && representable; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (m.sign(i, j) != 0 && std::fabs(m.log_abs(i, j)) > 600.0) representable = false;
  if (representable) r.raw_min_eigenvalue = symmetric_eigen(m.to_linear()).values.front();

  r.verdict = decide(r.min_eigenvalue, scale);
  if (r.verdict == PsdVerdict::NotPsd) {
    // w = D v, rescaled to unit max-norm in log space.
    std::vector<double> lw(n), sg(n);
    double top = -kInf;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = eig.vectors(i, 0);
      lw[i] = v == 0.0 ? -kInf : std::log(std::fabs(v)) - d[i];
      sg[i] = v < 0.0 ? -1.0 : 1.0;
      top = std::max(top, lw[i]);
    }
    r.witness.resize(n);
    for (std::size_t i = 0; i < n; ++i) r.witness[i] = sg[i] * std::exp(lw[i] - top);
    const FormValue f = quadratic_form(m, r.witness);
    r.witness_form = f.scaled;
    r.witness_log_scale = f.log_scale;
    if (!(f.scaled < 0.0)) r.verdict = PsdVerdict::Borderline;
  }
  return r;
}

ExpConvexResult is_exponentially_convex(const PsiFunction& p, const GridPlan& plan) {
  require(plan.max_m >= 1 && plan.max_m + 1 <= static_cast<int>(kMaxDim),
          "grid plan max_m must lie in 1..63");
  require(!plan.bases.empty() && !plan.steps.empty(), "grid plan needs bases and steps");
  for (double t : plan.steps) require(t > 0.0, "grid steps must be positive");

  ExpConvexResult res;
  res.min_eigenvalue = kInf;
  bool borderline = false;
  for (double xi : plan.bases) {
    for (double t : plan.steps) {
      std::vector<double> logs(2 * plan.max_m + 1);
      for (int k = 0; k <= 2 * plan.max_m; ++k) {
        logs[k] = p.eval_log(xi + k * t);
        if (std::isnan(logs[k])) fail(ErrorCode::Overflow, "log psi could not be evaluated");
      }
      GridCase gc{xi, t, plan.max_m, min_eig_normalized(hankel_from_logs(logs, plan.max_m))};
      res.min_eigenvalue = std::min(res.min_eigenvalue, gc.report.min_eigenvalue);
      if (gc.report.verdict == PsdVerdict::Borderline) borderline = true;
      if (gc.report.verdict == PsdVerdict::NotPsd && !res.failure) {
        for (int m = 1; m <= plan.max_m; ++m) {
          auto rep = min_eig_normalized(hankel_from_logs(logs, m));
          if (rep.verdict == PsdVerdict::NotPsd) {
            res.failure = GridCase{xi, t, m, std::move(rep)};
            break;
          }
        }
        if (!res.failure) res.failure = gc;
      }
      res.cases.push_back(std::move(gc));
    }
  }
  res.verdict = res.failure ? TestVerdict::Refuted
                            : (borderline ? TestVerdict::Borderline : TestVerdict::Consistent);
  return res;
}

CpdResult is_cpd(const MomentSequence& seq, int m) {
  require(m >= 1 && 2 * m <= seq.order(), "is_cpd needs 1 <= m and 2m <= N");
  require(m + 1 <= static_cast<int>(kMaxDim), "is_cpd dimension capped at 64");
  const int n = m + 1;
  Matrix h(n, n);
  double c = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      h(i, j) = seq.value(i + j);
      if (!std::isfinite(h(i, j))) fail(ErrorCode::NonFiniteEntry, "is_cpd needs finite values");
      c = std::max(c, std::fabs(h(i, j)));
    }
  CpdResult res;
  res.report.dim = n;
  if (c == 0.0) return res;

  Matrix p = Matrix::identity(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) p(i, j) -= 1.0 / n;
  Matrix hs = h;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) hs(i, j) /= c;
  Matrix php = p * hs * p;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) php(i, j) = php(j, i) = 0.5 * (php(i, j) + php(j, i));

  const SymmetricEigen eig = symmetric_eigen(php);
  res.report.min_eigenvalue = eig.values.front();
  res.report.raw_min_eigenvalue = eig.values.front() * c;
  res.report.scale = 1.0;
  res.report.verdict = decide(res.report.min_eigenvalue, 1.0);
  if (res.report.verdict == PsdVerdict::NotPsd) {
    std::vector<double> w(n);
    double mean = 0.0, top = 0.0;
    for (int i = 0; i < n; ++i) mean += eig.vectors(i, 0) / n;
    for (int i = 0; i < n; ++i) {
      w[i] = eig.vectors(i, 0) - mean;
      top = std::max(top, std::fabs(w[i]));
    }
    for (double& x : w) x /= top;
    special::CompensatedSum s;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s.add(w[i] * w[j] * h(i, j));
    res.witness = w;
    res.witness_form = s.value();
    res.report.witness = w;
    res.report.witness_form = s.value();
    if (!(s.value() < 0.0)) res.report.verdict = PsdVerdict::Borderline;
  }
  res.verdict = res.report.verdict == PsdVerdict::Psd
                    ? TestVerdict::Consistent
                    : (res.report.verdict == PsdVerdict::NotPsd ? TestVerdict::Refuted
                                                                : TestVerdict::Borderline);
  return res;
}

}  // namespace coshtx
