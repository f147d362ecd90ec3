#pragma once

// Gram/Hankel construction and three-way PSD decisions on the diagonally
// normalised matrix D M D, D = diag(M_ii^{-1/2}).

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "coshtx/linalg.hpp"
#include "coshtx/moment_sequence.hpp"
#include "coshtx/transform.hpp"

namespace coshtx {

/// Symmetric matrix held as entrywise log-magnitude and sign, so Gram and
/// Hankel entries far outside double range can still be normalised.
class SymMatrix {
 public:
  static SymMatrix from_linear(const Matrix& m);
  static SymMatrix from_logs(const Matrix& logs);  // all entries positive

  std::size_t dim() const { return log_abs_.rows(); }
  double log_abs(std::size_t i, std::size_t j) const { return log_abs_(i, j); }
  int sign(std::size_t i, std::size_t j) const { return static_cast<int>(sign_(i, j)); }
  bool log_domain() const { return log_domain_; }
  /// Entry in linear scale; may be +-inf for log-built matrices.
  double linear(std::size_t i, std::size_t j) const;
  Matrix to_linear() const;

 private:
  Matrix log_abs_, sign_;
  bool log_domain_ = false;
};

enum class PsdVerdict { Psd, NotPsd, Borderline };
const char* to_string(PsdVerdict v);

inline constexpr double kPsdTol = 1e-9;      // psd if lambda_min >= -kPsdTol * scale
inline constexpr double kNotPsdTol = 1e-6;   // not-psd if lambda_min <= -kNotPsdTol * scale

struct SymmetricMatrixReport {
  int dim = 0;
  double min_eigenvalue = 0.0;      // of the normalised matrix
  double raw_min_eigenvalue = 0.0;  // of M itself; NaN when M is not representable
  double scale = 1.0;               // largest diagonal of the normalised matrix
  PsdVerdict verdict = PsdVerdict::Psd;
  std::vector<double> witness;      // in the coordinates of M, max-norm 1
  double witness_form = 0.0;        // sign-faithful w^T M w, scaled by exp(-witness_log_scale)
  double witness_log_scale = 0.0;
};

/// w^T M w as scaled * exp(log_scale), summed with compensation.
struct FormValue {
  double scaled = 0.0;
  double log_scale = 0.0;
};
FormValue quadratic_form(const SymMatrix& m, std::span<const double> w);

SymMatrix gram_matrix(const PsiFunction& p, std::span<const double> points);
/// Linear-domain Gram matrix [f(x_i + x_j)] for kernels that may vanish.
SymMatrix gram_matrix(const std::function<double(double)>& f, std::span<const double> points);

/// [s_{i+j+shift}], 0 <= i,j <= m.
SymMatrix hankel(const MomentSequence& seq, int m, int shift);

SymmetricMatrixReport min_eig_normalized(const SymMatrix& m);

enum class TestVerdict { Consistent, Refuted, Borderline };
const char* to_string(TestVerdict v);

struct GridPlan {
  std::vector<double> bases{0.0, -1.0, -2.0, -4.0, -8.0};
  std::vector<double> steps{1.0, 0.5, 1.0 / 3.0, 0.2, 0.1};
  int max_m = 12;
};

struct GridCase {
  double xi = 0.0, t = 0.0;
  int m = 0;
  SymmetricMatrixReport report;
};

struct ExpConvexResult {
  TestVerdict verdict = TestVerdict::Consistent;
  std::vector<GridCase> cases;        // one per (xi, t) at max_m
  std::optional<GridCase> failure;    // smallest failing m for the first failing (xi, t)
  double min_eigenvalue = 0.0;
};

/// Tests PSD of [psi(xi + (i+j) t)]_{i,j <= m} over the plan's grid.
ExpConvexResult is_exponentially_convex(const PsiFunction& p, const GridPlan& plan = {});

struct CpdResult {
  TestVerdict verdict = TestVerdict::Consistent;
  SymmetricMatrixReport report;  // of P H P scaled by max |H_ij|
  std::vector<double> witness;   // sums to zero; w^T H w < 0 when refuted
  double witness_form = 0.0;
};

/// Conditional positive definiteness: the Hankel form restricted to sum(lambda) = 0.
CpdResult is_cpd(const MomentSequence& seq, int m);

}  // namespace coshtx
