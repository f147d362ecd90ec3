#pragma once

#include <string>
#include <utility>
#include <vector>

#include "coshtx/moment_sequence.hpp"
#include "coshtx/transform.hpp"

namespace coshtx {

struct SupportEstimate {
  std::string method;
  double estimate = 0.0;  // +inf when the estimator sees unbounded support
  double lo = 0.0, hi = 0.0;
  double tail = 0.0;      // last curve value (or its doubled form for phi)
  bool infinite = false;
  std::vector<std::pair<double, double>> curve;
};

/// Root test s_n = gamma_n^{1/2n}, extrapolated with s_inf + c/n on the last five points.
SupportEstimate support_from_moments(const MomentSequence& seq);
/// g(x) = psi'(x)/psi(x) on a geometric grid; its supremum is the estimate.
SupportEstimate support_from_logderiv(const PsiFunction& p, double x_max = 50.0);
/// 2 sqrt(x) phi'(x)/phi(x) at x = x_max, with phi(x) = psi(sqrt x).
SupportEstimate support_from_phi(const PsiFunction& p, double x_max = 2500.0);

struct SupportAgreement {
  std::vector<SupportEstimate> estimates;  // moments (if available), logderiv, phi, growth
  std::vector<std::pair<std::string, double>> disagreements;  // "a|b" -> relative gap
  double max_disagreement = 0.0;
  bool flagged = false;  // some pair disagrees by more than 10%
};

/// Runs every estimator; x_max feeds the log-derivative (phi uses x_max^2).
SupportAgreement support_agreement(const PsiFunction& p, double x_max = 50.0);

}  // namespace coshtx
