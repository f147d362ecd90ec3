#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coshtx/measure.hpp"
#include "coshtx/moment_sequence.hpp"
#include "coshtx/posdef.hpp"

namespace coshtx {

struct HankelCase {
  int m = 0;
  int shift = 0;
  SymmetricMatrixReport report;
};

struct StieltjesResult {
  TestVerdict verdict = TestVerdict::Consistent;
  int m_max = 0;
  std::vector<HankelCase> cases;     // (m, shift) in scan order, up to the first failure
  std::optional<HankelCase> failure;
  double min_eigenvalue = 0.0;
};

/// PSD of [s_{i+j}] and [s_{i+j+1}] for every m <= m_max; stops at the first not-psd.
StieltjesResult is_stieltjes(const MomentSequence& seq, int m_max);

enum class GrowthVerdict { Vanishing, NonVanishing, Inconclusive };
const char* to_string(GrowthVerdict v);

struct FactorialGrowthResult {
  GrowthVerdict verdict = GrowthVerdict::Inconclusive;
  std::vector<double> r;  // r[n] = (gamma_n/(2n)!)^{1/n}; r[0] unused (NaN)
};

FactorialGrowthResult factorial_growth_test(const MomentSequence& seq);

enum class CarlemanVerdict { Determinate, Inconclusive };
const char* to_string(CarlemanVerdict v);

/// Advisory only: divergence of sum gamma_n^{-1/2n} judged from a prefix by Raabe's test.
struct CarlemanResult {
  CarlemanVerdict verdict = CarlemanVerdict::Inconclusive;
  std::vector<double> terms;         // terms[n] = gamma_n^{-1/2n}, n >= 1
  std::vector<double> partial_sums;
  std::vector<double> raabe;         // n (1 - t_n / t_{n-1}), n >= 2
  std::string label = "heuristic";
};

CarlemanResult carleman_determinacy(const MomentSequence& seq);

struct RecoveredMeasure {
  MeasureSpec measure;             // atoms at u_i = sqrt(t_i)
  std::vector<double> nodes;       // t_i, ascending
  std::vector<double> weights;
  std::vector<double> residuals;   // |sum w_i t_i^n - gamma_n| / gamma_n, n <= 2k-1
  double hankel_min_eigenvalue = 0.0;
};

/// k-point Gauss rule for the raw moments gamma_n of mu = nu o omega.
RecoveredMeasure recover_measure(const MomentSequence& seq, int k);

}  // namespace coshtx
