#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace coshtx {

/// Finite prefix gamma_0..gamma_N of a candidate Stieltjes sequence.
///
/// Values are held both linearly and as log-magnitudes so that sequences far
/// outside double range (e.g. gamma_n = (2n)!/n!) can be carried through
/// the Hankel machinery. value(n) may be +inf for log-built sequences; the
/// log form is always finite or -inf (for an exact zero).
class MomentSequence {
 public:
  static MomentSequence from_values(std::vector<double> values,
                                    std::string provenance = {});
  /// Nonnegative sequence given by log-magnitudes (-inf encodes 0).
  static MomentSequence from_logs(std::vector<double> logs,
                                  std::string provenance = {});

  std::size_t size() const { return values_.size(); }
  int order() const { return static_cast<int>(values_.size()) - 1; }
  double value(std::size_t n) const { return values_.at(n); }
  double log_abs(std::size_t n) const { return logs_.at(n); }
  int sign(std::size_t n) const { return signs_.at(n); }
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& logs() const { return logs_; }
  const std::string& provenance() const { return provenance_; }

  bool all_positive() const;
  bool linear_finite() const;
  MomentSequence prefix(std::size_t count) const;

 private:
  std::vector<double> values_;
  std::vector<double> logs_;
  std::vector<int> signs_;
  std::string provenance_;
};

}  // namespace coshtx
