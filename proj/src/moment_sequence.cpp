#include "coshtx/moment_sequence.hpp"

#include <cmath>
#include <limits>

#include "coshtx/error.hpp"

namespace coshtx {

MomentSequence MomentSequence::from_values(std::vector<double> values,
                                           std::string provenance) {
  require(values.size() >= 3, "moment sequence needs at least gamma_0..gamma_2");
  MomentSequence s;
  s.provenance_ = std::move(provenance);
  for (double v : values) {
    require(std::isfinite(v), "moment sequence values must be finite");
    s.logs_.push_back(v == 0.0 ? -std::numeric_limits<double>::infinity()
                               : std::log(std::fabs(v)));
    s.signs_.push_back(v > 0.0 ? 1 : (v < 0.0 ? -1 : 0));
  }
  s.values_ = std::move(values);
  return s;
}

MomentSequence MomentSequence::from_logs(std::vector<double> logs,
                                         std::string provenance) {
  require(logs.size() >= 3, "moment sequence needs at least gamma_0..gamma_2");
  MomentSequence s;
  s.provenance_ = std::move(provenance);
  for (double l : logs) {
    require(!std::isnan(l) && l != std::numeric_limits<double>::infinity(),
            "moment sequence log-values must be finite or -inf");
    s.values_.push_back(std::exp(l));
    s.signs_.push_back(std::isinf(l) ? 0 : 1);
  }
  s.logs_ = std::move(logs);
  return s;
}

bool MomentSequence::all_positive() const {
  for (int s : signs_)
    if (s <= 0) return false;
  return true;
}

bool MomentSequence::linear_finite() const {
  for (double v : values_)
    if (!std::isfinite(v)) return false;
  return true;
}

MomentSequence MomentSequence::prefix(std::size_t count) const {
  require(count >= 3 && count <= size(), "prefix length out of range");
  MomentSequence s = *this;
  s.values_.resize(count);
  s.logs_.resize(count);
  s.signs_.resize(count);
  return s;
}

}  // namespace coshtx
