#pragma once

// Finite Borel measures on the half-line [0, inf): point masses plus a small
// catalogue of density segments, with their even moments and the pushforward
// under u -> u^2.

#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

namespace coshtx {

struct Atom {
  double u = 0.0;  // location, >= 0
  double w = 0.0;  // weight, > 0
};

enum class DensityKind {
  Uniform,   // weight on [lo, hi]
  Gauss2u,   // weight * 2u exp(-u^2) on [0, inf)
  Table,     // piecewise-linear interpolation of (us, vals)
};

/// One density segment. `squarings` counts how many times the segment has
/// been pushed forward through t = u^2; the density is then expressed in the
/// pushed variable with the corresponding Jacobian.
struct DensitySegment {
  DensityKind kind = DensityKind::Uniform;
  double weight = 1.0;
  double lo = 0.0, hi = 1.0;           // Uniform only
  std::vector<double> us, vals;        // Table only
  int squarings = 0;

  double support_lo() const;
  double support_hi() const;  // may be +inf
  double mass() const;        // closed form; invariant under pushforward
  /// log of the density at t in the (possibly pushed) variable.
  double log_density(double t) const;
  /// Points where the density has kinks or jumps, in the pushed variable.
  std::vector<double> breakpoints() const;
};

class MeasureSpec {
 public:
  MeasureSpec() = default;
  MeasureSpec(std::vector<Atom> atoms, std::vector<DensitySegment> densities);

  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<DensitySegment>& densities() const { return densities_; }
  double total_mass() const { return total_mass_; }
  bool empty() const { return atoms_.empty() && densities_.empty(); }

  static MeasureSpec atom(double u, double w = 1.0);
  static MeasureSpec uniform(double lo, double hi, double weight = 1.0);
  static MeasureSpec gauss2u(double weight = 1.0);
  static MeasureSpec table(std::vector<double> us, std::vector<double> vals);

  MeasureSpec operator+(const MeasureSpec& other) const;

 private:
  std::vector<Atom> atoms_;
  std::vector<DensitySegment> densities_;
  double total_mass_ = 0.0;
};

/// log of the integral of exp(log_kernel(u)) against m. -inf for a null integral.
double log_integrate_measure(const MeasureSpec& m,
                             const std::function<double(double)>& log_kernel);

/// gamma_n = integral of u^{2n} dm. Throws DivergentMoment when the integral
/// fails to settle or leaves double range.
double moment(const MeasureSpec& m, int n);
/// log gamma_n; usable far past the range of moment().
double log_moment(const MeasureSpec& m, int n);
/// integral of u^n dm (the raw moment in the measure's own variable).
double raw_moment(const MeasureSpec& m, int n);

/// Supremum of the represented support; +inf for unbounded segments, 0 for
/// the empty measure.
double support_sup(const MeasureSpec& m);

/// Image of m under u -> u^2. Atoms move to u^2 with their weights; density
/// segments carry the Jacobian 1/(2 sqrt t).
MeasureSpec pushforward_sq(const MeasureSpec& m);

MeasureSpec measure_from_json(const nlohmann::json& j);
nlohmann::ordered_json measure_to_json(const MeasureSpec& m);

}  // namespace coshtx
