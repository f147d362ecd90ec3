#pragma once

#include <functional>
#include <span>

namespace coshtx::quad {

struct Options {
  double rel_tol = 1e-13;   // panel acceptance: |fine - coarse| <= rel_tol * |I|
  int max_depth = 100;      // bisection depth cap per panel
  long max_panels = 4'000'000;
};

/// Adaptive Gauss-Legendre integral of f over the finite interval [a, b].
/// `breaks` are interior points where f may have kinks or jumps.
double integrate(const std::function<double(double)>& f, double a, double b,
                 std::span<const double> breaks = {}, const Options& opt = {});

/// log of the integral of exp(log_f) over [a, b]; b may be +infinity.
/// The integrand is rescaled by its running maximum so neither overflow nor
/// underflow occurs for log_f in any finite range. Unbounded intervals are
/// cut by doubling until the integrand and the last slab fall below 1e-18 of
/// the running total. Throws DivergentMoment if that never happens.
/// Returns -infinity for an identically vanishing integrand.
double log_integrate(const std::function<double(double)>& log_f, double a,
                     double b, std::span<const double> breaks = {},
                     const Options& opt = {});

/// Gauss-Legendre nodes/weights on [-1, 1] used by the panels.
std::span<const double> gl_nodes();
std::span<const double> gl_weights();

}  // namespace coshtx::quad
