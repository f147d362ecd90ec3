#include "coshtx/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "coshtx/error.hpp"

namespace coshtx::quad {
namespace {

constexpr int kOrder = 16;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Rule {
  std::array<double, kOrder> x{};
  std::array<double, kOrder> w{};
};

// Legendre roots by Newton iteration from the Chebyshev-like initial guess.
Rule make_rule() {
  Rule r;
  const int n = kOrder;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::fabs(dz) < 1e-17) break;
    }
    r.x[i] = -z;
    r.x[n - 1 - i] = z;
    r.w[i] = r.w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return r;
}

const Rule& rule() {
  static const Rule r = make_rule();
  return r;
}

class Adaptive {
 public:
  Adaptive(const std::function<double(double)>& f, const Options& opt)
      : f_(f), opt_(opt) {}

  double panel(double a, double b) {
    const Rule& r = rule();
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    double s = 0.0;
    for (int i = 0; i < kOrder; ++i) s += r.w[i] * f_(mid + half * r.x[i]);
    ++panels_;
    return half * s;
  }

  double refine(double a, double b, double coarse, double target, int depth) {
    const double c = 0.5 * (a + b);
    const double left = panel(a, c), right = panel(c, b);
    const double fine = left + right;
    if (std::fabs(fine - coarse) <= target || depth >= opt_.max_depth ||
        panels_ >= opt_.max_panels || !std::isfinite(fine))
      return fine;
    return refine(a, c, left, target, depth + 1) +
           refine(c, b, right, target, depth + 1);
  }

  double run(const std::vector<double>& edges) {
    constexpr int kSeed = 8;
    std::vector<std::pair<double, double>> spans;
    std::vector<double> coarse;
    double estimate = 0.0;
    for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
      const double h = (edges[s + 1] - edges[s]) / kSeed;
      for (int k = 0; k < kSeed; ++k) {
        const double lo = edges[s] + k * h;
        const double hi = (k + 1 == kSeed) ? edges[s + 1] : lo + h;
        spans.emplace_back(lo, hi);
        coarse.push_back(panel(lo, hi));
        estimate += coarse.back();
      }
    }
    // A poor first estimate only tightens the tolerance; repeat once if the
    // refined value turns out much larger than the seed pass suggested.
    double result = 0.0;
    for (int pass = 0; pass < 2; ++pass) {
      const double target =
          opt_.rel_tol * std::max(std::fabs(estimate), 1e-300);
      result = 0.0;
      for (std::size_t i = 0; i < spans.size(); ++i)
        result += refine(spans[i].first, spans[i].second, coarse[i], target, 0);
      if (!(std::fabs(result) > 10.0 * std::fabs(estimate))) break;
      estimate = result;
    }
    return result;
  }

 private:
  const std::function<double(double)>& f_;
  Options opt_;
  long panels_ = 0;
};

std::vector<double> edges_for(double a, double b, std::span<const double> breaks) {
  std::vector<double> e{a};
  std::vector<double> inner(breaks.begin(), breaks.end());
  std::sort(inner.begin(), inner.end());
  for (double x : inner)
    if (x > e.back() && x < b) e.push_back(x);
  e.push_back(b);
  return e;
}

// Largest finite value of log_f on a uniform scan of [lo, hi].
double scan_max(const std::function<double(double)>& log_f, double lo, double hi,
                int points = 65) {
  double m = -kInf;
  for (int i = 0; i < points; ++i) {
    const double x = lo + (hi - lo) * i / (points - 1);
    const double v = log_f(x);
    if (std::isfinite(v)) m = std::max(m, v);
  }
  return m;
}

// log of the integral over a finite interval, scaled by a supplied maximum.
// Returns the scaled integral (in units of e^scale) and updates scale if the
// integrand was found to exceed it substantially.
double scaled_integral(const std::function<double(double)>& log_f,
                       const std::vector<double>& edges, double& scale,
                       const Options& opt) {
  for (int attempt = 0; attempt < 4; ++attempt) {
    double seen = -kInf;
    const double s = scale;
    std::function<double(double)> g = [&](double x) {
      const double v = log_f(x);
      if (v > seen) seen = v;
      return std::exp(v - s);
    };
    Adaptive ad(g, opt);
    const double val = ad.run(edges);
    if (std::isfinite(val) && seen <= scale + 600.0) return val;
    scale = seen;
  }
  fail(ErrorCode::DivergentMoment, "integrand exceeds double range");
}

}  // namespace

std::span<const double> gl_nodes() { return rule().x; }
std::span<const double> gl_weights() { return rule().w; }

double integrate(const std::function<double(double)>& f, double a, double b,
                 std::span<const double> breaks, const Options& opt) {
  require(std::isfinite(a) && std::isfinite(b), "integrate: finite interval required");
  if (a == b) return 0.0;
  if (b < a) return -integrate(f, b, a, breaks, opt);
  Adaptive ad(f, opt);
  return ad.run(edges_for(a, b, breaks));
}

double log_integrate(const std::function<double(double)>& log_f, double a,
                     double b, std::span<const double> breaks,
                     const Options& opt) {
  require(std::isfinite(a) && !(b < a), "log_integrate: bad interval");
  if (a == b) return -kInf;

  if (std::isfinite(b)) {
    const auto edges = edges_for(a, b, breaks);
    double scale = -kInf;
    for (std::size_t s = 0; s + 1 < edges.size(); ++s)
      scale = std::max(scale, scan_max(log_f, edges[s], edges[s + 1]));
    if (scale == -kInf) return -kInf;
    const double v = scaled_integral(log_f, edges, scale, opt);
    return v > 0.0 ? scale + std::log(v) : -kInf;
  }

  // Unbounded: slabs [a + 2^k - 1, a + 2^{k+1} - 1].
  constexpr double kCut = 1e-18;
  constexpr int kMaxSlabs = 80;
  double scale = -kInf;
  double total = 0.0;  // in units of e^scale
  double lo = a;
  double width = 1.0;
  for (int k = 0; k < kMaxSlabs; ++k) {
    const double hi = lo + width;
    const double m = scan_max(log_f, lo, hi);
    if (m > scale) {
      if (scale != -kInf) total *= std::exp(scale - m);
      scale = m;
    }
    double slab = 0.0;
    if (scale != -kInf) {
      std::vector<double> inner;
      for (double x : breaks)
        if (x > lo && x < hi) inner.push_back(x);
      double s = scale;
      slab = scaled_integral(log_f, edges_for(lo, hi, inner), s, opt);
      if (s != scale) {
        total *= std::exp(scale - s);
        scale = s;
      }
    }
    total += slab;
    if (!std::isfinite(total))
      fail(ErrorCode::DivergentMoment, "tail integral is not finite");
    const double at_cut = log_f(hi);
    const bool tail_small =
        scale == -kInf ||
        (k >= 2 && slab <= kCut * total &&
         (at_cut == -kInf || at_cut - scale <= std::log(kCut * total)));
    if (tail_small) {
      if (scale == -kInf || total <= 0.0) {
        if (k >= 6) return -kInf;
      } else {
        return scale + std::log(total);
      }
    }
    lo = hi;
    width *= 2.0;
  }
  fail(ErrorCode::DivergentMoment, "tail truncation did not stabilise");
}

}  // namespace coshtx::quad
