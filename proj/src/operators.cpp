#include "coshtx/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "coshtx/error.hpp"
#include "coshtx/quadrature.hpp"
#include "coshtx/special.hpp"
#include "coshtx/support.hpp"

namespace coshtx {

using special::kInf;

namespace {

double uniform01(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

Vec add(std::span<const double> x, std::span<const double> y) {
  Vec r(x.begin(), x.end());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += y[i];
  return r;
}

double max_abs_diff(std::span<const double> x, std::span<const double> y) {
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, std::fabs(x[i] - y[i]));
  return d;
}

double checked_log(double v) {
  if (std::isnan(v)) fail(ErrorCode::Overflow, "log psi could not be evaluated");
  return v;
}

// log psi(|Tx|) - log psi(|x|).
double log_ratio(const PsiFunction& p, const AffineMap& T, std::span<const double> x) {
  return checked_log(p.eval_log(norm2(T.apply(x)))) - checked_log(p.eval_log(norm2(x)));
}

Vec project_ball(Vec x, double radius) {
  const double n = norm2(x);
  if (n > radius)
    for (double& v : x) v *= radius / n;
  return x;
}

// Nelder-Mead maximisation of f over the closed ball of the given radius.
struct NmResult {
  Vec x;
  double f;
};

NmResult nelder_mead_max(const std::function<double(const Vec&)>& f, Vec x0, double radius,
                         double size, int max_iter) {
  const std::size_t d = x0.size();
  std::vector<Vec> s(d + 1, project_ball(x0, radius));
  for (std::size_t i = 0; i < d; ++i) {
    s[i + 1][i] += size;
    s[i + 1] = project_ball(s[i + 1], radius);
  }
  std::vector<double> fv(d + 1);
  for (std::size_t i = 0; i <= d; ++i) fv[i] = f(s[i]);
  std::vector<std::size_t> idx(d + 1);
  for (int it = 0; it < max_iter; ++it) {
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return fv[a] > fv[b]; });
    const std::size_t best = idx.front(), worst = idx.back();
    if (std::fabs(fv[best] - fv[worst]) <= 1e-13 * (1.0 + std::fabs(fv[best]))) {
      double spread = 0.0;
      for (std::size_t i = 0; i <= d; ++i) spread = std::max(spread, max_abs_diff(s[i], s[best]));
      if (spread <= 1e-9 * (1.0 + norm2(s[best]))) break;
    }
    Vec c(d, 0.0);
    for (std::size_t i = 0; i <= d; ++i)
      if (i != worst)
        for (std::size_t k = 0; k < d; ++k) c[k] += s[i][k] / d;
    auto along = [&](double t) {
      Vec y(d);
      for (std::size_t k = 0; k < d; ++k) y[k] = c[k] + t * (s[worst][k] - c[k]);
      return project_ball(std::move(y), radius);
    };
    const Vec xr = along(-1.0);
    const double fr = f(xr);
    const double second_worst = fv[idx[d > 0 ? d - 1 : 0]];
    if (fr > fv[best]) {
      const Vec xe = along(-2.0);
      const double fe = f(xe);
      if (fe > fr) {
        s[worst] = xe;
        fv[worst] = fe;
      } else {
        s[worst] = xr;
        fv[worst] = fr;
      }
    } else if (fr > second_worst) {
      s[worst] = xr;
      fv[worst] = fr;
    } else {
      const Vec xc = along(fr > fv[worst] ? -0.5 : 0.5);
      const double fc = f(xc);
      if (fc > std::max(fr, fv[worst])) {
        s[worst] = xc;
        fv[worst] = fc;
      } else {
        for (std::size_t i = 0; i <= d; ++i) {
          if (i == best) continue;
          for (std::size_t k = 0; k < d; ++k) s[i][k] = 0.5 * (s[i][k] + s[best][k]);
          fv[i] = f(s[i]);
        }
      }
    }
  }
  const std::size_t b = std::max_element(fv.begin(), fv.end()) - fv.begin();
  return {s[b], fv[b]};
}

}  // namespace

AffineMap::AffineMap(Matrix A, Vec a) : A_(std::move(A)), a_(std::move(a)) {
  const std::size_t k = a_.size();
  require(k >= 1 && k <= 4, "affine map dimension must be 1..4");
  require(A_.rows() == k && A_.cols() == k, "A must be kappa x kappa");
  for (std::size_t i = 0; i < k; ++i) {
    require(std::isfinite(a_[i]), "a must be finite");
    for (std::size_t j = 0; j < k; ++j) require(std::isfinite(A_(i, j)), "A must be finite");
  }
  det_ = determinant(A_);
  require(std::fabs(det_) > 1e-12, "A must be invertible (|det A| > 1e-12)");
  Ainv_ = inverse(A_);
  std::vector<Vec> probes{Vec(k, 0.0), a_};
  for (std::size_t i = 0; i < k; ++i) {
    Vec e(k, 0.0);
    e[i] = 1.0;
    probes.push_back(e);
  }
  for (const Vec& x : probes) {
    const Vec back = apply_inverse(apply(x));
    if (max_abs_diff(back, x) > 1e-10 * (1.0 + norm2(x)))
      fail(ErrorCode::IllConditioned, "inverse affine map does not round-trip");
  }
}

AffineMap AffineMap::translation(Vec a) {
  const std::size_t k = a.size();
  return AffineMap(Matrix::identity(k), std::move(a));
}

bool AffineMap::is_identity_linear() const { return A_ == Matrix::identity(a_.size()); }

Vec AffineMap::apply(std::span<const double> x) const {
  require(x.size() == a_.size(), "point dimension must match kappa");
  return add(A_ * x, a_);
}

Vec AffineMap::apply_inverse(std::span<const double> x) const {
  require(x.size() == a_.size(), "point dimension must match kappa");
  Vec y(x.begin(), x.end());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] -= a_[i];
  return Ainv_ * std::span<const double>(y);
}

AffineMap affine_from_json(const nlohmann::json& j) {
  require(j.is_object(), "operator must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it)
    require(it.key() == "kappa" || it.key() == "A" || it.key() == "a",
            "unknown operator field '" + it.key() + "'");
  try {
    const int k = j.at("kappa").get<int>();
    const auto a = j.at("a").get<Vec>();
    require(static_cast<int>(a.size()) == k, "'a' must have kappa entries");
    Matrix A = Matrix::identity(k);
    if (j.contains("A")) {
      const auto rows = j["A"].get<std::vector<Vec>>();
      require(static_cast<int>(rows.size()) == k, "'A' must have kappa rows");
      for (const auto& r : rows) require(static_cast<int>(r.size()) == k, "'A' rows need kappa entries");
      A = Matrix::from_rows(rows);
    }
    return AffineMap(std::move(A), a);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::InvalidInput, std::string("operator JSON: ") + e.what());
  }
}

nlohmann::ordered_json affine_to_json(const AffineMap& T) {
  nlohmann::ordered_json j;
  j["kappa"] = T.kappa();
  j["A"] = T.A().to_rows();
  j["a"] = T.a();
  return j;
}

std::vector<Vec> orbit(const AffineMap& T, std::span<const double> x, int n_max) {
  require(n_max >= 0 && n_max <= 64, "orbit length must be 0..64");
  std::vector<Vec> out{Vec(x.begin(), x.end())};
  for (int n = 1; n <= n_max; ++n) out.push_back(T.apply(out.back()));

  const std::size_t k = T.a().size();
  Matrix An = Matrix::identity(k);
  Vec geo(k, 0.0);  // sum_{j<n} A^j a
  for (int n = 0; n <= std::min(n_max, 8); ++n) {
    const Vec closed = add(An * x, geo);
    if (max_abs_diff(closed, out[n]) > 1e-10 * (1.0 + norm2(out[n])))
      fail(ErrorCode::IllConditioned, "orbit disagrees with its closed form");
    geo = add(geo, An * std::span<const double>(T.a()));
    An = An * T.A();
  }
  return out;
}

const char* to_string(Boundedness b) {
  switch (b) {
    case Boundedness::Bounded: return "yes";
    case Boundedness::Unbounded: return "no";
    case Boundedness::Inconclusive: return "inconclusive";
  }
  return "?";
}

NormResult ray_norm_sq(const PsiFunction& p, const AffineMap& T) {
  require(p.even(), "operator norms need an even psi");
  require(T.is_identity_linear(), "the ray reduction needs A = I");
  NormResult r;
  r.method = "ray";
  const double alpha = norm2(T.a());
  const GrowthRate g = growth_rate(p);
  r.tail_estimate = std::exp(g.b0 * alpha);
  if (alpha == 0.0) {
    r.verdict = Boundedness::Bounded;
    r.norm_sq = 1.0;
    r.argmax = Vec(T.kappa(), 0.0);
    return r;
  }
  if (g.superexponential) {
    r.verdict = Boundedness::Unbounded;
    r.norm_sq = r.log_norm_sq = kInf;
    return r;
  }
  constexpr int kPerOctave = 8;
  constexpr double kT0 = 1e-3, kTmax = 1048576.0;  // 2^20
  double best = checked_log(p.eval_log(alpha)) - checked_log(p.eval_log(0.0));
  double best_t = 0.0, best_half = best;
  for (int j = 0;; ++j) {
    const double t = kT0 * std::exp2(static_cast<double>(j) / kPerOctave);
    if (t > kTmax) break;
    const double f = checked_log(p.eval_log(t + alpha)) - checked_log(p.eval_log(t));
    if (f > best) {
      best = f;
      best_t = t;
    }
    if (t <= 0.5 * kTmax) best_half = best;
  }
  if (best - best_half >= std::log(1.05)) {
    r.verdict = Boundedness::Unbounded;
    r.norm_sq = r.log_norm_sq = kInf;
    return r;
  }
  r.verdict = Boundedness::Bounded;
  r.log_norm_sq = best;
  r.norm_sq = std::exp(best);
  r.argmax = T.a();
  for (double& v : r.argmax) v *= best_t / alpha;
  return r;
}

NormResult search_norm_sq(const PsiFunction& p, const AffineMap& T, const NormSearchPlan& plan) {
  require(p.even(), "operator norms need an even psi");
  const int k = T.kappa();
  const double log_det = std::log(std::fabs(T.det_A()));
  const double scale = 1.0 + norm2(T.a()) + spectral_norm(T.A());
  auto f = [&](const Vec& x) { return log_ratio(p, T, x); };

  std::mt19937_64 gen(plan.seed);
  std::vector<Vec> dirs;
  for (int i = 0; i < k; ++i) {
    Vec e(k, 0.0);
    e[i] = 1.0;
    dirs.push_back(e);
    e[i] = -1.0;
    dirs.push_back(e);
  }
  if (norm2(T.a()) > 0.0) {
    Vec u = T.a();
    for (double& v : u) v /= norm2(T.a());
    dirs.push_back(u);
    for (double& v : u) v = -v;
    dirs.push_back(u);
  }

  NormResult r;
  r.method = "search";
  std::vector<double> bests;
  Vec carry(k, 0.0);
  auto run_level = [&](int level) {
    const double radius = 64.0 * scale * std::pow(4.0, level);
    std::vector<Vec> starts{Vec(k, 0.0), carry};
    for (const Vec& d : dirs)
      for (double frac : {1.0 / 8.0, 1.0}) {
        Vec x = d;
        for (double& v : x) v *= frac * radius;
        starts.push_back(x);
      }
    for (int s = 0; s < plan.random_starts; ++s) {
      Vec x(k);
      do {
        for (double& v : x) v = (2.0 * uniform01(gen) - 1.0) * radius;
      } while (norm2(x) > radius);
      starts.push_back(x);
    }
    std::vector<std::pair<double, Vec>> ranked;
    for (const Vec& x : starts) ranked.emplace_back(f(x), x);
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    double best = ranked.front().first;
    Vec arg = ranked.front().second;
    for (std::size_t i = 0; i < std::min<std::size_t>(4, ranked.size()); ++i) {
      const auto nm = nelder_mead_max(f, ranked[i].second, radius, radius / 16.0, 400);
      if (nm.f > best) {
        best = nm.f;
        arg = nm.x;
      }
    }
    bests.push_back(best);
    carry = arg;
    r.argmax = arg;
  };
  for (int level = 0; level < 3; ++level) run_level(level);
  const double d2 = bests[2] - bests[1], d1 = bests[1] - bests[0];
  if (d2 <= 1e-3) {
    r.verdict = Boundedness::Bounded;
    // Keep widening while the supremum still creeps up (algebraic tails such as
    // sinhc approach their limit like 1/|x|). Radii stop near 2^24, where
    // log psi differences still carry about 1e-9 absolute accuracy.
    for (int level = 3; 64.0 * scale * std::pow(4.0, level) <= 0x1.0p24; ++level) {
      run_level(level);
      if (bests.back() - bests[bests.size() - 2] <= 1e-10) break;
    }
    r.log_norm_sq = bests.back() - log_det;
    r.norm_sq = std::exp(r.log_norm_sq);
  } else if (d1 >= std::log(1.05) && d2 >= std::log(1.05)) {
    r.verdict = Boundedness::Unbounded;
    r.norm_sq = r.log_norm_sq = kInf;
  } else {
    r.verdict = Boundedness::Inconclusive;
    r.log_norm_sq = bests[2] - log_det;
    r.norm_sq = std::exp(r.log_norm_sq);
  }
  r.tail_estimate = std::nan("");
  return r;
}

NormResult operator_norm_sq(const PsiFunction& p, const AffineMap& T, const NormSearchPlan& plan) {
  if (T.is_identity_linear()) return ray_norm_sq(p, T);
  return search_norm_sq(p, T, plan);
}

double log_rn_derivative(const PsiFunction& p, const AffineMap& T, std::span<const double> x) {
  return std::log(std::fabs(T.det_A())) + log_ratio(p, T, x);
}

double rn_derivative(const PsiFunction& p, const AffineMap& T, std::span<const double> x) {
  const double v = std::exp(log_rn_derivative(p, T, x));
  if (!std::isfinite(v)) fail(ErrorCode::Overflow, "Radon-Nikodym derivative out of range");
  return v;
}

MomentSequence orbit_sequence(const PsiFunction& p, const AffineMap& T, std::span<const double> x,
                              int n_max) {
  require(n_max >= 2 && n_max <= 64, "orbit_sequence needs 2 <= n_max <= 64");
  std::vector<double> logs;
  for (const Vec& y : orbit(T, x, n_max)) logs.push_back(checked_log(p.eval_log(norm2(y))));
  return MomentSequence::from_logs(std::move(logs), "orbit");
}

LogConvexResult logconvexity_test(const PsiFunction& p, double x_max, double step) {
  require(x_max > 0.0 && step > 0.0, "logconvexity_test needs positive x_max and step");
  LogConvexResult r;
  r.min_ratio = kInf;
  const long n = std::lround(x_max / step);
  for (long i = 0; i <= n; ++i) {
    const double x = i * step;
    const double psi = p.eval(x);
    const double g = p.eval_prime(x) / psi;
    const double ratio = p.eval_second(x) / psi - g * g;
    r.min_ratio = std::min(r.min_ratio, ratio);
    if (ratio < -1e-8 && !r.witness_x) r.witness_x = x;
  }
  r.yes = !r.witness_x;
  if (r.yes) r.note = "psi is log-convex on the grid: cohyponormal for every translation symbol";
  return r;
}

const char* to_string(TestFunction f) {
  switch (f) {
    case TestFunction::SmoothBump: return "smooth-bump";
    case TestFunction::Box: return "box";
    case TestFunction::Hat: return "hat";
  }
  return "?";
}

double eval_test_function(TestFunction f, std::span<const double> y) {
  switch (f) {
    case TestFunction::SmoothBump: {
      double r2 = 0.0;
      for (double v : y) r2 += v * v;
      return r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0;
    }
    case TestFunction::Box:
      for (double v : y)
        if (std::fabs(v) > 1.0) return 0.0;
      return 1.0;
    case TestFunction::Hat: {
      double prod = 1.0;
      for (double v : y) prod *= std::max(0.0, 1.0 - std::fabs(v));
      return prod;
    }
  }
  return 0.0;
}

SotResult sot_continuity_check(const PsiFunction& p, std::span<const double> b, TestFunction f,
                               const std::vector<Vec>& h_list) {
  const std::size_t k = b.size();
  require(k == 1 || k == 2, "sot_continuity_check supports kappa 1 or 2");
  require(p.even(), "sot_continuity_check needs an even psi");
  SotResult res;
  quad::Options opt;
  opt.rel_tol = k == 1 ? 1e-12 : 1e-9;

  for (const Vec& h : h_list) {
    require(h.size() == k, "each h must have kappa entries");
    if (norm2(h) == 0.0) {
      res.norms.push_back(0.0);
      continue;
    }
    auto integrand = [&](std::span<const double> x) {
      Vec y0(k), y1(k);
      for (std::size_t i = 0; i < k; ++i) {
        y0[i] = x[i] + b[i];
        y1[i] = y0[i] + h[i];
      }
      const double d = eval_test_function(f, y1) - eval_test_function(f, y0);
      if (d == 0.0) return 0.0;
      return d * d * std::exp(-p.eval_log(norm2(x)));
    };
    // f(y) vanishes outside [-1,1]^k, so x lives in the hull of two shifted cubes.
    auto edges = [&](std::size_t i) {
      return std::vector<double>{-1.0 - b[i], 1.0 - b[i], -1.0 - b[i] - h[i], 1.0 - b[i] - h[i]};
    };
    auto interior = [](std::vector<double> e, double lo, double hi) {
      std::sort(e.begin(), e.end());
      std::vector<double> in;
      for (double v : e)
        if (v > lo && v < hi) in.push_back(v);
      return in;
    };
    const auto e0 = edges(0);
    const double lo0 = *std::min_element(e0.begin(), e0.end());
    const double hi0 = *std::max_element(e0.begin(), e0.end());
    double val;
    if (k == 1) {
      val = quad::integrate([&](double x) { return integrand(std::span<const double>(&x, 1)); },
                            lo0, hi0, interior(e0, lo0, hi0), opt);
    } else {
      const auto e1 = edges(1);
      const double lo1 = *std::min_element(e1.begin(), e1.end());
      const double hi1 = *std::max_element(e1.begin(), e1.end());
      auto inner = [&](double x0) {
        std::vector<double> br = e1;
        if (f == TestFunction::SmoothBump) {
          // circle |y| = 1 crossings for both shifts
          for (double shift0 : {b[0], b[0] + h[0]}) {
            const double y0 = x0 + shift0;
            if (std::fabs(y0) < 1.0) {
              const double c = std::sqrt(1.0 - y0 * y0);
              for (double shift1 : {b[1], b[1] + h[1]}) {
                br.push_back(c - shift1);
                br.push_back(-c - shift1);
              }
            }
          }
        }
        return quad::integrate(
            [&](double x1) {
              const double x[2] = {x0, x1};
              return integrand(std::span<const double>(x, 2));
            },
            lo1, hi1, interior(br, lo1, hi1), opt);
      };
      val = quad::integrate(inner, lo0, hi0, interior(e0, lo0, hi0), opt);
    }
    res.norms.push_back(val);
  }

  std::vector<std::size_t> order(h_list.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t c) { return norm2(h_list[a]) > norm2(h_list[c]); });
  for (std::size_t i = 1; i < order.size(); ++i)
    if (res.norms[order[i]] > res.norms[order[i - 1]]) res.monotone = false;
  return res;
}

const char* to_string(CosubVerdict v) {
  switch (v) {
    case CosubVerdict::Yes: return "yes";
    case CosubVerdict::No: return "no";
    case CosubVerdict::ConsistentUpTo: return "consistent-up-to";
    case CosubVerdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

std::vector<Vec> sample_points(const AffineMap& T, const ClassifyPlan& plan) {
  const int k = T.kappa();
  std::vector<Vec> pts{Vec(k, 0.0)};
  for (int i = 0; i < k; ++i) {
    Vec e(k, 0.0);
    e[i] = 1.0;
    pts.push_back(e);
    e[i] = -1.0;
    pts.push_back(e);
  }
  const double an = norm2(T.a());
  if (an > 0.0) {
    Vec u = T.a();
    for (double& v : u) v /= an;
    Vec w = u;
    for (double& v : w) v = -v;
    // Skip +-a/|a| when it is already a coordinate direction.
    for (const Vec& v : {u, w})
      if (std::find(pts.begin(), pts.end(), v) == pts.end()) pts.push_back(v);
    if (k >= 2) {
      // Gram-Schmidt of the first unit vector least aligned with a.
      std::size_t j = 0;
      for (std::size_t i = 1; i < u.size(); ++i)
        if (std::fabs(u[i]) < std::fabs(u[j])) j = i;
      Vec o(k, 0.0);
      o[j] = 1.0;
      for (int i = 0; i < k; ++i) o[i] -= u[j] * u[i];
      const double on = norm2(o);
      for (double& v : o) v /= on;
      pts.push_back(o);
    }
  }
  std::mt19937_64 gen(plan.seed);
  for (int s = 0; s < plan.random_points; ++s) {
    Vec x(k);
    do {
      for (double& v : x) v = (2.0 * uniform01(gen) - 1.0) * plan.radius;
    } while (norm2(x) > plan.radius);
    pts.push_back(x);
  }
  return pts;
}

ClassificationReport classify_cosubnormal(const PsiFunction& p, const AffineMap& T,
                                          const ClassifyPlan& plan) {
  require(p.even(), "classification needs an even psi");
  require(plan.m >= 1 && plan.m <= 10, "classification Hankel order m must be 1..10");
  ClassificationReport rep;
  const int k = T.kappa();
  const bool a_is_I = T.is_identity_linear();
  const double a_norm = spectral_norm(T.A());
  const bool isometric_norm = std::fabs(a_norm - 1.0) <= 1e-10;

  rep.bounded = operator_norm_sq(p, T, plan.norm);
  rep.h_class = classify_H(p.taylor_coeffs(16));
  const GrowthRate g = growth_rate(p);
  rep.support_estimates["growth_b0"] = g.b0;
  rep.support_estimates["logderiv"] = support_from_logderiv(p, 50.0).estimate;

  // Step 1: closed-form shortcuts for psi consistent with a compact cosh transform.
  const ExpConvexResult ec = is_exponentially_convex(p, plan.grid);
  const bool certified = ec.verdict == TestVerdict::Consistent && !g.superexponential;
  std::optional<CosubnormalResult> shortcut;
  if (certified) {
    rep.notes.push_back("psi certified: exponentially convex on the grid plan, finite growth rate");
    if (p.is_constant() && isometric_norm) {
      shortcut = CosubnormalResult{CosubVerdict::Yes, "unitary-const", 0, std::nullopt};
      rep.notes.push_back("psi constant and |A| = 1: |det A|^{1/2} C is unitary");
    } else if (a_is_I) {
      shortcut = CosubnormalResult{CosubVerdict::Yes, "translation", 0, std::nullopt};
      rep.notes.push_back("A = I with a compact transform: cosubnormal for every a");
    } else if (k == 1 && T.A()(0, 0) == -1.0 && !p.is_constant()) {
      shortcut = CosubnormalResult{CosubVerdict::No, "reflection", 0, std::nullopt};
      rep.notes.push_back("kappa = 1, A = -I, psi non-constant: cosubnormality forces A = I");
    } else if (k >= 2 && isometric_norm) {
      shortcut = CosubnormalResult{CosubVerdict::Inconclusive, "isometric-A-kappa>=2", 0, std::nullopt};
      rep.notes.push_back("|A| = 1, A != I, kappa >= 2: no shortcut applies");
    }
  } else {
    rep.notes.push_back(std::string("psi not certified: exponential convexity ") +
                        to_string(ec.verdict) +
                        (g.superexponential ? ", growth superexponential" : ""));
  }

  // Step 2: Hankel tests of the orbit sequences at the sample points.
  rep.sample_points = sample_points(T, plan);
  std::optional<CosubWitness> witness;
  bool borderline = false;
  for (const Vec& x : rep.sample_points) {
    StieltjesResult st;
    try {
      st = is_stieltjes(orbit_sequence(p, T, x, 2 * plan.m + 1), plan.m);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NonFiniteEntry && e.code() != ErrorCode::Overflow) throw;
      rep.notes.push_back("orbit sequence not representable at a sample point; skipped");
      continue;
    }
    if (st.verdict == TestVerdict::Borderline) borderline = true;
    if (st.failure) {
      const auto& f = *st.failure;
      witness = CosubWitness{x,
                             f.m,
                             f.shift,
                             f.report.witness,
                             f.report.witness_form,
                             f.report.witness_log_scale,
                             f.report.min_eigenvalue};
      break;
    }
  }

  CosubnormalResult& out = rep.cosubnormal;
  out.m = plan.m;
  if (shortcut && shortcut->verdict == CosubVerdict::Yes) {
    if (witness) {
      out = {CosubVerdict::Inconclusive, "conflict", plan.m, witness};
      rep.notes.push_back("numeric Hankel refutation conflicts with the shortcut");
    } else {
      out = *shortcut;
    }
  } else if (shortcut && shortcut->verdict == CosubVerdict::No) {
    out = {CosubVerdict::No, shortcut->reason, plan.m, witness};
    if (!witness) rep.notes.push_back("no Hankel witness found on the sample plan");
  } else if (witness) {
    out = {CosubVerdict::No, "hankel-witness", plan.m, witness};
  } else if (shortcut) {
    out = {CosubVerdict::Inconclusive, shortcut->reason, plan.m, std::nullopt};
  } else {
    out = {CosubVerdict::ConsistentUpTo, "hankel-consistent", plan.m, std::nullopt};
    if (borderline) rep.notes.push_back("some Hankel tests were borderline");
  }

  if (rep.bounded.verdict == Boundedness::Unbounded && out.verdict != CosubVerdict::No)
    rep.notes.push_back("unbounded-regime: cosubnormality reported for the formal orbit sequences");
  if (a_is_I) rep.cohyponormal_logconvex = logconvexity_test(p, plan.logconvex_x_max, plan.logconvex_step);
  return rep;
}

}  // namespace coshtx
