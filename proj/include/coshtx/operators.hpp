#pragma once

// Composition operators f -> f o T on L^2(psi(|x|)^{-1} dx) with affine
// symbol T x = A x + a.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coshtx/linalg.hpp"
#include "coshtx/moments.hpp"
#include "coshtx/posdef.hpp"
#include "coshtx/transform.hpp"
#include "json.hpp"

namespace coshtx {

using Vec = std::vector<double>;

class AffineMap {
 public:
  AffineMap(Matrix A, Vec a);
  static AffineMap translation(Vec a);

  int kappa() const { return static_cast<int>(a_.size()); }
  const Matrix& A() const { return A_; }
  const Vec& a() const { return a_; }
  double det_A() const { return det_; }
  bool is_identity_linear() const;  // A == I exactly
  Vec apply(std::span<const double> x) const;
  Vec apply_inverse(std::span<const double> x) const;

 private:
  Matrix A_, Ainv_;
  Vec a_;
  double det_ = 1.0;
};

AffineMap affine_from_json(const nlohmann::json& j);
nlohmann::ordered_json affine_to_json(const AffineMap& T);

/// T^0 x .. T^{n_max} x by iteration; cross-checked against
/// A^n x + sum_{j<n} A^j a for n <= 8.
std::vector<Vec> orbit(const AffineMap& T, std::span<const double> x, int n_max);

enum class Boundedness { Bounded, Unbounded, Inconclusive };
const char* to_string(Boundedness b);

struct NormResult {
  Boundedness verdict = Boundedness::Inconclusive;
  double norm_sq = 0.0;      // |det A|^{-1} sup psi(|Tx|)/psi(|x|) when bounded
  double log_norm_sq = 0.0;
  std::string method;        // "ray" or "search"
  double tail_estimate = 0.0;  // e^{b0 |a|} / |det A| for A = I, otherwise NaN
  Vec argmax;                // best point found
};

struct NormSearchPlan {
  int random_starts = 8;
  std::uint64_t seed = 0;
};

NormResult operator_norm_sq(const PsiFunction& p, const AffineMap& T,
                            const NormSearchPlan& plan = {});
/// The A = I reduction sup_{t>=0} psi(t + |a|)/psi(t) alone.
NormResult ray_norm_sq(const PsiFunction& p, const AffineMap& T);
/// Multistart search regardless of the shape of A.
NormResult search_norm_sq(const PsiFunction& p, const AffineMap& T,
                          const NormSearchPlan& plan = {});

/// |det A| psi(|Tx|) / psi(|x|).
double rn_derivative(const PsiFunction& p, const AffineMap& T, std::span<const double> x);
double log_rn_derivative(const PsiFunction& p, const AffineMap& T, std::span<const double> x);

/// {psi(|T^n x|)}_{n <= n_max}, stored in log form.
MomentSequence orbit_sequence(const PsiFunction& p, const AffineMap& T,
                              std::span<const double> x, int n_max);

struct LogConvexResult {
  bool yes = true;
  std::optional<double> witness_x;  // first grid point with Theta < -1e-8 psi^2
  double min_ratio = 0.0;           // min Theta / psi^2 over the grid
  std::string note;
};

/// Theta = psi'' psi - psi'^2 >= -1e-8 psi^2 on [0, x_max].
LogConvexResult logconvexity_test(const PsiFunction& p, double x_max = 20.0, double step = 0.01);

enum class TestFunction { SmoothBump, Box, Hat };
const char* to_string(TestFunction f);
double eval_test_function(TestFunction f, std::span<const double> y);

struct SotResult {
  std::vector<double> norms;  // ||C_{I+b+h} f - C_{I+b} f||^2, one per h
  bool monotone = true;       // norms shrink with |h|
};

SotResult sot_continuity_check(const PsiFunction& p, std::span<const double> b, TestFunction f,
                               const std::vector<Vec>& h_list);

enum class CosubVerdict { Yes, No, ConsistentUpTo, Inconclusive };
const char* to_string(CosubVerdict v);

struct CosubWitness {
  Vec x;
  int m = 0;
  int shift = 0;
  Vec vector;
  double form = 0.0;             // w^T H w, scaled by exp(-form_log_scale); negative
  double form_log_scale = 0.0;
  double min_eigenvalue = 0.0;   // normalised
};

struct CosubnormalResult {
  CosubVerdict verdict = CosubVerdict::Inconclusive;
  std::string reason;
  int m = 0;
  std::optional<CosubWitness> witness;
};

struct ClassifyPlan {
  int m = 10;
  std::uint64_t seed = 0;
  int random_points = 8;
  double radius = 3.0;
  GridPlan grid;
  NormSearchPlan norm;
  double logconvex_x_max = 20.0;
  double logconvex_step = 0.01;
};

struct ClassificationReport {
  NormResult bounded;
  CosubnormalResult cosubnormal;
  std::optional<LogConvexResult> cohyponormal_logconvex;  // A = I only
  HClass h_class;
  std::map<std::string, double> support_estimates;
  std::vector<std::string> notes;
  std::vector<Vec> sample_points;
};

/// Default sample set: origin, +-e_i, +-a/|a|, a vector orthogonal to a,
/// then seeded uniform points in the ball of radius plan.radius.
std::vector<Vec> sample_points(const AffineMap& T, const ClassifyPlan& plan);

ClassificationReport classify_cosubnormal(const PsiFunction& p, const AffineMap& T,
                                          const ClassifyPlan& plan = {});

}  // namespace coshtx
