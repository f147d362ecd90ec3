#include "coshtx/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "coshtx/error.hpp"
#include "coshtx/quadrature.hpp"
#include "coshtx/special.hpp"

namespace coshtx {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double pow2k(double u, int k) {
  for (int i = 0; i < k; ++i) u *= u;
  return u;
}

double table_value(const std::vector<double>& us, const std::vector<double>& vals,
                   double u) {
  if (u < us.front() || u > us.back()) return 0.0;
  auto it = std::upper_bound(us.begin(), us.end(), u);
  if (it == us.end()) return vals.back();
  const std::size_t j = static_cast<std::size_t>(it - us.begin());
  const std::size_t i = j - 1;
  const double s = (u - us[i]) / (us[j] - us[i]);
  return vals[i] + s * (vals[j] - vals[i]);
}

void validate(const DensitySegment& d) {
  require(std::isfinite(d.weight) && d.weight > 0.0, "density weight must be positive");
  require(d.squarings >= 0, "density squarings must be nonnegative");
  switch (d.kind) {
    case DensityKind::Uniform:
      require(std::isfinite(d.lo) && std::isfinite(d.hi) && d.lo >= 0.0 && d.hi > d.lo,
              "uniform density needs 0 <= a < b");
      break;
    case DensityKind::Gauss2u:
      break;
    case DensityKind::Table: {
      require(d.us.size() >= 2 && d.us.size() == d.vals.size(),
              "table density needs matching us/vals with at least two points");
      require(d.us.front() >= 0.0, "table density support must lie in [0, inf)");
      for (std::size_t i = 0; i < d.us.size(); ++i) {
        require(std::isfinite(d.us[i]) && std::isfinite(d.vals[i]) && d.vals[i] >= 0.0,
                "table density values must be finite and nonnegative");
        if (i > 0) require(d.us[i] > d.us[i - 1], "table density grid must increase");
      }
      double mass = 0.0;
      for (std::size_t i = 1; i < d.us.size(); ++i)
        mass += 0.5 * (d.vals[i] + d.vals[i - 1]) * (d.us[i] - d.us[i - 1]);
      require(mass > 0.0, "table density has zero mass");
      break;
    }
  }
}

}  // namespace

double DensitySegment::support_lo() const {
  switch (kind) {
    case DensityKind::Uniform: return pow2k(lo, squarings);
    case DensityKind::Gauss2u: return 0.0;
    case DensityKind::Table: return pow2k(us.front(), squarings);
  }
  return 0.0;
}

double DensitySegment::support_hi() const {
  switch (kind) {
    case DensityKind::Uniform: return pow2k(hi, squarings);
    case DensityKind::Gauss2u: return kInf;
    case DensityKind::Table: return pow2k(us.back(), squarings);
  }
  return 0.0;
}

double DensitySegment::mass() const {
  switch (kind) {
    case DensityKind::Uniform: return weight * (hi - lo);
    case DensityKind::Gauss2u: return weight;
    case DensityKind::Table: {
      double m = 0.0;
      for (std::size_t i = 1; i < us.size(); ++i)
        m += 0.5 * (vals[i] + vals[i - 1]) * (us[i] - us[i - 1]);
      return weight * m;
    }
  }
  return 0.0;
}

double DensitySegment::log_density(double t) const {
  if (t < 0.0) return -kInf;
  // Undo the squarings: u = t^(1/2^k), du/dt = u / (2^k t).
  double u = t;
  double log_jac = 0.0;
  for (int i = 0; i < squarings; ++i) {
    const double r = std::sqrt(u);
    log_jac -= std::log(2.0 * r);
    u = r;
  }
  double base = -kInf;
  switch (kind) {
    case DensityKind::Uniform:
      if (u >= lo && u <= hi) base = 0.0;
      break;
    case DensityKind::Gauss2u:
      base = u > 0.0 ? std::log(2.0 * u) - u * u : -kInf;
      break;
    case DensityKind::Table: {
      const double v = table_value(us, vals, u);
      base = v > 0.0 ? std::log(v) : -kInf;
      break;
    }
  }
  return base == -kInf ? -kInf : base + std::log(weight) + log_jac;
}

std::vector<double> DensitySegment::breakpoints() const {
  std::vector<double> b;
  if (kind == DensityKind::Table)
    for (double u : us) b.push_back(pow2k(u, squarings));
  return b;
}

MeasureSpec::MeasureSpec(std::vector<Atom> atoms, std::vector<DensitySegment> densities)
    : atoms_(std::move(atoms)), densities_(std::move(densities)) {
  special::CompensatedSum mass;
  for (const Atom& a : atoms_) {
    require(std::isfinite(a.u) && a.u >= 0.0, "atom location must lie in [0, inf)");
    require(std::isfinite(a.w) && a.w > 0.0, "atom weight must be positive");
    mass.add(a.w);
  }
  for (const DensitySegment& d : densities_) {
    validate(d);
    mass.add(d.mass());
  }
  total_mass_ = mass.value();
}

MeasureSpec MeasureSpec::atom(double u, double w) { return MeasureSpec({{u, w}}, {}); }

MeasureSpec MeasureSpec::uniform(double lo, double hi, double weight) {
  DensitySegment d;
  d.kind = DensityKind::Uniform;
  d.lo = lo;
  d.hi = hi;
  d.weight = weight;
  return MeasureSpec({}, {d});
}

MeasureSpec MeasureSpec::gauss2u(double weight) {
  DensitySegment d;
  d.kind = DensityKind::Gauss2u;
  d.weight = weight;
  return MeasureSpec({}, {d});
}

MeasureSpec MeasureSpec::table(std::vector<double> us, std::vector<double> vals) {
  DensitySegment d;
  d.kind = DensityKind::Table;
  d.us = std::move(us);
  d.vals = std::move(vals);
  return MeasureSpec({}, {d});
}

MeasureSpec MeasureSpec::operator+(const MeasureSpec& other) const {
  auto atoms = atoms_;
  atoms.insert(atoms.end(), other.atoms_.begin(), other.atoms_.end());
  auto dens = densities_;
  dens.insert(dens.end(), other.densities_.begin(), other.densities_.end());
  return MeasureSpec(std::move(atoms), std::move(dens));
}

double log_integrate_measure(const MeasureSpec& m,
                             const std::function<double(double)>& log_kernel) {
  std::vector<double> parts;
  for (const Atom& a : m.atoms()) parts.push_back(std::log(a.w) + log_kernel(a.u));
  for (const DensitySegment& d : m.densities()) {
    const auto breaks = d.breakpoints();
    auto integrand = [&](double t) {
      const double ld = d.log_density(t);
      if (ld == -kInf) return -kInf;
      return ld + log_kernel(t);
    };
    parts.push_back(
        quad::log_integrate(integrand, d.support_lo(), d.support_hi(), breaks));
  }
  return special::log_sum_exp(parts);
}

double log_moment(const MeasureSpec& m, int n) {
  require(n >= 0, "moment order must be nonnegative");
  if (n == 0) return m.empty() ? -kInf : std::log(m.total_mass());
  const double p = 2.0 * n;
  return log_integrate_measure(m, [p](double u) { return p * std::log(u); });
}

double moment(const MeasureSpec& m, int n) {
  require(n >= 0, "moment order must be nonnegative");
  if (n == 0) {
    // The quadrature route is kept for n = 0 so total_mass can be cross-checked.
    const double lm =
        log_integrate_measure(m, [](double) { return 0.0; });
    return std::exp(lm);
  }
  const double lm = log_moment(m, n);
  const double v = std::exp(lm);
  if (!std::isfinite(v) || std::isnan(lm))
    fail(ErrorCode::DivergentMoment,
         "moment of order " + std::to_string(n) + " exceeds double range");
  return v;
}

double raw_moment(const MeasureSpec& m, int n) {
  require(n >= 0, "moment order must be nonnegative");
  const double lm = n == 0 ? log_integrate_measure(m, [](double) { return 0.0; })
                           : log_integrate_measure(m, [n](double t) {
                               return n * std::log(t);
                             });
  const double v = std::exp(lm);
  if (!std::isfinite(v))
    fail(ErrorCode::DivergentMoment, "raw moment exceeds double range");
  return v;
}

double support_sup(const MeasureSpec& m) {
  double s = 0.0;
  for (const Atom& a : m.atoms()) s = std::max(s, a.u);
  for (const DensitySegment& d : m.densities()) s = std::max(s, d.support_hi());
  return s;
}

MeasureSpec pushforward_sq(const MeasureSpec& m) {
  std::vector<Atom> atoms;
  for (const Atom& a : m.atoms()) atoms.push_back({a.u * a.u, a.w});
  std::vector<DensitySegment> dens = m.densities();
  for (auto& d : dens) ++d.squarings;
  return MeasureSpec(std::move(atoms), std::move(dens));
}

MeasureSpec measure_from_json(const nlohmann::json& j) {
  require(j.is_object(), "measure must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it)
    require(it.key() == "atoms" || it.key() == "densities",
            "unknown measure field '" + it.key() + "'");
  std::vector<Atom> atoms;
  std::vector<DensitySegment> dens;
  try {
    if (j.contains("atoms")) {
      require(j["atoms"].is_array(), "'atoms' must be an array");
      for (const auto& a : j["atoms"]) atoms.push_back({a.at("u").get<double>(), a.at("w").get<double>()});
    }
    if (j.contains("densities")) {
      require(j["densities"].is_array(), "'densities' must be an array");
      for (const auto& dj : j["densities"]) {
        DensitySegment d;
        const std::string kind = dj.at("kind").get<std::string>();
        if (kind == "uniform") {
          d.kind = DensityKind::Uniform;
          d.lo = dj.at("a").get<double>();
          d.hi = dj.at("b").get<double>();
        } else if (kind == "gauss2u") {
          d.kind = DensityKind::Gauss2u;
        } else if (kind == "table") {
          d.kind = DensityKind::Table;
          d.us = dj.at("us").get<std::vector<double>>();
          d.vals = dj.at("vals").get<std::vector<double>>();
        } else {
          fail(ErrorCode::InvalidInput, "unknown density kind '" + kind + "'");
        }
        d.weight = dj.value("w", 1.0);
        d.squarings = dj.value("squarings", 0);
        dens.push_back(std::move(d));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::InvalidInput, std::string("measure JSON: ") + e.what());
  }
  return MeasureSpec(std::move(atoms), std::move(dens));
}

nlohmann::ordered_json measure_to_json(const MeasureSpec& m) {
  nlohmann::ordered_json j;
  j["atoms"] = nlohmann::ordered_json::array();
  for (const Atom& a : m.atoms()) j["atoms"].push_back({{"u", a.u}, {"w", a.w}});
  j["densities"] = nlohmann::ordered_json::array();
  for (const DensitySegment& d : m.densities()) {
    nlohmann::ordered_json dj;
    switch (d.kind) {
      case DensityKind::Uniform:
        dj["kind"] = "uniform";
        dj["a"] = d.lo;
        dj["b"] = d.hi;
        break;
      case DensityKind::Gauss2u:
        dj["kind"] = "gauss2u";
        break;
      case DensityKind::Table:
        dj["kind"] = "table";
        dj["us"] = d.us;
        dj["vals"] = d.vals;
        break;
    }
    if (d.weight != 1.0) dj["w"] = d.weight;
    if (d.squarings != 0) dj["squarings"] = d.squarings;
    j["densities"].push_back(dj);
  }
  return j;
}

}  // namespace coshtx
