#include "coshtx/coshtx.h"

#include <cmath>
#include <map>
#include <memory>
#include <new>
#include <string>
#include <utility>
#include <vector>

#include "coshtx/error.hpp"
#include "coshtx/operators.hpp"
#include "coshtx/report.hpp"
#include "coshtx/transform.hpp"
#include "coshtx/verification.hpp"

struct coshtx_measure {
  coshtx::MeasureSpec m;
};
struct coshtx_psi {
  coshtx::PsiFunction p;
};
struct coshtx_affine {
  coshtx::AffineMap T;
};
struct coshtx_bundle {
  std::string report;
  bool ok = true;
  std::vector<std::pair<std::string, std::string>> files;
};

namespace {

thread_local std::string g_last_error;

coshtx_status status_of(coshtx::ErrorCode c) {
  using coshtx::ErrorCode;
  switch (c) {
    case ErrorCode::InvalidInput: return COSHTX_ERR_INVALID_INPUT;
    case ErrorCode::UnknownCatalogEntry: return COSHTX_ERR_UNKNOWN_CATALOG;
    case ErrorCode::BadParams: return COSHTX_ERR_BAD_PARAMS;
    case ErrorCode::DivergentMoment: return COSHTX_ERR_DIVERGENT_MOMENT;
    case ErrorCode::Overflow: return COSHTX_ERR_OVERFLOW;
    case ErrorCode::NonFiniteEntry: return COSHTX_ERR_NON_FINITE;
    case ErrorCode::IllConditioned: return COSHTX_ERR_ILL_CONDITIONED;
  }
  return COSHTX_ERR_INTERNAL;
}

// Runs f, translating exceptions into status codes and the thread-local message.
template <class F>
coshtx_status guard(F&& f) {
  try {
    g_last_error.clear();
    f();
    return COSHTX_OK;
  } catch (const coshtx::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const nlohmann::json::exception& e) {
    g_last_error = std::string("JSON: ") + e.what();
    return COSHTX_ERR_INVALID_INPUT;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return COSHTX_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return COSHTX_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) coshtx::fail(coshtx::ErrorCode::InvalidInput, std::string(what) + " must not be NULL");
}

coshtx_bundle* wrap(coshtx::report::Bundle&& b) {
  auto* out = new coshtx_bundle;
  out->report = coshtx::report::dump(b.report);
  out->ok = b.ok;
  for (auto& [k, v] : b.files) out->files.emplace_back(k, std::move(v));
  return out;
}

}  // namespace

extern "C" {

const char* coshtx_version(void) { return "0.1.0"; }

const char* coshtx_status_string(coshtx_status s) {
  switch (s) {
    case COSHTX_OK: return "ok";
    case COSHTX_ERR_INVALID_INPUT: return "invalid input";
    case COSHTX_ERR_UNKNOWN_CATALOG: return "unknown catalog entry";
    case COSHTX_ERR_BAD_PARAMS: return "bad parameters";
    case COSHTX_ERR_DIVERGENT_MOMENT: return "divergent moment";
    case COSHTX_ERR_OVERFLOW: return "overflow";
    case COSHTX_ERR_NON_FINITE: return "non-finite matrix entry";
    case COSHTX_ERR_ILL_CONDITIONED: return "ill-conditioned";
    case COSHTX_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* coshtx_last_error(void) { return g_last_error.c_str(); }

coshtx_status coshtx_measure_from_json(const char* json, coshtx_measure** out) {
  return guard([&] {
    need(json, "json");
    need(out, "out");
    *out = new coshtx_measure{coshtx::measure_from_json(nlohmann::json::parse(json))};
  });
}

void coshtx_measure_free(coshtx_measure* m) { delete m; }

coshtx_status coshtx_measure_moment(const coshtx_measure* m, int n, double* out) {
  return guard([&] {
    need(m, "measure");
    need(out, "out");
    *out = coshtx::moment(m->m, n);
  });
}

coshtx_status coshtx_measure_support_sup(const coshtx_measure* m, double* out) {
  return guard([&] {
    need(m, "measure");
    need(out, "out");
    *out = coshtx::support_sup(m->m);
  });
}

coshtx_status coshtx_psi_from_json(const char* json, coshtx_psi** out) {
  return guard([&] {
    need(json, "json");
    need(out, "out");
    *out = new coshtx_psi{coshtx::psi_from_json(nlohmann::json::parse(json))};
  });
}

coshtx_status coshtx_psi_catalog(const char* name, const char* const* keys, const double* values,
                                 size_t n_params, coshtx_psi** out) {
  return guard([&] {
    need(name, "name");
    need(out, "out");
    std::map<std::string, double> params;
    if (n_params > 0) {
      need(keys, "keys");
      need(values, "values");
    }
    for (size_t i = 0; i < n_params; ++i) {
      need(keys[i], "parameter key");
      params[keys[i]] = values[i];
    }
    *out = new coshtx_psi{coshtx::catalog_get(name, params)};
  });
}

coshtx_status coshtx_psi_from_measure(const coshtx_measure* m, coshtx_psi** out) {
  return guard([&] {
    need(m, "measure");
    need(out, "out");
    *out = new coshtx_psi{coshtx::PsiFunction::from_measure(m->m)};
  });
}

void coshtx_psi_free(coshtx_psi* p) { delete p; }

coshtx_status coshtx_psi_eval(const coshtx_psi* p, double x, double* out) {
  return guard([&] {
    need(p, "psi");
    need(out, "out");
    *out = p->p.eval(x);
  });
}

coshtx_status coshtx_psi_eval_log(const coshtx_psi* p, double x, double* out) {
  return guard([&] {
    need(p, "psi");
    need(out, "out");
    *out = p->p.eval_log(x);
  });
}

coshtx_status coshtx_psi_eval_prime(const coshtx_psi* p, double x, double* out) {
  return guard([&] {
    need(p, "psi");
    need(out, "out");
    *out = p->p.eval_prime(x);
  });
}

coshtx_status coshtx_psi_eval_phi(const coshtx_psi* p, double x, double* out) {
  return guard([&] {
    need(p, "psi");
    need(out, "out");
    *out = p->p.eval_phi(x);
  });
}

coshtx_status coshtx_psi_series_coeffs(const coshtx_psi* p, int N, double* out) {
  return guard([&] {
    need(p, "psi");
    need(out, "out");
    const auto seq = coshtx::series_coeffs(p->p, N);
    if (!seq.linear_finite())
      coshtx::fail(coshtx::ErrorCode::Overflow, "moments exceed double range; use the log form");
    for (int n = 0; n <= N; ++n) out[n] = seq.value(n);
  });
}

coshtx_status coshtx_psi_log_series_coeffs(const coshtx_psi* p, int N, double* out) {
  return guard([&] {
    need(p, "psi");
    need(out, "out");
    const auto seq = coshtx::series_coeffs(p->p, N);
    for (int n = 0; n <= N; ++n) out[n] = seq.log_abs(n);
  });
}

coshtx_status coshtx_psi_growth_rate(const coshtx_psi* p, double* b0, double* a0) {
  return guard([&] {
    need(p, "psi");
    const auto g = coshtx::growth_rate(p->p);
    if (b0) *b0 = g.b0;
    if (a0) *a0 = g.a0;
  });
}

coshtx_status coshtx_affine_create(int kappa, const double* A, const double* a,
                                   coshtx_affine** out) {
  return guard([&] {
    need(a, "a");
    need(out, "out");
    coshtx::require(kappa >= 1 && kappa <= 4, "kappa must be 1..4");
    coshtx::Matrix M = coshtx::Matrix::identity(kappa);
    if (A)
      for (int i = 0; i < kappa; ++i)
        for (int j = 0; j < kappa; ++j) M(i, j) = A[i * kappa + j];
    *out = new coshtx_affine{coshtx::AffineMap(std::move(M), coshtx::Vec(a, a + kappa))};
  });
}

coshtx_status coshtx_affine_from_json(const char* json, coshtx_affine** out) {
  return guard([&] {
    need(json, "json");
    need(out, "out");
    *out = new coshtx_affine{coshtx::affine_from_json(nlohmann::json::parse(json))};
  });
}

void coshtx_affine_free(coshtx_affine* T) { delete T; }

coshtx_status coshtx_rn_derivative(const coshtx_psi* p, const coshtx_affine* T, const double* x,
                                   double* out) {
  return guard([&] {
    need(p, "psi");
    need(T, "affine map");
    need(x, "x");
    need(out, "out");
    *out = coshtx::rn_derivative(p->p, T->T, std::span<const double>(x, T->T.kappa()));
  });
}

coshtx_status coshtx_analyze_psi(const coshtx_psi* p, int m_max, double x_max, coshtx_bundle** out) {
  return guard([&] {
    need(p, "psi");
    need(out, "out");
    coshtx::report::AnalyzeOptions opt;
    opt.m_max = m_max;
    opt.x_max = x_max;
    opt.series_terms = std::max(40, 2 * m_max + 1);
    *out = wrap(coshtx::report::analyze_psi(p->p, opt));
  });
}

coshtx_status coshtx_classify(const coshtx_psi* p, const coshtx_affine* T, int m, uint64_t seed,
                              coshtx_bundle** out) {
  return guard([&] {
    need(p, "psi");
    need(T, "affine map");
    need(out, "out");
    coshtx::ClassifyPlan plan;
    plan.m = m;
    plan.seed = seed;
    plan.norm.seed = seed;
    *out = wrap(coshtx::report::classify(p->p, T->T, plan));
  });
}

coshtx_status coshtx_recover(const double* moments, size_t count, int k, coshtx_bundle** out) {
  return guard([&] {
    need(moments, "moments");
    need(out, "out");
    const auto seq = coshtx::MomentSequence::from_values(std::vector<double>(moments, moments + count),
                                                         "input");
    *out = wrap(coshtx::report::recover(seq, k));
  });
}

coshtx_status coshtx_reproduce(const char* example_id, coshtx_bundle** out) {
  return guard([&] {
    need(example_id, "example id");
    need(out, "out");
    *out = wrap(coshtx::verification::reproduce(example_id));
  });
}

coshtx_status coshtx_verify(coshtx_bundle** out) {
  return guard([&] {
    need(out, "out");
    *out = wrap(coshtx::verification::verify());
  });
}

size_t coshtx_example_count(void) { return coshtx::verification::example_ids().size(); }

const char* coshtx_example_id(size_t i) {
  static const std::vector<std::string> ids = coshtx::verification::example_ids();
  return i < ids.size() ? ids[i].c_str() : nullptr;
}

const char* coshtx_bundle_report(const coshtx_bundle* b) { return b ? b->report.c_str() : ""; }
int coshtx_bundle_ok(const coshtx_bundle* b) { return b && b->ok ? 1 : 0; }
size_t coshtx_bundle_file_count(const coshtx_bundle* b) { return b ? b->files.size() : 0; }
const char* coshtx_bundle_file_name(const coshtx_bundle* b, size_t i) {
  return b && i < b->files.size() ? b->files[i].first.c_str() : nullptr;
}
const char* coshtx_bundle_file_contents(const coshtx_bundle* b, size_t i) {
  return b && i < b->files.size() ? b->files[i].second.c_str() : nullptr;
}
void coshtx_bundle_free(coshtx_bundle* b) { delete b; }

}  // extern "C"
