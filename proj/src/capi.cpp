#include "warpdn/warpdn.h"

#include <cstring>
#include <string>

#include <json.hpp>

#include "warpdn/cloak.hpp"
#include "warpdn/dn_map.hpp"
#include "warpdn/errors.hpp"
#include "warpdn/fit.hpp"
#include "warpdn/geometry.hpp"
#include "warpdn/profile.hpp"
#include "warpdn/sl_core.hpp"
#include "warpdn/spectral.hpp"

using namespace warpdn;

struct wdn_profile {
  Profile impl;
};
struct wdn_metric {
  WarpedMetric impl;
};
struct wdn_problem {
  SturmLiouvilleProblem impl;
};

namespace {

thread_local std::string g_lastError;

int code_of(const Error& e) {
  switch (e.code()) {
    case ErrorCode::InvalidArgument: return WDN_EINVAL;
    case ErrorCode::Parse: return WDN_EPARSE;
    case ErrorCode::NotIntegrable: return WDN_ENOTINTEGRABLE;
    case ErrorCode::SingularityTooStrong: return WDN_ESINGULAR;
    case ErrorCode::Pole: return WDN_EPOLE;
    case ErrorCode::BracketingFailed: return WDN_EBRACKET;
    case ErrorCode::Admissibility: return WDN_EADMISS;
    case ErrorCode::BlowUp: return WDN_EBLOWUP;
    case ErrorCode::Degenerate: return WDN_EDEGENERATE;
    case ErrorCode::Unsupported: return WDN_EUNSUPPORTED;
    case ErrorCode::Numeric: return WDN_ENUMERIC;
    case ErrorCode::Io: return WDN_EIO;
  }
  return WDN_EUNKNOWN;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    return WDN_OK;
  } catch (const Error& e) {
    g_lastError = e.what();
    return code_of(e);
  } catch (const std::exception& e) {
    g_lastError = e.what();
    return WDN_EUNKNOWN;
  } catch (...) {
    g_lastError = "unknown error";
    return WDN_EUNKNOWN;
  }
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

int require(bool ok, const char* msg) {
  if (!ok) {
    g_lastError = msg;
    return WDN_EINVAL;
  }
  return WDN_OK;
}

nlohmann::json block_json(const DNBlock& b) {
  return {{"m", b.m}, {"n", b.n}, {"mu", b.mu}, {"nu", b.nu},
          {"L", b.L}, {"T", b.T}, {"R", b.R}};
}

std::vector<DNBlock> blocks_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_array())
    fail(ErrorCode::Parse, "expected a JSON array of DN blocks");
  std::vector<DNBlock> out;
  for (auto& e : j) {
    DNBlock b;
    b.m = e.at("m").get<int>();
    b.n = e.value("n", 0);
    b.mu = e.at("mu").get<double>();
    b.nu = e.value("nu", 0.0);
    b.L = e.at("L").get<double>();
    b.T = e.value("T", 0.0);
    b.R = e.at("R").get<double>();
    out.push_back(b);
  }
  return out;
}

void fill_block7(const DNBlock& b, double* out7) {
  out7[0] = b.m;
  out7[1] = b.n;
  out7[2] = b.mu;
  out7[3] = b.nu;
  out7[4] = b.L;
  out7[5] = b.T;
  out7[6] = b.R;
}

}  // namespace

extern "C" {

const char* wdn_last_error(void) { return g_lastError.c_str(); }

void wdn_string_free(char* s) { delete[] s; }

int wdn_profile_parse(const char* json, wdn_profile** out) {
  if (int rc = require(json && out, "null argument")) return rc;
  return guarded([&] { *out = new wdn_profile{Profile::from_json(json)}; });
}

int wdn_profile_constant(double value, double lo, double hi, wdn_profile** out) {
  if (int rc = require(out != nullptr, "null argument")) return rc;
  return guarded([&] { *out = new wdn_profile{Profile::constant(value, lo, hi)}; });
}

void wdn_profile_free(wdn_profile* p) { delete p; }

int wdn_profile_eval(const wdn_profile* p, double x, double* out) {
  if (int rc = require(p && out, "null argument")) return rc;
  return guarded([&] { *out = p->impl(x); });
}

int wdn_profile_to_json(const wdn_profile* p, char** json) {
  if (int rc = require(p && json, "null argument")) return rc;
  return guarded([&] { *json = dup_string(p->impl.to_json()); });
}

int wdn_metric_parse(const char* json, wdn_metric** out) {
  if (int rc = require(json && out, "null argument")) return rc;
  return guarded([&] {
    WarpedMetric g = WarpedMetric::from_json(json);
    validate_metric(g);
    *out = new wdn_metric{std::move(g)};
  });
}

void wdn_metric_free(wdn_metric* g) { delete g; }

int wdn_metric_to_json(const wdn_metric* g, char** json) {
  if (int rc = require(g && json, "null argument")) return rc;
  return guarded([&] { *json = dup_string(g->impl.to_json()); });
}

int wdn_metric_normalize(const wdn_metric* g, wdn_metric** out) {
  if (int rc = require(g && out, "null argument")) return rc;
  return guarded([&] { *out = new wdn_metric{normalize_metric(g->impl)}; });
}

int wdn_problem_create(const wdn_profile* p, const wdn_profile* q,
                       const wdn_profile* r, wdn_problem** out) {
  if (int rc = require(p && r && out, "null argument")) return rc;
  return guarded([&] {
    Profile qq = q ? q->impl : Profile::constant(0, p->impl.lo(), p->impl.hi());
    *out = new wdn_problem{SturmLiouvilleProblem(p->impl, qq, r->impl)};
  });
}

int wdn_problem_from_metric(const wdn_metric* g, double lambda, double nu,
                            wdn_problem** out) {
  if (int rc = require(g && out, "null argument")) return rc;
  return guarded([&] {
    *out = new wdn_problem{radial_problem(g->impl, lambda, nu)};
  });
}

void wdn_problem_free(wdn_problem* pr) { delete pr; }

int wdn_spectrum(const wdn_problem* pr, int kind, int kmax,
                 double* values, double* residuals) {
  if (int rc = require(pr && values && kmax > 0, "bad arguments")) return rc;
  if (int rc = require(kind >= 0 && kind <= 2, "kind must be 0, 1 or 2")) return rc;
  return guarded([&] {
    SpectrumResult res = spectra(pr->impl, BoundaryKind(kind), kmax);
    for (int i = 0; i < kmax; ++i) {
      values[i] = res.values[i];
      if (residuals) residuals[i] = res.residuals[i];
    }
  });
}

int wdn_weyl(const wdn_problem* pr, double zre, double zim, double out[4]) {
  if (int rc = require(pr && out, "null argument")) return rc;
  return guarded([&] {
    WeylFunctions wf = weyl_functions(pr->impl, Complex(zre, zim));
    out[0] = wf.M.real();
    out[1] = wf.M.imag();
    out[2] = wf.N.real();
    out[3] = wf.N.imag();
  });
}

int wdn_growth_constant(const wdn_problem* pr, double* out) {
  if (int rc = require(pr && out, "null argument")) return rc;
  return guarded([&] { *out = pr->impl.growth_constant(); });
}

int wdn_indicator(const wdn_problem* pr, int which, double theta,
                  const double* radii, int count, double* values) {
  if (int rc = require(pr && radii && values && count > 0, "bad arguments")) return rc;
  if (int rc = require(which >= 0 && which <= 2, "which must be 0, 1 or 2")) return rc;
  return guarded([&] {
    std::vector<double> rs(radii, radii + count);
    IndicatorSamples s = indicator_profile(pr->impl, CharFn(which), theta, rs);
    for (int i = 0; i < count; ++i) values[i] = s.values[i];
  });
}

int wdn_cam_discrepancy(const wdn_problem* a, const wdn_problem* b,
                        const double* tgrid, int count, double* values, double* sup) {
  if (int rc = require(a && b && tgrid && count > 0, "bad arguments")) return rc;
  return guarded([&] {
    std::vector<double> ts(tgrid, tgrid + count);
    CamResult res = cam_discrepancy(a->impl, b->impl, ts);
    if (values)
      for (int i = 0; i < count; ++i) values[i] = res.values[i];
    if (sup) *sup = res.sup;
  });
}

int wdn_spectral_measure(const wdn_problem* pr, int kmax,
                         double* atoms, double* weights, double* offset) {
  if (int rc = require(pr && atoms && weights && kmax > 0, "bad arguments")) return rc;
  return guarded([&] {
    SpectralMeasure mu = spectral_measure(pr->impl, kmax);
    for (int i = 0; i < kmax; ++i) {
      atoms[i] = mu.atoms[i];
      weights[i] = mu.weights[i];
    }
    if (offset) *offset = mu.offset;
  });
}

int wdn_weyl_law_ratio(const wdn_problem* pr, int kmax,
                       double* raw, double* extrapolated) {
  if (int rc = require(pr && kmax > 1, "bad arguments")) return rc;
  return guarded([&] {
    WeylRatio r = weyl_law_ratio(pr->impl, kmax);
    if (raw) *raw = r.raw;
    if (extrapolated) *extrapolated = r.extrapolated;
  });
}

int wdn_dn_grid(const wdn_metric* g, double lambda, int count,
                double* out7, int* filled) {
  if (int rc = require(g && out7 && count > 0, "bad arguments")) return rc;
  return guarded([&] {
    std::vector<HarmonicIndex> grid = harmonic_grid(g->impl, count);
    std::vector<DNBlock> blocks = dn_blocks(g->impl, lambda, grid);
    for (size_t i = 0; i < blocks.size(); ++i) fill_block7(blocks[i], out7 + 7 * i);
    if (filled) *filled = int(blocks.size());
  });
}

int wdn_dn_block(const wdn_metric* g, double lambda, int m, int n, double out7[7]) {
  if (int rc = require(g && out7, "null argument")) return rc;
  return guarded([&] { fill_block7(dn_block(g->impl, lambda, m, n), out7); });
}

int wdn_gauge_discrepancy(const wdn_metric* g, double lambda, int harmonics,
                          double* out) {
  if (int rc = require(g && out && harmonics > 0, "bad arguments")) return rc;
  return guarded([&] { *out = gauge_discrepancy(g->impl, lambda, harmonics); });
}

int wdn_conformal_ode(const wdn_metric* g, double lambda, double kappa0,
                      double flux0, int refinement, char** json) {
  if (int rc = require(g && json, "null argument")) return rc;
  return guarded([&] {
    ConformalSolution s = conformal_factor_ode(g->impl, lambda, kappa0, flux0,
                                               refinement);
    nlohmann::json j{{"x", s.x}, {"kappa", s.kappa}, {"flux", s.flux}};
    *json = dup_string(j.dump());
  });
}

int wdn_cloak_verify(const char* variant, double r, int n, const char* f1,
                     const char* f2, int harmonics, double* maxdiff,
                     char** reportJson) {
  if (int rc = require(variant && f1 && f2 && harmonics > 0, "bad arguments"))
    return rc;
  return guarded([&] {
    CloakVariant v;
    std::string vs = variant;
    if (vs == "A") v = CloakVariant::A;
    else if (vs == "B") v = CloakVariant::B;
    else if (vs == "C") v = CloakVariant::C;
    else if (vs == "D") v = CloakVariant::D;
    else fail(ErrorCode::InvalidArgument, "variant must be A, B, C or D");
    Profile p1 = Profile::from_json(f1);
    Profile p2 = Profile::from_json(f2);
    CloakFamily fam = make_cloak(v, r, n, p1);
    double diff = cloak_invariance(fam, p1, p2, harmonics);
    if (maxdiff) *maxdiff = diff;
    if (reportJson) {
      nlohmann::json rep;
      rep["maxdiff"] = diff;
      rep["blocks"] = nlohmann::json::array();
      for (int m = 0; m < harmonics; ++m) {
        DNBlock b = cloak_dn_block(fam, m);
        nlohmann::json e = block_json(b);
        if (b.mu > 0 || fam.variant == CloakVariant::A) {
          CloakSolution sol = cloak_radial_solution(fam, m, 1, -1);
          EnergyReport er = finite_energy(fam, sol);
          e["energy"] = er.value;
          e["finite"] = er.finite;
        }
        rep["blocks"].push_back(e);
      }
      *reportJson = dup_string(rep.dump());
    }
  });
}

int wdn_bessel_i(double nu, double x, double* out) {
  if (int rc = require(out != nullptr, "null argument")) return rc;
  return guarded([&] { *out = bessel_i(nu, x); });
}

int wdn_bessel_k(double nu, double x, double* out) {
  if (int rc = require(out != nullptr, "null argument")) return rc;
  return guarded([&] { *out = bessel_k(nu, x); });
}

int wdn_bessel_i_prime(double nu, double x, double* out) {
  if (int rc = require(out != nullptr, "null argument")) return rc;
  return guarded([&] { *out = bessel_i_prime(nu, x); });
}

int wdn_bessel_bounds(int samples, unsigned seed, int* violations,
                      double* worstMargin) {
  if (int rc = require(samples > 0, "samples must be positive")) return rc;
  return guarded([&] {
    BesselBounds b = bessel_bounds_check(samples, seed);
    if (violations) *violations = b.violations;
    if (worstMargin) *worstMargin = b.worstMargin;
  });
}

int wdn_fit(const char* family, double lambda, const char* observed,
            int starts, unsigned seed, char** resultJson) {
  if (int rc = require(family && observed && resultJson, "null argument")) return rc;
  return guarded([&] {
    ParametricFamily fam = make_family(family);
    std::vector<DNBlock> blocks = blocks_from_json(observed);
    FitOptions opts;
    if (starts > 0) opts.starts = starts;
    opts.seed = seed;
    FitResult res = fit_dn(fam, lambda, blocks, opts);
    *resultJson = dup_string(res.to_json());
  });
}

int wdn_fit_synthesize(const char* family, const double* theta, int dim,
                       double lambda, int harmonics, char** blocksJson) {
  if (int rc = require(family && theta && blocksJson && dim > 0 && harmonics > 0,
                       "bad arguments"))
    return rc;
  return guarded([&] {
    ParametricFamily fam = make_family(family);
    if (fam.dim() != dim)
      fail(ErrorCode::InvalidArgument, "theta dimension mismatch");
    std::vector<double> th(theta, theta + dim);
    std::vector<DNBlock> blocks = synthesize_blocks(fam, th, lambda, harmonics);
    nlohmann::json j = nlohmann::json::array();
    for (auto& b : blocks) j.push_back(block_json(b));
    *blocksJson = dup_string(j.dump());
  });
}

}  // extern "C"
