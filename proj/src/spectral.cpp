#include "warpdn/spectral.hpp"

#include <cmath>

#include "warpdn/errors.hpp"
#include "warpdn/numerics.hpp"

namespace warpdn {

namespace {

Complex herglotz_sum(const SpectralMeasure& mu, Complex z) {
  Complex s = 0;
  for (size_t k = 0; k < mu.atoms.size(); ++k) {
    double a = mu.atoms[k];
    s += mu.weights[k] * (1.0 / (a - z) - a / (1.0 + a * a));
  }
  return s;
}

}  // namespace

SpectralMeasure spectral_measure(const SturmLiouvilleProblem& prob, int kMax) {
  SpectrumResult sp = spectra(prob, BoundaryKind::DirichletDirichlet, kMax);
  SpectralMeasure mu;
  mu.atoms = sp.values;
  mu.weights.reserve(mu.atoms.size());
  for (double a : mu.atoms) mu.weights.push_back(1.0 / norm_squared_r(prob, a));
  // pin the offset so the truncated representation reproduces M(i)
  Complex mi = weyl_functions(prob, Complex(0, 1)).M;
  mu.offset = mi.real() - herglotz_sum(mu, Complex(0, 1)).real();
  return mu;
}

Complex herglotz_eval(const SpectralMeasure& mu, Complex z) {
  return mu.offset + herglotz_sum(mu, z);
}

GrowthFit m_growth_check(const SturmLiouvilleProblem& prob,
                         const std::vector<double>& zGrid) {
  if (zGrid.size() < 2)
    fail(ErrorCode::InvalidArgument, "m_growth_check: need >= 2 grid points");
  std::vector<double> x, y, lx, ly;
  for (double z : zGrid) {
    double m = std::abs(weyl_functions(prob, Complex(z, 0)).M);
    x.push_back(1.0 + std::abs(z));
    y.push_back(m);
    lx.push_back(std::log(1.0 + std::abs(z)));
    ly.push_back(std::log(m));
  }
  GrowthFit out;
  auto [b0, b1] = fit_line(x, y);
  out.intercept = b0;
  out.slope = b1;
  out.logSlope = fit_line(lx, ly).second;
  return out;
}

HadamardResult hadamard_product(const SturmLiouvilleProblem& prob, int kMax, Complex z) {
  SpectrumResult sp = spectra(prob, BoundaryKind::DirichletDirichlet, kMax);
  Complex d0 = characteristics(prob, Complex(0, 0)).Delta.value();
  Complex logProd = 0;
  for (double a : sp.values) logProd += std::log(Complex(1, 0) - z / a);
  HadamardResult out;
  out.value = d0 * std::exp(logProd);
  // tail of the log-product under the Weyl law alpha_k ~ (k pi / t)^2
  double t = std::max(prob.mesh().tEst, 1e-8);
  out.truncationBound = std::abs(z) * t * t / (M_PI * M_PI * kMax);
  return out;
}

IndicatorSamples indicator_profile(const SturmLiouvilleProblem& prob, CharFn which,
                                   double theta, const std::vector<double>& radii) {
  IndicatorSamples out;
  out.radii = radii;
  for (double r : radii) {
    if (!(r > 0)) fail(ErrorCode::InvalidArgument, "indicator_profile: radii must be > 0");
    Complex w = std::polar(r, theta);
    Complex z = w * w;
    Characteristics ch = characteristics(prob, z);
    const LogValue& lv = which == CharFn::Delta ? ch.Delta
                         : which == CharFn::D  ? ch.D
                                               : ch.E;
    out.values.push_back(lv.logAbs / r);
  }
  return out;
}

CamResult cam_discrepancy(const SturmLiouvilleProblem& a,
                          const SturmLiouvilleProblem& b,
                          const std::vector<double>& tGrid) {
  CamResult out;
  out.t = tGrid;
  double joint = a.growth_constant() + b.growth_constant();
  for (double t : tGrid) {
    Complex z(-t * t, 0);
    Characteristics ca = characteristics(a, z);
    Characteristics cb = characteristics(b, z);
    double sA = ca.D.phase.real() * cb.Delta.phase.real();
    double sB = cb.D.phase.real() * ca.Delta.phase.real();
    double l1 = ca.D.logAbs + cb.Delta.logAbs - joint * t;
    double l2 = cb.D.logAbs + ca.Delta.logAbs - joint * t;
    double v = sA * std::exp(l1) - sB * std::exp(l2);
    out.values.push_back(std::abs(v));
    out.sup = std::max(out.sup, std::abs(v));
  }
  return out;
}

WeylRatio weyl_law_ratio(const SturmLiouvilleProblem& prob, int kMax) {
  if (kMax < 4) fail(ErrorCode::InvalidArgument, "weyl_law_ratio: kMax too small");
  SpectrumResult sp = spectra(prob, BoundaryKind::DirichletDirichlet, kMax);
  int k = kMax, m = kMax / 2;
  double rk = sp.values[k - 1] / double(k) / double(k);
  double rm = sp.values[m - 1] / double(m) / double(m);
  WeylRatio out;
  out.raw = rk;
  // alpha_k / k^2 = L + c/k + O(1/k^2): eliminate the 1/k term
  out.extrapolated = (k * rk - m * rm) / double(k - m);
  return out;
}

}  // namespace warpdn
