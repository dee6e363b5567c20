// End-to-end acceptance checks: closed-form oracles, invariance properties
// and the inverse-fit experiments, each printed as one PASS/FAIL line.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "warpdn/cloak.hpp"
#include "warpdn/dn_map.hpp"
#include "warpdn/errors.hpp"
#include "warpdn/fit.hpp"
#include "warpdn/geometry.hpp"
#include "warpdn/sl_core.hpp"
#include "warpdn/spectral.hpp"

using namespace warpdn;

namespace {

int g_failures = 0;
int g_unattainable = 0;

void report(int id, const char* title, bool ok, bool attainable,
            const std::string& detail, double seconds) {
  std::printf("%s  criterion %2d  %-34s  %s  (%.2fs)\n", ok ? "PASS" : "FAIL",
              id, title, detail.c_str(), seconds);
  if (!ok) ++(attainable ? g_failures : g_unattainable);
}

// `attainable = false` marks a target that is provably out of reach (the
// detail line carries the analysis); it is reported red but does not fail
// the suite.
void run(int id, const char* title, const std::function<bool(std::string&)>& body,
         bool attainable = true) {
  auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                    .count();
  report(id, title, ok, attainable, detail, secs);
}

Profile poly_profile(std::vector<double> coeffs, double lo = 0, double hi = 1) {
  Segment seg;
  seg.x0 = lo;
  seg.x1 = hi;
  seg.kind = SegmentKind::Polynomial;
  seg.coeffs = std::move(coeffs);
  seg.center = lo;
  return Profile(lo, hi, {seg});
}

WarpedMetric flat_circle_metric() {
  WarpedMetric g;
  g.n1 = 1;
  g.n2 = 0;
  g.h0 = Profile::constant(1, 0, 1);
  g.h1 = Profile::constant(1, 0, 1);
  g.h2 = Profile::constant(1, 0, 1);
  g.fiber1 = FiberKind{"circle", 1, {}};
  g.fiber2 = FiberKind{"point", 0, {}};
  return g;
}

WarpedMetric extended_metric(double scale = 1.0) {
  // h0 = 1, h1 = scale * (1+x)^2 on the torus(2) cylinder
  WarpedMetric g;
  g.n1 = 2;
  g.n2 = 0;
  g.h0 = Profile::constant(1, 0, 1);
  g.h1 = poly_profile({scale, 2 * scale, scale});
  g.h2 = Profile::constant(1, 0, 1);
  g.extended = true;
  g.fiber1 = FiberKind{"torus", 2, {}};
  g.fiber2 = FiberKind{"point", 0, {}};
  return g;
}

double rel_err(double got, double want) {
  return std::abs(got - want) / std::abs(want);
}

}  // namespace

int main() {
  run(1, "Weyl function closed form", [](std::string& d) {
    auto prob = SturmLiouvilleProblem::unit();
    double worst = 0;
    for (double mu : {1.0, 4.0, 100.0, 1e4}) {
      double m = weyl_functions(prob, Complex(-mu, 0)).M.real();
      double s = std::sqrt(mu);
      worst = std::max(worst, rel_err(m, -s / std::tanh(s)));
    }
    d = "max rel err " + std::to_string(worst);
    return worst <= 1e-8;
  });

  run(2, "unit spectrum oracle", [](std::string& d) {
    auto prob = SturmLiouvilleProblem::unit();
    SpectrumResult dd = spectra(prob, BoundaryKind::DirichletDirichlet, 20);
    SpectrumResult nd = spectra(prob, BoundaryKind::NeumannDirichlet, 20);
    SpectrumResult dn = spectra(prob, BoundaryKind::DirichletNeumann, 20);
    double worst = 0;
    for (int k = 1; k <= 20; ++k) {
      worst = std::max(worst, rel_err(dd.values[k - 1], k * k * M_PI * M_PI));
      double half = (k - 0.5) * M_PI;
      worst = std::max(worst, rel_err(nd.values[k - 1], half * half));
      worst = std::max(worst, rel_err(dn.values[k - 1], half * half));
    }
    d = "max rel err " + std::to_string(worst);
    return worst <= 1e-8;
  });

  run(3, "shared Weyl law", [](std::string& d) {
    Profile h = poly_profile({1, 2, 1});  // (1+x)^2; p = r = 1+x
    Profile ph = h.pow(0.5);
    SturmLiouvilleProblem prob(ph, Profile::constant(0, 0, 1), ph);
    double pisq = M_PI * M_PI;
    SpectrumResult a = spectra(prob, BoundaryKind::DirichletDirichlet, 50);
    SpectrumResult b = spectra(prob, BoundaryKind::NeumannDirichlet, 50);
    SpectrumResult c = spectra(prob, BoundaryKind::DirichletNeumann, 50);
    double ra = a.values[49] / 2500.0;
    double rb = b.values[49] / (49.5 * 49.5);
    double rc = c.values[49] / (49.5 * 49.5);
    d = "alpha " + std::to_string(ra / pisq) + "  beta " + std::to_string(rb / pisq) +
        "  gamma " + std::to_string(rc / pisq) + " (times pi^2)";
    return rel_err(ra, pisq) <= 0.02 && rel_err(rb, pisq) <= 0.02 &&
           rel_err(rc, pisq) <= 0.02;
  });

  run(4, "Hadamard factorization", [](std::string& d) {
    auto prob = SturmLiouvilleProblem::unit();
    HadamardResult h = hadamard_product(prob, 10000, Complex(-1, 0));
    double err = rel_err(h.value.real(), std::sinh(1.0));
    d = "rel err " + std::to_string(err);
    return err <= 1e-3;
  });

  run(5, "indicator saturation at t = 50", [](std::string& d) {
    auto unit = SturmLiouvilleProblem::unit();
    Profile h = poly_profile({1, 2, 1});
    Profile ph = h.pow(0.5);
    SturmLiouvilleProblem var(ph, Profile::constant(0, 0, 1), ph);
    double vUnit = indicator_profile(unit, CharFn::Delta, M_PI / 2, {50}).values[0];
    double vVar = indicator_profile(var, CharFn::Delta, M_PI / 2, {50}).values[0];
    bool ok = std::abs(vUnit - 1) <= 0.05 && std::abs(vVar - 1) <= 0.05;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "unit %.4f, nonconstant %.4f; exact unit value is "
                  "log(sinh 50/50)/50 = %.4f, 9.2%% below the limit 1, so the "
                  "5%% band at t = 50 is not attainable for any problem with "
                  "growth constant 1",
                  vUnit, vVar, std::log(std::sinh(50.0) / 50.0) / 50.0);
    d = buf;
    return ok;
  }, /*attainable=*/false);

  run(6, "Herglotz representation", [](std::string& d) {
    auto prob = SturmLiouvilleProblem::unit();
    SpectralMeasure mu = spectral_measure(prob, 2000);
    double m = weyl_functions(prob, Complex(-1, 0)).M.real();
    double approx = herglotz_eval(mu, Complex(-1, 0)).real();
    double errM = rel_err(approx, m);
    double errW = rel_err(mu.weights[0], 2 * M_PI * M_PI);
    d = "M rel err " + std::to_string(errM) + ", residue rel err " +
        std::to_string(errW);
    return errM <= 1e-3 && errW <= 0.01;
  });

  run(7, "DN block closed form", [](std::string& d) {
    DNBlock b = dn_block(flat_circle_metric(), 0, 1, 0);
    double e = std::max({std::abs(b.L - 1.31304), std::abs(b.R - 1.31304),
                         std::abs(b.T + 0.85092)});
    d = "max entry err " + std::to_string(e);
    return e <= 1e-5;
  });

  run(8, "gauge invariance of the DN map", [](std::string& d) {
    double dev = gauge_discrepancy(extended_metric(), 0, 10);
    d = "max entry deviation " + std::to_string(dev);
    return dev <= 1e-6;
  });

  run(9, "CAM discrepancy split", [](std::string& d) {
    WarpedMetric ext = extended_metric();
    WarpedMetric norm = normalize_metric(ext);
    SturmLiouvilleProblem a = radial_problem(ext, 0, 0);
    SturmLiouvilleProblem b = radial_problem(norm, 0, 0);
    SturmLiouvilleProblem c = radial_problem(extended_metric(1.1), 0, 0);
    std::vector<double> ts;
    for (int i = 1; i <= 50; ++i) ts.push_back(30.0 * i / 50);
    double same = cam_discrepancy(a, b, ts).sup;
    double pert = cam_discrepancy(a, c, ts).sup;
    d = "equivalent " + std::to_string(same) + ", perturbed " + std::to_string(pert);
    return same <= 1e-6 && pert >= 1e-2;
  });

  run(10, "conformal ODE rigidity", [](std::string& d) {
    WarpedMetric g = extended_metric();
    double worst = 0;
    for (double lambda : {0.0, 1.0, 5.0}) {
      ConformalSolution s = conformal_factor_ode(g, lambda, 1.0, 0.0);
      for (double k : s.kappa) worst = std::max(worst, std::abs(k - 1));
    }
    d = "max |kappa - 1| " + std::to_string(worst);
    return worst <= 1e-8;
  });

  run(11, "cloaked interior", [](std::string& d) {
    Profile f1 = Profile::constant(1, 0.25, 0.75);
    Profile f2 = Profile::from_function({0.25, 0.5, 0.75}, [](double x) {
      return 2 + std::sin(2 * M_PI * x);
    });
    CloakFamily fam = make_cloak(CloakVariant::A, 1.0, 2, f1);
    double inv = cloak_invariance(fam, f1, f2, 20);
    DNBlock b0 = cloak_dn_block(fam, 0);
    // perturbing outside the hidden region (steeper interface profile) must
    // be visible in the DN data
    CloakFamily pert = make_cloak(CloakVariant::A, 1.25, 2, f1);
    double outside = std::abs(cloak_dn_block(pert, 0).R - b0.R);
    d = "interior swap " + std::to_string(inv) + ", base entry " +
        std::to_string(b0.R) + ", outside perturbation " + std::to_string(outside);
    return inv <= 1e-10 && std::abs(b0.R - 32.0) <= 1e-8 && outside > 1e-2;
  });

  run(12, "a priori estimate suite", [](std::string& d) {
    std::mt19937 rng(424242);
    std::uniform_real_distribution<double> unif(0, 1);
    FiberSpectrum torus = fiber_spectrum(FiberKind{"torus", 2, {}}, 20);
    int checked = 0;
    for (int trial = 0; trial < 200; ++trial) {
      // random critically integrable radial problem: p = r equals a x^s on
      // [0, 1/2] (|s| < 1 keeps both r and 1/p in L1) continued affinely
      double s = (unif(rng) < 0.5 ? -1 : 1) * (0.2 + 0.6 * unif(rng));
      double amp = 0.5 + 1.5 * unif(rng);
      Segment segA;
      segA.x0 = 0;
      segA.x1 = 0.5;
      segA.kind = SegmentKind::PowerLaw;
      segA.a = amp;
      segA.center = 0;
      segA.s = s;
      double v = amp * std::pow(0.5, s);
      double g = amp * s * std::pow(0.5, s - 1);  // C^1 match at x = 1/2
      Segment segB;
      segB.x0 = 0.5;
      segB.x1 = 1;
      segB.kind = SegmentKind::Polynomial;
      segB.coeffs = {v - 0.5 * g, g};
      segB.center = 0;
      Profile coeff(0, 1, {segA, segB});
      SturmLiouvilleProblem prob(coeff, Profile::constant(0, 0, 1), coeff);

      double mu = torus.values[size_t(unif(rng) * 10)];
      WeylSolutions ws = weyl_solutions(prob, Complex(-mu, 0));
      double prev = -1e-12;
      for (size_t i = 0; i < ws.Phi.u.size(); ++i) {
        double phi = ws.Phi.u[i].real();
        if (phi < -1e-9 || phi > 1 + 1e-9) {
          d = "Phi left [0, 1]";
          return false;
        }
        if (phi < prev - 1e-9) {
          d = "Phi not monotone";
          return false;
        }
        prev = phi;
      }
      double psi0 = 2 * unif(rng) - 1, psi1 = 2 * unif(rng) - 1;
      double bound = std::abs(psi0) + std::abs(psi1) + 1e-9;
      for (size_t i = 0; i < ws.Phi.u.size(); ++i) {
        double u = psi0 * ws.Psi.u[i].real() + psi1 * ws.Phi.u[i].real();
        if (std::abs(u) > bound) {
          d = "|u| exceeded |psi0| + |psi1|";
          return false;
        }
      }
      if (trial % 20 == 0) {
        // sup of 1/|Delta(-mu_m)| must stabilize once mu_m grows
        double sup10 = 0, sup20 = 0;
        for (int m = 0; m < 20; ++m) {
          double dm = std::abs(
              characteristics(prob, Complex(-torus.values[m], 0)).Delta.value().real());
          if (!(dm > 0) || !std::isfinite(1 / dm)) {
            d = "1/|Delta| not finite";
            return false;
          }
          if (m < 10) sup10 = std::max(sup10, 1 / dm);
          sup20 = std::max(sup20, 1 / dm);
        }
        if (sup20 > sup10 * (1 + 1e-12)) {
          d = "sup 1/|Delta| moved between cutoffs";
          return false;
        }
      }
      ++checked;
    }
    d = std::to_string(checked) + " random samples clean";
    return checked == 200;
  });

  run(13, "Bessel oracle and inequalities", [](std::string& d) {
    double worst = 0;
    for (double x : {0.5, 2.0, 8.0, 20.0, 60.0}) {
      worst = std::max(worst, rel_err(bessel_i(0.5, x),
                                      std::sqrt(2 / (M_PI * x)) * std::sinh(x)));
      worst = std::max(
          worst, rel_err(bessel_i(1.5, x), std::sqrt(2 / (M_PI * x)) *
                                               (std::cosh(x) - std::sinh(x) / x)));
      worst = std::max(worst, rel_err(bessel_k(0.5, x),
                                      std::sqrt(M_PI / (2 * x)) * std::exp(-x)));
    }
    BesselBounds bb = bessel_bounds_check(100, 7);
    d = "closed-form rel err " + std::to_string(worst) + ", violations " +
        std::to_string(bb.violations);
    return worst <= 1e-10 && bb.violations == 0;
  });

  run(14, "inverse fit and flat direction", [](std::string& d) {
    ParametricFamily fam = make_family("affine-h1");
    std::vector<double> truth = {1.4, 0.7};
    auto blocks = synthesize_blocks(fam, truth, 0, 20);
    FitOptions opts;
    opts.starts = 8;
    opts.tolerance = 1e-13;
    FitResult res = fit_dn(fam, 0, blocks, opts);
    double errP = std::max(std::abs(res.theta[0] - truth[0]),
                           std::abs(res.theta[1] - truth[1]));

    // doubly warped gauge family: data at a single fiber-2 eigenvalue cannot
    // see the second parameter; adding a second eigenvalue restores uniqueness
    ParametricFamily gc = make_family("gauge-curve");
    FiberSpectrum torus = fiber_spectrum(FiberKind{"torus", 2, {}}, 6);
    std::vector<HarmonicIndex> one, twoOnly;
    for (int m = 0; m < 6; ++m) {
      HarmonicIndex h;
      h.m = m;
      h.n = 1;
      h.mu = torus.values[m];
      h.nu = 1;
      one.push_back(h);
      h.n = 2;
      h.nu = 4;
      twoOnly.push_back(h);
    }
    std::vector<HarmonicIndex> both = one;
    both.insert(both.end(), twoOnly.begin(), twoOnly.end());
    auto blocksAt = [&](double s, double t, const std::vector<HarmonicIndex>& grid) {
      return dn_blocks(gc.build({s, t}), 0, grid);
    };
    auto worstDiff = [](const std::vector<DNBlock>& x, const std::vector<DNBlock>& y) {
      double w = 0;
      for (size_t i = 0; i < x.size(); ++i)
        w = std::max({w, std::abs(x[i].L - y[i].L), std::abs(x[i].T - y[i].T),
                      std::abs(x[i].R - y[i].R)});
      return w;
    };
    double flat = worstDiff(blocksAt(0, 0, one), blocksAt(0, 0.25, one));
    double seen = worstDiff(blocksAt(0, 0, both), blocksAt(0, 0.25, both));
    d = "param err " + std::to_string(errP) + ", single-nu move " +
        std::to_string(flat) + ", two-nu move " + std::to_string(seen);
    return errP <= 1e-3 && flat <= 1e-8 && seen >= 1e-3;
  });

  std::printf("%d of 14 criteria passed (%d known unattainable)\n",
              14 - g_failures - g_unattainable, g_unattainable);
  return g_failures == 0 ? 0 : 1;
}
