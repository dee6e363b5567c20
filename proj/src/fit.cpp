#include "warpdn/fit.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <json.hpp>

#include "warpdn/errors.hpp"

namespace warpdn {

namespace {

FiberKind torus2() { return FiberKind{"torus", 2, {}}; }

WarpedMetric single_warped(Profile h1) {
  WarpedMetric g;
  g.n1 = 2;
  g.n2 = 0;
  g.regularity = Regularity::BoundedElliptic;
  g.h1 = std::move(h1);
  g.h0 = g.h1;
  g.h2 = Profile::constant(1, g.h1.lo(), g.h1.hi());
  g.fiber1 = torus2();
  g.fiber2 = FiberKind{"point", 0, {}};
  return g;
}

WarpedMetric gauge_curve_metric(double s, double t) {
  // kappa moves along a conformal gauge orbit of the flat doubly warped
  // cylinder; at the construction harmonic nu = 1 the DN blocks are
  // t-independent, so t is a flat direction for single-harmonic data.
  auto kappa = [t](double x) { return 1 + t * x * x * (1 - x) * (1 - x); };
  auto kpp = [t](double x) { return 2 * t * (1 - 6 * x + 6 * x * x); };
  std::vector<double> breaks = {0, 0.25, 0.5, 0.75, 1};
  auto ratio = [=](double x) { return 1 - kpp(x) / kappa(x); };  // nu* = 1
  WarpedMetric g;
  g.n1 = 2;
  g.n2 = 1;
  g.regularity = Regularity::BoundedElliptic;
  g.h1 = Profile::from_function(breaks, [=](double x) {
    double k = kappa(x);
    return (1 + s) * k * k * std::sqrt(ratio(x));
  });
  g.h2 = Profile::from_function(breaks, [=](double x) {
    double k = kappa(x);
    return (1 + s) * k * k / std::sqrt(ratio(x));
  });
  g.h0 = g.h1;
  g.fiber1 = torus2();
  g.fiber2 = FiberKind{"circle", 1, {}};
  return g;
}

}  // namespace

ParametricFamily make_family(const std::string& name) {
  ParametricFamily fam;
  fam.name = name;
  if (name == "constant-h1") {
    fam.lower = {0.1};
    fam.upper = {5.0};
    fam.build = [](const std::vector<double>& th) {
      return single_warped(Profile::constant(th[0], 0, 1));
    };
  } else if (name == "affine-h1") {
    fam.lower = {0.1, 0.1};
    fam.upper = {5.0, 5.0};
    fam.build = [](const std::vector<double>& th) {
      std::vector<Segment> segs(1);
      segs[0].x0 = 0;
      segs[0].x1 = 1;
      segs[0].kind = SegmentKind::Polynomial;
      segs[0].coeffs = {th[0], th[1]};
      segs[0].center = 0;
      return single_warped(Profile(0, 1, std::move(segs)));
    };
  } else if (name == "gauge-curve") {
    fam.lower = {-0.5, -0.3};
    fam.upper = {0.5, 0.3};
    fam.build = [](const std::vector<double>& th) {
      return gauge_curve_metric(th[0], th[1]);
    };
  } else {
    fail(ErrorCode::InvalidArgument, "make_family: unknown family '" + name + "'");
  }
  return fam;
}

std::vector<DNBlock> synthesize_blocks(const ParametricFamily& fam,
                                       const std::vector<double>& theta,
                                       double lambda, int harmonics) {
  WarpedMetric g = fam.build(theta);
  validate_metric(g);
  return dn_blocks(g, lambda, harmonic_grid(g, harmonics));
}

double dn_misfit(const ParametricFamily& fam, const std::vector<double>& theta,
                 double lambda, const std::vector<DNBlock>& observed) {
  for (int i = 0; i < fam.dim(); ++i)
    if (theta[i] < fam.lower[i] || theta[i] > fam.upper[i]) return 1e6;
  std::vector<HarmonicIndex> grid(observed.size());
  for (size_t i = 0; i < observed.size(); ++i) {
    grid[i].m = observed[i].m;
    grid[i].n = observed[i].n;
    grid[i].mu = observed[i].mu;
    grid[i].nu = observed[i].nu;
  }
  std::vector<DNBlock> model;
  try {
    WarpedMetric g = fam.build(theta);
    validate_metric(g);
    model = dn_blocks(g, lambda, grid);
  } catch (const Error&) {
    return 1e6;  // inadmissible point: flat penalty keeps the simplex moving
  }
  double sum = 0;
  for (size_t i = 0; i < observed.size(); ++i) {
    double w = 1.0 / std::pow(1 + observed[i].mu + observed[i].nu, 2);
    double dl = model[i].L - observed[i].L;
    double dt = model[i].T - observed[i].T;
    double dr = model[i].R - observed[i].R;
    sum += w * (dl * dl + 2 * dt * dt + dr * dr);
  }
  return sum;
}

FitResult nelder_mead(const std::function<double(const std::vector<double>&)>& fn,
                      std::vector<double> x0, const std::vector<double>& lower,
                      const std::vector<double>& upper, int maxIter, double tol) {
  int d = int(x0.size());
  auto clip = [&](std::vector<double> p) {
    for (int i = 0; i < d; ++i) p[i] = std::clamp(p[i], lower[i], upper[i]);
    return p;
  };
  int evals = 0;
  auto eval = [&](const std::vector<double>& p) {
    ++evals;
    return fn(p);
  };
  std::vector<std::vector<double>> pts(d + 1, clip(x0));
  std::vector<double> f(d + 1);
  for (int i = 0; i < d; ++i) {
    double span = upper[i] - lower[i];
    pts[i + 1][i] = std::clamp(pts[i + 1][i] + 0.05 * span, lower[i], upper[i]);
    if (pts[i + 1][i] == pts[0][i]) pts[i + 1][i] -= 0.05 * span;
  }
  for (int i = 0; i <= d; ++i) f[i] = eval(pts[i]);

  for (int it = 0; it < maxIter; ++it) {
    std::vector<int> ord(d + 1);
    for (int i = 0; i <= d; ++i) ord[i] = i;
    std::sort(ord.begin(), ord.end(), [&](int a, int b) { return f[a] < f[b]; });
    {
      std::vector<std::vector<double>> p2(d + 1);
      std::vector<double> f2(d + 1);
      for (int i = 0; i <= d; ++i) {
        p2[i] = pts[ord[i]];
        f2[i] = f[ord[i]];
      }
      pts.swap(p2);
      f.swap(f2);
    }
    double spread = f[d] - f[0];
    if (spread <= tol * (1 + std::abs(f[0]))) break;

    std::vector<double> cen(d, 0);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) cen[j] += pts[i][j];
    }
    for (int j = 0; j < d; ++j) cen[j] /= d;
    auto lerp = [&](double a) {
      std::vector<double> p(d);
      for (int j = 0; j < d; ++j) p[j] = cen[j] + a * (cen[j] - pts[d][j]);
      return clip(p);
    };
    std::vector<double> xr = lerp(1.0);
    double fr = eval(xr);
    if (fr < f[0]) {
      std::vector<double> xe = lerp(2.0);
      double fe = eval(xe);
      if (fe < fr) {
        pts[d] = xe;
        f[d] = fe;
      } else {
        pts[d] = xr;
        f[d] = fr;
      }
    } else if (fr < f[d - 1]) {
      pts[d] = xr;
      f[d] = fr;
    } else {
      std::vector<double> xc = lerp(fr < f[d] ? 0.5 : -0.5);
      double fc = eval(xc);
      if (fc < std::min(fr, f[d])) {
        pts[d] = xc;
        f[d] = fc;
      } else {  // shrink toward the best vertex
        for (int i = 1; i <= d; ++i) {
          for (int j = 0; j < d; ++j) pts[i][j] = 0.5 * (pts[i][j] + pts[0][j]);
          pts[i] = clip(pts[i]);
          f[i] = eval(pts[i]);
        }
      }
    }
  }
  int best = int(std::min_element(f.begin(), f.end()) - f.begin());
  FitResult res;
  res.theta = pts[best];
  res.misfit = f[best];
  res.evaluations = evals;
  res.startsRun = 1;
  return res;
}

FitResult fit_dn(const ParametricFamily& fam, double lambda,
                 const std::vector<DNBlock>& observed, FitOptions opts) {
  auto fn = [&](const std::vector<double>& th) {
    return dn_misfit(fam, th, lambda, observed);
  };
  std::mt19937 rng(opts.seed);
  std::uniform_real_distribution<double> unif(0, 1);
  FitResult best;
  best.misfit = 1e300;
  for (int s = 0; s < std::max(1, opts.starts); ++s) {
    std::vector<double> x0(fam.dim());
    for (int i = 0; i < fam.dim(); ++i) {
      double frac = (s == 0) ? 0.5 : unif(rng);
      x0[i] = fam.lower[i] + frac * (fam.upper[i] - fam.lower[i]);
    }
    FitResult r = nelder_mead(fn, x0, fam.lower, fam.upper,
                              opts.maxIterations, opts.tolerance);
    best.evaluations += r.evaluations;
    if (r.misfit < best.misfit) {
      best.theta = r.theta;
      best.misfit = r.misfit;
    }
    ++best.startsRun;
    if (best.misfit < opts.tolerance) break;
  }
  return best;
}

std::string FitResult::to_json() const {
  nlohmann::json j;
  j["theta"] = theta;
  j["misfit"] = misfit;
  j["evaluations"] = evaluations;
  j["starts"] = startsRun;
  return j.dump(2);
}

}  // namespace warpdn
