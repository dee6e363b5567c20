#pragma once

#include <functional>
#include <string>
#include <vector>

#include "warpdn/dn_map.hpp"
#include "warpdn/geometry.hpp"

namespace warpdn {

/// Finite-dimensional family of warped metrics theta -> g(theta), with box
/// bounds on the parameters. Builtins (make_family):
///   "constant-h1"  d=1  h1 = theta0, torus(2) fiber
///   "affine-h1"    d=2  h1 = theta0 + theta1 x, torus(2) fiber
///   "gauge-curve"  d=2  doubly warped torus(2) x circle family whose second
///                       parameter moves along a conformal gauge orbit; the
///                       DN data at a single fiber-2 harmonic cannot see it.
struct ParametricFamily {
  std::string name;
  std::vector<double> lower, upper;
  std::function<WarpedMetric(const std::vector<double>&)> build;

  int dim() const { return int(lower.size()); }
};

ParametricFamily make_family(const std::string& name);

/// Weighted least-squares misfit between DN blocks: weights 1/(1 + mu + nu)^2,
/// off-diagonal entries counted twice. Inadmissible parameters get a large
/// finite penalty so simplex search can recover.
double dn_misfit(const ParametricFamily& fam, const std::vector<double>& theta,
                 double lambda, const std::vector<DNBlock>& observed);

/// Forward-model observations for a parameter value (used to set up
/// synthetic inverse problems and in tests).
std::vector<DNBlock> synthesize_blocks(const ParametricFamily& fam,
                                       const std::vector<double>& theta,
                                       double lambda, int harmonics);

struct FitOptions {
  int starts = 8;          // multistart count (first start at the box center)
  int maxIterations = 400; // per simplex run
  double tolerance = 1e-10;
  unsigned seed = 12345;
};

struct FitResult {
  std::vector<double> theta;
  double misfit = 0;
  int evaluations = 0;
  int startsRun = 0;
  std::string to_json() const;
};

FitResult fit_dn(const ParametricFamily& fam, double lambda,
                 const std::vector<DNBlock>& observed, FitOptions opts = {});

/// Generic bounded Nelder-Mead (exposed for tests); returns best point.
FitResult nelder_mead(const std::function<double(const std::vector<double>&)>& fn,
                      std::vector<double> x0, const std::vector<double>& lower,
                      const std::vector<double>& upper, int maxIter, double tol);

}  // namespace warpdn
