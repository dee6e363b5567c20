#pragma once

#include <vector>

#include "warpdn/geometry.hpp"
#include "warpdn/sl_core.hpp"

namespace warpdn {

/// One 2x2 block of the Dirichlet-to-Neumann map in the harmonic basis:
///   [ eta0 ]   [ L  T ] [ psi0 ]
///   [ eta1 ] = [ T  R ] [ psi1 ]
/// with eta0 = -(p u')(left end), eta1 = +(p u')(right end) (outward flux),
/// L = -M(-mu), R = -N(-mu), T = -1/Delta(-mu).
struct DNBlock {
  int m = 0, n = 0;
  double mu = 0, nu = 0;
  double L = 0, T = 0, R = 0;
};

DNBlock dn_block(const WarpedMetric& g, double lambda, int m, int n,
                 SolverOptions opts = {});

/// Blocks for a set of harmonics, reusing one radial problem per distinct nu.
std::vector<DNBlock> dn_blocks(const WarpedMetric& g, double lambda,
                               const std::vector<HarmonicIndex>& harmonics,
                               SolverOptions opts = {});

struct ApplyResult {
  BoundaryData out;      // Neumann data eta per retained harmonic
  double tailMass = 0;   // Sobolev mass of the input beyond the cutoff
};

/// Apply the DN map blockwise to boundary data, keeping harmonics with
/// mu + nu <= cutoff. Critical-integrability metrics require data of
/// Sobolev order >= 2.
ApplyResult apply_dn(const WarpedMetric& g, double lambda,
                     const BoundaryData& data, double cutoff);

struct DirichletSolution {
  HarmonicIndex harmonic;
  QuasiSolution u;     // u = psi1 * Phi + psi0 * Psi
  double energy = 0;   // quadratic form int p|u'|^2 + (q + mu r)|u|^2,
                       // evaluated exactly as the boundary flux pairing
};

DirichletSolution solve_dirichlet(const WarpedMetric& g, double lambda,
                                  const HarmonicIndex& harmonic,
                                  Complex psi0, Complex psi1);

/// Max entrywise deviation between the DN blocks of an extended metric and
/// of its arclength-normalized form, over the first `harmonics` harmonics.
double gauge_discrepancy(const WarpedMetric& extended, double lambda, int harmonics);

struct ConformalSolution {
  std::vector<double> x, kappa, flux;  // flux = sqrt(h) * kappa'
};

/// Conformal factor equation -(sqrt(h) k')' + lambda (k^e - k) sqrt(h) h1 = 0,
/// e = 4/(n1+n2-1) + 1, with Cauchy data k(0) = kappa0, (sqrt(h) k')(0) = flux0.
ConformalSolution conformal_factor_ode(const WarpedMetric& g, double lambda,
                                       double kappa0, double flux0,
                                       int refinement = 8);

}  // namespace warpdn
