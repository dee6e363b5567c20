#pragma once

#include <vector>

#include "warpdn/dn_map.hpp"
#include "warpdn/geometry.hpp"
#include "warpdn/profile.hpp"

namespace warpdn {

/// Modified Bessel functions of real order nu >= 0 at x > 0.
/// Validated for nu <= 50, x <= 700.
double bessel_i(double nu, double x);
double bessel_k(double nu, double x);
/// d/dx I_nu(x) = I_{nu+1}(x) + (nu/x) I_nu(x)
double bessel_i_prime(double nu, double x);

/// Degenerating-cylinder family: both warping factors pinch at x = 1/4 and
/// x = 3/4 so the middle third is hidden from the boundary DN map.
/// Variants:
///   A: sqrt(h) = X^{-r} near the interfaces (blow-up), r >= 1 (r < 3 if n = 2)
///   B: sqrt(h) = X^{r} (collapse), r >= 1
///   C: h0 = 1, h1 = X^{r}, 2/n <= r < 2
///   D: h0 = 1, h1 = X^{2} (Euler endpoint case of C)
/// X is the distance to the nearest interface; `interior` is the profile of
/// the hidden coefficient on [1/4, 3/4] (sqrt(h) for A/B, h1 for C/D).
enum class CloakVariant { A, B, C, D };

struct CloakFamily {
  CloakVariant variant = CloakVariant::A;
  double r = 1;
  int n = 2;         // fiber dimension
  Profile interior;  // on [1/4, 3/4]
  FiberKind fiber;   // circle (n=1), sphere2 (n=2), torus otherwise
};

CloakFamily make_cloak(CloakVariant variant, double r, int n, Profile interiorF);

/// Separated solution for fiber harmonic m with Dirichlet traces psi0, psi1.
/// The outer pieces are closed-form Bessel/power solutions; the interior is
/// integrated numerically and matched through the quasi-derivative limits
/// D0 (at 1/4) and D1 (at 3/4). kInject adds the energy-excluded branch
/// (for diagnostics; the physical solution has kInject = 0).
struct CloakSolution {
  int m = 0;
  double mu = 0;
  double psi0 = 0, psi1 = 0;
  double Aleft = 0, Aright = 0;  // finite-energy branch amplitudes
  double kInject = 0;            // excluded-branch amplitude (left piece)
  double D0 = 0, D1 = 0;         // interface flux limits
  bool degenerate = false;       // interior determined only up to a constant
  std::vector<double> x, u, flux;
};

CloakSolution cloak_radial_solution(const CloakFamily& fam, int m,
                                    double psi0, double psi1, double kInject = 0);

/// DN block of the cloak family; off-diagonal coupling is exactly zero.
DNBlock cloak_dn_block(const CloakFamily& fam, int m);

/// Max entrywise DN-block difference over the first `harmonics` fiber modes
/// when the hidden interior profile is swapped from f1 to f2.
double cloak_invariance(const CloakFamily& fam, const Profile& f1,
                        const Profile& f2, int harmonics);

struct EnergyReport {
  double value = 0;
  bool finite = true;
};

/// H1-type energy of a separated solution, with geometric refinement toward
/// the interfaces; detects the divergence caused by the excluded branch.
EnergyReport finite_energy(const CloakFamily& fam, const CloakSolution& sol);

struct BesselBounds {
  int samples = 0;
  int violations = 0;
  double worstMargin = 0;  // most negative slack observed
};

/// Random sweep of the ratio bound |I_nu(x)/I_nu(y)| <= (x/y)^nu (x < y)
/// and the log-derivative bound I'_nu(x)/I_nu(x) <= 1 + nu/x.
BesselBounds bessel_bounds_check(int samples, unsigned seed);

}  // namespace warpdn
