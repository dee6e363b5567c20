#pragma once

#include <string>
#include <vector>

#include "warpdn/profile.hpp"
#include "warpdn/sl_core.hpp"

namespace warpdn {

enum class Regularity { BoundedElliptic, CriticalL1, Singular };

/// Model fiber: circle, flat torus, round 2-sphere, finite products, or a
/// point (used when the second factor is absent).
struct FiberKind {
  std::string type = "circle";  // "circle" | "torus" | "sphere2" | "product" | "point"
  int dim = 1;                  // torus dimension
  std::vector<FiberKind> factors;

  int dimension() const;
  std::string to_json() const;
  static FiberKind from_json(const std::string& text);
};

/// Distinct Laplace eigenvalues of the fiber, ascending, with multiplicities.
struct FiberSpectrum {
  std::vector<double> values;
  std::vector<int> mult;
};

FiberSpectrum fiber_spectrum(const FiberKind& kind, int count);

/// Cylinder metric h0 dx^2 + h1 g_{K1} + h2 g_{K2}. The standard form has
/// h0 = h1; the extended form keeps a separate h0 and is reduced by
/// normalize_metric via the arclength change of variables.
struct WarpedMetric {
  int n1 = 1, n2 = 0;
  Regularity regularity = Regularity::BoundedElliptic;
  Profile h0, h1, h2;
  bool extended = false;  // true when h0 was given separately
  FiberKind fiber1, fiber2;

  std::string to_json() const;
  static WarpedMetric from_json(const std::string& text);
};

void validate_metric(const WarpedMetric& g);

/// Radial operator for the harmonic with fiber eigenvalue nu of K2:
/// p = sqrt(H/h0), r = sqrt(h0 H)/h1, q = sqrt(h0 H) (nu/h2 - lambda),
/// with H = h1^{n1} h2^{n2}; the spectral variable is z = -mu.
SturmLiouvilleProblem radial_problem(const WarpedMetric& g, double lambda, double nu,
                                     SolverOptions opts = {});

/// Change of variables y = int_0^x sqrt(h0/h1) mapping the extended metric to
/// the standard form on [0, A]. Requires bounded elliptic coefficients.
WarpedMetric normalize_metric(const WarpedMetric& g);

struct HarmonicIndex {
  int m = 0, n = 0;
  double mu = 0, nu = 0;
  int multiplicity = 1;
};

/// First `count` harmonic pairs ordered by mu_m + nu_n (ties by (m, n)).
std::vector<HarmonicIndex> harmonic_grid(const WarpedMetric& g, int count);

/// Boundary values expanded over fiber harmonics; psi0 is the trace at the
/// left end of the cylinder, psi1 at the right end.
struct BoundaryData {
  struct Entry {
    int m = 0, n = 0;
    double mu = 0, nu = 0;
    Complex psi0{}, psi1{};
  };
  std::vector<Entry> entries;
  double sobolevOrder = 2;
};

/// Sobolev mass sum (1 + mu + nu)^order (|psi0|^2 + |psi1|^2) over entries
/// with mu + nu above the cutoff (cutoff < 0 sums everything).
double sobolev_mass(const BoundaryData& data, double order, double cutoff = -1);

}  // namespace warpdn
