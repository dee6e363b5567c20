#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "warpdn/profile.hpp"

namespace warpdn {

using Complex = std::complex<double>;

struct SolverOptions {
  int baseSteps = 1600;        // target number of mesh steps over the interval
  double relTol = 1e-8;        // solver accuracy target
  double eigResidual = 1e-10;  // scaled characteristic residual at eigenvalues
  double poleGuard = 1e-10;    // |Delta| threshold (times e^{A sqrt|z|}) near poles
};

/// One integration step with cached moments of the coefficient measures:
/// W = 1/p, Q = q, R = r; X0 = integral over the step, X1 = first moment
/// about the step midpoint.
struct MeshStep {
  double a, b, mid;
  double W0, W1, Q0, Q1, R0, R1;
};

struct Mesh {
  std::vector<double> nodes;
  std::vector<MeshStep> steps;
  double tEst = 0;  // estimate of integral sqrt(r/p), sets eigenvalue spacing
};

/// A solution of -(p u')' + q u = z r u recorded on the mesh nodes together
/// with its quasi-derivative u^[1] = p u'. True values are u[i]*exp(logScale);
/// the scale is only nonzero when the sweep had to renormalize (large |z|).
struct QuasiSolution {
  std::vector<double> grid;
  std::vector<Complex> u, quasi;
  Complex z{};
  double logScale = 0;

  Complex value(double x) const;
  Complex quasi_derivative(double x) const;
};

/// Cauchy-data solutions at both endpoints: c0, s0 from the left end,
/// c1, s1 from the right end, normalized so the in-pair Wronskians are 1.
struct FundamentalSystem {
  QuasiSolution c0, s0, c1, s1;
  Complex z{};
};

/// A characteristic value in log form: value = phase * exp(logAbs),
/// with |phase| = 1 (or 0 when the value is exactly zero).
struct LogValue {
  double logAbs = 0;
  Complex phase{1, 0};
  Complex value() const;
};

/// Delta = W(s0, s1): Dirichlet-Dirichlet eigenvalues.
/// D = W(c0, s1): Neumann at the left end, Dirichlet at the right.
/// E = W(c1, s0): Dirichlet at the left end, Neumann at the right.
struct Characteristics {
  LogValue Delta, D, E;
};

enum class BoundaryKind { DirichletDirichlet, NeumannDirichlet, DirichletNeumann };

struct SpectrumResult {
  BoundaryKind kind{};
  std::vector<double> values;
  std::vector<double> residuals;  // scaled characteristic residual per root
};

/// Singular Sturm-Liouville problem (1/r)(-(p u')' + q u) = z u on [lo, hi]
/// with 1/p, q, r integrable, p of one sign and r > 0 on segment interiors.
class SturmLiouvilleProblem {
public:
  SturmLiouvilleProblem(Profile p, Profile q, Profile r, SolverOptions opts = {});
  static SturmLiouvilleProblem unit(double length = 1);

  const Profile& p() const { return p_; }
  const Profile& q() const { return q_; }
  const Profile& r() const { return r_; }
  double lo() const { return p_.lo(); }
  double hi() const { return p_.hi(); }
  double length() const { return p_.hi() - p_.lo(); }
  const SolverOptions& options() const { return opts_; }
  const Mesh& mesh() const { return *mesh_; }
  /// mesh refined so local phase sqrt(|z| W0 R0) stays small, for quadrature
  /// of oscillatory solutions up to |z| <= zMax
  std::shared_ptr<const Mesh> refined_mesh(double zMax) const;
  /// growth constant A = (1/2) * integral of (1/p + r)
  double growth_constant() const { return growthA_; }

private:
  Profile p_, q_, r_, w_;
  SolverOptions opts_;
  std::shared_ptr<Mesh> mesh_;
  double growthA_ = 0;
};

/// Solution with prescribed Cauchy data u(base) = u0, u^[1](base) = du0.
/// base must be one of the endpoints.
QuasiSolution integrate_cauchy(const SturmLiouvilleProblem& prob, Complex z,
                               double basePoint, Complex u0, Complex du0);

FundamentalSystem fundamental_system(const SturmLiouvilleProblem& prob, Complex z);

/// Modified Wronskian W(u, v) = u v^[1] - u^[1] v at abscissa x.
Complex wronskian(const QuasiSolution& u, const QuasiSolution& v, double x);

Characteristics characteristics(const SturmLiouvilleProblem& prob, Complex z);

struct WeylFunctions {
  Complex M, N;
};

/// M = -D/Delta, N = -E/Delta. Throws Pole when z is too close to a
/// Dirichlet eigenvalue.
WeylFunctions weyl_functions(const SturmLiouvilleProblem& prob, Complex z);

struct WeylSolutions {
  QuasiSolution Psi;  // Psi = c0 + M s0: Psi(lo) = 1, Psi(hi) = 0
  QuasiSolution Phi;  // Phi = c1 - N s1: Phi(lo) = 0, Phi(hi) = 1
  Complex M, N;
};

WeylSolutions weyl_solutions(const SturmLiouvilleProblem& prob, Complex z);

/// First kMax eigenvalues for the requested boundary condition pair,
/// bracketed on a Weyl-law-scaled grid and polished with Brent.
SpectrumResult spectra(const SturmLiouvilleProblem& prob, BoundaryKind kind, int kMax);

double growth_constant(const SturmLiouvilleProblem& prob);

/// L2(r dx) norm squared of s0(. , z), by oscillation-refined quadrature.
double norm_squared_r(const SturmLiouvilleProblem& prob, double z);

}  // namespace warpdn
