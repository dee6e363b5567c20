#include "warpdn/dn_map.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "warpdn/errors.hpp"
#include "warpdn/parallel.hpp"

namespace warpdn {

namespace {

DNBlock block_from_problem(const SturmLiouvilleProblem& prob,
                           const HarmonicIndex& h) {
  Complex z(-h.mu, 0);
  WeylFunctions wf = weyl_functions(prob, z);
  Characteristics ch = characteristics(prob, z);
  Complex invDelta = ch.Delta.phase * std::exp(-ch.Delta.logAbs);
  DNBlock b;
  b.m = h.m;
  b.n = h.n;
  b.mu = h.mu;
  b.nu = h.nu;
  b.L = -wf.M.real();
  b.R = -wf.N.real();
  b.T = -invDelta.real();
  return b;
}

}  // namespace

std::vector<DNBlock> dn_blocks(const WarpedMetric& g, double lambda,
                               const std::vector<HarmonicIndex>& harmonics,
                               SolverOptions opts) {
  // one radial problem per distinct fiber-2 eigenvalue
  std::map<double, std::shared_ptr<SturmLiouvilleProblem>> probs;
  for (auto& h : harmonics)
    if (!probs.count(h.nu))
      probs[h.nu] = std::make_shared<SturmLiouvilleProblem>(
          radial_problem(g, lambda, h.nu, opts));
  std::vector<DNBlock> out(harmonics.size());
  std::exception_ptr firstError;
  std::mutex errMutex;
  parallel_for(int(harmonics.size()), [&](int i) {
    try {
      out[i] = block_from_problem(*probs.at(harmonics[i].nu), harmonics[i]);
    } catch (...) {
      std::lock_guard<std::mutex> lock(errMutex);
      if (!firstError) firstError = std::current_exception();
    }
  });
  if (firstError) std::rethrow_exception(firstError);
  return out;
}

DNBlock dn_block(const WarpedMetric& g, double lambda, int m, int n,
                 SolverOptions opts) {
  FiberSpectrum f1 = fiber_spectrum(g.fiber1, m + 1);
  FiberSpectrum f2 = fiber_spectrum(g.fiber2, n + 1);
  if (m < 0 || n < 0 || m >= int(f1.values.size()) || n >= int(f2.values.size()))
    fail(ErrorCode::InvalidArgument, "dn_block: harmonic index out of range");
  HarmonicIndex h;
  h.m = m;
  h.n = n;
  h.mu = f1.values[m];
  h.nu = f2.values[n];
  SturmLiouvilleProblem prob = radial_problem(g, lambda, h.nu, opts);
  return block_from_problem(prob, h);
}

ApplyResult apply_dn(const WarpedMetric& g, double lambda,
                     const BoundaryData& data, double cutoff) {
  if (g.regularity == Regularity::CriticalL1 && data.sobolevOrder < 2)
    fail(ErrorCode::Admissibility,
         "apply_dn: critical-integrability metrics need Sobolev order >= 2 data");
  std::vector<HarmonicIndex> kept;
  for (auto& e : data.entries)
    if (e.mu + e.nu <= cutoff) {
      HarmonicIndex h;
      h.m = e.m;
      h.n = e.n;
      h.mu = e.mu;
      h.nu = e.nu;
      kept.push_back(h);
    }
  std::vector<DNBlock> blocks = dn_blocks(g, lambda, kept);
  ApplyResult res;
  res.out.sobolevOrder = data.sobolevOrder;
  res.tailMass = sobolev_mass(data, data.sobolevOrder, cutoff);
  size_t bi = 0;
  for (auto& e : data.entries) {
    if (e.mu + e.nu > cutoff) continue;
    const DNBlock& b = blocks[bi++];
    BoundaryData::Entry o = e;
    o.psi0 = b.L * e.psi0 + b.T * e.psi1;
    o.psi1 = b.T * e.psi0 + b.R * e.psi1;
    res.out.entries.push_back(o);
  }
  return res;
}

DirichletSolution solve_dirichlet(const WarpedMetric& g, double lambda,
                                  const HarmonicIndex& harmonic,
                                  Complex psi0, Complex psi1) {
  SturmLiouvilleProblem prob = radial_problem(g, lambda, harmonic.nu);
  Complex z(-harmonic.mu, 0);
  WeylSolutions ws = weyl_solutions(prob, z);
  DirichletSolution sol;
  sol.harmonic = harmonic;
  sol.u = ws.Psi;
  for (size_t i = 0; i < sol.u.u.size(); ++i) {
    sol.u.u[i] = psi0 * ws.Psi.u[i] + psi1 * ws.Phi.u[i];
    sol.u.quasi[i] = psi0 * ws.Psi.quasi[i] + psi1 * ws.Phi.quasi[i];
  }
  // integrating p|u'|^2 + (q + mu r)|u|^2 by parts leaves only the boundary
  // pairing of the traces with the outgoing fluxes
  Complex eta0 = -sol.u.quasi.front();
  Complex eta1 = sol.u.quasi.back();
  sol.energy = (std::conj(psi0) * eta0 + std::conj(psi1) * eta1).real();
  return sol;
}

double gauge_discrepancy(const WarpedMetric& extended, double lambda, int harmonics) {
  WarpedMetric normalized = normalize_metric(extended);
  std::vector<HarmonicIndex> grid = harmonic_grid(extended, harmonics);
  std::vector<DNBlock> a = dn_blocks(extended, lambda, grid);
  std::vector<DNBlock> b = dn_blocks(normalized, lambda, grid);
  double worst = 0;
  for (size_t i = 0; i < grid.size(); ++i) {
    worst = std::max(worst, std::abs(a[i].L - b[i].L));
    worst = std::max(worst, std::abs(a[i].T - b[i].T));
    worst = std::max(worst, std::abs(a[i].R - b[i].R));
  }
  return worst;
}

ConformalSolution conformal_factor_ode(const WarpedMetric& g, double lambda,
                                       double kappa0, double flux0,
                                       int refinement) {
  validate_metric(g);
  if (refinement < 1) fail(ErrorCode::InvalidArgument, "conformal_factor_ode: refinement");
  if (g.n1 + g.n2 < 2)
    fail(ErrorCode::InvalidArgument, "conformal_factor_ode: needs n1 + n2 >= 2");
  double e = 4.0 / (g.n1 + g.n2 - 1) + 1.0;
  Profile sqrtH = g.h1.pow(0.5 * (g.n1 - 1));
  if (g.n2 > 0) sqrtH = sqrtH.times(g.h2.pow(0.5 * g.n2));
  Profile w = sqrtH.pow(-1.0);
  Profile drive = sqrtH.times(g.h1);
  w.require_l1(1e-6, "1/sqrt(h)");
  drive.require_l1(1e-6, "sqrt(h) h1");

  // borrow the problem mesh machinery for a sensible step layout
  SturmLiouvilleProblem layout(sqrtH, drive, Profile::constant(1, sqrtH.lo(), sqrtH.hi()));
  ConformalSolution out;
  double kappa = kappa0, flux = flux0;
  out.x.push_back(sqrtH.lo());
  out.kappa.push_back(kappa);
  out.flux.push_back(flux);
  auto G = [&](double k) { return lambda * (std::pow(k, e) - k); };
  for (auto& st : layout.mesh().steps) {
    double h = (st.b - st.a) / refinement;
    for (int i = 0; i < refinement; ++i) {
      double a = st.a + i * h, b = a + h;
      double Wm = w.integrate(a, b), Sm = drive.integrate(a, b);
      flux += 0.5 * Sm * G(kappa);   // half kick
      kappa += Wm * flux;            // drift
      flux += 0.5 * Sm * G(kappa);   // half kick
      if (!(std::isfinite(kappa) && std::isfinite(flux)) || kappa <= 0 ||
          std::abs(kappa) > 1e8)
        fail(ErrorCode::BlowUp, "conformal_factor_ode: solution left the admissible range");
    }
    out.x.push_back(st.b);
    out.kappa.push_back(kappa);
    out.flux.push_back(flux);
  }
  return out;
}

}  // namespace warpdn
