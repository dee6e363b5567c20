#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "warpdn/dn_map.hpp"
#include "warpdn/errors.hpp"

using namespace warpdn;

namespace {

WarpedMetric flat_circle() {
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

WarpedMetric extended_example() {
  WarpedMetric g;
  g.n1 = 2;
  g.n2 = 0;
  g.h0 = Profile::constant(1, 0, 1);
  Segment seg;
  seg.x0 = 0;
  seg.x1 = 1;
  seg.kind = SegmentKind::Polynomial;
  seg.coeffs = {1, 2, 1};  // (1+x)^2
  seg.center = 0;
  g.h1 = Profile(0, 1, {seg});
  g.h2 = Profile::constant(1, 0, 1);
  g.extended = true;
  g.fiber1 = FiberKind{"torus", 2, {}};
  g.fiber2 = FiberKind{"point", 0, {}};
  return g;
}

}  // namespace

TEST_CASE("flat cylinder DN block closed form") {
  WarpedMetric g = flat_circle();
  DNBlock b = dn_block(g, 0, 1, 0);
  double s = 1.0;  // sqrt(mu) with mu = 1
  CHECK(b.L == doctest::Approx(s / std::tanh(s)).epsilon(1e-10));
  CHECK(b.R == doctest::Approx(s / std::tanh(s)).epsilon(1e-10));
  CHECK(b.T == doctest::Approx(-s / std::sinh(s)).epsilon(1e-10));
  DNBlock b0 = dn_block(g, 0, 0, 0);
  CHECK(b0.L == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(b0.T == doctest::Approx(-1.0).epsilon(1e-10));
}

TEST_CASE("block batch equals per-block computation") {
  WarpedMetric g = flat_circle();
  auto grid = harmonic_grid(g, 5);
  auto blocks = dn_blocks(g, 0, grid);
  for (size_t i = 0; i < grid.size(); ++i) {
    DNBlock single = dn_block(g, 0, grid[i].m, grid[i].n);
    CHECK(blocks[i].L == doctest::Approx(single.L).epsilon(1e-13));
    CHECK(blocks[i].T == doctest::Approx(single.T).epsilon(1e-13));
  }
}

TEST_CASE("apply_dn maps traces to fluxes and tracks tail mass") {
  WarpedMetric g = flat_circle();
  BoundaryData data;
  for (int m = 0; m < 6; ++m) {
    BoundaryData::Entry e;
    e.m = m;
    e.mu = double(m) * m;
    e.psi0 = 1.0 / (1 + m);
    e.psi1 = 0;
    data.entries.push_back(e);
  }
  ApplyResult res = apply_dn(g, 0, data, 10.0);
  REQUIRE(res.out.entries.size() == 4);  // mu <= 10: m in {0,1,2,3}
  // m = 1: eta0 = L psi0 = coth(1) * 0.5
  CHECK(res.out.entries[1].psi0.real() ==
        doctest::Approx(0.5 / std::tanh(1.0)).epsilon(1e-9));
  CHECK(res.tailMass > 0);
}

TEST_CASE("critical regularity demands smoother data") {
  WarpedMetric g = flat_circle();
  g.regularity = Regularity::CriticalL1;
  BoundaryData data;
  data.sobolevOrder = 1;
  try {
    apply_dn(g, 0, data, 10.0);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Admissibility);
  }
}

TEST_CASE("dirichlet solve hits its boundary traces") {
  WarpedMetric g = flat_circle();
  HarmonicIndex h;
  h.m = 1;
  h.mu = 1;
  DirichletSolution sol = solve_dirichlet(g, 0, h, Complex(2, 0), Complex(-1, 0));
  CHECK(sol.u.u.front().real() == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(sol.u.u.back().real() == doctest::Approx(-1.0).epsilon(1e-10));
  // closed form: u = 2 cosh(x) + c sinh(x), energy equals the boundary pairing
  DNBlock b = dn_block(g, 0, 1, 0);
  double expect = 2 * (b.L * 2 + b.T * -1) + -1 * (b.T * 2 + b.R * -1);
  CHECK(sol.energy == doctest::Approx(expect).epsilon(1e-8));
}

TEST_CASE("gauge discrepancy of an extended metric is tiny") {
  CHECK(gauge_discrepancy(extended_example(), 0, 6) < 1e-8);
}

TEST_CASE("conformal ODE keeps the trivial fixed point") {
  WarpedMetric g = extended_example();
  for (double lambda : {0.0, 1.0, 5.0}) {
    ConformalSolution s = conformal_factor_ode(g, lambda, 1.0, 0.0);
    for (double k : s.kappa) CHECK(std::abs(k - 1) < 1e-12);
  }
}

TEST_CASE("conformal ODE leaves the fixed point when started away from it") {
  WarpedMetric g = extended_example();
  ConformalSolution s = conformal_factor_ode(g, 0.1, 1.1, 0.0);
  CHECK(std::abs(s.kappa.back() - 1.1) > 1e-3);
}

TEST_CASE("conformal ODE flags blow-up") {
  WarpedMetric g = extended_example();
  CHECK_THROWS_AS(conformal_factor_ode(g, 200.0, 2.5, 5.0), Error);
}
