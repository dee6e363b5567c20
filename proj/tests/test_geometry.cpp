#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "warpdn/errors.hpp"
#include "warpdn/geometry.hpp"

using namespace warpdn;

namespace {

Profile affine_sq(double a, double b) {
  // (a + b x)^2 as an exact polynomial
  Segment seg;
  seg.x0 = 0;
  seg.x1 = 1;
  seg.kind = SegmentKind::Polynomial;
  seg.coeffs = {a * a, 2 * a * b, b * b};
  seg.center = 0;
  return Profile(0, 1, {seg});
}

WarpedMetric unit_circle_metric() {
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

}  // namespace

TEST_CASE("fiber spectra of the model fibers") {
  FiberSpectrum circle = fiber_spectrum(FiberKind{"circle", 1, {}}, 4);
  CHECK(circle.values == std::vector<double>{0, 1, 4, 9});
  CHECK(circle.mult == std::vector<int>{1, 2, 2, 2});

  FiberSpectrum sphere = fiber_spectrum(FiberKind{"sphere2", 2, {}}, 4);
  CHECK(sphere.values == std::vector<double>{0, 2, 6, 12});  // l(l+1)
  CHECK(sphere.mult == std::vector<int>{1, 3, 5, 7});        // 2l+1

  FiberSpectrum torus = fiber_spectrum(FiberKind{"torus", 2, {}}, 4);
  CHECK(torus.values == std::vector<double>{0, 1, 2, 4});  // lattice norms
  CHECK(torus.mult == std::vector<int>{1, 4, 4, 4});
}

TEST_CASE("product fiber convolves its factor spectra") {
  FiberKind prod{"product", 0,
                 {FiberKind{"circle", 1, {}}, FiberKind{"circle", 1, {}}}};
  FiberSpectrum ps = fiber_spectrum(prod, 4);
  FiberSpectrum torus = fiber_spectrum(FiberKind{"torus", 2, {}}, 4);
  CHECK(ps.values == torus.values);
  CHECK(ps.mult == torus.mult);
  CHECK(prod.dimension() == 2);
}

TEST_CASE("metric json round trip") {
  WarpedMetric g;
  g.n1 = 2;
  g.n2 = 1;
  g.regularity = Regularity::CriticalL1;
  g.h0 = Profile::constant(1, 0, 1);
  g.h1 = affine_sq(1, 1);
  g.h2 = Profile::constant(2, 0, 1);
  g.extended = true;
  g.fiber1 = FiberKind{"torus", 2, {}};
  g.fiber2 = FiberKind{"circle", 1, {}};
  WarpedMetric back = WarpedMetric::from_json(g.to_json());
  CHECK(back.n1 == 2);
  CHECK(back.n2 == 1);
  CHECK(back.regularity == Regularity::CriticalL1);
  CHECK(back.extended);
  CHECK(back.h1(0.5) == doctest::Approx(2.25));
  CHECK(back.fiber1.type == "torus");
}

TEST_CASE("validation rejects mismatched fibers and nonpositive factors") {
  WarpedMetric g = unit_circle_metric();
  CHECK_NOTHROW(validate_metric(g));
  g.fiber1 = FiberKind{"torus", 2, {}};
  CHECK_THROWS_AS(validate_metric(g), Error);
  g = unit_circle_metric();
  g.h1 = Profile::constant(-1, 0, 1);
  CHECK_THROWS_AS(validate_metric(g), Error);
}

TEST_CASE("radial problem of the flat metric is the unit problem") {
  WarpedMetric g = unit_circle_metric();
  SturmLiouvilleProblem prob = radial_problem(g, 0, 0);
  SpectrumResult dd = spectra(prob, BoundaryKind::DirichletDirichlet, 3);
  for (int k = 1; k <= 3; ++k)
    CHECK(dd.values[k - 1] == doctest::Approx(k * k * M_PI * M_PI).epsilon(1e-9));
}

TEST_CASE("arclength normalization produces the h0 = h1 form") {
  WarpedMetric g;
  g.n1 = 2;
  g.n2 = 0;
  g.h0 = Profile::constant(1, 0, 1);
  g.h1 = affine_sq(1, 1);
  g.h2 = Profile::constant(1, 0, 1);
  g.extended = true;
  g.fiber1 = FiberKind{"torus", 2, {}};
  g.fiber2 = FiberKind{"point", 0, {}};
  WarpedMetric norm = normalize_metric(g);
  CHECK_FALSE(norm.extended);
  // new interval length is int sqrt(h0/h1) = log 2
  CHECK(norm.h1.hi() == doctest::Approx(std::log(2.0)).epsilon(1e-10));
  // h1(y) = (1+x(y))^2 with y = log(1+x): at y = log(1.5), h1 = 2.25
  CHECK(norm.h1(std::log(1.5)) == doctest::Approx(2.25).epsilon(1e-9));
  CHECK(norm.h0(std::log(1.5)) == doctest::Approx(2.25).epsilon(1e-9));
}

TEST_CASE("lambda needs bounded elliptic regularity") {
  WarpedMetric g = unit_circle_metric();
  g.regularity = Regularity::CriticalL1;
  CHECK_THROWS_AS(radial_problem(g, 1.0, 0), Error);
  CHECK_NOTHROW(radial_problem(g, 0.0, 0));
}

TEST_CASE("harmonic grid is ordered by total eigenvalue") {
  WarpedMetric g;
  g.n1 = 1;
  g.n2 = 1;
  g.h0 = Profile::constant(1, 0, 1);
  g.h1 = Profile::constant(1, 0, 1);
  g.h2 = Profile::constant(1, 0, 1);
  g.fiber1 = FiberKind{"circle", 1, {}};
  g.fiber2 = FiberKind{"circle", 1, {}};
  auto grid = harmonic_grid(g, 10);
  REQUIRE(grid.size() == 10);
  for (size_t i = 1; i < grid.size(); ++i)
    CHECK(grid[i - 1].mu + grid[i - 1].nu <= grid[i].mu + grid[i].nu + 1e-12);
  CHECK(grid[0].mu == 0);
  CHECK(grid[0].nu == 0);
}

TEST_CASE("sobolev mass tail sum") {
  BoundaryData data;
  for (int m = 0; m < 4; ++m) {
    BoundaryData::Entry e;
    e.m = m;
    e.mu = m * m;
    e.psi0 = 1;
    data.entries.push_back(e);
  }
  double all = sobolev_mass(data, 0);
  CHECK(all == doctest::Approx(4.0));
  double tail = sobolev_mass(data, 0, 3.5);
  CHECK(tail == doctest::Approx(2.0));  // m = 2, 3 have mu > 3.5
  double weighted = sobolev_mass(data, 1, 3.5);
  CHECK(weighted == doctest::Approx(15.0));  // (1 + 4) + (1 + 9)
}
