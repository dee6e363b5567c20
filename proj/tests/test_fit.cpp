#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "warpdn/errors.hpp"
#include "warpdn/fit.hpp"

using namespace warpdn;

TEST_CASE("simplex minimizes a shifted quadratic inside the box") {
  auto fn = [](const std::vector<double>& x) {
    return (x[0] - 0.7) * (x[0] - 0.7) + 3 * (x[1] + 0.2) * (x[1] + 0.2);
  };
  FitResult r = nelder_mead(fn, {0, 0}, {-1, -1}, {1, 1}, 300, 1e-14);
  CHECK(r.theta[0] == doctest::Approx(0.7).epsilon(1e-4));
  CHECK(r.theta[1] == doctest::Approx(-0.2).epsilon(1e-4));
}

TEST_CASE("simplex respects the bounds") {
  auto fn = [](const std::vector<double>& x) { return (x[0] - 5.0) * (x[0] - 5.0); };
  FitResult r = nelder_mead(fn, {0.5}, {0, 0}, {1, 1}, 200, 1e-14);
  CHECK(r.theta[0] == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("unknown family name") {
  CHECK_THROWS_AS(make_family("no-such-family"), Error);
}

TEST_CASE("misfit vanishes at the truth and grows away from it") {
  ParametricFamily fam = make_family("affine-h1");
  std::vector<double> truth = {1.2, 0.9};
  auto blocks = synthesize_blocks(fam, truth, 0, 6);
  CHECK(blocks.size() == 6);
  CHECK(dn_misfit(fam, truth, 0, blocks) < 1e-20);
  CHECK(dn_misfit(fam, {1.5, 0.9}, 0, blocks) > 1e-6);
  CHECK(dn_misfit(fam, {100, 0.9}, 0, blocks) == 1e6);  // out of the box
}

TEST_CASE("constant family round trip from one start") {
  ParametricFamily fam = make_family("constant-h1");
  auto blocks = synthesize_blocks(fam, {1.7}, 0, 5);
  FitOptions opts;
  opts.starts = 1;
  opts.tolerance = 1e-14;
  FitResult r = fit_dn(fam, 0, blocks, opts);
  CHECK(r.theta[0] == doctest::Approx(1.7).epsilon(1e-4));
}

TEST_CASE("fit result serializes") {
  FitResult r;
  r.theta = {1, 2};
  r.misfit = 0.5;
  std::string j = r.to_json();
  CHECK(j.find("\"misfit\"") != std::string::npos);
}

TEST_CASE("gauge curve family is admissible across its box") {
  ParametricFamily fam = make_family("gauge-curve");
  for (double s : {-0.5, 0.0, 0.5})
    for (double t : {-0.3, 0.0, 0.3}) {
      WarpedMetric g = fam.build({s, t});
      CHECK_NOTHROW(validate_metric(g));
      CHECK(g.h1(0.5) > 0);
      CHECK(g.h2(0.5) > 0);
    }
}
