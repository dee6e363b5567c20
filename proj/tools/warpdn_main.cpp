// warpdn command line front end. Talks to the library through the C API only.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "warpdn/warpdn.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNumerical = 1;
constexpr int kExitUsage = 2;

[[noreturn]] void die_usage(const std::string& msg) {
  std::fprintf(stderr, "error: %s\n", msg.c_str());
  std::exit(kExitUsage);
}

// status -> exit code; parse/argument/file trouble is a usage error,
// everything else is a numerical failure
[[noreturn]] void die_status(int rc, const std::string& where) {
  std::fprintf(stderr, "error: %s: %s\n", where.c_str(), wdn_last_error());
  bool usage = rc == WDN_EINVAL || rc == WDN_EPARSE || rc == WDN_EIO;
  std::exit(usage ? kExitUsage : kExitNumerical);
}

void check(int rc, const std::string& where) {
  if (rc != WDN_OK) die_status(rc, where);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) die_usage("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct ProblemArgs {
  std::string metricFile, pFile, qFile, rFile;
  double lambda = 0, nu = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--metric", metricFile, "metric description (JSON file)");
    cmd->add_option("--p", pFile, "leading coefficient profile (JSON file)");
    cmd->add_option("--q", qFile, "potential profile (JSON file)");
    cmd->add_option("--r", rFile, "weight profile (JSON file)");
    cmd->add_option("--lambda", lambda, "spectral shift of the fiber problem");
    cmd->add_option("--nu", nu, "second-fiber eigenvalue selecting the radial problem");
  }

  wdn_problem* build() const {
    wdn_problem* prob = nullptr;
    if (!metricFile.empty()) {
      wdn_metric* g = nullptr;
      check(wdn_metric_parse(slurp(metricFile).c_str(), &g), "metric");
      int rc = wdn_problem_from_metric(g, lambda, nu, &prob);
      wdn_metric_free(g);
      check(rc, "radial problem");
      return prob;
    }
    if (pFile.empty() || rFile.empty())
      die_usage("need either --metric or both --p and --r");
    wdn_profile *p = nullptr, *q = nullptr, *r = nullptr;
    check(wdn_profile_parse(slurp(pFile).c_str(), &p), "profile p");
    check(wdn_profile_parse(slurp(rFile).c_str(), &r), "profile r");
    if (!qFile.empty()) check(wdn_profile_parse(slurp(qFile).c_str(), &q), "profile q");
    int rc = wdn_problem_create(p, q, r, &prob);
    wdn_profile_free(p);
    wdn_profile_free(q);
    wdn_profile_free(r);
    check(rc, "problem");
    return prob;
  }
};

wdn_metric* load_metric(const std::string& path) {
  wdn_metric* g = nullptr;
  check(wdn_metric_parse(slurp(path).c_str(), &g), "metric");
  return g;
}

void print_json(char* s) {
  std::printf("%s\n", s);
  wdn_string_free(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dirichlet-to-Neumann maps of singular warped-product cylinders"};
  app.require_subcommand(1);

  // spectrum
  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues of the radial problem");
  ProblemArgs spArgs;
  spArgs.attach(spectrum);
  std::string spKind = "dd";
  int spKmax = 10;
  spectrum->add_option("--kind", spKind, "boundary pair: dd, nd or dn");
  spectrum->add_option("--kmax", spKmax, "number of eigenvalues");

  // wtfunc
  auto* wt = app.add_subcommand("wtfunc", "Weyl functions M and N on a z grid");
  ProblemArgs wtArgs;
  wtArgs.attach(wt);
  std::vector<double> wtZre, wtZim;
  wt->add_option("--zre", wtZre, "real parts of evaluation points")->required();
  wt->add_option("--zim", wtZim, "imaginary parts (defaults to 0)");

  // dnmap
  auto* dn = app.add_subcommand("dnmap", "DN blocks over the harmonic grid");
  std::string dnMetric;
  double dnLambda = 0;
  int dnCount = 16;
  dn->add_option("--metric", dnMetric)->required();
  dn->add_option("--lambda", dnLambda);
  dn->add_option("--count", dnCount, "number of harmonic pairs");

  // gauge-verify
  auto* gv = app.add_subcommand("gauge-verify",
                                "compare DN blocks before/after arclength normalization");
  std::string gvMetric;
  double gvLambda = 0, gvTol = 1e-6;
  int gvHarm = 8;
  gv->add_option("--metric", gvMetric)->required();
  gv->add_option("--lambda", gvLambda);
  gv->add_option("--harmonics", gvHarm);
  gv->add_option("--tol", gvTol, "pass threshold on the max entrywise deviation");

  // conformal-ode
  auto* co = app.add_subcommand("conformal-ode", "integrate the conformal factor equation");
  std::string coMetric;
  double coLambda = 1, coKappa0 = 1, coFlux0 = 0;
  int coRef = 8;
  co->add_option("--metric", coMetric)->required();
  co->add_option("--lambda", coLambda);
  co->add_option("--kappa0", coKappa0);
  co->add_option("--flux0", coFlux0);
  co->add_option("--refinement", coRef);

  // indicator
  auto* ind = app.add_subcommand("indicator", "ray growth of a characteristic function");
  ProblemArgs indArgs;
  indArgs.attach(ind);
  std::string indWhich = "delta";
  double indTheta = M_PI / 2, indRmin = 5, indRmax = 50;
  int indN = 10;
  ind->add_option("--which", indWhich, "delta, d or e");
  ind->add_option("--theta", indTheta, "ray angle in the w plane");
  ind->add_option("--rmin", indRmin);
  ind->add_option("--rmax", indRmax);
  ind->add_option("--npts", indN);

  // cam
  auto* cam = app.add_subcommand("cam", "shared-characteristic discrepancy of two problems");
  std::string camA, camB;
  double camLambda = 0, camNu = 0, camTmax = 30;
  int camN = 30;
  cam->add_option("--metric-a", camA)->required();
  cam->add_option("--metric-b", camB)->required();
  cam->add_option("--lambda", camLambda);
  cam->add_option("--nu", camNu);
  cam->add_option("--tmax", camTmax);
  cam->add_option("--npts", camN);

  // cloak-verify
  auto* cv = app.add_subcommand("cloak-verify",
                                "DN invariance under swapping the hidden interior");
  std::string cvVariant = "A", cvF1, cvF2;
  double cvR = 1, cvTol = 1e-8;
  int cvN = 2, cvHarm = 6;
  cv->add_option("--variant", cvVariant, "A, B, C or D");
  cv->add_option("--r", cvR, "interface degeneration rate");
  cv->add_option("--n", cvN, "fiber dimension");
  cv->add_option("--f1", cvF1, "first interior profile (JSON file)")->required();
  cv->add_option("--f2", cvF2, "second interior profile (JSON file)")->required();
  cv->add_option("--harmonics", cvHarm);
  cv->add_option("--tol", cvTol);

  // bessel
  auto* be = app.add_subcommand("bessel", "modified Bessel function values");
  double beNu = 0, beX = 1;
  std::string beKind = "i";
  be->add_option("--nu", beNu)->required();
  be->add_option("--x", beX)->required();
  be->add_option("--kind", beKind, "i, k or iprime");

  // fit
  auto* ft = app.add_subcommand("fit", "recover family parameters from DN blocks");
  std::string ftFamily = "affine-h1", ftData, ftTruth;
  double ftLambda = 0;
  int ftStarts = 8, ftHarm = 8;
  unsigned ftSeed = 12345;
  ft->add_option("--family", ftFamily, "constant-h1, affine-h1 or gauge-curve");
  ft->add_option("--data", ftData, "observed DN blocks (JSON file)");
  ft->add_option("--truth", ftTruth,
                 "comma-separated parameters: synthesize data instead of reading it");
  ft->add_option("--lambda", ftLambda);
  ft->add_option("--starts", ftStarts);
  ft->add_option("--harmonics", ftHarm, "grid size when synthesizing");
  ft->add_option("--seed", ftSeed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  if (spectrum->parsed()) {
    int kind = spKind == "dd" ? 0 : spKind == "nd" ? 1 : spKind == "dn" ? 2 : -1;
    if (kind < 0) die_usage("unknown --kind " + spKind);
    wdn_problem* prob = spArgs.build();
    std::vector<double> vals(spKmax), res(spKmax);
    check(wdn_spectrum(prob, kind, spKmax, vals.data(), res.data()), "spectrum");
    wdn_problem_free(prob);
    std::printf("k,value,residual\n");
    for (int i = 0; i < spKmax; ++i)
      std::printf("%d,%.12g,%.12g\n", i + 1, vals[i], res[i]);
    return kExitOk;
  }

  if (wt->parsed()) {
    wdn_problem* prob = wtArgs.build();
    std::printf("zre,zim,Mre,Mim,Nre,Nim\n");
    for (size_t i = 0; i < wtZre.size(); ++i) {
      double zim = i < wtZim.size() ? wtZim[i] : 0.0;
      double out[4];
      check(wdn_weyl(prob, wtZre[i], zim, out), "weyl");
      std::printf("%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n", wtZre[i], zim,
                  out[0], out[1], out[2], out[3]);
    }
    wdn_problem_free(prob);
    return kExitOk;
  }

  if (dn->parsed()) {
    wdn_metric* g = load_metric(dnMetric);
    std::vector<double> out(size_t(dnCount) * 7);
    int filled = 0;
    check(wdn_dn_grid(g, dnLambda, dnCount, out.data(), &filled), "dnmap");
    wdn_metric_free(g);
    std::printf("m,n,mu,nu,L,T,R\n");
    for (int i = 0; i < filled; ++i) {
      const double* b = out.data() + 7 * i;
      std::printf("%d,%d,%.12g,%.12g,%.12g,%.12g,%.12g\n", int(b[0]), int(b[1]),
                  b[2], b[3], b[4], b[5], b[6]);
    }
    return kExitOk;
  }

  if (gv->parsed()) {
    wdn_metric* g = load_metric(gvMetric);
    double dev = 0;
    check(wdn_gauge_discrepancy(g, gvLambda, gvHarm, &dev), "gauge-verify");
    wdn_metric_free(g);
    std::printf("max_deviation,%.12g\n", dev);
    return dev <= gvTol ? kExitOk : kExitNumerical;
  }

  if (co->parsed()) {
    wdn_metric* g = load_metric(coMetric);
    char* json = nullptr;
    check(wdn_conformal_ode(g, coLambda, coKappa0, coFlux0, coRef, &json),
          "conformal-ode");
    wdn_metric_free(g);
    print_json(json);
    return kExitOk;
  }

  if (ind->parsed()) {
    int which = indWhich == "delta" ? 0 : indWhich == "d" ? 1 : indWhich == "e" ? 2 : -1;
    if (which < 0) die_usage("unknown --which " + indWhich);
    if (indN < 2 || indRmin <= 0 || indRmax <= indRmin) die_usage("bad radius grid");
    wdn_problem* prob = indArgs.build();
    std::vector<double> radii(indN), vals(indN);
    for (int i = 0; i < indN; ++i)
      radii[i] = indRmin + (indRmax - indRmin) * i / (indN - 1);
    check(wdn_indicator(prob, which, indTheta, radii.data(), indN, vals.data()),
          "indicator");
    wdn_problem_free(prob);
    std::printf("r,value\n");
    for (int i = 0; i < indN; ++i) std::printf("%.12g,%.12g\n", radii[i], vals[i]);
    return kExitOk;
  }

  if (cam->parsed()) {
    wdn_metric* ga = load_metric(camA);
    wdn_metric* gb = load_metric(camB);
    wdn_problem *pa = nullptr, *pb = nullptr;
    check(wdn_problem_from_metric(ga, camLambda, camNu, &pa), "radial problem A");
    check(wdn_problem_from_metric(gb, camLambda, camNu, &pb), "radial problem B");
    wdn_metric_free(ga);
    wdn_metric_free(gb);
    if (camN < 2 || camTmax <= 0) die_usage("bad t grid");
    std::vector<double> ts(camN), vals(camN);
    for (int i = 0; i < camN; ++i) ts[i] = camTmax * (i + 1) / camN;
    double sup = 0;
    check(wdn_cam_discrepancy(pa, pb, ts.data(), camN, vals.data(), &sup), "cam");
    wdn_problem_free(pa);
    wdn_problem_free(pb);
    std::printf("t,value\n");
    for (int i = 0; i < camN; ++i) std::printf("%.12g,%.12g\n", ts[i], vals[i]);
    std::printf("sup,%.12g\n", sup);
    return kExitOk;
  }

  if (cv->parsed()) {
    double diff = 0;
    char* report = nullptr;
    check(wdn_cloak_verify(cvVariant.c_str(), cvR, cvN, slurp(cvF1).c_str(),
                           slurp(cvF2).c_str(), cvHarm, &diff, &report),
          "cloak-verify");
    print_json(report);
    return diff <= cvTol ? kExitOk : kExitNumerical;
  }

  if (be->parsed()) {
    double out = 0;
    int rc;
    if (beKind == "i") rc = wdn_bessel_i(beNu, beX, &out);
    else if (beKind == "k") rc = wdn_bessel_k(beNu, beX, &out);
    else if (beKind == "iprime") rc = wdn_bessel_i_prime(beNu, beX, &out);
    else die_usage("unknown --kind " + beKind);
    check(rc, "bessel");
    std::printf("%.15g\n", out);
    return kExitOk;
  }

  if (ft->parsed()) {
    std::string blocks;
    if (!ftTruth.empty()) {
      std::vector<double> theta;
      std::stringstream ss(ftTruth);
      std::string tok;
      while (std::getline(ss, tok, ',')) theta.push_back(std::atof(tok.c_str()));
      char* json = nullptr;
      check(wdn_fit_synthesize(ftFamily.c_str(), theta.data(), int(theta.size()),
                               ftLambda, ftHarm, &json),
            "synthesize");
      blocks = json;
      wdn_string_free(json);
    } else if (!ftData.empty()) {
      blocks = slurp(ftData);
    } else {
      die_usage("fit needs --data or --truth");
    }
    char* result = nullptr;
    check(wdn_fit(ftFamily.c_str(), ftLambda, blocks.c_str(), ftStarts, ftSeed,
                  &result),
          "fit");
    print_json(result);
    return kExitOk;
  }

  die_usage("no subcommand");
}
