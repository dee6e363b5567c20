#include "warpdn/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>

#include <json.hpp>

#include "warpdn/errors.hpp"

namespace warpdn {

using nlohmann::json;

int FiberKind::dimension() const {
  if (type == "circle") return 1;
  if (type == "torus") return dim;
  if (type == "sphere2") return 2;
  if (type == "point") return 0;
  if (type == "product") {
    int d = 0;
    for (auto& f : factors) d += f.dimension();
    return d;
  }
  fail(ErrorCode::InvalidArgument, "fiber: unknown type '" + type + "'");
}

namespace {

json fiber_to_jobj(const FiberKind& f) {
  json j;
  j["kind"] = f.type;
  if (f.type == "torus") j["dim"] = f.dim;
  if (f.type == "product") {
    json arr = json::array();
    for (auto& g : f.factors) arr.push_back(fiber_to_jobj(g));
    j["factors"] = std::move(arr);
  }
  return j;
}

FiberKind fiber_from_jobj(const json& j) {
  FiberKind f;
  f.type = j.at("kind").get<std::string>();
  if (f.type == "torus") f.dim = j.at("dim").get<int>();
  if (f.type == "product")
    for (auto& jf : j.at("factors")) f.factors.push_back(fiber_from_jobj(jf));
  if (f.type != "circle" && f.type != "torus" && f.type != "sphere2" &&
      f.type != "point" && f.type != "product")
    fail(ErrorCode::Parse, "fiber json: unknown kind '" + f.type + "'");
  if (f.type == "torus" && (f.dim < 1 || f.dim > 4))
    fail(ErrorCode::Parse, "fiber json: torus dim out of range");
  return f;
}

// multiplicities of squared lattice norms |k|^2 <= vmax, k in Z^d
std::map<long, long> lattice_counts(int d, long vmax) {
  std::map<long, long> counts;
  long bound = long(std::sqrt(double(vmax))) + 1;
  std::vector<long> k(d, 0);
  std::function<void(int, long)> rec = [&](int i, long acc) {
    if (acc > vmax) return;
    if (i == d) {
      ++counts[acc];
      return;
    }
    for (long v = -bound; v <= bound; ++v) {
      long na = acc + v * v;
      if (na <= vmax) rec(i + 1, na);
    }
  };
  rec(0, 0);
  return counts;
}

}  // namespace

std::string FiberKind::to_json() const { return fiber_to_jobj(*this).dump(); }

FiberKind FiberKind::from_json(const std::string& text) {
  try {
    return fiber_from_jobj(json::parse(text));
  } catch (const json::exception& e) {
    fail(ErrorCode::Parse, std::string("fiber json: ") + e.what());
  }
}

FiberSpectrum fiber_spectrum(const FiberKind& kind, int count) {
  if (count < 1) fail(ErrorCode::InvalidArgument, "fiber_spectrum: count must be >= 1");
  FiberSpectrum out;
  if (kind.type == "point") {
    out.values = {0};
    out.mult = {1};
    return out;
  }
  if (kind.type == "circle") {
    for (int m = 0; m < count; ++m) {
      out.values.push_back(double(m) * m);
      out.mult.push_back(m == 0 ? 1 : 2);
    }
    return out;
  }
  if (kind.type == "sphere2") {
    for (int l = 0; l < count; ++l) {
      out.values.push_back(double(l) * (l + 1));
      out.mult.push_back(2 * l + 1);
    }
    return out;
  }
  if (kind.type == "torus") {
    long vmax = 4 * long(count) * kind.dim + 4;
    for (;;) {
      auto counts = lattice_counts(kind.dim, vmax);
      if (long(counts.size()) >= count) {
        for (auto& [v, c] : counts) {
          out.values.push_back(double(v));
          out.mult.push_back(int(c));
          if (int(out.values.size()) == count) break;
        }
        return out;
      }
      vmax *= 2;
    }
  }
  if (kind.type == "product") {
    if (kind.factors.size() != 2)
      fail(ErrorCode::InvalidArgument, "fiber_spectrum: product needs two factors");
    for (int terms = count + 2;; terms *= 2) {
      FiberSpectrum a = fiber_spectrum(kind.factors[0], terms);
      FiberSpectrum b = fiber_spectrum(kind.factors[1], terms);
      double cutoff = std::min(a.values.back(), b.values.back());
      std::map<double, long> sums;
      for (size_t i = 0; i < a.values.size(); ++i)
        for (size_t j = 0; j < b.values.size(); ++j) {
          double v = a.values[i] + b.values[j];
          if (v <= cutoff) sums[v] += long(a.mult[i]) * b.mult[j];
        }
      if (long(sums.size()) >= count) {
        for (auto& [v, c] : sums) {
          out.values.push_back(v);
          out.mult.push_back(int(c));
          if (int(out.values.size()) == count) break;
        }
        return out;
      }
    }
  }
  fail(ErrorCode::InvalidArgument, "fiber_spectrum: unknown fiber type");
}

void validate_metric(const WarpedMetric& g) {
  if (g.n1 < 1 || g.n2 < 0 || g.n1 + g.n2 < 1)
    fail(ErrorCode::InvalidArgument, "metric: need n1 >= 1, n2 >= 0, n1 + n2 >= 1");
  if (g.fiber1.dimension() != g.n1)
    fail(ErrorCode::InvalidArgument, "metric: fiber1 dimension does not match n1");
  if (g.fiber2.dimension() != g.n2)
    fail(ErrorCode::InvalidArgument, "metric: fiber2 dimension does not match n2");
  if (g.regularity == Regularity::BoundedElliptic) {
    for (const Profile* h : {&g.h0, &g.h1, &g.h2}) {
      if (!h->positive())
        fail(ErrorCode::InvalidArgument, "metric: warping factors must be positive");
      for (auto& s : h->segments())
        if (s.kind == SegmentKind::PowerLaw && s.s < 0)
          fail(ErrorCode::InvalidArgument,
               "metric: boundedElliptic metric has a blowing-up factor");
    }
  }
}

SturmLiouvilleProblem radial_problem(const WarpedMetric& g, double lambda, double nu,
                                     SolverOptions opts) {
  validate_metric(g);
  if (lambda != 0 && g.regularity != Regularity::BoundedElliptic)
    fail(ErrorCode::Unsupported,
         "radial_problem: nonzero lambda requires a bounded elliptic metric");
  Profile H = g.h1.pow(double(g.n1));
  if (g.n2 > 0) H = H.times(g.h2.pow(double(g.n2)));
  Profile p = H.over(g.h0).pow(0.5);
  Profile base = H.times(g.h0).pow(0.5);
  Profile r = base.over(g.h1);
  Profile q = Profile::constant(0, g.h1.lo(), g.h1.hi());
  if (nu != 0) q = base.over(g.h2).scaled(nu);
  if (lambda != 0) q = q.plus(base.scaled(-lambda));
  return SturmLiouvilleProblem(std::move(p), std::move(q), std::move(r), opts);
}

namespace {

/// Invertible arclength map y = phi(x) with cached monotone table.
struct ArclengthMap {
  Profile speed;  // sqrt(h0/h1)
  std::vector<double> xs, ys;

  explicit ArclengthMap(const Profile& s) : speed(s) {
    int n = 2048;
    double lo = s.lo(), hi = s.hi();
    xs.resize(n + 1);
    ys.resize(n + 1);
    double acc = 0;
    xs[0] = lo;
    ys[0] = 0;
    for (int i = 1; i <= n; ++i) {
      double x0 = lo + (hi - lo) * (i - 1) / n;
      double x1 = lo + (hi - lo) * i / n;
      acc += speed.integrate(x0, x1);
      xs[i] = x1;
      ys[i] = acc;
    }
  }

  double forward(double x) const {
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    size_t i = std::min<size_t>(std::max<long>(long(it - xs.begin()) - 1, 0), xs.size() - 2);
    return ys[i] + speed.integrate(xs[i], x);
  }

  double inverse(double y) const {
    y = std::clamp(y, ys.front(), ys.back());
    auto it = std::upper_bound(ys.begin(), ys.end(), y);
    size_t i = std::min<size_t>(std::max<long>(long(it - ys.begin()) - 1, 0), ys.size() - 2);
    double a = xs[i], b = xs[i + 1];
    double x = a + (b - a) * (y - ys[i]) / std::max(ys[i + 1] - ys[i], 1e-300);
    // Newton with a bisection safeguard; phi is strictly increasing
    for (int iter = 0; iter < 80 && b - a > 1e-16 * (1 + std::abs(x)); ++iter) {
      double err = ys[i] + speed.integrate(xs[i], x) - y;
      if (err == 0) break;
      if (err > 0) b = x; else a = x;
      double d = speed(x);
      double nx = (d > 1e-300) ? x - err / d : 0.5 * (a + b);
      if (!(nx > a && nx < b)) nx = 0.5 * (a + b);
      x = nx;
    }
    return x;
  }
};

}  // namespace

WarpedMetric normalize_metric(const WarpedMetric& g) {
  validate_metric(g);
  if (g.regularity != Regularity::BoundedElliptic)
    fail(ErrorCode::Unsupported, "normalize_metric: requires bounded elliptic metric");
  if (!g.extended) return g;
  Profile speed = g.h0.over(g.h1).pow(0.5);
  auto arc = std::make_shared<ArclengthMap>(speed);
  double A = arc->ys.back();

  // image of every coefficient breakpoint becomes a breakpoint in y
  std::vector<double> ybreaks{0.0};
  for (const Profile* h : {&g.h0, &g.h1, &g.h2})
    for (auto& s : h->segments()) ybreaks.push_back(arc->forward(s.x1));
  std::sort(ybreaks.begin(), ybreaks.end());
  ybreaks.erase(std::unique(ybreaks.begin(), ybreaks.end(),
                            [A](double a, double b) { return b - a <= 1e-12 * A; }),
                ybreaks.end());
  ybreaks.back() = A;

  auto pulled = [&](const Profile& h) {
    return Profile::from_function(
        ybreaks, [arc, h](double y) { return h(arc->inverse(y)); });
  };

  WarpedMetric out = g;
  out.h1 = pulled(g.h1);
  out.h2 = pulled(g.h2);
  out.h0 = out.h1;
  out.extended = false;
  return out;
}

std::vector<HarmonicIndex> harmonic_grid(const WarpedMetric& g, int count) {
  FiberSpectrum f1 = fiber_spectrum(g.fiber1, count);
  FiberSpectrum f2 = fiber_spectrum(g.fiber2, count);
  std::vector<HarmonicIndex> all;
  for (int m = 0; m < int(f1.values.size()); ++m)
    for (int n = 0; n < int(f2.values.size()); ++n) {
      HarmonicIndex h;
      h.m = m;
      h.n = n;
      h.mu = f1.values[m];
      h.nu = f2.values[n];
      h.multiplicity = f1.mult[m] * f2.mult[n];
      all.push_back(h);
    }
  std::stable_sort(all.begin(), all.end(), [](const HarmonicIndex& a, const HarmonicIndex& b) {
    if (a.mu + a.nu != b.mu + b.nu) return a.mu + a.nu < b.mu + b.nu;
    if (a.m != b.m) return a.m < b.m;
    return a.n < b.n;
  });
  if (int(all.size()) > count) all.resize(count);
  return all;
}

double sobolev_mass(const BoundaryData& data, double order, double cutoff) {
  double total = 0;
  for (auto& e : data.entries) {
    if (e.mu + e.nu <= cutoff) continue;
    total += std::pow(1.0 + e.mu + e.nu, order) *
             (std::norm(e.psi0) + std::norm(e.psi1));
  }
  return total;
}

std::string WarpedMetric::to_json() const {
  json j;
  j["n1"] = n1;
  j["n2"] = n2;
  j["regularity"] = regularity == Regularity::BoundedElliptic ? "boundedElliptic"
                    : regularity == Regularity::CriticalL1    ? "criticalL1"
                                                              : "singular";
  if (extended) j["h0"] = json::parse(h0.to_json());
  j["h1"] = json::parse(h1.to_json());
  if (n2 > 0) j["h2"] = json::parse(h2.to_json());
  j["fiber1"] = fiber_to_jobj(fiber1);
  j["fiber2"] = fiber_to_jobj(fiber2);
  return j.dump();
}

WarpedMetric WarpedMetric::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    fail(ErrorCode::Parse, std::string("metric json: ") + e.what());
  }
  try {
    WarpedMetric g;
    g.n1 = j.at("n1").get<int>();
    g.n2 = j.at("n2").get<int>();
    std::string reg = j.at("regularity").get<std::string>();
    if (reg == "boundedElliptic") g.regularity = Regularity::BoundedElliptic;
    else if (reg == "criticalL1") g.regularity = Regularity::CriticalL1;
    else if (reg == "singular") g.regularity = Regularity::Singular;
    else fail(ErrorCode::Parse, "metric json: unknown regularity '" + reg + "'");
    g.h1 = Profile::from_json(j.at("h1").dump());
    if (j.contains("h2")) g.h2 = Profile::from_json(j.at("h2").dump());
    else g.h2 = Profile::constant(1, g.h1.lo(), g.h1.hi());
    if (j.contains("h0")) {
      g.h0 = Profile::from_json(j.at("h0").dump());
      g.extended = true;
    } else {
      g.h0 = g.h1;
    }
    g.fiber1 = fiber_from_jobj(j.at("fiber1"));
    if (j.contains("fiber2")) g.fiber2 = fiber_from_jobj(j.at("fiber2"));
    else g.fiber2 = FiberKind{"point", 0, {}};
    validate_metric(g);
    return g;
  } catch (const json::exception& e) {
    fail(ErrorCode::Parse, std::string("metric json: ") + e.what());
  }
}

}  // namespace warpdn
