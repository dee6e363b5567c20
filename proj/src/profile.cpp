#include "warpdn/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "warpdn/errors.hpp"
#include "warpdn/numerics.hpp"

namespace warpdn {

namespace {

double poly_eval(const std::vector<double>& c, double x) {
  double v = 0;
  for (size_t i = c.size(); i-- > 0;) v = v * x + c[i];
  return v;
}

// antiderivative value of a polynomial at x
double poly_anti(const std::vector<double>& c, double x) {
  double v = 0;
  for (size_t i = c.size(); i-- > 0;) v = v * x + c[i] / double(i + 1);
  return v * x;
}

std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

// integral of |x - c|^s over [lo, hi], where [lo, hi] lies on one side of c.
// Throws when the integral is divergent (center inside/at the edge, s <= -1).
double power_int(double c, double s, double lo, double hi) {
  auto prim = [&](double x) {
    double d = std::abs(x - c);
    if (s == -1.0) {
      if (d == 0) fail(ErrorCode::NotIntegrable, "divergent power-law integral");
      return std::log(d);
    }
    if (d == 0 && s + 1 < 0)
      fail(ErrorCode::NotIntegrable, "divergent power-law integral");
    return std::pow(d, s + 1) / (s + 1);
  };
  double sign = (lo >= c) ? 1.0 : -1.0;  // d|x-c|/dx
  return sign * (prim(hi) - prim(lo));
}

// integral of |x - c|^(s+1) * sign(x - c) over [lo, hi] (one-sided interval)
double power_int_shift(double c, double s, double lo, double hi) {
  double side = (lo >= c) ? 1.0 : -1.0;
  return side * power_int(c, s + 1, lo, hi);
}

}  // namespace

double Segment::value(double x) const {
  switch (kind) {
    case SegmentKind::Constant: return c;
    case SegmentKind::Polynomial: return poly_eval(coeffs, x);
    case SegmentKind::PowerLaw: return a * std::pow(std::abs(x - center), s);
    case SegmentKind::Table: {
      if (xs.empty()) return 0;
      if (x <= xs.front()) return ys.front();
      if (x >= xs.back()) return ys.back();
      auto it = std::upper_bound(xs.begin(), xs.end(), x);
      size_t i = size_t(it - xs.begin()) - 1;
      double t = (x - xs[i]) / (xs[i + 1] - xs[i]);
      return ys[i] + t * (ys[i + 1] - ys[i]);
    }
    case SegmentKind::Custom: return fn(x);
  }
  return 0;
}

double Segment::integral(double lo, double hi) const {
  switch (kind) {
    case SegmentKind::Constant: return c * (hi - lo);
    case SegmentKind::Polynomial: return poly_anti(coeffs, hi) - poly_anti(coeffs, lo);
    case SegmentKind::PowerLaw: return a * power_int(center, s, lo, hi);
    case SegmentKind::Table: {
      double total = 0;
      for (size_t i = 0; i + 1 < xs.size(); ++i) {
        double pa = std::max(lo, xs[i]), pb = std::min(hi, xs[i + 1]);
        if (pa >= pb) continue;
        double va = value(pa), vb = value(pb);
        total += 0.5 * (va + vb) * (pb - pa);
      }
      // clamped tails outside the table range
      if (lo < xs.front()) total += ys.front() * (std::min(hi, xs.front()) - lo);
      if (hi > xs.back()) total += ys.back() * (hi - std::max(lo, xs.back()));
      return total;
    }
    case SegmentKind::Custom:
      return gauss7([this](double x) { return fn(x); }, lo, hi);
  }
  return 0;
}

double Segment::first_moment(double lo, double hi, double ctr) const {
  switch (kind) {
    case SegmentKind::Constant:
      return c * (0.5 * (hi * hi - lo * lo) - ctr * (hi - lo));
    case SegmentKind::Polynomial: {
      std::vector<double> xc(coeffs.size() + 1, 0.0);
      for (size_t i = 0; i < coeffs.size(); ++i) xc[i + 1] = coeffs[i];
      return poly_anti(xc, hi) - poly_anti(xc, lo) - ctr * integral(lo, hi);
    }
    case SegmentKind::PowerLaw:
      // (x - ctr) = sign(x-center)*|x-center| + (center - ctr)
      return a * power_int_shift(center, s, lo, hi) +
             (center - ctr) * a * power_int(center, s, lo, hi);
    case SegmentKind::Table:
    case SegmentKind::Custom:
      return gauss7([this, ctr](double x) { return (x - ctr) * value(x); }, lo, hi);
  }
  return 0;
}

double Segment::integral_abs(double lo, double hi) const {
  switch (kind) {
    case SegmentKind::Constant: return std::abs(c) * (hi - lo);
    case SegmentKind::PowerLaw: return std::abs(a) * power_int(center, s, lo, hi);
    case SegmentKind::Polynomial:
    case SegmentKind::Table:
      return adaptive_simpson([this](double x) { return std::abs(value(x)); }, lo, hi,
                              1e-12 * (1 + std::abs(value(0.5 * (lo + hi)))) * (hi - lo));
    case SegmentKind::Custom: {
      // geometric split from both edges in case the closed-over expression
      // steepens toward a span boundary
      double total = 0, len = hi - lo;
      double a0 = lo + 1e-13 * len, b0 = hi - 1e-13 * len, mid = 0.5 * (lo + hi);
      std::vector<double> knots{a0};
      for (double w = 1e-13 * len; lo + w < mid; w *= 4) knots.push_back(lo + w);
      knots.push_back(mid);
      for (double w = 1e-13 * len; hi - w > mid; w *= 4) knots.push_back(hi - w);
      knots.push_back(b0);
      std::sort(knots.begin(), knots.end());
      for (size_t i = 0; i + 1 < knots.size(); ++i) {
        if (knots[i + 1] <= knots[i]) continue;
        total += adaptive_simpson([this](double x2) { return std::abs(fn(x2)); },
                                  knots[i], knots[i + 1], 1e-12, 18);
      }
      return total;
    }
  }
  return 0;
}

bool Segment::power_form(double& pa, double& pc, double& ps) const {
  switch (kind) {
    case SegmentKind::Constant: pa = c; pc = x0; ps = 0; return true;
    case SegmentKind::PowerLaw: pa = a; pc = center; ps = s; return true;
    case SegmentKind::Polynomial:
      if (coeffs.size() == 1) { pa = coeffs[0]; pc = x0; ps = 0; return true; }
      return false;
    default: return false;
  }
}

Profile::Profile(double lo, double hi, std::vector<Segment> segs)
    : lo_(lo), hi_(hi), segs_(std::move(segs)) {
  if (!(hi_ > lo_)) fail(ErrorCode::InvalidArgument, "profile: empty interval");
  if (segs_.empty()) fail(ErrorCode::InvalidArgument, "profile: no segments");
  double x = lo_;
  for (auto& s : segs_) {
    if (std::abs(s.x0 - x) > 1e-12 * (hi_ - lo_))
      fail(ErrorCode::InvalidArgument, "profile: segments not contiguous");
    if (!(s.x1 > s.x0)) fail(ErrorCode::InvalidArgument, "profile: empty segment");
    if (s.kind == SegmentKind::PowerLaw && s.center > s.x0 + 1e-14 && s.center < s.x1 - 1e-14)
      fail(ErrorCode::InvalidArgument, "profile: power-law center inside segment");
    x = s.x1;
  }
  if (std::abs(x - hi_) > 1e-12 * (hi_ - lo_))
    fail(ErrorCode::InvalidArgument, "profile: segments do not cover interval");
}

Profile Profile::constant(double v, double lo, double hi) {
  Segment s;
  s.x0 = lo; s.x1 = hi; s.kind = SegmentKind::Constant; s.c = v;
  return Profile(lo, hi, {s});
}

Profile Profile::from_function(const std::vector<double>& breaks,
                               std::function<double(double)> fn) {
  if (breaks.size() < 2) fail(ErrorCode::InvalidArgument, "from_function: need >= 2 breaks");
  std::vector<Segment> segs;
  for (size_t i = 0; i + 1 < breaks.size(); ++i) {
    Segment s;
    s.x0 = breaks[i]; s.x1 = breaks[i + 1];
    s.kind = SegmentKind::Custom;
    s.fn = fn;
    segs.push_back(std::move(s));
  }
  return Profile(breaks.front(), breaks.back(), std::move(segs));
}

const Segment& Profile::locate(double x) const {
  for (auto& s : segs_)
    if (x < s.x1 || &s == &segs_.back()) return s;
  return segs_.back();
}

double Profile::operator()(double x) const { return locate(x).value(x); }

double Profile::integrate(double a, double b) const {
  double total = 0;
  for (auto& s : segs_) {
    double pa = std::max(a, s.x0), pb = std::min(b, s.x1);
    if (pa < pb) total += s.integral(pa, pb);
  }
  return total;
}

double Profile::first_moment(double a, double b, double ctr) const {
  double total = 0;
  for (auto& s : segs_) {
    double pa = std::max(a, s.x0), pb = std::min(b, s.x1);
    if (pa < pb) total += s.first_moment(pa, pb, ctr);
  }
  return total;
}

double Profile::integrate_abs(double a, double b) const {
  double total = 0;
  for (auto& s : segs_) {
    double pa = std::max(a, s.x0), pb = std::min(b, s.x1);
    if (pa < pb) total += s.integral_abs(pa, pb);
  }
  return total;
}

void Profile::require_l1(double relTol, const std::string& what) const {
  for (auto& s : segs_) {
    if (s.kind == SegmentKind::PowerLaw && s.s <= -1.0 &&
        (s.center >= s.x0 - 1e-14 && s.center <= s.x1 + 1e-14))
      fail(ErrorCode::NotIntegrable, what + ": power-law exponent <= -1 at segment edge");
    if (s.kind == SegmentKind::Custom) {
      // two grading depths must agree; diverging closed-over expressions
      // (which the algebra should have kept in closed form) are rejected
      double len = s.x1 - s.x0;
      auto level = [&](double edge) {
        double total = 0;
        std::vector<double> knots{s.x0 + edge * len};
        double mid = 0.5 * (s.x0 + s.x1);
        for (double w = edge * len; s.x0 + w < mid; w *= 4) knots.push_back(s.x0 + w);
        knots.push_back(mid);
        for (double w = edge * len; s.x1 - w > mid; w *= 4) knots.push_back(s.x1 - w);
        knots.push_back(s.x1 - edge * len);
        std::sort(knots.begin(), knots.end());
        for (size_t i = 0; i + 1 < knots.size(); ++i)
          if (knots[i + 1] > knots[i])
            total += adaptive_simpson([&](double x) { return std::abs(s.fn(x)); },
                                      knots[i], knots[i + 1], 1e-12, 16);
        return total;
      };
      double c1 = level(1e-7), c2 = level(1e-11);
      if (!(std::abs(c2 - c1) <= relTol * std::max(std::abs(c2), 1.0) * 10 + 1e-12) ||
          !std::isfinite(c2))
        fail(ErrorCode::NotIntegrable, what + ": adaptive L1 check did not stabilize");
    }
  }
}

std::vector<int> Profile::segment_signs() const {
  std::vector<int> out;
  for (auto& s : segs_) {
    double len = s.x1 - s.x0;
    int pos = 0, neg = 0, zero = 0;
    for (double t : {1e-6, 0.1, 0.3, 0.5, 0.7, 0.9, 1 - 1e-6}) {
      double v = s.value(s.x0 + t * len);
      if (v > 0) ++pos;
      else if (v < 0) ++neg;
      else ++zero;
    }
    if (pos && neg)
      fail(ErrorCode::InvalidArgument, "profile: sign change inside a segment");
    out.push_back(pos ? 1 : (neg ? -1 : 0));
  }
  return out;
}

bool Profile::positive() const {
  if (segs_.empty()) return false;
  for (int s : segment_signs())
    if (s <= 0) return false;
  return true;
}

Profile Profile::pow(double e) const {
  std::vector<Segment> out;
  for (auto& s : segs_) {
    Segment n;
    n.x0 = s.x0; n.x1 = s.x1;
    double pa, pc, ps;
    if (s.power_form(pa, pc, ps) && (pa > 0 || e == std::round(e))) {
      if (ps * e == 0) {
        n.kind = SegmentKind::Constant;
        n.c = std::pow(pa, e);
      } else {
        n.kind = SegmentKind::PowerLaw;
        n.a = std::pow(pa, e); n.center = pc; n.s = ps * e;
      }
    } else if (s.kind == SegmentKind::Polynomial && e == 1.0) {
      n = s;
    } else if (s.kind == SegmentKind::Polynomial && (e == 2.0 || e == 3.0)) {
      n.kind = SegmentKind::Polynomial;
      n.coeffs = poly_mul(s.coeffs, s.coeffs);
      if (e == 3.0) n.coeffs = poly_mul(n.coeffs, s.coeffs);
    } else {
      n.kind = SegmentKind::Custom;
      n.fn = [s, e](double x) { return std::pow(s.value(x), e); };
    }
    out.push_back(std::move(n));
  }
  return Profile(lo_, hi_, std::move(out));
}

Profile Profile::scaled(double k) const {
  std::vector<Segment> out;
  for (auto& s : segs_) {
    Segment n = s;
    switch (s.kind) {
      case SegmentKind::Constant: n.c *= k; break;
      case SegmentKind::Polynomial:
        for (auto& c : n.coeffs) c *= k;
        break;
      case SegmentKind::PowerLaw: n.a *= k; break;
      case SegmentKind::Table:
        for (auto& y : n.ys) y *= k;
        break;
      case SegmentKind::Custom: {
        auto f = s.fn;
        n.fn = [f, k](double x) { return k * f(x); };
        break;
      }
    }
    out.push_back(std::move(n));
  }
  return Profile(lo_, hi_, std::move(out));
}

Profile Profile::shifted(double add) const {
  if (add == 0) return *this;
  std::vector<Segment> out;
  for (auto& s : segs_) {
    Segment n;
    n.x0 = s.x0; n.x1 = s.x1;
    if (s.kind == SegmentKind::Constant) {
      n.kind = SegmentKind::Constant; n.c = s.c + add;
    } else if (s.kind == SegmentKind::Polynomial) {
      n = s;
      n.coeffs[0] += add;
    } else {
      n.kind = SegmentKind::Custom;
      n.fn = [s, add](double x) { return s.value(x) + add; };
    }
    out.push_back(std::move(n));
  }
  return Profile(lo_, hi_, std::move(out));
}

Profile Profile::combine(const Profile& o, int op) const {
  double tol = 1e-12 * (hi_ - lo_);
  if (std::abs(o.lo_ - lo_) > tol || std::abs(o.hi_ - hi_) > tol)
    fail(ErrorCode::InvalidArgument, "profile algebra: interval mismatch");
  std::vector<double> cuts{lo_};
  for (auto& s : segs_) cuts.push_back(s.x1);
  for (auto& s : o.segs_) cuts.push_back(s.x1);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [tol](double a, double b) { return std::abs(a - b) <= tol; }),
             cuts.end());
  cuts.back() = hi_;

  std::vector<Segment> out;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    double u0 = cuts[i], u1 = cuts[i + 1], mid = 0.5 * (u0 + u1);
    const Segment& A = locate(mid);
    const Segment& B = o.locate(mid);
    Segment n;
    n.x0 = u0; n.x1 = u1;
    double aa, ac, as, ba, bc, bs;
    bool pfA = A.power_form(aa, ac, as), pfB = B.power_form(ba, bc, bs);
    if (op == 2) {  // add
      if (pfA && pfB && as == 0 && bs == 0) {
        n.kind = SegmentKind::Constant; n.c = aa + ba;
      } else if ((A.kind == SegmentKind::Polynomial || (pfA && as == 0)) &&
                 (B.kind == SegmentKind::Polynomial || (pfB && bs == 0))) {
        n.kind = SegmentKind::Polynomial;
        std::vector<double> ca = A.kind == SegmentKind::Polynomial
                                     ? A.coeffs : std::vector<double>{aa};
        std::vector<double> cb = B.kind == SegmentKind::Polynomial
                                     ? B.coeffs : std::vector<double>{ba};
        n.coeffs.assign(std::max(ca.size(), cb.size()), 0.0);
        for (size_t j = 0; j < ca.size(); ++j) n.coeffs[j] += ca[j];
        for (size_t j = 0; j < cb.size(); ++j) n.coeffs[j] += cb[j];
      } else {
        n.kind = SegmentKind::Custom;
        n.fn = [A, B](double x) { return A.value(x) + B.value(x); };
      }
    } else {  // mul (op 0) / div (op 1)
      bool compatible = pfA && pfB &&
                        (as == 0 || bs == 0 || std::abs(ac - bc) <= 1e-14);
      if (compatible) {
        double ns = (op == 0) ? as + bs : as - bs;
        double na = (op == 0) ? aa * ba : aa / ba;
        if (ns == 0) {
          n.kind = SegmentKind::Constant; n.c = na;
        } else {
          n.kind = SegmentKind::PowerLaw;
          n.a = na; n.center = (as != 0) ? ac : bc; n.s = ns;
        }
      } else if (op == 0 && A.kind == SegmentKind::Polynomial &&
                 B.kind == SegmentKind::Polynomial) {
        n.kind = SegmentKind::Polynomial;
        n.coeffs = poly_mul(A.coeffs, B.coeffs);
      } else if (op == 0 && ((pfA && as == 0 && B.kind == SegmentKind::Polynomial) ||
                             (pfB && bs == 0 && A.kind == SegmentKind::Polynomial))) {
        n.kind = SegmentKind::Polynomial;
        if (pfA && as == 0) { n.coeffs = B.coeffs; for (auto& c : n.coeffs) c *= aa; }
        else { n.coeffs = A.coeffs; for (auto& c : n.coeffs) c *= ba; }
      } else {
        n.kind = SegmentKind::Custom;
        if (op == 0) n.fn = [A, B](double x) { return A.value(x) * B.value(x); };
        else n.fn = [A, B](double x) { return A.value(x) / B.value(x); };
      }
    }
    out.push_back(std::move(n));
  }
  return Profile(lo_, hi_, std::move(out));
}

Profile Profile::times(const Profile& o) const { return combine(o, 0); }
Profile Profile::over(const Profile& o) const { return combine(o, 1); }
Profile Profile::plus(const Profile& o) const { return combine(o, 2); }

using nlohmann::json;

std::string Profile::to_json() const {
  json j;
  j["interval"] = {lo_, hi_};
  json segs = json::array();
  for (auto& s : segs_) {
    json js;
    js["span"] = {s.x0, s.x1};
    switch (s.kind) {
      case SegmentKind::Constant:
        js["kind"] = "constant";
        js["params"] = {{"value", s.c}};
        break;
      case SegmentKind::Polynomial:
        js["kind"] = "polynomial";
        js["params"] = {{"coeffs", s.coeffs}};
        break;
      case SegmentKind::PowerLaw:
        js["kind"] = "power";
        js["params"] = {{"a", s.a}, {"x0", s.center}, {"s", s.s}};
        break;
      case SegmentKind::Table:
        js["kind"] = "table";
        js["params"] = {{"x", s.xs}, {"y", s.ys}};
        break;
      case SegmentKind::Custom:
        fail(ErrorCode::Unsupported, "profile: custom segments are not serializable");
    }
    segs.push_back(std::move(js));
  }
  j["segments"] = std::move(segs);
  return j.dump();
}

Profile Profile::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    fail(ErrorCode::Parse, std::string("profile json: ") + e.what());
  }
  try {
    double lo = j.at("interval").at(0).get<double>();
    double hi = j.at("interval").at(1).get<double>();
    std::vector<Segment> segs;
    for (auto& js : j.at("segments")) {
      Segment s;
      s.x0 = js.at("span").at(0).get<double>();
      s.x1 = js.at("span").at(1).get<double>();
      std::string kind = js.at("kind").get<std::string>();
      const json& p = js.at("params");
      if (kind == "constant") {
        s.kind = SegmentKind::Constant;
        s.c = p.at("value").get<double>();
      } else if (kind == "polynomial") {
        s.kind = SegmentKind::Polynomial;
        s.coeffs = p.at("coeffs").get<std::vector<double>>();
        if (s.coeffs.empty()) s.coeffs.push_back(0.0);
      } else if (kind == "power") {
        s.kind = SegmentKind::PowerLaw;
        s.a = p.at("a").get<double>();
        s.center = p.at("x0").get<double>();
        s.s = p.at("s").get<double>();
      } else if (kind == "table") {
        s.kind = SegmentKind::Table;
        s.xs = p.at("x").get<std::vector<double>>();
        s.ys = p.at("y").get<std::vector<double>>();
        if (s.xs.size() != s.ys.size() || s.xs.size() < 2)
          fail(ErrorCode::Parse, "profile json: bad table");
        if (!std::is_sorted(s.xs.begin(), s.xs.end()))
          fail(ErrorCode::Parse, "profile json: table abscissae not sorted");
      } else {
        fail(ErrorCode::Parse, "profile json: unknown segment kind '" + kind + "'");
      }
      segs.push_back(std::move(s));
    }
    return Profile(lo, hi, std::move(segs));
  } catch (const json::exception& e) {
    fail(ErrorCode::Parse, std::string("profile json: ") + e.what());
  }
}

}  // namespace warpdn
