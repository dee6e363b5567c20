#include "warpdn/sl_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "warpdn/errors.hpp"
#include "warpdn/numerics.hpp"

namespace warpdn {

namespace {

constexpr double kRescaleAbove = 1e120;

MeshStep make_step(const Profile& w, const Profile& q, const Profile& r,
                   double a, double b) {
  MeshStep st;
  st.a = a;
  st.b = b;
  st.mid = 0.5 * (a + b);
  st.W0 = w.integrate(a, b);
  st.W1 = w.first_moment(a, b, st.mid);
  st.Q0 = q.integrate(a, b);
  st.Q1 = q.first_moment(a, b, st.mid);
  st.R0 = r.integrate(a, b);
  st.R1 = r.first_moment(a, b, st.mid);
  return st;
}

// magnitude of the coefficient mass on [a, b]; exact for one-signed segments
double mass_of(const Profile& f, double a, double b) {
  double total = 0;
  for (auto& s : f.segments()) {
    double pa = std::max(a, s.x0), pb = std::min(b, s.x1);
    if (pa < pb) total += std::abs(s.integral(pa, pb));
  }
  return total;
}

bool all_constant_on(const Profile& f, double a, double b) {
  double pa, pc, ps;
  for (auto& s : f.segments()) {
    if (s.x1 <= a || s.x0 >= b) continue;
    if (!s.power_form(pa, pc, ps) || ps != 0) return false;
  }
  return true;
}

void split_span(const Profile& w, const Profile& q, const Profile& r,
                double a, double b, double maxWidth, double maxMass,
                double minWidth, std::vector<MeshStep>& out) {
  double mass = mass_of(w, a, b) + mass_of(q, a, b) + mass_of(r, a, b);
  if ((b - a <= maxWidth && mass <= maxMass) || b - a <= minWidth) {
    if (b - a <= minWidth && mass > 10 * maxMass)
      fail(ErrorCode::SingularityTooStrong,
           "mesh: coefficient mass does not localize (singularity too strong)");
    out.push_back(make_step(w, q, r, a, b));
    return;
  }
  double mid = 0.5 * (a + b);
  split_span(w, q, r, a, mid, maxWidth, maxMass, minWidth, out);
  split_span(w, q, r, mid, b, maxWidth, maxMass, minWidth, out);
}

std::shared_ptr<Mesh> build_mesh(const Profile& w, const Profile& q,
                                 const Profile& r, int baseSteps) {
  double lo = w.lo(), hi = w.hi(), len = hi - lo;
  std::vector<double> cuts{lo};
  for (const Profile* f : {&w, &q, &r})
    for (auto& s : f->segments()) cuts.push_back(s.x1);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [len](double a, double b) { return b - a <= 1e-13 * len; }),
             cuts.end());
  cuts.back() = hi;

  double totalMass = mass_of(w, lo, hi) + mass_of(q, lo, hi) + mass_of(r, lo, hi);
  double maxWidth = len / baseSteps;
  double maxMass = 2.0 * std::max(totalMass, 1e-12) / baseSteps;
  double minWidth = 1e-13 * len;

  auto mesh = std::make_shared<Mesh>();
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    double a = cuts[i], b = cuts[i + 1];
    if (all_constant_on(w, a, b) && all_constant_on(q, a, b) && all_constant_on(r, a, b)) {
      mesh->steps.push_back(make_step(w, q, r, a, b));  // propagator is exact here
    } else {
      split_span(w, q, r, a, b, maxWidth, maxMass, minWidth, mesh->steps);
    }
  }
  mesh->nodes.reserve(mesh->steps.size() + 1);
  mesh->nodes.push_back(lo);
  for (auto& st : mesh->steps) mesh->nodes.push_back(st.b);
  for (auto& st : mesh->steps)
    mesh->tEst += std::sqrt(std::abs(st.W0 * st.R0));
  return mesh;
}

// Past this value of sqrt(w2) the step exponential is computed with a
// factor exp(sqrt(w2)) pulled out, so single large steps cannot overflow.
constexpr double kHugeArg = 350.0;

inline double scaled_cosh_sinch(double w2, double& ch, double& shc) {
  if (w2 > kHugeArg * kHugeArg) {
    double s = std::sqrt(w2), e2 = std::exp(-2.0 * s);
    ch = 0.5 * (1.0 + e2);
    shc = 0.5 * (1.0 - e2) / s;
    return s;
  }
  cosh_sinch(w2, ch, shc);
  return 0.0;
}

inline double scaled_cosh_sinch(Complex w2, Complex& ch, Complex& shc) {
  Complex s = std::sqrt(w2);  // principal branch, Re s >= 0
  if (s.real() > kHugeArg) {
    Complex ph = std::exp(Complex(0.0, s.imag()));
    Complex e2 = std::exp(-2.0 * s);
    ch = 0.5 * ph * (1.0 + e2);
    shc = 0.5 * ph * (1.0 - e2) / s;
    return s.real();
  }
  cosh_sinch(w2, ch, shc);
  return 0.0;
}

// Apply exp([[0, b], [c, 0]]) to the state (u, uq). Returns the log of the
// positive scalar pulled out of the state to keep it representable.
template <typename S>
inline double apply_exponent(double b, S c, S& u, S& uq) {
  S w2 = b * c, ch, shc;
  double ls = scaled_cosh_sinch(w2, ch, shc);
  S un = ch * u + b * shc * uq;
  uq = c * shc * u + ch * uq;
  u = un;
  return ls;
}

// One commutator-free 4th order step. Exact when the coefficients are
// constant across the step (the two exponents then commute).
template <typename S>
inline double propagate_step(const MeshStep& st, S z, bool forward, S& u, S& uq) {
  double h = st.b - st.a;
  S V0 = S(st.Q0) - z * st.R0;
  S V1 = S(st.Q1) - z * st.R1;
  double b1 = 0.5 * st.W0 - 2.0 * st.W1 / h;
  double b2 = 0.5 * st.W0 + 2.0 * st.W1 / h;
  S c1 = 0.5 * V0 - 2.0 * V1 / h;
  S c2 = 0.5 * V0 + 2.0 * V1 / h;
  if (forward)
    return apply_exponent(b1, c1, u, uq) + apply_exponent(b2, c2, u, uq);
  return apply_exponent(-b2, -c2, u, uq) + apply_exponent(-b1, -c1, u, uq);
}

template <typename S>
double maybe_rescale(S& u, S& uq, double logScale) {
  double m = std::max(std::abs(u), std::abs(uq));
  if (m > kRescaleAbove) {
    u /= m;
    uq /= m;
    logScale += std::log(m);
  }
  return logScale;
}

template <typename S>
struct EndState {
  S u, uq;
  double logScale;
};

template <typename S>
EndState<S> sweep_ends(const Mesh& mesh, S z, bool fromLeft, S u0, S q0) {
  S u = u0, uq = q0;
  double ls = 0;
  if (fromLeft) {
    for (auto& st : mesh.steps) {
      ls += propagate_step(st, z, true, u, uq);
      ls = maybe_rescale(u, uq, ls);
    }
  } else {
    for (size_t i = mesh.steps.size(); i-- > 0;) {
      ls += propagate_step(mesh.steps[i], z, false, u, uq);
      ls = maybe_rescale(u, uq, ls);
    }
  }
  return {u, uq, ls};
}

template <typename S>
QuasiSolution sweep_record(const Mesh& mesh, S z, bool fromLeft, S u0, S q0) {
  size_t n = mesh.nodes.size();
  QuasiSolution out;
  out.grid = mesh.nodes;
  out.u.resize(n);
  out.quasi.resize(n);
  out.z = Complex(z);
  std::vector<double> nodeLog(n, 0.0);
  S u = u0, uq = q0;
  double ls = 0;
  if (fromLeft) {
    out.u[0] = Complex(u);
    out.quasi[0] = Complex(uq);
    for (size_t i = 0; i < mesh.steps.size(); ++i) {
      ls += propagate_step(mesh.steps[i], z, true, u, uq);
      ls = maybe_rescale(u, uq, ls);
      out.u[i + 1] = Complex(u);
      out.quasi[i + 1] = Complex(uq);
      nodeLog[i + 1] = ls;
    }
  } else {
    out.u[n - 1] = Complex(u);
    out.quasi[n - 1] = Complex(uq);
    for (size_t i = mesh.steps.size(); i-- > 0;) {
      ls += propagate_step(mesh.steps[i], z, false, u, uq);
      ls = maybe_rescale(u, uq, ls);
      out.u[i] = Complex(u);
      out.quasi[i] = Complex(uq);
      nodeLog[i] = ls;
    }
  }
  out.logScale = ls;
  if (ls != 0) {
    for (size_t i = 0; i < n; ++i) {
      double f = std::exp(nodeLog[i] - ls);
      out.u[i] *= f;
      out.quasi[i] *= f;
    }
  }
  return out;
}

bool is_real(Complex z) { return z.imag() == 0; }

struct SignedLog {
  double logAbs;
  Complex phase;
};

SignedLog end_logvalue(Complex raw, double ls) {
  double a = std::abs(raw);
  if (a == 0) return {-std::numeric_limits<double>::infinity(), Complex(0, 0)};
  return {std::log(a) + ls, raw / a};
}

}  // namespace

Complex LogValue::value() const { return phase * std::exp(logAbs); }

Complex QuasiSolution::value(double x) const {
  auto it = std::lower_bound(grid.begin(), grid.end(), x);
  size_t i = std::min<size_t>(it - grid.begin(), grid.size() - 1);
  if (i > 0 && x - grid[i - 1] < grid[i] - x) --i;
  return u[i];
}

Complex QuasiSolution::quasi_derivative(double x) const {
  auto it = std::lower_bound(grid.begin(), grid.end(), x);
  size_t i = std::min<size_t>(it - grid.begin(), grid.size() - 1);
  if (i > 0 && x - grid[i - 1] < grid[i] - x) --i;
  return quasi[i];
}

SturmLiouvilleProblem::SturmLiouvilleProblem(Profile p, Profile q, Profile r,
                                             SolverOptions opts)
    : p_(std::move(p)), q_(std::move(q)), r_(std::move(r)),
      w_(p_.pow(-1.0)), opts_(opts) {
  double len = p_.length();
  double tol = 1e-12 * len;
  if (std::abs(q_.lo() - p_.lo()) > tol || std::abs(q_.hi() - p_.hi()) > tol ||
      std::abs(r_.lo() - p_.lo()) > tol || std::abs(r_.hi() - p_.hi()) > tol)
    fail(ErrorCode::InvalidArgument, "problem: coefficient intervals differ");
  auto psigns = p_.segment_signs();
  for (int s : psigns)
    if (s == 0) fail(ErrorCode::InvalidArgument, "problem: p vanishes on a segment");
  if (!std::all_of(psigns.begin(), psigns.end(),
                   [&](int s) { return s == psigns.front(); }))
    fail(ErrorCode::InvalidArgument, "problem: p changes sign");
  if (!r_.positive())
    fail(ErrorCode::InvalidArgument, "problem: r must be positive");
  w_.require_l1(1e-6, "1/p");
  q_.require_l1(1e-6, "q");
  r_.require_l1(1e-6, "r");
  mesh_ = build_mesh(w_, q_, r_, opts_.baseSteps);
  growthA_ = 0.5 * (w_.integrate() + r_.integrate());
}

SturmLiouvilleProblem SturmLiouvilleProblem::unit(double length) {
  return SturmLiouvilleProblem(Profile::constant(1, 0, length),
                               Profile::constant(0, 0, length),
                               Profile::constant(1, 0, length));
}

std::shared_ptr<const Mesh> SturmLiouvilleProblem::refined_mesh(double zMax) const {
  static thread_local struct {
    const SturmLiouvilleProblem* owner = nullptr;
    double zMax = -1;
    std::shared_ptr<Mesh> mesh;
  } cache;
  if (cache.owner == this && cache.zMax >= zMax && cache.mesh) return cache.mesh;
  auto out = std::make_shared<Mesh>();
  double z = std::max(zMax, 1.0);
  for (auto& st : mesh_->steps) {
    double phase = std::sqrt(std::abs(z * st.W0 * st.R0));
    int nsub = std::clamp(int(std::ceil(phase / 0.1)), 1, 4096);
    if (nsub == 1) {
      out->steps.push_back(st);
      continue;
    }
    double h = (st.b - st.a) / nsub;
    for (int i = 0; i < nsub; ++i)
      out->steps.push_back(make_step(w_, q_, r_, st.a + i * h, st.a + (i + 1) * h));
  }
  out->nodes.push_back(lo());
  for (auto& st : out->steps) out->nodes.push_back(st.b);
  out->tEst = mesh_->tEst;
  cache.owner = this;
  cache.zMax = zMax;
  cache.mesh = out;
  return out;
}

QuasiSolution integrate_cauchy(const SturmLiouvilleProblem& prob, Complex z,
                               double basePoint, Complex u0, Complex du0) {
  const Mesh& mesh = prob.mesh();
  double len = prob.length(), tol = 1e-12 * len;
  bool fromLeft;
  if (std::abs(basePoint - prob.lo()) <= tol) fromLeft = true;
  else if (std::abs(basePoint - prob.hi()) <= tol) fromLeft = false;
  else fail(ErrorCode::InvalidArgument, "integrate_cauchy: base point must be an endpoint");
  if (is_real(z) && u0.imag() == 0 && du0.imag() == 0)
    return sweep_record(mesh, z.real(), fromLeft, u0.real(), du0.real());
  return sweep_record(mesh, z, fromLeft, u0, du0);
}

FundamentalSystem fundamental_system(const SturmLiouvilleProblem& prob, Complex z) {
  FundamentalSystem fs;
  fs.z = z;
  fs.c0 = integrate_cauchy(prob, z, prob.lo(), 1, 0);
  fs.s0 = integrate_cauchy(prob, z, prob.lo(), 0, 1);
  fs.c1 = integrate_cauchy(prob, z, prob.hi(), 1, 0);
  fs.s1 = integrate_cauchy(prob, z, prob.hi(), 0, 1);
  return fs;
}

Complex wronskian(const QuasiSolution& u, const QuasiSolution& v, double x) {
  Complex w = u.value(x) * v.quasi_derivative(x) - u.quasi_derivative(x) * v.value(x);
  return w * std::exp(u.logScale + v.logScale);
}

Characteristics characteristics(const SturmLiouvilleProblem& prob, Complex z) {
  const Mesh& mesh = prob.mesh();
  Characteristics out;
  auto assign = [](LogValue& lv, SignedLog sl) {
    lv.logAbs = sl.logAbs;
    lv.phase = sl.phase;
  };
  if (is_real(z)) {
    double zr = z.real();
    auto s0 = sweep_ends(mesh, zr, true, 0.0, 1.0);
    auto c0 = sweep_ends(mesh, zr, true, 1.0, 0.0);
    auto c1 = sweep_ends(mesh, zr, false, 1.0, 0.0);
    assign(out.Delta, end_logvalue(Complex(s0.u), s0.logScale));
    assign(out.D, end_logvalue(Complex(c0.u), c0.logScale));
    assign(out.E, end_logvalue(Complex(c1.u), c1.logScale));
  } else {
    auto s0 = sweep_ends(mesh, z, true, Complex(0), Complex(1));
    auto c0 = sweep_ends(mesh, z, true, Complex(1), Complex(0));
    auto c1 = sweep_ends(mesh, z, false, Complex(1), Complex(0));
    assign(out.Delta, end_logvalue(s0.u, s0.logScale));
    assign(out.D, end_logvalue(c0.u, c0.logScale));
    assign(out.E, end_logvalue(c1.u, c1.logScale));
  }
  return out;
}

WeylFunctions weyl_functions(const SturmLiouvilleProblem& prob, Complex z) {
  Characteristics ch = characteristics(prob, z);
  double A = prob.growth_constant();
  double guard = std::log(prob.options().poleGuard) + A * std::sqrt(std::abs(z));
  if (!(ch.Delta.logAbs > guard))
    fail(ErrorCode::Pole, "weyl_functions: z is too close to a Dirichlet eigenvalue");
  WeylFunctions wf;
  wf.M = -(ch.D.phase / ch.Delta.phase) * std::exp(ch.D.logAbs - ch.Delta.logAbs);
  wf.N = -(ch.E.phase / ch.Delta.phase) * std::exp(ch.E.logAbs - ch.Delta.logAbs);
  return wf;
}

WeylSolutions weyl_solutions(const SturmLiouvilleProblem& prob, Complex z) {
  FundamentalSystem fs = fundamental_system(prob, z);
  for (const QuasiSolution* qs : {&fs.c0, &fs.s0, &fs.c1, &fs.s1})
    if (std::abs(qs->logScale) > 600)
      fail(ErrorCode::Numeric, "weyl_solutions: |z| too large for linear assembly");
  WeylFunctions wf = weyl_functions(prob, z);
  WeylSolutions out;
  out.M = wf.M;
  out.N = wf.N;
  out.Psi = fs.c0;
  out.Phi = fs.c1;
  double e0 = std::exp(fs.c0.logScale), es0 = std::exp(fs.s0.logScale);
  double e1 = std::exp(fs.c1.logScale), es1 = std::exp(fs.s1.logScale);
  for (size_t i = 0; i < out.Psi.u.size(); ++i) {
    out.Psi.u[i] = fs.c0.u[i] * e0 + wf.M * fs.s0.u[i] * es0;
    out.Psi.quasi[i] = fs.c0.quasi[i] * e0 + wf.M * fs.s0.quasi[i] * es0;
    out.Phi.u[i] = fs.c1.u[i] * e1 - wf.N * fs.s1.u[i] * es1;
    out.Phi.quasi[i] = fs.c1.quasi[i] * e1 - wf.N * fs.s1.quasi[i] * es1;
  }
  out.Psi.logScale = 0;
  out.Phi.logScale = 0;
  return out;
}

namespace {

// signed, growth-normalized characteristic value on the real axis
double scaled_char(const SturmLiouvilleProblem& prob, BoundaryKind kind, double z) {
  const Mesh& mesh = prob.mesh();
  EndState<double> e{};
  switch (kind) {
    case BoundaryKind::DirichletDirichlet: e = sweep_ends(mesh, z, true, 0.0, 1.0); break;
    case BoundaryKind::NeumannDirichlet: e = sweep_ends(mesh, z, true, 1.0, 0.0); break;
    case BoundaryKind::DirichletNeumann: e = sweep_ends(mesh, z, false, 1.0, 0.0); break;
  }
  // Solutions grow like exp(A sqrt(-z)) below the spectrum but stay bounded
  // above it; normalizing by the former for z > 0 would underflow to zero.
  double A = prob.growth_constant();
  double norm = A * std::sqrt(std::max(-z, 0.0));
  return e.u * std::exp(e.logScale - norm);
}

}  // namespace

SpectrumResult spectra(const SturmLiouvilleProblem& prob, BoundaryKind kind, int kMax) {
  if (kMax < 1) fail(ErrorCode::InvalidArgument, "spectra: kMax must be >= 1");
  SpectrumResult out;
  out.kind = kind;
  auto f = [&](double z) { return scaled_char(prob, kind, z); };

  // finitely many eigenvalues can sit below zero when q dips negative
  double ratioFloor = 0;
  for (auto& st : prob.mesh().steps)
    if (st.R0 > 0) ratioFloor = std::min(ratioFloor, st.Q0 / st.R0);
  double zLow = ratioFloor - 10.0;

  double tEst = std::max(prob.mesh().tEst, 1e-8);
  auto scan = [&](double ds) {
    out.values.clear();
    out.residuals.clear();
    double sMax = (kMax + 3) * 1.6 * 3.14159265358979 / tEst;
    double prevZ = zLow, prevF = f(zLow);
    int negPts = 200;
    std::vector<double> grid;
    for (int i = 1; i <= negPts; ++i)
      grid.push_back(zLow + (0.0 - zLow) * i / negPts);
    for (double s = ds; s <= sMax && int(out.values.size()) < 4 * kMax; s += ds)
      grid.push_back(s * s);
    for (double zc : grid) {
      double fc = f(zc);
      if ((prevF < 0 && fc > 0) || (prevF > 0 && fc < 0) || fc == 0) {
        double root = (fc == 0) ? zc
                                : brent(f, prevZ, zc, 1e-13 * (1 + std::abs(zc)));
        out.values.push_back(root);
        out.residuals.push_back(std::abs(f(root)));
        if (int(out.values.size()) >= kMax) break;
      }
      prevZ = zc;
      prevF = fc;
    }
  };

  double ds = 3.14159265358979 / (4.0 * tEst);
  scan(ds);
  if (int(out.values.size()) < kMax) scan(ds / 3);
  if (int(out.values.size()) < kMax)
    fail(ErrorCode::BracketingFailed, "spectra: could not bracket requested eigenvalues");
  out.values.resize(kMax);
  out.residuals.resize(kMax);
  for (size_t i = 0; i + 1 < out.values.size(); ++i)
    if (!(out.values[i] < out.values[i + 1]))
      fail(ErrorCode::BracketingFailed, "spectra: roots not strictly increasing");
  return out;
}

double growth_constant(const SturmLiouvilleProblem& prob) {
  return prob.growth_constant();
}

double norm_squared_r(const SturmLiouvilleProblem& prob, double z) {
  auto mesh = prob.refined_mesh(std::abs(z));
  QuasiSolution s0 = sweep_record(*mesh, z, true, 0.0, 1.0);
  if (s0.logScale != 0)
    fail(ErrorCode::Numeric, "norm_squared_r: solution overflow (z far below spectrum?)");
  double total = 0;
  for (size_t i = 0; i < mesh->steps.size(); ++i) {
    double ua = std::norm(s0.u[i]), ub = std::norm(s0.u[i + 1]);
    total += mesh->steps[i].R0 * 0.5 * (ua + ub);
  }
  return total;
}

}  // namespace warpdn
