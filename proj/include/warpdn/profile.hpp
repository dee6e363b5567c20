#pragma once

#include <functional>
#include <string>
#include <vector>

namespace warpdn {

/// Expression kinds for one piecewise coefficient segment.
/// PowerLaw is a * |x - center|^s with the center pinned to one edge of the
/// segment, so the sign of the expression never changes inside a segment.
/// Custom holds a closed-over evaluator; it is produced by profile algebra
/// (pow/mul/...) when no closed form survives and is not serializable.
enum class SegmentKind { Constant, Polynomial, PowerLaw, Table, Custom };

struct Segment {
  double x0 = 0, x1 = 1;
  SegmentKind kind = SegmentKind::Constant;
  double c = 0;                      // Constant
  std::vector<double> coeffs;        // Polynomial, ascending in x
  double a = 1, center = 0, s = 0;   // PowerLaw
  std::vector<double> xs, ys;        // Table, piecewise linear
  std::function<double(double)> fn;  // Custom

  double value(double x) const;
  /// integral of the expression over [lo, hi] (closed form where possible)
  double integral(double lo, double hi) const;
  /// integral of (x - ctr) * expression over [lo, hi]
  double first_moment(double lo, double hi, double ctr) const;
  /// integral of |expression|
  double integral_abs(double lo, double hi) const;
  /// true if the expression is unbounded approaching the given edge
  bool singular_left() const { return kind == SegmentKind::PowerLaw && s < 0 && center <= x0; }
  bool singular_right() const { return kind == SegmentKind::PowerLaw && s < 0 && center >= x1; }
  /// closed-form power representation a*|x-center|^s if available
  bool power_form(double& pa, double& pc, double& ps) const;
};

/// A scalar coefficient on an interval, stored as contiguous segments.
class Profile {
public:
  Profile() = default;
  Profile(double lo, double hi, std::vector<Segment> segs);

  static Profile constant(double v, double lo = 0, double hi = 1);
  /// one Custom segment per span between consecutive breakpoints
  static Profile from_function(const std::vector<double>& breaks,
                               std::function<double(double)> fn);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double length() const { return hi_ - lo_; }
  const std::vector<Segment>& segments() const { return segs_; }

  double operator()(double x) const;
  double integrate(double a, double b) const;
  double integrate() const { return integrate(lo_, hi_); }
  double first_moment(double a, double b, double ctr) const;
  double integrate_abs(double a, double b) const;
  double integrate_abs() const { return integrate_abs(lo_, hi_); }

  /// Adaptive two-level check that |f| is integrable; throws NotIntegrable
  /// when the refinements disagree or a segment exponent is out of range.
  void require_l1(double relTol = 1e-6, const std::string& what = "profile") const;
  /// Sampled sign on each segment interior: +1, -1, or 0 (identically zero).
  /// Throws if a segment changes sign in its interior.
  std::vector<int> segment_signs() const;
  bool positive() const;  // false for an empty (default-constructed) profile

  Profile pow(double e) const;
  Profile scaled(double k) const;
  Profile times(const Profile& o) const;
  Profile over(const Profile& o) const;
  Profile plus(const Profile& o) const;
  Profile shifted(double add) const;

  std::string to_json() const;
  static Profile from_json(const std::string& text);

private:
  double lo_ = 0, hi_ = 1;
  std::vector<Segment> segs_;
  const Segment& locate(double x) const;
  Profile combine(const Profile& o, int op) const;  // 0 mul, 1 div, 2 add
};

}  // namespace warpdn
