#pragma once

#include <vector>

#include "warpdn/sl_core.hpp"

namespace warpdn {

/// Atomic spectral measure of the left Weyl function: atoms at the
/// Dirichlet eigenvalues, weight w_k = 1 / ||s0(., alpha_k)||^2_{L2(r dx)},
/// plus the Herglotz offset constant.
struct SpectralMeasure {
  std::vector<double> atoms;
  std::vector<double> weights;
  double offset = 0;  // c in M(z) = c + sum w_k (1/(a_k - z) - a_k/(1 + a_k^2))
};

SpectralMeasure spectral_measure(const SturmLiouvilleProblem& prob, int kMax);

/// Evaluate the truncated Herglotz representation at z.
Complex herglotz_eval(const SpectralMeasure& mu, Complex z);

struct GrowthFit {
  double slope = 0;      // |M| ~ intercept + slope * (1 + |z|)
  double intercept = 0;
  double logSlope = 0;   // log|M| ~ const + logSlope * log(1 + |z|)
};

/// Least-squares growth of |M| on a grid of real z below the spectrum.
GrowthFit m_growth_check(const SturmLiouvilleProblem& prob,
                         const std::vector<double>& zGrid);

struct HadamardResult {
  Complex value{};
  double truncationBound = 0;  // estimated relative error of the log-product
};

/// Truncated Hadamard product Delta(0) * prod_{k<=kMax} (1 - z/alpha_k).
HadamardResult hadamard_product(const SturmLiouvilleProblem& prob, int kMax, Complex z);

enum class CharFn { Delta, D, E };

struct IndicatorSamples {
  std::vector<double> radii;
  std::vector<double> values;  // log|f(r e^{i theta})| / r, f(w) = char(w^2)
};

IndicatorSamples indicator_profile(const SturmLiouvilleProblem& prob, CharFn which,
                                   double theta, const std::vector<double>& radii);

struct CamResult {
  std::vector<double> t;
  std::vector<double> values;  // normalized |D_A Delta_B - D_B Delta_A| at z = -t^2
  double sup = 0;
};

/// Discrepancy of the shared-characteristic combination of two problems
/// along the imaginary spectral axis, normalized by the joint growth
/// e^{(A_A + A_B) t} so the result is scale-free.
CamResult cam_discrepancy(const SturmLiouvilleProblem& a,
                          const SturmLiouvilleProblem& b,
                          const std::vector<double>& tGrid);

struct WeylRatio {
  double raw = 0;           // alpha_K / K^2
  double extrapolated = 0;  // Richardson-improved limit estimate
};

WeylRatio weyl_law_ratio(const SturmLiouvilleProblem& prob, int kMax);

}  // namespace warpdn
