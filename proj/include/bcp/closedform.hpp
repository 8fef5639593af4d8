#pragma once

#include <cstdint>

#include "bcp/estimate.hpp"
#include "bcp/polyline.hpp"

namespace bcp {

/// Standard normal distribution function, Phi(x) = erfc(-x / sqrt 2) / 2.
/// The C library erfc is accurate to a few ulp over the whole line, which
/// keeps the absolute error far below 1e-12; evaluating through erfc rather
/// than 1 - erf/2 also keeps full relative accuracy in the lower tail.
double normal_cdf(double x);

/// log Phi(x), finite for every finite x (asymptotic series below -37).
double log_normal_cdf(double x);

/// P(sup_{0<=s<=t} (W_s - c s) < eps)
///   = Phi(c sqrt t + eps / sqrt t) - exp(-2 c eps) Phi(c sqrt t - eps / sqrt t).
/// The second product is formed in log space so large negative drifts do
/// not overflow.
double linear_noncrossing_exact(double t, double c, double eps);

/// First-passage density of W_s + mu s to the level a > 0 at time s
/// (Kendall): a / (sqrt(2 pi) s^{3/2}) exp(-(a - mu s)^2 / (2 s)).
double first_passage_density_line(double s, double a, double mu);

enum class BarrierSide { upper, lower };

/// Probability that a Brownian bridge from x1 to x2 over time dt touches the
/// straight segment from g1 to g2. Infinite barriers are never touched; an
/// endpoint on the wrong side counts as a certain crossing.
double bridge_segment_crossing(double x1, double x2, double g1, double g2, double dt,
                               BarrierSide side = BarrierSide::upper);

struct PiecewiseLinearOptions {
    std::size_t n = 100000;
    std::uint64_t seed = 1;
    int threads = 0;
    /// Midpoint refinement rounds allowed for two-sided bands. Each round
    /// halves every segment; refinement stops once the estimate moves by
    /// less than one standard error.
    int max_refinements = 6;
};

/// P(lower(t) < W_t < upper(t) for t in (0,T)) for piecewise-linear
/// barriers. W is sampled exactly at the merged knot times and each segment
/// contributes the product of its two one-sided bridge non-crossing factors.
/// Either barrier may be the infinite sentinel.
MCEstimate piecewise_linear_bcp_1d(const Polyline& lower, const Polyline& upper,
                                   const PiecewiseLinearOptions& opts = {});

}  // namespace bcp
