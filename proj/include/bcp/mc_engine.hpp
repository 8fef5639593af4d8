#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bcp/domain.hpp"
#include "bcp/estimate.hpp"

namespace bcp {

struct SimConfig {
    std::size_t n_paths = 100000;
    std::size_t n_steps = 1000;  // uniform grid on [0, T]
    std::uint64_t seed = 1;
    /// Per-step Bernoulli thinning with the tangent half-space bridge factor
    /// exp(-2 d_i d_{i+1} / dt).
    bool bridge_correction = true;
    /// Overrides the domain's start point.
    std::optional<Point> start;
    int threads = 0;  // 0: default_thread_count()
};

/// Throws InputError unless n_paths >= 1 and n_steps >= 2.
void validate(const SimConfig& cfg);

/// P(G): fraction of paths that stay inside every section on the grid.
MCEstimate estimate_survival(const TimeSpaceDomain& domain, const SimConfig& cfg);

/// Several domains of equal dimension and horizon on the same noise.
std::vector<MCEstimate> estimate_survival_batch(const std::vector<TimeSpaceDomain>& domains, const SimConfig& cfg);

struct GapEstimate {
    double eps = 0.0;
    MCEstimate p_inner;
    MCEstimate p_outer;
    double gap = 0.0;
    double joint_stderr = 0.0;
    std::size_t gap_count = 0;  // paths surviving G^(eps) but not G
    std::string warning;
};

/// D_eps(G) = P(G^(eps)) - P(G), both on the same paths and thinning
/// uniforms, so every path surviving G survives G^(eps) and the gap is
/// nonnegative exactly. `eps_limit` (typically beta_eff/2) only adds a
/// warning when exceeded.
GapEstimate estimate_gap(const TimeSpaceDomain& domain, double eps, const SimConfig& cfg,
                         std::optional<double> eps_limit = std::nullopt);

/// All epsilons from one simulation.
std::vector<GapEstimate> estimate_gaps(const TimeSpaceDomain& domain, const std::vector<double>& eps,
                                       const SimConfig& cfg, std::optional<double> eps_limit = std::nullopt);

struct HittingHistogram {
    std::vector<double> edges;  // bins + 1 edges on [0, T]; bins are (lo, hi]
    std::vector<std::size_t> counts;
    std::vector<double> mass;
    std::vector<double> std_error;
    std::size_t n = 0;
    std::size_t survivors = 0;
    double survivor_mass = 0.0;
    double step_width = 0.0;
    std::string note;
};

/// Exit times recorded at the right end of the offending grid step.
HittingHistogram hitting_time_histogram(const TimeSpaceDomain& domain, int bins, const SimConfig& cfg);

/// P(tau > t | W_t = z) from Brownian bridges pinned at the start and at z.
/// cfg.n_steps is the grid size on [0, t].
MCEstimate bridge_conditional_survival(const TimeSpaceDomain& domain, double t, const Point& z, const SimConfig& cfg);

/// P(a Brownian motion from the origin leaves the ball of radius r - K s
/// before time h); cfg.n_steps is the grid size on [0, h].
MCEstimate quick_exit_probability(int m, double r, double K, double h, const SimConfig& cfg);

/// P(|x + W_s| > r - K s for all s <= t) from a start at distance x_norm
/// from the origin; the ball vanishes at s = r/K.
MCEstimate cone_avoidance_survival(int m, double x_norm, double r, double K, double t, const SimConfig& cfg);

struct RadialDominationResult {
    double rate = 0.0;
    std::size_t violations = 0;
    std::size_t n = 0;
    double step = 0.0;
    double t0 = 0.0;  // stopping time of the comparison
    double a = 0.0;   // stopping level
    bool late_regime = false;
};

/// Euler co-simulation of the radial part S of an m-dimensional Brownian
/// bridge from x to y over [0, t] and of the reference process
///   Sbar_s = |x| + ((|y| - a)/(t - t0) + (m-1)/(2a)) s + Wtilde_s
/// driven by the same noise dWtilde = xi . dW, xi = B/|B|. Reports the
/// fraction of paths with Sbar < S at some grid point before min(t0, eta_a(S)).
/// cfg.n_steps is the grid size on [0, t].
RadialDominationResult radial_domination_rate(const Point& x, const Point& y, double t, double beta, double K,
                                              const SimConfig& cfg);

}  // namespace bcp
