#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bcp/geometry.hpp"
#include "bcp/polyline.hpp"

namespace bcp {

struct BallTube {
    VectorPath center;
    Polyline radius;
};

/// Sections Ball(0, u - slope * t).
struct TruncatedCone {
    double u;
    double slope;
    int dim;
};

struct Band1DTube {
    Polyline lower;
    Polyline upper;
};

struct PolytopeTube {
    std::vector<Halfspace> halfspaces;
    std::optional<VectorPath> translation;
};

struct AnnulusTube {
    Point center;
    Polyline inner;
    Polyline outer;  // may be the +inf sentinel
};

/// Same region at every time. Carries no structure for exterior-ball
/// certification, so certificates for it have to be supplied by hand.
struct StaticRegionTube {
    Region region;
};

using DomainFamily = std::variant<BallTube, TruncatedCone, Band1DTube, PolytopeTube, AnnulusTube, StaticRegionTube>;

/// An open set G in (0,T) x R^m given by its time sections, plus the start
/// point of the Brownian motion (the origin unless stated otherwise).
class TimeSpaceDomain {
public:
    TimeSpaceDomain(DomainFamily family, double horizon, std::optional<Point> start = std::nullopt);

    double horizon() const noexcept { return horizon_; }
    int dim() const noexcept { return dim_; }
    const Point& start() const noexcept { return start_; }
    const DomainFamily& family() const noexcept { return family_; }
    std::string family_name() const;

    /// Section G_t, defined for every t in [0, T].
    Region section(double t) const;

    /// Time scaled by 1/T and space by 1/sqrt(T); horizon becomes 1.
    TimeSpaceDomain rescaled_to_unit_horizon() const;

private:
    DomainFamily family_;
    double horizon_;
    int dim_;
    Point start_;
};

/// Validating constructor; same as the TimeSpaceDomain constructor.
TimeSpaceDomain make_domain(DomainFamily family, double horizon, std::optional<Point> start = std::nullopt);

// --- certification --------------------------------------------------------------

enum class ProvenanceKind { analytic, estimated, user };

struct Provenance {
    ProvenanceKind kind = ProvenanceKind::analytic;
    std::uint64_t seed = 0;
    std::size_t n = 0;
    std::string note;
};

/// Class parameters (m, T, K, beta, gamma, v0) of a domain. beta = +inf
/// stands for "any beta".
struct DomainCertificate {
    int m = 1;
    double T = 1.0;
    double K = 0.0;
    double beta = std::numeric_limits<double>::infinity();
    double gamma = 0.0;
    double v0 = 0.0;
    Provenance K_provenance;
    Provenance beta_provenance;
    Provenance gamma_provenance;
    Provenance v0_provenance;
    std::vector<std::string> warnings;

    bool any_beta() const noexcept { return beta == std::numeric_limits<double>::infinity(); }
};

struct LipschitzOptions {
    /// Interior grid points for the first pass.
    std::size_t points = 256;
    /// Keep doubling the grid until the estimate moves by less than this.
    double rel_tol = 0.01;
    std::size_t max_points = 1u << 16;
    MetricOptions metric{};
};

struct LipschitzEstimate {
    double K;
    std::size_t grid_points;  // size of the final grid
    bool lower_estimate;      // true unless the family's rate is known exactly
};

/// max over adjacent grid pairs of rho_H(G_s, G_t) / (t - s) on a fixed grid.
double estimate_lipschitz(const TimeSpaceDomain& domain, std::span<const double> grid,
                          const MetricOptions& metric = {});

/// Grid refinement from `opts.points` uniform interior points until stable.
LipschitzEstimate estimate_lipschitz(const TimeSpaceDomain& domain, const LipschitzOptions& opts = {});

/// Exterior-ball radius; +inf means every radius works (convex sections).
/// Throws UnsupportedError for families without a structural certificate.
double exterior_ball_radius(const TimeSpaceDomain& domain);

/// Empty grids are replaced by defaults: t = T k/10 for k = 1..10, and ten
/// evenly spaced v up to min(0.1, inradius/4) at the thinnest section.
struct GammaOptions {
    std::vector<double> t_grid;
    std::vector<double> v_grid;
    std::size_t n = 100000;
    std::uint64_t seed = 1;
    int threads = 0;  // 0: default_thread_count()
    /// Closed form for one-dimensional bands when available.
    bool allow_exact = true;
    /// Accepted 3-standard-error half-width relative to the mean at the
    /// supremum cell.
    double max_relative_halfwidth = 0.5;
};

struct GammaCell {
    double t;
    double v;
    double mean;    // E[(1 + |W_t - x0|); 0 < rho(W_t, G_t^c) < v]
    double std_error;
    double ratio;   // (mean + 3 stderr) / v
};

struct GammaEstimate {
    double gamma;
    double v0;
    bool exact;
    std::size_t n;
    std::uint64_t seed;
    std::vector<GammaCell> cells;
};

GammaEstimate estimate_gamma(const TimeSpaceDomain& domain, const GammaOptions& opts);

/// E[(1 + |W_t - x0|); 0 < rho(W_t, (l,u)^c) < v] for W_t ~ N(x0, t), by
/// closed form.
double band_boundary_mass(double lower, double upper, double x0, double t, double v);

struct CertifyOptions {
    LipschitzOptions lipschitz{};
    GammaOptions gamma{};
};

/// Runs the three estimators and assembles the certificate.
DomainCertificate certify_domain(const TimeSpaceDomain& domain, const CertifyOptions& opts);

}  // namespace bcp
