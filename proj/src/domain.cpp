#include "bcp/domain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "bcp/closedform.hpp"
#include "bcp/error.hpp"
#include "bcp/parallel.hpp"
#include "bcp/rng.hpp"

namespace bcp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

int family_dim(const DomainFamily& f) {
    return std::visit(overloaded{
                          [](const BallTube& b) { return b.center.dim(); },
                          [](const TruncatedCone& c) { return c.dim; },
                          [](const Band1DTube&) { return 1; },
                          [](const PolytopeTube& p) {
                              return p.halfspaces.empty() ? 0 : static_cast<int>(p.halfspaces.front().normal.size());
                          },
                          [](const AnnulusTube& a) { return static_cast<int>(a.center.size()); },
                          [](const StaticRegionTube& s) { return s.region.dim(); },
                      },
                      f);
}

/// Knots of the finite polylines, plus 0 and T.
std::vector<double> check_points(double horizon, std::initializer_list<const Polyline*> paths) {
    std::vector<double> pts{0.0, horizon};
    for (const Polyline* p : paths)
        if (!p->is_infinite()) pts = merge_knots(pts, p->knots());
    pts.erase(std::remove_if(pts.begin(), pts.end(), [&](double t) { return t < 0.0 || t > horizon; }), pts.end());
    return pts;
}

void validate(const DomainFamily& family, double horizon) {
    std::visit(overloaded{
                   [&](const BallTube& b) {
                       if (b.radius.is_infinite()) throw InputError("ball tube radius must be finite");
                       for (double t : check_points(horizon, {&b.radius}))
                           if (!(b.radius(t) > 0.0)) throw InputError("ball tube radius must stay positive on [0,T]");
                   },
                   [&](const TruncatedCone& c) {
                       if (c.dim < 1) throw InputError("cone dimension must be >= 1");
                       if (!(c.u > 0.0) || !std::isfinite(c.u)) throw InputError("cone u must be positive");
                       if (!(c.slope >= 0.0) || !std::isfinite(c.slope)) throw InputError("cone slope must be >= 0");
                       if (!(c.u - c.slope * horizon > 0.0))
                           throw InputError("cone radius u - slope*t must stay positive on [0,T]");
                   },
                   [&](const Band1DTube& b) {
                       if (b.lower.is_infinite() && b.lower.values().front() > 0.0)
                           throw InputError("lower boundary cannot be +inf");
                       if (b.upper.is_infinite() && b.upper.values().front() < 0.0)
                           throw InputError("upper boundary cannot be -inf");
                       for (double t : check_points(horizon, {&b.lower, &b.upper}))
                           if (!(b.lower(t) < b.upper(t)))
                               throw InputError("band boundaries cross: lower must stay below upper on [0,T]");
                   },
                   [&](const PolytopeTube& p) {
                       const auto base = Region::polytope(p.halfspaces);
                       if (p.translation && p.translation->dim() != base.dim())
                           throw InputError("polytope translation has the wrong dimension");
                   },
                   [&](const AnnulusTube& a) {
                       if (a.inner.is_infinite()) throw InputError("annulus inner radius must be finite");
                       for (double t : check_points(horizon, {&a.inner, &a.outer})) {
                           if (!(a.inner(t) > 0.0)) throw InputError("annulus inner radius must stay positive");
                           if (!(a.inner(t) < a.outer(t))) throw InputError("annulus needs inner < outer on [0,T]");
                       }
                   },
                   [&](const StaticRegionTube& s) {
                       if (s.region.is_empty()) throw InputError("static region must not be empty");
                   },
               },
               family);
}

}  // namespace

TimeSpaceDomain::TimeSpaceDomain(DomainFamily family, double horizon, std::optional<Point> start)
    : family_(std::move(family)), horizon_(horizon), dim_(family_dim(family_)) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw InputError("horizon T must be positive and finite");
    if (dim_ < 1) throw InputError("domain dimension must be >= 1");
    validate(family_, horizon_);
    start_ = start ? *start : Point(static_cast<std::size_t>(dim_), 0.0);
    if (static_cast<int>(start_.size()) != dim_) throw InputError("start point has the wrong dimension");
    for (double v : start_)
        if (!std::isfinite(v)) throw InputError("start point must be finite");
    if (section(0.0).signed_distance(start_) < -1e-12) throw InputError("start point lies outside the closure of G_0");
}

TimeSpaceDomain make_domain(DomainFamily family, double horizon, std::optional<Point> start) {
    return TimeSpaceDomain(std::move(family), horizon, std::move(start));
}

std::string TimeSpaceDomain::family_name() const {
    return std::visit(overloaded{
                          [](const BallTube&) { return "ball_tube"; },
                          [](const TruncatedCone&) { return "truncated_cone"; },
                          [](const Band1DTube&) { return "band1d_tube"; },
                          [](const PolytopeTube&) { return "polytope_tube"; },
                          [](const AnnulusTube&) { return "annulus_tube"; },
                          [](const StaticRegionTube&) { return "static_region"; },
                      },
                      family_);
}

Region TimeSpaceDomain::section(double t) const {
    if (!(t >= 0.0 && t <= horizon_ * (1.0 + 1e-12)))
        throw PreconditionError("section time " + std::to_string(t) + " outside [0,T]");
    t = std::min(t, horizon_);
    return std::visit(overloaded{
                          [&](const BallTube& b) { return Region::ball(b.center(t), b.radius(t)); },
                          [&](const TruncatedCone& c) {
                              return Region::ball(Point(static_cast<std::size_t>(c.dim), 0.0), c.u - c.slope * t);
                          },
                          [&](const Band1DTube& b) { return Region::band(b.lower(t), b.upper(t)); },
                          [&](const PolytopeTube& p) {
                              auto r = Region::polytope(p.halfspaces);
                              if (!p.translation) return r;
                              return translate(r, (*p.translation)(t));
                          },
                          [&](const AnnulusTube& a) { return Region::annulus(a.center, a.inner(t), a.outer(t)); },
                          [&](const StaticRegionTube& s) { return s.region; },
                      },
                      family_);
}

TimeSpaceDomain TimeSpaceDomain::rescaled_to_unit_horizon() const {
    const double tf = 1.0 / horizon_;
    const double sf = 1.0 / std::sqrt(horizon_);
    DomainFamily f = std::visit(
        overloaded{
            [&](const BallTube& b) -> DomainFamily {
                return BallTube{b.center.rescaled(tf, sf), b.radius.rescaled(tf, sf)};
            },
            [&](const TruncatedCone& c) -> DomainFamily {
                return TruncatedCone{c.u * sf, c.slope * std::sqrt(horizon_), c.dim};
            },
            [&](const Band1DTube& b) -> DomainFamily {
                return Band1DTube{b.lower.rescaled(tf, sf), b.upper.rescaled(tf, sf)};
            },
            [&](const PolytopeTube& p) -> DomainFamily {
                auto hs = p.halfspaces;
                for (auto& h : hs) h.offset *= sf;
                std::optional<VectorPath> tr;
                if (p.translation) tr = p.translation->rescaled(tf, sf);
                return PolytopeTube{std::move(hs), std::move(tr)};
            },
            [&](const AnnulusTube& a) -> DomainFamily {
                Point c = a.center;
                for (auto& x : c) x *= sf;
                return AnnulusTube{std::move(c), a.inner.rescaled(tf, sf), a.outer.rescaled(tf, sf)};
            },
            [&](const StaticRegionTube& s) -> DomainFamily { return StaticRegionTube{scale(s.region, sf)}; },
        },
        family_);
    Point start = start_;
    for (auto& x : start) x *= sf;
    return TimeSpaceDomain(std::move(f), 1.0, std::move(start));
}

// --- Lipschitz rate --------------------------------------------------------------

namespace {

double section_distance(const TimeSpaceDomain& d, double s, double t, const MetricOptions& metric) {
    if (std::holds_alternative<StaticRegionTube>(d.family())) return 0.0;
    if (const auto* p = std::get_if<PolytopeTube>(&d.family())) {
        // A translated copy of a convex body is at rho_H distance |shift|.
        if (!p->translation) return 0.0;
        return distance((*p->translation)(s), (*p->translation)(t));
    }
    return rho_H(d.section(s), d.section(t), metric).value;
}

std::vector<double> uniform_interior_grid(double horizon, std::size_t n) {
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = horizon * static_cast<double>(i + 1) / static_cast<double>(n + 1);
    return g;
}

}  // namespace

double estimate_lipschitz(const TimeSpaceDomain& domain, std::span<const double> grid, const MetricOptions& metric) {
    if (grid.size() < 2) throw InputError("Lipschitz grid needs at least 2 points");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] < 0.0 || grid[i] > domain.horizon()) throw InputError("Lipschitz grid must lie in [0,T]");
        if (i > 0 && !(grid[i] > grid[i - 1])) throw InputError("Lipschitz grid must be strictly increasing");
    }
    double k = 0.0;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
        k = std::max(k, section_distance(domain, grid[i], grid[i + 1], metric) / (grid[i + 1] - grid[i]));
    return k;
}

LipschitzEstimate estimate_lipschitz(const TimeSpaceDomain& domain, const LipschitzOptions& opts) {
    std::size_t n = std::max<std::size_t>(opts.points, 2);
    double k = estimate_lipschitz(domain, uniform_interior_grid(domain.horizon(), n), opts.metric);
    while (n * 2 <= opts.max_points) {
        const double finer = estimate_lipschitz(domain, uniform_interior_grid(domain.horizon(), n * 2), opts.metric);
        n *= 2;
        const bool stable = std::abs(finer - k) <= opts.rel_tol * std::max(k, finer);
        k = finer;
        if (stable) break;
    }
    return {k, n, true};
}

// --- exterior ball -----------------------------------------------------------------

double exterior_ball_radius(const TimeSpaceDomain& domain) {
    return std::visit(overloaded{
                          [](const AnnulusTube& a) { return a.inner.min_value(); },
                          [](const StaticRegionTube&) -> double {
                              throw UnsupportedError(
                                  "no structural exterior-ball certificate for a static region; needs manual "
                                  "certificate (pass certificate.beta)");
                          },
                          [](const auto&) { return kInf; },
                      },
                      domain.family());
}

// --- boundary mass -----------------------------------------------------------------

namespace {

/// Integral of (1 + |y|) phi_sigma(y) over (a, b), a <= b, infinite ends allowed.
double weighted_normal_mass(double a, double b, double sigma) {
    if (!(a < b)) return 0.0;
    auto pdf = [&](double y) { return std::isinf(y) ? 0.0 : std::exp(-0.5 * (y / sigma) * (y / sigma)); };
    const double k = sigma / std::sqrt(2.0 * std::numbers::pi);
    const double mass = normal_cdf(b / sigma) - normal_cdf(a / sigma);
    // int |y| phi_sigma over (a,b), split at 0.
    double abs_moment = 0.0;
    if (b > 0.0) abs_moment += k * (pdf(std::max(a, 0.0)) - pdf(b));
    if (a < 0.0) abs_moment += k * (pdf(std::min(b, 0.0)) - pdf(a));
    return mass + abs_moment;
}

}  // namespace

double band_boundary_mass(double lower, double upper, double x0, double t, double v) {
    if (!(t > 0.0) || !(v > 0.0)) throw PreconditionError("band_boundary_mass needs t > 0 and v > 0");
    const double sigma = std::sqrt(t);
    const double a = lower - x0;
    const double b = upper - x0;
    if (std::isfinite(a) && std::isfinite(b) && b - a <= 2.0 * v) return weighted_normal_mass(a, b, sigma);
    double total = 0.0;
    if (std::isfinite(a)) total += weighted_normal_mass(a, a + v, sigma);
    if (std::isfinite(b)) total += weighted_normal_mass(b - v, b, sigma);
    return total;
}

// --- gamma -------------------------------------------------------------------------

namespace {

struct GammaGrids {
    std::vector<double> t;
    std::vector<double> v;
};

GammaGrids resolve_grids(const TimeSpaceDomain& domain, const GammaOptions& opts) {
    GammaGrids g{opts.t_grid, opts.v_grid};
    if (g.t.empty())
        for (int k = 1; k <= 10; ++k) g.t.push_back(domain.horizon() * k / 10.0);
    for (std::size_t i = 0; i < g.t.size(); ++i) {
        if (!(g.t[i] > 0.0 && g.t[i] <= domain.horizon())) throw InputError("gamma t grid must lie in (0,T]");
        if (i > 0 && !(g.t[i] > g.t[i - 1])) throw InputError("gamma t grid must be strictly increasing");
    }
    double thinnest = kInf;
    for (double t : g.t) thinnest = std::min(thinnest, inradius(domain.section(t)));
    if (g.v.empty()) {
        const double vmax = std::min(0.1, thinnest / 4.0);
        for (int k = 1; k <= 10; ++k) g.v.push_back(vmax * k / 10.0);
    }
    for (std::size_t i = 0; i < g.v.size(); ++i) {
        if (!(g.v[i] > 0.0)) throw InputError("gamma v grid must be positive");
        if (i > 0 && !(g.v[i] > g.v[i - 1])) throw InputError("gamma v grid must be strictly increasing");
    }
    if (!(g.v.back() < thinnest))
        throw PreconditionError("gamma v grid must stay below the thinnest section's inradius " +
                                std::to_string(thinnest));
    return g;
}

double exact_v0(const std::vector<GammaCell>&, const GammaGrids& g) { return g.v.back(); }

/// Largest v such that, at every t, mean/v at every v' <= v stays within
/// three joint standard errors of mean/v at the smallest v.
double linear_v0(const std::vector<GammaCell>& cells, const GammaGrids& g) {
    const std::size_t nv = g.v.size();
    double v0 = g.v.front();
    for (std::size_t j = 1; j < nv; ++j) {
        bool ok = true;
        for (std::size_t i = 0; i < g.t.size() && ok; ++i) {
            const auto& base = cells[i * nv];
            const auto& c = cells[i * nv + j];
            const double r0 = base.mean / base.v;
            const double r = c.mean / c.v;
            const double se = std::hypot(base.std_error / base.v, c.std_error / c.v);
            ok = std::abs(r - r0) <= 3.0 * se;
        }
        if (!ok) break;
        v0 = g.v[j];
    }
    return v0;
}

}  // namespace

GammaEstimate estimate_gamma(const TimeSpaceDomain& domain, const GammaOptions& opts) {
    const GammaGrids g = resolve_grids(domain, opts);
    const std::size_t nt = g.t.size();
    const std::size_t nv = g.v.size();
    GammaEstimate out{0.0, 0.0, false, opts.n, opts.seed, {}};
    out.cells.reserve(nt * nv);

    if (const auto* band = std::get_if<Band1DTube>(&domain.family()); band && opts.allow_exact) {
        out.exact = true;
        out.n = 0;
        for (double t : g.t) {
            for (double v : g.v) {
                const double mean = band_boundary_mass(band->lower(t), band->upper(t), domain.start()[0], t, v);
                out.cells.push_back({t, v, mean, 0.0, mean / v});
            }
        }
        for (const auto& c : out.cells) out.gamma = std::max(out.gamma, c.ratio);
        out.v0 = exact_v0(out.cells, g);
        return out;
    }

    if (opts.n < 10000) throw SampleSizeError("estimate_gamma needs n >= 10000", 10000);
    const int threads = opts.threads > 0 ? opts.threads : default_thread_count();
    const int m = domain.dim();
    const Point& x0 = domain.start();
    std::vector<Region> sections;
    for (double t : g.t) sections.push_back(domain.section(t));

    // Per block: sums of w and w^2 for every (t, v) cell.
    auto blocks = run_blocks(opts.n, threads, [&](std::size_t begin, std::size_t end) {
        std::vector<double> acc(2 * nt * nv, 0.0);
        Point w(static_cast<std::size_t>(m));
        for (std::size_t i = 0; i < nt; ++i) {
            const double sd_t = std::sqrt(g.t[i]);
            for (std::size_t path = begin; path < end; ++path) {
                rng::PathRandom r(opts.seed, path, rng::lane_id(rng::Lane::Gamma, static_cast<std::uint32_t>(i)));
                double r2 = 0.0;
                for (int k = 0; k < m; ++k) {
                    const double z = sd_t * r.normal();
                    w[k] = x0[k] + z;
                    r2 += z * z;
                }
                const double rho = sections[i].signed_distance(w);
                if (!(rho > 0.0) || !(rho < g.v.back())) continue;
                const double weight = 1.0 + std::sqrt(r2);
                for (std::size_t j = 0; j < nv; ++j) {
                    if (rho < g.v[j]) {
                        acc[2 * (i * nv + j)] += weight;
                        acc[2 * (i * nv + j) + 1] += weight * weight;
                    }
                }
            }
        }
        return acc;
    });

    const double n = static_cast<double>(opts.n);
    std::vector<double> column(blocks.size());
    std::size_t sup_cell = 0;
    for (std::size_t c = 0; c < nt * nv; ++c) {
        for (std::size_t b = 0; b < blocks.size(); ++b) column[b] = blocks[b][2 * c];
        const double mean = pairwise_sum(column) / n;
        for (std::size_t b = 0; b < blocks.size(); ++b) column[b] = blocks[b][2 * c + 1];
        const double second = pairwise_sum(column) / n;
        const double se = std::sqrt(std::max(0.0, second - mean * mean) / (n - 1.0));
        const double v = g.v[c % nv];
        out.cells.push_back({g.t[c / nv], v, mean, se, (mean + 3.0 * se) / v});
        if (out.cells.back().ratio > out.cells[sup_cell].ratio) sup_cell = c;
    }
    const auto& sup = out.cells[sup_cell];
    out.gamma = sup.ratio;
    if (sup.mean > 0.0) {
        const double rel = 3.0 * sup.std_error / sup.mean;
        if (rel > opts.max_relative_halfwidth) {
            const double factor = (rel / opts.max_relative_halfwidth) * (rel / opts.max_relative_halfwidth);
            const auto required = static_cast<std::size_t>(std::ceil(n * factor));
            throw SampleSizeError("estimate_gamma: n = " + std::to_string(opts.n) +
                                      " is too small for the requested confidence; need n >= " +
                                      std::to_string(required),
                                  required);
        }
    }
    out.v0 = linear_v0(out.cells, g);
    return out;
}

// --- certificate -------------------------------------------------------------------

DomainCertificate certify_domain(const TimeSpaceDomain& domain, const CertifyOptions& opts) {
    DomainCertificate cert;
    cert.m = domain.dim();
    cert.T = domain.horizon();

    const auto k = estimate_lipschitz(domain, opts.lipschitz);
    cert.K = k.K;
    cert.K_provenance = {ProvenanceKind::estimated, 0, k.grid_points,
                         "grid estimate (lower bound on the true rate)"};
    if (cert.K == 0.0) cert.warnings.push_back("K = 0: the gap constant needs K > 0");

    cert.beta = exterior_ball_radius(domain);
    cert.beta_provenance = {ProvenanceKind::analytic, 0, 0,
                            cert.any_beta() ? "convex sections: any beta" : "inner radius of the annulus"};

    const auto g = estimate_gamma(domain, opts.gamma);
    cert.gamma = g.gamma;
    cert.v0 = g.v0;
    if (g.exact) {
        cert.gamma_provenance = {ProvenanceKind::analytic, 0, 0, "closed-form band integral"};
    } else {
        cert.gamma_provenance = {ProvenanceKind::estimated, g.seed, g.n, "Monte Carlo, inflated by 3 standard errors"};
    }
    cert.v0_provenance = cert.gamma_provenance;
    cert.v0_provenance.note = "largest grid v, uniform in t";
    return cert;
}

}  // namespace bcp
