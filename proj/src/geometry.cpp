#include "bcp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "bcp/error.hpp"
#include "polytope_ops.hpp"

namespace bcp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

void require_finite(std::span<const double> x, const char* what) {
    for (double v : x)
        if (!std::isfinite(v)) throw InputError(std::string(what) + " must be finite");
}

void require_dim(const Region& r, std::span<const double> x) {
    if (static_cast<int>(x.size()) != r.dim())
        throw InputError("point has dimension " + std::to_string(x.size()) + ", region has dimension " +
                         std::to_string(r.dim()));
}

/// a - b with inf - inf taken as 0 (coincident infinite ends).
double end_gap(double a, double b) { return a == b ? 0.0 : a - b; }

// --- boundary sampling -------------------------------------------------------

void sphere_samples(std::span<const double> center, double radius, double pitch,
                    const std::function<void(std::span<const double>)>& fn) {
    const auto m = center.size();
    Point q(center.begin(), center.end());
    if (m == 1) {
        q[0] = center[0] - radius;
        fn(q);
        q[0] = center[0] + radius;
        fn(q);
        return;
    }
    if (m == 2) {
        const auto n = std::max<long>(8, static_cast<long>(std::ceil(2.0 * std::numbers::pi * radius / pitch)));
        for (long i = 0; i < n; ++i) {
            const double th = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
            q[0] = center[0] + radius * std::cos(th);
            q[1] = center[1] + radius * std::sin(th);
            fn(q);
        }
        return;
    }
    if (m == 3) {
        const double area = 4.0 * std::numbers::pi * radius * radius;
        const auto n = std::max<long>(16, static_cast<long>(std::ceil(area / (pitch * pitch))));
        const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
        for (long i = 0; i < n; ++i) {
            const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(n);
            const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double phi = golden * static_cast<double>(i);
            q[0] = center[0] + radius * rho * std::cos(phi);
            q[1] = center[1] + radius * rho * std::sin(phi);
            q[2] = center[2] + radius * z;
            fn(q);
        }
        return;
    }
    throw UnsupportedError("sphere sampling is implemented for dimensions 1 to 3");
}

/// Unit directions, roughly `count` of them.
void direction_samples(int m, long count, const std::function<void(std::span<const double>)>& fn) {
    const Point origin(static_cast<std::size_t>(m), 0.0);
    if (m == 1) {
        sphere_samples(origin, 1.0, 1.0, fn);
        return;
    }
    const double pitch = m == 2 ? 2.0 * std::numbers::pi / static_cast<double>(count)
                                : std::sqrt(4.0 * std::numbers::pi / static_cast<double>(count));
    sphere_samples(origin, 1.0, pitch, fn);
}

/// Boundary of a star-shaped (convex) region by bisection along rays from an
/// interior point.
void ray_cast_samples(const Region& region, std::span<const double> center, double depth, double pitch,
                      const std::function<void(std::span<const double>)>& fn) {
    const int m = region.dim();
    Point q(center.begin(), center.end());
    auto hit = [&](std::span<const double> u) {
        double lo = 0.0;
        double hi = std::max(depth, 1e-6);
        auto at = [&](double s) {
            for (int i = 0; i < m; ++i) q[i] = center[i] + s * u[i];
            return region.signed_distance(q);
        };
        int guard = 0;
        while (at(hi) > 0.0) {
            lo = hi;
            hi *= 2.0;
            if (++guard > 200) throw UnsupportedError("ray casting needs a bounded region");
        }
        for (int it = 0; it < 80 && hi - lo > 1e-14 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            (at(mid) > 0.0 ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    };
    double reach = 0.0;
    direction_samples(m, m == 2 ? 64 : 256, [&](std::span<const double> u) { reach = std::max(reach, hit(u)); });
    const double stretch = reach / std::max(depth, 1e-12);
    const double arc = pitch / (reach * stretch);
    const long count = m == 1 ? 2
                       : m == 2 ? static_cast<long>(std::ceil(2.0 * std::numbers::pi / arc))
                                : static_cast<long>(std::ceil(4.0 * std::numbers::pi / (arc * arc)));
    direction_samples(m, std::max<long>(count, 8), [&](std::span<const double> u) {
        const double s = hit(u);
        for (int i = 0; i < m; ++i) q[i] = center[i] + s * u[i];
        fn(q);
    });
}

/// Replace raw shift wrappers by exact shapes when one exists.
Region canonical(const Region& r) {
    if (const auto* s = std::get_if<Shifted>(&r.shape())) return dilate(*s->base, s->shift);
    return r;
}

std::vector<Point> hole_points(const Region& r) {
    if (const auto* a = std::get_if<Annulus>(&r.shape())) return {a->center};
    if (const auto* s = std::get_if<Shifted>(&r.shape())) return hole_points(*s->base);
    return {};
}

/// sup over X (or over X^c when `complement`) of rho(., Y) (or rho(., Y^c)).
/// Candidates: X's boundary plus the interior maximisers of the integrand.
double directed_sampled(const Region& x, const Region& y, bool complement, double pitch) {
    double best = 0.0;
    auto score = [&](std::span<const double> p) {
        const double sd = y.signed_distance(p);
        best = std::max(best, complement ? std::max(0.0, sd) : std::max(0.0, -sd));
    };
    for_each_boundary_sample(x, pitch, score);
    if (complement) {
        for (const auto& p : deepest_points(y, pitch))
            if (!x.contains(p)) score(p);
    } else {
        for (const auto& p : hole_points(y))
            if (x.contains(p)) score(p);
    }
    return best;
}

// --- analytic pairs ----------------------------------------------------------

/// Directed distances for intervals (also radial intervals of concentric
/// annuli): sup_{x in A} rho(x, B) and sup_{x in A^c} rho(x, B^c).
double interval_directed(double a1, double b1, double a2, double b2) {
    return std::max({0.0, end_gap(a2, a1), end_gap(b1, b2)});
}

double interval_directed_complement(double a1, double b1, double a2, double b2) {
    // rho(x, B^c) = max(0, min(x - a2, b2 - x)) over x <= a1 or x >= b1.
    auto tent = [&](double x) { return std::max(0.0, std::min(x - a2, b2 - x)); };
    if (b2 == kInf && b1 < kInf) return kInf;
    if (a2 == -kInf && a1 > -kInf) return kInf;
    double best = 0.0;
    if (std::isfinite(a1)) best = std::max(best, tent(a1));
    if (std::isfinite(b1)) best = std::max(best, tent(b1));
    const double mid = 0.5 * (a2 + b2);
    if (std::isfinite(mid) && (mid <= a1 || mid >= b1)) best = std::max(best, tent(mid));
    return best;
}

double ball_directed(const Ball& a, const Ball& b) {
    return std::max(0.0, distance(a.center, b.center) + a.radius - b.radius);
}

double ball_directed_complement(const Ball& a, const Ball& b) {
    const double d = distance(a.center, b.center);
    return std::max(0.0, b.radius - std::max(0.0, a.radius - d));
}

struct PairValue {
    double sets;
    double complements;
};

std::optional<PairValue> analytic_pair(const Region& a, const Region& b) {
    if (const auto* ba = std::get_if<Ball>(&a.shape())) {
        if (const auto* bb = std::get_if<Ball>(&b.shape())) {
            return PairValue{std::max(ball_directed(*ba, *bb), ball_directed(*bb, *ba)),
                             std::max(ball_directed_complement(*ba, *bb), ball_directed_complement(*bb, *ba))};
        }
    }
    auto intervals = [](double a1, double b1, double a2, double b2) {
        return PairValue{std::max(interval_directed(a1, b1, a2, b2), interval_directed(a2, b2, a1, b1)),
                         std::max(interval_directed_complement(a1, b1, a2, b2),
                                  interval_directed_complement(a2, b2, a1, b1))};
    };
    if (const auto* ia = std::get_if<Band1D>(&a.shape())) {
        if (const auto* ib = std::get_if<Band1D>(&b.shape()))
            return intervals(ia->lower, ia->upper, ib->lower, ib->upper);
    }
    if (const auto* aa = std::get_if<Annulus>(&a.shape())) {
        if (const auto* ab = std::get_if<Annulus>(&b.shape()); ab && aa->center == ab->center)
            return intervals(aa->inner, aa->outer, ab->inner, ab->outer);
    }
    return std::nullopt;
}

std::optional<PairValue> empty_pair(const Region& a, const Region& b) {
    if (a.is_empty() && b.is_empty()) return PairValue{0.0, 0.0};
    if (a.is_empty() || b.is_empty()) return PairValue{kInf, kInf};
    return std::nullopt;
}

void require_same_dim(const Region& a, const Region& b) {
    if (a.dim() != b.dim()) throw InputError("regions have different dimensions");
}

}  // namespace

// --- construction -------------------------------------------------------------

Region Region::ball(Point center, double radius) {
    if (center.empty()) throw InputError("ball centre must have dimension >= 1");
    require_finite(center, "ball centre");
    if (!(radius > 0.0) || !std::isfinite(radius)) throw InputError("ball radius must be positive and finite");
    const int m = static_cast<int>(center.size());
    return Region(Ball{std::move(center), radius}, m);
}

Region Region::polytope(std::vector<Halfspace> halfspaces) {
    if (halfspaces.empty()) throw InputError("polytope needs at least one halfspace");
    const std::size_t m = halfspaces.front().normal.size();
    if (m == 0) throw InputError("polytope normals must have dimension >= 1");
    for (const auto& h : halfspaces) {
        if (h.normal.size() != m) throw InputError("polytope normals have inconsistent dimensions");
        require_finite(h.normal, "polytope normal");
        if (std::abs(norm(h.normal) - 1.0) > 1e-9) throw InputError("polytope normals must have unit length");
        if (!std::isfinite(h.offset)) throw InputError("polytope offsets must be finite");
    }
    return Region(ConvexPolytope{std::move(halfspaces)}, static_cast<int>(m));
}

Region Region::band(double lower, double upper) {
    if (std::isnan(lower) || std::isnan(upper) || !(lower < upper) || lower == kInf || upper == -kInf)
        throw InputError("band needs lower < upper");
    return Region(Band1D{lower, upper}, 1);
}

Region Region::annulus(Point center, double inner, double outer) {
    if (center.empty()) throw InputError("annulus centre must have dimension >= 1");
    require_finite(center, "annulus centre");
    if (!(inner > 0.0) || !(inner < outer) || !std::isfinite(inner))
        throw InputError("annulus needs 0 < inner < outer");
    const int m = static_cast<int>(center.size());
    return Region(Annulus{std::move(center), inner, outer}, m);
}

Region Region::shifted(Region base, double shift) {
    if (!std::isfinite(shift)) throw InputError("shift must be finite");
    const int m = base.dim();
    return Region(Shifted{std::make_shared<const Region>(std::move(base)), shift}, m);
}

Region Region::empty(int dim) {
    if (dim < 1) throw InputError("empty region needs dimension >= 1");
    return Region(EmptyRegion{}, dim);
}

// --- queries ------------------------------------------------------------------

double Region::signed_distance(std::span<const double> x) const {
    require_dim(*this, x);
    return std::visit(
        overloaded{
            [&](const Ball& b) { return b.radius - distance(x, b.center); },
            [&](const ConvexPolytope& p) { return detail::polytope_signed_distance(p, dim_, x); },
            [&](const Band1D& b) { return std::min(x[0] - b.lower, b.upper - x[0]); },
            [&](const Annulus& a) {
                const double d = distance(x, a.center);
                return std::min(d - a.inner, a.outer - d);
            },
            [&](const Shifted& s) {
                if (s.base->is_empty()) return kEmptySignedDistance;
                return s.base->signed_distance(x) + s.shift;
            },
            [&](const EmptyRegion&) { return kEmptySignedDistance; },
        },
        shape_);
}

bool Region::is_convex() const {
    return std::visit(overloaded{
                          [](const Annulus&) { return false; },
                          [](const Shifted& s) { return s.base->is_convex(); },
                          [](const auto&) { return true; },
                      },
                      shape_);
}

bool Region::is_bounded() const {
    return std::visit(overloaded{
                          [](const Ball&) { return true; },
                          [&](const ConvexPolytope& p) { return detail::polytope_bounded(p, dim_); },
                          [](const Band1D& b) { return std::isfinite(b.lower) && std::isfinite(b.upper); },
                          [](const Annulus& a) { return std::isfinite(a.outer); },
                          [](const Shifted& s) { return s.base->is_bounded(); },
                          [](const EmptyRegion&) { return true; },
                      },
                      shape_);
}

Region dilate(const Region& region, double v) {
    if (!std::isfinite(v)) throw InputError("dilation amount must be finite");
    if (v == 0.0) return region;
    const int m = region.dim();
    return std::visit(
        overloaded{
            [&](const Ball& b) { return b.radius + v > 0.0 ? Region::ball(b.center, b.radius + v) : Region::empty(m); },
            [&](const Band1D& b) {
                const double lo = b.lower - v;
                const double hi = b.upper + v;
                return lo < hi ? Region::band(lo, hi) : Region::empty(1);
            },
            [&](const Annulus& a) {
                const double inner = a.inner - v;
                const double outer = a.outer + v;
                if (!(outer > 0.0) || inner >= outer) return Region::empty(m);
                if (inner < 0.0) return Region::ball(a.center, outer);
                if (inner == 0.0) return Region::shifted(region, v);  // punctured ball
                return Region::annulus(a.center, inner, outer);
            },
            [&](const ConvexPolytope& p) {
                if (v > 0.0) return Region::shifted(region, v);
                std::vector<Halfspace> hs = p.halfspaces;
                for (auto& h : hs) h.offset += v;
                if (auto cb = detail::chebyshev_ball(ConvexPolytope{hs}, m); cb && cb->radius <= 0.0)
                    return Region::empty(m);
                return Region::polytope(std::move(hs));
            },
            [&](const Shifted& s) { return dilate(*s.base, s.shift + v); },
            [&](const EmptyRegion&) { return Region::empty(m); },
        },
        region.shape());
}

Region scale(const Region& region, double f) {
    if (!(f > 0.0) || !std::isfinite(f)) throw InputError("scale factor must be positive and finite");
    auto mul = [f](Point p) {
        for (auto& x : p) x *= f;
        return p;
    };
    return std::visit(overloaded{
                          [&](const Ball& b) { return Region::ball(mul(b.center), b.radius * f); },
                          [&](const ConvexPolytope& p) {
                              auto hs = p.halfspaces;
                              for (auto& h : hs) h.offset *= f;
                              return Region::polytope(std::move(hs));
                          },
                          [&](const Band1D& b) { return Region::band(b.lower * f, b.upper * f); },
                          [&](const Annulus& a) { return Region::annulus(mul(a.center), a.inner * f, a.outer * f); },
                          [&](const Shifted& s) { return Region::shifted(scale(*s.base, f), s.shift * f); },
                          [&](const EmptyRegion&) { return region; },
                      },
                      region.shape());
}

Region translate(const Region& region, std::span<const double> shift) {
    if (static_cast<int>(shift.size()) != region.dim()) throw InputError("translation has the wrong dimension");
    require_finite(shift, "translation");
    auto add = [&](Point p) {
        for (std::size_t i = 0; i < p.size(); ++i) p[i] += shift[i];
        return p;
    };
    return std::visit(overloaded{
                          [&](const Ball& b) { return Region::ball(add(b.center), b.radius); },
                          [&](const ConvexPolytope& p) {
                              auto hs = p.halfspaces;
                              for (auto& h : hs)
                                  for (std::size_t i = 0; i < shift.size(); ++i) h.offset += h.normal[i] * shift[i];
                              return Region::polytope(std::move(hs));
                          },
                          [&](const Band1D& b) { return Region::band(b.lower + shift[0], b.upper + shift[0]); },
                          [&](const Annulus& a) { return Region::annulus(add(a.center), a.inner, a.outer); },
                          [&](const Shifted& s) { return Region::shifted(translate(*s.base, shift), s.shift); },
                          [&](const EmptyRegion&) { return region; },
                      },
                      region.shape());
}

// --- sampling -----------------------------------------------------------------

void for_each_boundary_sample(const Region& region, double pitch,
                              const std::function<void(std::span<const double>)>& fn) {
    if (!(pitch > 0.0)) throw InputError("sampling pitch must be positive");
    std::visit(overloaded{
                   [&](const Ball& b) { sphere_samples(b.center, b.radius, pitch, fn); },
                   [&](const ConvexPolytope& p) {
                       detail::for_each_polytope_boundary_sample(p, region.dim(), pitch, fn);
                   },
                   [&](const Band1D& b) {
                       if (!region.is_bounded()) throw UnsupportedError("boundary sampling needs a bounded band");
                       const double lo[1] = {b.lower};
                       const double hi[1] = {b.upper};
                       fn(lo);
                       fn(hi);
                   },
                   [&](const Annulus& a) {
                       if (!std::isfinite(a.outer))
                           throw UnsupportedError("boundary sampling needs a finite outer radius");
                       sphere_samples(a.center, a.inner, pitch, fn);
                       sphere_samples(a.center, a.outer, pitch, fn);
                   },
                   [&](const Shifted& s) {
                       const Region exact = canonical(region);
                       if (!std::holds_alternative<Shifted>(exact.shape())) {
                           for_each_boundary_sample(exact, pitch, fn);
                           return;
                       }
                       if (!s.base->is_convex())
                           throw UnsupportedError("boundary sampling of shifted non-convex regions");
                       const auto centres = deepest_points(*s.base, pitch);
                       if (centres.empty()) throw UnsupportedError("boundary sampling needs a bounded region");
                       ray_cast_samples(region, centres.front(), region.signed_distance(centres.front()), pitch,
                                        fn);
                   },
                   [&](const EmptyRegion&) {},
               },
               region.shape());
}

std::vector<Point> boundary_samples(const Region& region, double pitch) {
    std::vector<Point> out;
    for_each_boundary_sample(region, pitch,
                             [&](std::span<const double> p) { out.emplace_back(p.begin(), p.end()); });
    return out;
}

std::vector<Point> deepest_points(const Region& region, double pitch) {
    return std::visit(overloaded{
                          [](const Ball& b) { return std::vector<Point>{b.center}; },
                          [&](const ConvexPolytope& p) {
                              auto cb = detail::chebyshev_ball(p, region.dim());
                              return cb ? std::vector<Point>{cb->center} : std::vector<Point>{};
                          },
                          [&](const Band1D& b) {
                              if (!region.is_bounded()) return std::vector<Point>{};
                              return std::vector<Point>{{0.5 * (b.lower + b.upper)}};
                          },
                          [&](const Annulus& a) {
                              std::vector<Point> out;
                              if (!std::isfinite(a.outer)) return out;
                              sphere_samples(a.center, 0.5 * (a.inner + a.outer), pitch,
                                             [&](std::span<const double> p) { out.emplace_back(p.begin(), p.end()); });
                              return out;
                          },
                          [&](const Shifted& s) { return deepest_points(*s.base, pitch); },
                          [](const EmptyRegion&) { return std::vector<Point>{}; },
                      },
                      region.shape());
}

double inradius(const Region& region) {
    return std::visit(overloaded{
                          [](const Ball& b) { return b.radius; },
                          [&](const ConvexPolytope& p) {
                              auto cb = detail::chebyshev_ball(p, region.dim());
                              return cb ? std::max(0.0, cb->radius) : kInf;
                          },
                          [](const Band1D& b) { return 0.5 * end_gap(b.upper, b.lower); },
                          [](const Annulus& a) { return 0.5 * (a.outer - a.inner); },
                          [](const Shifted& s) { return std::max(0.0, inradius(*s.base) + s.shift); },
                          [](const EmptyRegion&) { return 0.0; },
                      },
                      region.shape());
}

// --- metrics ------------------------------------------------------------------

MetricResult hausdorff_sampled(const Region& a, const Region& b, double pitch) {
    require_same_dim(a, b);
    if (auto e = empty_pair(a, b)) return {e->sets, MetricMethod::analytic, 0.0};
    const double v = std::max(directed_sampled(a, b, false, pitch), directed_sampled(b, a, false, pitch));
    return {v, MetricMethod::sampled, pitch};
}

MetricResult rho_H_sampled(const Region& a, const Region& b, double pitch) {
    require_same_dim(a, b);
    if (auto e = empty_pair(a, b)) return {e->sets, MetricMethod::analytic, 0.0};
    const double sets = std::max(directed_sampled(a, b, false, pitch), directed_sampled(b, a, false, pitch));
    const double comps = std::max(directed_sampled(a, b, true, pitch), directed_sampled(b, a, true, pitch));
    return {std::max(sets, comps), MetricMethod::sampled, pitch};
}

MetricResult hausdorff(const Region& a, const Region& b, const MetricOptions& opts) {
    require_same_dim(a, b);
    if (auto e = empty_pair(a, b)) return {e->sets, MetricMethod::analytic, 0.0};
    const Region ca = canonical(a);
    const Region cb = canonical(b);
    if (auto v = analytic_pair(ca, cb)) return {v->sets, MetricMethod::analytic, 0.0};
    return hausdorff_sampled(ca, cb, opts.pitch);
}

MetricResult rho_H(const Region& a, const Region& b, const MetricOptions& opts) {
    require_same_dim(a, b);
    if (auto e = empty_pair(a, b)) return {e->sets, MetricMethod::analytic, 0.0};
    const Region ca = canonical(a);
    const Region cb = canonical(b);
    if (auto v = analytic_pair(ca, cb)) return {std::max(v->sets, v->complements), MetricMethod::analytic, 0.0};
    return rho_H_sampled(ca, cb, opts.pitch);
}

double norm(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

double distance(std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        s += d * d;
    }
    return std::sqrt(s);
}

}  // namespace bcp
