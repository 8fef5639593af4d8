#pragma once

#include <functional>
#include <memory>
#include <span>
#include <variant>
#include <vector>

namespace bcp {

using Point = std::vector<double>;

/// Signed distance reported by the empty region: a finite "minus infinity" so
/// that thresholds and sweeps over it stay total.
inline constexpr double kEmptySignedDistance = -1e308;

struct Ball {
    Point center;
    double radius;
};

/// The open half-space {x : normal . x < offset}; `normal` has unit length.
struct Halfspace {
    Point normal;
    double offset;
};

struct ConvexPolytope {
    std::vector<Halfspace> halfspaces;
};

/// Open interval (lower, upper) of the real line; either end may be infinite.
struct Band1D {
    double lower;
    double upper;
};

/// {x : inner < |x - center| < outer}; `outer` may be +inf (ball exterior).
struct Annulus {
    Point center;
    double inner;
    double outer;
};

class Region;

/// Threshold shift of a base region: membership is sd_base(x) > -shift.
struct Shifted {
    std::shared_ptr<const Region> base;
    double shift;
};

struct EmptyRegion {};

using Shape = std::variant<Ball, ConvexPolytope, Band1D, Annulus, Shifted, EmptyRegion>;

/// An open subset of R^m with an exact signed distance (positive inside).
///
/// Values are immutable; copies share any wrapped base region.
class Region {
public:
    static Region ball(Point center, double radius);
    static Region polytope(std::vector<Halfspace> halfspaces);
    static Region band(double lower, double upper);
    static Region annulus(Point center, double inner, double outer);
    /// Raw shift wrapper. Prefer dilate(), which returns exact shapes where
    /// they exist.
    static Region shifted(Region base, double shift);
    static Region empty(int dim);

    int dim() const noexcept { return dim_; }
    const Shape& shape() const noexcept { return shape_; }
    bool is_empty() const noexcept { return std::holds_alternative<EmptyRegion>(shape_); }

    /// rho(x, A^c) - rho(x, A). Throws InputError on a dimension mismatch.
    ///
    /// For Shifted regions this is sd_base + shift, which is exact for balls
    /// and for dilations (shift > 0) of convex bases; for erosions of
    /// polytopes with corners it is only an approximation, though membership
    /// (its sign) is always exact.
    double signed_distance(std::span<const double> x) const;

    bool contains(std::span<const double> x) const { return signed_distance(x) > 0.0; }

    /// True when the region is convex (balls, bands, polytopes and their
    /// dilations). Annuli are not.
    bool is_convex() const;

    bool is_bounded() const;

private:
    Region(Shape shape, int dim) : shape_(std::move(shape)), dim_(dim) {}

    Shape shape_;
    int dim_;
};

/// The set A^(v). With v > 0 it is {x : rho(x, A) < v}; with v <= 0 it is the
/// complement of {x : rho(x, A^c) <= |v|}.
///
/// Both branches collapse to one threshold rule on the signed distance
/// sd = rho(x, A^c) - rho(x, A):
///   v > 0, x in A:      sd > 0 > -v, and rho(x, A) = 0 < v.
///   v > 0, x not in A:  sd = -rho(x, A), so sd > -v  <=>  rho(x, A) < v.
///   v <= 0, x in A:     sd = rho(x, A^c), so sd > -v  <=>  rho(x, A^c) > |v|.
///   v <= 0, x not in A: rho(x, A^c) = 0 <= |v| excludes x, and sd <= 0 <= -v.
/// Hence A^(v) = {x : sd(x) > -v}. Balls, bands, annuli and polytope erosions
/// come back as exact shapes; polytope dilations as a Shifted wrapper. Erosion
/// past extinction yields the empty region.
Region dilate(const Region& region, double v);

/// The image {s x : x in A}, s > 0.
Region scale(const Region& region, double factor);

/// The image {x + shift : x in A}.
Region translate(const Region& region, std::span<const double> shift);

enum class MetricMethod { analytic, sampled };

struct MetricResult {
    double value;
    MetricMethod method;
    double resolution;  // boundary sampling pitch; 0 for analytic results
};

struct MetricOptions {
    double pitch = 1e-3;
};

/// Hausdorff distance rho_h. Analytic for ball/ball, band/band and concentric
/// annulus pairs, sampled otherwise. Empty vs non-empty is +inf.
MetricResult hausdorff(const Region& a, const Region& b, const MetricOptions& opts = {});

/// max(rho_h(A, B), rho_h(A^c, B^c)).
MetricResult rho_H(const Region& a, const Region& b, const MetricOptions& opts = {});

/// Forced boundary-sampling versions (also used to cross-check the analytic
/// formulas). Require bounded regions in dimension <= 3.
MetricResult hausdorff_sampled(const Region& a, const Region& b, double pitch);
MetricResult rho_H_sampled(const Region& a, const Region& b, double pitch);

/// Deterministic boundary points at roughly the given spacing: circles and
/// Fibonacci spheres for balls, per-facet grids for polytopes, ray casting
/// for shifted convex regions.
void for_each_boundary_sample(const Region& region, double pitch,
                              const std::function<void(std::span<const double>)>& fn);
std::vector<Point> boundary_samples(const Region& region, double pitch);

/// Points where the signed distance attains its maximum (Chebyshev centres);
/// annuli return samples of the mid-radius sphere.
std::vector<Point> deepest_points(const Region& region, double pitch = 1e-2);

/// Largest signed distance over the region (inf for unbounded bands).
double inradius(const Region& region);

double norm(std::span<const double> x);
double distance(std::span<const double> x, std::span<const double> y);

}  // namespace bcp
