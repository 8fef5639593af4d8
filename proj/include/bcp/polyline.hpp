#pragma once

#include <span>
#include <vector>

#include "bcp/geometry.hpp"

namespace bcp {

/// Piecewise-linear scalar function of time. A single knot is a constant.
/// Values may be +-inf (barrier sentinels), in which case every knot must hold
/// the same infinite value.
class Polyline {
public:
    Polyline() = default;
    Polyline(std::vector<double> knots, std::vector<double> values);
    static Polyline constant(double value) { return Polyline({0.0}, {value}); }

    double operator()(double t) const;

    const std::vector<double>& knots() const noexcept { return knots_; }
    const std::vector<double>& values() const noexcept { return values_; }
    bool is_infinite() const noexcept;
    double min_value() const;
    double max_value() const;
    /// Largest |slope| over the linear pieces.
    double max_abs_slope() const;

    Polyline rescaled(double time_factor, double value_factor) const;

private:
    std::vector<double> knots_;
    std::vector<double> values_;
};

/// Piecewise-linear path in R^m.
class VectorPath {
public:
    VectorPath() = default;
    VectorPath(std::vector<double> knots, std::vector<Point> values);
    static VectorPath constant(Point value) { return VectorPath({0.0}, {std::move(value)}); }

    Point operator()(double t) const;
    void eval(double t, std::span<double> out) const;

    int dim() const noexcept { return values_.empty() ? 0 : static_cast<int>(values_.front().size()); }
    const std::vector<double>& knots() const noexcept { return knots_; }
    const std::vector<Point>& values() const noexcept { return values_; }
    double max_speed() const;

    VectorPath rescaled(double time_factor, double value_factor) const;

private:
    std::vector<double> knots_;
    std::vector<Point> values_;
};

/// Sorted union of knot sets, with duplicates (within 1e-14 relative) merged.
std::vector<double> merge_knots(std::span<const double> a, std::span<const double> b);

}  // namespace bcp
