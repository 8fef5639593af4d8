#include "bcp/polyline.hpp"

#include <algorithm>
#include <cmath>

#include "bcp/error.hpp"

namespace bcp {

namespace {

void check_knots(const std::vector<double>& knots, std::size_t n_values) {
    if (knots.empty()) throw InputError("path needs at least one knot");
    if (knots.size() != n_values) throw InputError("path knots and values differ in length");
    for (std::size_t i = 0; i < knots.size(); ++i) {
        if (!std::isfinite(knots[i])) throw InputError("path knots must be finite");
        if (i > 0 && !(knots[i] > knots[i - 1])) throw InputError("path knots must be strictly increasing");
    }
}

/// Locate t: index of the piece and the interpolation weight.
std::pair<std::size_t, double> locate(const std::vector<double>& knots, double t) {
    if (knots.size() == 1 || t <= knots.front()) return {0, 0.0};
    if (t >= knots.back()) return {knots.size() - 1, 0.0};
    const auto it = std::upper_bound(knots.begin(), knots.end(), t);
    const auto i = static_cast<std::size_t>(it - knots.begin()) - 1;
    return {i, (t - knots[i]) / (knots[i + 1] - knots[i])};
}

}  // namespace

Polyline::Polyline(std::vector<double> knots, std::vector<double> values)
    : knots_(std::move(knots)), values_(std::move(values)) {
    check_knots(knots_, values_.size());
    const bool any_inf = std::any_of(values_.begin(), values_.end(), [](double v) { return std::isinf(v); });
    for (double v : values_)
        if (std::isnan(v)) throw InputError("path values must not be NaN");
    if (any_inf && std::any_of(values_.begin(), values_.end(), [&](double v) { return v != values_.front(); }))
        throw InputError("an infinite barrier must be infinite at every knot");
}

double Polyline::operator()(double t) const {
    const auto [i, w] = locate(knots_, t);
    if (w == 0.0) return values_[i];
    return values_[i] + w * (values_[i + 1] - values_[i]);
}

bool Polyline::is_infinite() const noexcept { return !values_.empty() && std::isinf(values_.front()); }

double Polyline::min_value() const { return *std::min_element(values_.begin(), values_.end()); }
double Polyline::max_value() const { return *std::max_element(values_.begin(), values_.end()); }

double Polyline::max_abs_slope() const {
    if (is_infinite()) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < knots_.size(); ++i)
        s = std::max(s, std::abs(values_[i + 1] - values_[i]) / (knots_[i + 1] - knots_[i]));
    return s;
}

Polyline Polyline::rescaled(double time_factor, double value_factor) const {
    auto k = knots_;
    auto v = values_;
    for (auto& x : k) x *= time_factor;
    for (auto& x : v) x *= value_factor;
    return Polyline(std::move(k), std::move(v));
}

VectorPath::VectorPath(std::vector<double> knots, std::vector<Point> values)
    : knots_(std::move(knots)), values_(std::move(values)) {
    check_knots(knots_, values_.size());
    const auto m = values_.front().size();
    if (m == 0) throw InputError("path points must have dimension >= 1");
    for (const auto& p : values_) {
        if (p.size() != m) throw InputError("path points have inconsistent dimensions");
        for (double v : p)
            if (!std::isfinite(v)) throw InputError("path points must be finite");
    }
}

Point VectorPath::operator()(double t) const {
    Point out(values_.front().size());
    eval(t, out);
    return out;
}

void VectorPath::eval(double t, std::span<double> out) const {
    const auto [i, w] = locate(knots_, t);
    const auto& a = values_[i];
    if (w == 0.0) {
        std::copy(a.begin(), a.end(), out.begin());
        return;
    }
    const auto& b = values_[i + 1];
    for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j] + w * (b[j] - a[j]);
}

double VectorPath::max_speed() const {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < knots_.size(); ++i)
        s = std::max(s, distance(values_[i + 1], values_[i]) / (knots_[i + 1] - knots_[i]));
    return s;
}

VectorPath VectorPath::rescaled(double time_factor, double value_factor) const {
    auto k = knots_;
    auto v = values_;
    for (auto& x : k) x *= time_factor;
    for (auto& p : v)
        for (auto& x : p) x *= value_factor;
    return VectorPath(std::move(k), std::move(v));
}

std::vector<double> merge_knots(std::span<const double> a, std::span<const double> b) {
    std::vector<double> out(a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    std::sort(out.begin(), out.end());
    std::vector<double> merged;
    for (double t : out) {
        if (!merged.empty() && std::abs(t - merged.back()) <= 1e-14 * std::max(1.0, std::abs(t))) continue;
        merged.push_back(t);
    }
    return merged;
}

}  // namespace bcp
