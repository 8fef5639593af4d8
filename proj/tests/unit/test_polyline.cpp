#include <doctest.h>

#include <cmath>
#include <limits>

#include "bcp/error.hpp"
#include "bcp/polyline.hpp"

using namespace bcp;

TEST_CASE("polyline evaluation") {
    const Polyline p({0.0, 1.0, 3.0}, {1.0, 2.0, 0.0});
    CHECK(p(0.0) == 1.0);
    CHECK(p(0.5) == 1.5);
    CHECK(p(2.0) == 1.0);
    CHECK(p(3.0) == 0.0);
    CHECK(p(5.0) == 0.0);
    CHECK(p.min_value() == 0.0);
    CHECK(p.max_value() == 2.0);
    CHECK(p.max_abs_slope() == 1.0);
    CHECK(Polyline::constant(4.0)(17.0) == 4.0);
    CHECK(Polyline::constant(4.0).max_abs_slope() == 0.0);

    const auto r = p.rescaled(0.5, 2.0);
    CHECK(r(0.25) == 3.0);
    CHECK(r.knots().back() == 1.5);

    CHECK_THROWS_AS(Polyline({0.0, 0.0}, {1.0, 1.0}), InputError);
    CHECK_THROWS_AS(Polyline({0.0, 1.0}, {1.0}), InputError);
    CHECK_THROWS_AS(Polyline({0.0, 1.0}, {1.0, std::nan("")}), InputError);
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(Polyline({0.0, 1.0}, {inf, inf}).is_infinite());
    CHECK_THROWS_AS(Polyline({0.0, 1.0}, {1.0, inf}), InputError);
}

TEST_CASE("vector path") {
    const VectorPath v({0.0, 2.0}, {{0.0, 0.0}, {2.0, -4.0}});
    CHECK(v(1.0) == Point{1.0, -2.0});
    CHECK(v.dim() == 2);
    CHECK(v.max_speed() == doctest::Approx(std::sqrt(5.0)));
    CHECK(v.rescaled(0.5, 0.5)(0.5) == Point{0.5, -1.0});
    CHECK_THROWS_AS(VectorPath({0.0, 1.0}, {{0.0, 0.0}, {1.0}}), InputError);
}

TEST_CASE("merge knots") {
    const std::vector<double> a{0.0, 0.5, 1.0};
    const std::vector<double> b{0.0, 0.25, 1.0};
    CHECK(merge_knots(a, b) == std::vector<double>{0.0, 0.25, 0.5, 1.0});
}
