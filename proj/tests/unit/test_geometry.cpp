#include <doctest.h>

#include <cmath>
#include <random>

#include "bcp/error.hpp"
#include "bcp/geometry.hpp"

using namespace bcp;

namespace {

/// Membership in A^(v) straight from the two-branch definition, using only
/// rho(x, A) and rho(x, A^c) of an interval.
bool band_dilation_member(double lo, double hi, double v, double x) {
    const bool inside = lo < x && x < hi;
    const double to_set = inside ? 0.0 : std::min(std::abs(x - lo), std::abs(x - hi));
    const double to_comp = inside ? std::min(x - lo, hi - x) : 0.0;
    if (v > 0.0) return to_set < v;
    return !(to_comp <= std::abs(v));
}

}  // namespace

TEST_CASE("signed distance examples") {
    const auto ball = Region::ball({0.0, 0.0}, 1.0);
    CHECK(ball.signed_distance(Point{0.0, 0.0}) == doctest::Approx(1.0));
    CHECK(ball.signed_distance(Point{2.0, 0.0}) == doctest::Approx(-1.0));
    CHECK(Region::band(-1.0, 2.0).signed_distance(Point{0.5}) == doctest::Approx(1.5));
    CHECK_THROWS_AS(ball.signed_distance(Point{1.0}), InputError);
}

TEST_CASE("invalid shapes are rejected") {
    CHECK_THROWS_AS(Region::ball({0.0}, 0.0), InputError);
    CHECK_THROWS_AS(Region::band(1.0, 1.0), InputError);
    CHECK_THROWS_AS(Region::annulus({0.0, 0.0}, 0.5, 0.5), InputError);
    CHECK_THROWS_AS(Region::polytope({{{1.0, 1.0}, 1.0}}), InputError);
}

TEST_CASE("polytope signed distance") {
    // unit square (-1,1)^2
    const auto sq = Region::polytope(
        {{{1.0, 0.0}, 1.0}, {{-1.0, 0.0}, 1.0}, {{0.0, 1.0}, 1.0}, {{0.0, -1.0}, 1.0}});
    CHECK(sq.signed_distance(Point{0.0, 0.0}) == doctest::Approx(1.0));
    CHECK(sq.signed_distance(Point{0.5, 0.0}) == doctest::Approx(0.5));
    CHECK(sq.signed_distance(Point{3.0, 0.0}) == doctest::Approx(-2.0));
    CHECK(sq.signed_distance(Point{2.0, 2.0}) == doctest::Approx(-std::sqrt(2.0)));
    CHECK(sq.is_bounded());
    CHECK_FALSE(Region::polytope({{{1.0, 0.0}, 1.0}, {{-1.0, 0.0}, 1.0}}).is_bounded());
}

TEST_CASE("dilation examples") {
    const auto b = dilate(Region::ball({0.0, 0.0}, 1.0), 0.5);
    REQUIRE(std::holds_alternative<Ball>(b.shape()));
    CHECK(std::get<Ball>(b.shape()).radius == doctest::Approx(1.5));
    CHECK(dilate(Region::ball({0.0}, 1.0), -1.0).is_empty());

    const auto e = dilate(Region::band(-1.0, 1.0), -0.25);
    REQUIRE(std::holds_alternative<Band1D>(e.shape()));
    for (int i = -200; i <= 200; ++i) {
        const double x = i * 0.01 + 0.003;
        CHECK(e.contains(Point{x}) == band_dilation_member(-1.0, 1.0, -0.25, x));
    }
    for (double v : {-0.7, -0.1, 0.0, 0.3}) {
        const auto d = dilate(Region::band(-1.0, 1.0), v);
        for (int i = -300; i <= 300; ++i) {
            const double x = i * 0.01 + 0.0007;
            CHECK(d.contains(Point{x}) == band_dilation_member(-1.0, 1.0, v, x));
        }
    }
}

TEST_CASE("annulus dilation fills the hole") {
    const auto a = Region::annulus({0.0, 0.0}, 0.3, 1.0);
    CHECK(std::holds_alternative<Annulus>(dilate(a, 0.1).shape()));
    CHECK(std::holds_alternative<Ball>(dilate(a, 0.5).shape()));
    CHECK(dilate(a, -0.4).is_empty());
    CHECK(dilate(a, 0.3).contains(Point{0.1, 0.0}));
}

TEST_CASE("polytope dilation and erosion") {
    const auto sq = Region::polytope(
        {{{1.0, 0.0}, 1.0}, {{-1.0, 0.0}, 1.0}, {{0.0, 1.0}, 1.0}, {{0.0, -1.0}, 1.0}});
    const auto out = dilate(sq, 0.5);
    CHECK(out.contains(Point{1.3, 1.3}));
    CHECK_FALSE(out.contains(Point{1.4, 1.4}));
    CHECK(out.signed_distance(Point{2.0, 0.0}) == doctest::Approx(-0.5));
    const auto in = dilate(sq, -0.5);
    CHECK(std::holds_alternative<ConvexPolytope>(in.shape()));
    CHECK(in.contains(Point{0.49, 0.49}));
    CHECK(dilate(sq, -1.0).is_empty());
}

TEST_CASE("metric examples") {
    const auto b1 = Region::ball({0.0, 0.0}, 1.0);
    const auto b15 = Region::ball({0.0, 0.0}, 1.5);
    CHECK(hausdorff(b1, b1).value == 0.0);
    CHECK(hausdorff(b1, b15).value == doctest::Approx(0.5));
    CHECK(hausdorff_sampled(b1, b15, 1e-3).value == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(rho_H(b1, b15).value == doctest::Approx(0.5));
    CHECK(rho_H_sampled(b1, b15, 1e-3).value == doctest::Approx(0.5).epsilon(2e-3));

    const auto shifted = Region::ball({0.3, 0.0}, 1.0);
    CHECK(hausdorff(b1, shifted).value == doctest::Approx(0.3));
    CHECK(hausdorff_sampled(b1, shifted, 1e-3).value == doctest::Approx(0.3).epsilon(1e-2));

    CHECK(rho_H(Region::band(-1.0, 1.0), Region::band(-1.0, 1.2)).value == doctest::Approx(0.2));
    CHECK(rho_H(Region::band(-1.0, 1.0), Region::band(-1.0, 1.0)).value == 0.0);
    CHECK(hausdorff(Region::empty(2), b1).value == std::numeric_limits<double>::infinity());
    CHECK(rho_H(b1, b15).method == MetricMethod::analytic);
}

TEST_CASE("concentric annuli are handled radially") {
    const auto a = Region::annulus({0.0, 0.0}, 0.3, 1.0);
    const auto b = Region::annulus({0.0, 0.0}, 0.2, 1.1);
    const auto r = rho_H(a, b);
    CHECK(r.method == MetricMethod::analytic);
    CHECK(r.value == doctest::Approx(0.1));
    CHECK(rho_H_sampled(a, b, 1e-3).value == doctest::Approx(0.1).epsilon(1e-2));
}

TEST_CASE("sampled metric on polytopes") {
    const auto sq = Region::polytope(
        {{{1.0, 0.0}, 1.0}, {{-1.0, 0.0}, 1.0}, {{0.0, 1.0}, 1.0}, {{0.0, -1.0}, 1.0}});
    const auto big = dilate(sq, 0.2);
    CHECK(hausdorff(sq, big).value == doctest::Approx(0.2).epsilon(1e-3));
    CHECK(rho_H(sq, big).value == doctest::Approx(0.2).epsilon(1e-3));
    const auto shrunk = dilate(sq, -0.2);
    CHECK(rho_H(sq, shrunk).value == doctest::Approx(0.2 * std::sqrt(2.0)).epsilon(1e-3));
}

TEST_CASE("signed distance is 1-Lipschitz") {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    const Region shapes[] = {
        Region::ball({0.1, -0.2}, 0.8),
        Region::annulus({0.0, 0.0}, 0.3, 1.2),
        Region::polytope({{{1.0, 0.0}, 1.0}, {{-0.6, 0.8}, 0.5}, {{-0.6, -0.8}, 0.5}}),
        dilate(Region::polytope({{{1.0, 0.0}, 1.0}, {{-0.6, 0.8}, 0.5}, {{-0.6, -0.8}, 0.5}}), 0.3),
    };
    for (const auto& r : shapes) {
        for (int i = 0; i < 2000; ++i) {
            const Point x{u(gen), u(gen)};
            const Point y{u(gen), u(gen)};
            CHECK(std::abs(r.signed_distance(x) - r.signed_distance(y)) <= distance(x, y) + 1e-12);
        }
    }
}
