#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bcp/bounds.hpp"
#include "bcp/closedform.hpp"
#include "bcp/error.hpp"

using namespace bcp;

namespace {

/// Phi(x) = 1/2 + phi(x) * sum_n x^(2n+1) / (1*3*...*(2n+1)), fine for |x| <= 6.
double series_cdf(double x) {
    double term = x;
    double sum = x;
    for (int n = 1; n < 400; ++n) {
        term *= x * x / (2.0 * n + 1.0);
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return 0.5 + std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi) * sum;
}

}  // namespace

TEST_CASE("normal cdf") {
    CHECK(normal_cdf(0.0) == 0.5);
    CHECK(std::abs(normal_cdf(1.959963985) - 0.975) < 1e-9);
    for (int i = 0; i <= 1000; ++i) {
        const double x = -8.0 + 16.0 * i / 1000.0;
        CHECK(std::abs(normal_cdf(x) + normal_cdf(-x) - 1.0) < 1e-12);
        if (std::abs(x) <= 6.0) CHECK(std::abs(normal_cdf(x) - series_cdf(x)) < 1e-12);
    }
    CHECK(std::isfinite(log_normal_cdf(-60.0)));
    CHECK(log_normal_cdf(-36.9) == doctest::Approx(log_normal_cdf(-37.1) + 0.5 * (37.1 * 37.1 - 36.9 * 36.9)).epsilon(1e-2));
}

TEST_CASE("linear non-crossing probability") {
    const double e = 1.959963985;
    CHECK(std::abs(linear_noncrossing_exact(1.0, 0.0, e) - 0.95) < 1e-9);
    for (double t : {0.1, 1.0, 3.0})
        for (double eps : {0.1, 0.5, 2.0})
            CHECK(std::abs(linear_noncrossing_exact(t, 0.0, eps) - (2.0 * normal_cdf(eps / std::sqrt(t)) - 1.0)) <
                  1e-12);
    CHECK(linear_noncrossing_exact(1.0, 1.0, std::numeric_limits<double>::infinity()) == 1.0);
    CHECK(linear_noncrossing_exact(1.0, 1.0, 40.0) == doctest::Approx(1.0));
    const double big = linear_noncrossing_exact(1.0, -30.0, 5.0);
    CHECK(std::isfinite(big));
    CHECK(big >= 0.0);
    double prev = 0.0;
    for (int i = 1; i <= 50; ++i) {
        const double p = linear_noncrossing_exact(0.5, 1.0, 0.05 * i);
        CHECK(p >= prev);
        prev = p;
    }
    for (double t : {0.1, 1.0})
        for (double c : {-1.0, 0.0, 3.0})
            for (double eps : {0.1, 0.5})
                CHECK(linear_noncrossing_exact(t, c, eps) <= linear_noncrossing_bound(t, c, eps).raw + 1e-12);
}

TEST_CASE("first passage density") {
    CHECK(first_passage_density_line(0.5, 1.0, -1.0) > 0.0);
    CHECK(first_passage_density_line(0.5, 1.0, 0.0) ==
          doctest::Approx(1.0 / (std::sqrt(2.0 * std::numbers::pi) * std::pow(0.5, 1.5)) * std::exp(-1.0)));
    CHECK_THROWS_AS(first_passage_density_line(0.0, 1.0, 0.0), PreconditionError);
}

TEST_CASE("bridge segment crossing") {
    CHECK(bridge_segment_crossing(1.0, 0.0, 1.0, 1.0, 1.0) == 1.0);
    CHECK(bridge_segment_crossing(0.0, 0.0, 1.0, 1.0, 1.0) == doctest::Approx(std::exp(-2.0)));
    CHECK(bridge_segment_crossing(0.0, 0.0, std::numeric_limits<double>::infinity(),
                                  std::numeric_limits<double>::infinity(), 1.0) == 0.0);
    CHECK(bridge_segment_crossing(0.0, 0.0, -1.0, -1.0, 1.0, BarrierSide::lower) == doctest::Approx(std::exp(-2.0)));
    double prev = 1.0;
    for (int i = 1; i < 20; ++i) {
        const double p = bridge_segment_crossing(0.0, 0.2, 0.1 * i, 0.3 + 0.1 * i, 0.5);
        CHECK(p <= prev);
        CHECK(p >= 0.0);
        prev = p;
    }
}

TEST_CASE("piecewise linear barriers") {
    const double inf = std::numeric_limits<double>::infinity();
    PiecewiseLinearOptions opts;
    opts.n = 200000;
    opts.seed = 9;
    // W_t < 0.5 + t on [0,1]  <=>  sup (W_s - s) < 0.5
    const auto one = piecewise_linear_bcp_1d(Polyline::constant(-inf), Polyline({0.0, 1.0}, {0.5, 1.5}), opts);
    CHECK(std::abs(one.mean - linear_noncrossing_exact(1.0, 1.0, 0.5)) < 3.0 * one.std_error);

    const auto none = piecewise_linear_bcp_1d(Polyline::constant(-inf), Polyline::constant(inf), opts);
    CHECK(none.mean == 1.0);

    opts.n = 20000;
    const auto loose = piecewise_linear_bcp_1d(Polyline({0.0, 1.0}, {-1.0, -1.2}), Polyline({0.0, 1.0}, {1.0, 1.1}), opts);
    const auto tight = piecewise_linear_bcp_1d(Polyline({0.0, 1.0}, {-0.9, -1.2}), Polyline({0.0, 1.0}, {1.0, 1.0}), opts);
    CHECK(tight.mean <= loose.mean);

    CHECK_THROWS_AS(piecewise_linear_bcp_1d(Polyline::constant(-1.0), Polyline({0.0, 1.0}, {1.0, 1.0}), {999, 1, 1, 6}),
                    InputError);
    CHECK_THROWS_AS(piecewise_linear_bcp_1d(Polyline({0.0, 1.0}, {0.5, 0.5}), Polyline({0.0, 1.0}, {1.0, 1.0}), opts),
                    InputError);
}
