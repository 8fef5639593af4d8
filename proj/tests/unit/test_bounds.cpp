#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bcp/bounds.hpp"
#include "bcp/error.hpp"

using namespace bcp;

namespace {

DomainCertificate cert(int m, double K, double beta, double gamma) {
    DomainCertificate c;
    c.m = m;
    c.T = 1.0;
    c.K = K;
    c.beta = beta;
    c.gamma = gamma;
    return c;
}

}  // namespace

TEST_CASE("gap constant") {
    const auto g = gap_constant(cert(2, 1.0, 0.25, 1.0));
    // independent values from a 30-digit evaluation
    CHECK(g.c_star() == doctest::Approx(272.164913161901).epsilon(1e-12));
    CHECK(g.c() == doctest::Approx(565.521364567014).epsilon(1e-12));
    CHECK(g.beta_eff() == 0.25);

    const auto any = gap_constant(cert(2, 1.0, std::numeric_limits<double>::infinity(), 1.0));
    CHECK(any.beta_eff() == 0.5);

    const double k = 1.0, b = 0.5, m = 2.0;
    const double limit = 2.0 * (std::sqrt(2.0 / std::numbers::pi) + std::sqrt(2.0 * k / (std::numbers::pi * b)) +
                                2.0 * (m - 1.0) / b + k);
    CHECK(gap_constant(cert(2, 1.0, 0.5, 1e-14)).c() == doctest::Approx(limit));

    const auto b1 = g.at(0.1);
    CHECK(b1.certified_gap == 1.0);
    CHECK(g.at(0.0).certified_gap == 0.0);
    CHECK(g.at(1e-4).certified_gap == doctest::Approx(565.521364567014e-4));
    CHECK_THROWS_AS(g.at(0.2), PreconditionError);

    try {
        gap_constant(cert(2, 0.0, 0.25, 1.0));
        FAIL("expected an error");
    } catch (const PreconditionError& e) {
        CHECK(std::string(e.what()) == "gap constant undefined at K=0; pass a positive Lipschitz certificate");
    }
    auto t2 = cert(2, 1.0, 0.25, 1.0);
    t2.T = 2.0;
    CHECK_THROWS_AS(gap_constant(t2), PreconditionError);
}

TEST_CASE("gap constant is monotone in gamma and K") {
    // beta = 0.3 stays below K/2 on this grid, so beta_eff does not move with K
    for (double gamma = 0.1; gamma < 5.0; gamma += 0.7) {
        for (double K = 0.6; K < 4.0; K += 0.3) {
            const double c = gap_constant(cert(3, K, 0.3, gamma)).c();
            CHECK(gap_constant(cert(3, K, 0.3, gamma * 1.01)).c() >= c);
            CHECK(gap_constant(cert(3, K * 1.01, 0.3, gamma)).c() >= c);
        }
    }
}

TEST_CASE("density envelope") {
    const auto c = cert(2, 1.0, 0.25, 1.0);
    CHECK(density_envelope(0.5, c) == doctest::Approx(32.0 * (std::sqrt(1.0 / (0.25 * std::numbers::pi)) + 3.0 + 4.0 + 1.0)));
    CHECK(density_envelope(0.5, c) == doctest::Approx(292.1).epsilon(1e-4));
    CHECK(density_envelope(1e-9, c) > 1e9);
    const auto br = density_envelope_branches(0.25, c);
    CHECK(br.split == 0.25);
    CHECK(std::isfinite(br.early));
    CHECK(std::isfinite(br.late));
    CHECK_THROWS_AS(density_envelope(1.0, c), PreconditionError);
    CHECK_THROWS_AS(density_envelope(0.0, c), PreconditionError);
    // first-branch term (m-1)/(2 beta - K t) shrinks as beta grows
    double prev = density_envelope(0.05, cert(3, 1.0, 0.2, 1.0));
    for (double b = 0.21; b < 0.5; b += 0.01) {
        const double v = density_envelope(0.05, cert(3, 1.0, b, 1.0));
        CHECK(v <= prev);
        prev = v;
    }
}

TEST_CASE("survival given endpoint") {
    const auto c = cert(2, 1.0, 0.25, 1.0);
    const auto v = survival_given_endpoint_bound(0.5, 0.5, 0.1, c);
    CHECK(v.raw == doctest::Approx(0.2 * (1.0 / std::sqrt(0.25 * std::numbers::pi) + 0.725 / 0.375 + 4.0 + 1.0)));
    CHECK(v.raw == doctest::Approx(1.6123).epsilon(1e-4));
    CHECK(v.clipped == 1.0);
    CHECK(survival_given_endpoint_bound(0.5, 0.5, 1e-12, c).raw < 1e-10);
    CHECK_THROWS_AS(survival_given_endpoint_bound(0.5, 0.5, 0.0, c), PreconditionError);
    // branches meet at t = beta/K
    const double split = 0.25;
    const double below = std::nextafter(split, 0.0);
    const auto lo = survival_given_endpoint_bound(below, 0.4, 0.05, c).raw;
    const auto hi = survival_given_endpoint_bound(split, 0.4, 0.05, c).raw;
    CHECK(std::abs(lo - hi) < 1e-12 * std::max(1.0, hi) + 1e-10);
}

TEST_CASE("bridge cone survival") {
    const auto c = cert(2, 1.0, 0.25, 1.0);
    CHECK(bridge_cone_survival_bound(0.1, 0.2, 0.5, 0.3, c).raw == doctest::Approx(3.54744979717171).epsilon(1e-12));
    CHECK(bridge_cone_survival_bound(0.1, 0.2, 0.25, 0.3, c).raw == 0.0);
    CHECK_THROWS_AS(bridge_cone_survival_bound(0.15, 0.2, 0.5, 0.3, c), PreconditionError);
    CHECK_THROWS_AS(bridge_cone_survival_bound(0.2, 0.5, 0.5, 0.3, c), PreconditionError);
    CHECK_THROWS_AS(bridge_cone_survival_bound(0.1, 0.2, 0.2, 0.3, c), PreconditionError);
}

TEST_CASE("quick exit") {
    DomainCertificate c = cert(1, 0.0, 1.0, 1.0);
    CHECK(quick_exit_bound(0.1, 1.0, 0.5, c).raw == doctest::Approx(2.0 * std::exp(-5.0)));
    CHECK(quick_exit_bound(0.1, 1.0, 0.5, c).clipped == doctest::Approx(0.01348).epsilon(1e-3));
    // reflection bound 2 * 2 Phibar(r / sqrt h) lies below it
    CHECK(2.0 * std::erfc(1.0 / std::sqrt(0.2)) <= quick_exit_bound(0.1, 1.0, 0.5, c).raw);
    CHECK(quick_exit_bound(1e-6, 1.0, 0.5, c).raw < 1e-100);
    c.K = 2.0;
    CHECK_THROWS_AS(quick_exit_bound(0.5, 1.0, 0.1, c), PreconditionError);
    CHECK_THROWS_AS(quick_exit_bound(0.3, 1.0, 0.8, c), PreconditionError);
}

TEST_CASE("cone survival") {
    const auto v = cone_survival_bound(1.0, 0.26, 0.25, 1.0, 2);
    CHECK(v.raw == doctest::Approx(0.02 * (1.0 / std::sqrt(0.25 * std::numbers::pi) + 4.0 + 1.0)));
    CHECK(v.raw == doctest::Approx(0.1226).epsilon(1e-3));
    CHECK(cone_survival_bound(1.0, 0.25 + 1e-14, 0.25, 1.0, 2).raw < 1e-12);
    const double split = 0.25;
    const auto lo = cone_survival_bound(std::nextafter(split, 0.0), 0.4, 0.25, 1.0, 3).raw;
    const auto hi = cone_survival_bound(split, 0.4, 0.25, 1.0, 3).raw;
    CHECK(std::abs(lo - hi) < 1e-12);
    CHECK_THROWS_AS(cone_survival_bound(1.0, 0.2, 0.25, 1.0, 2), PreconditionError);
}

TEST_CASE("linear bound") {
    CHECK(linear_noncrossing_bound(1.0, 1.0, 0.1).raw == doctest::Approx(0.27978845608028655));
    CHECK(linear_noncrossing_bound(1.0, -2.0, 0.1).raw == doctest::Approx(0.1 * std::sqrt(2.0 / std::numbers::pi)));
    CHECK(linear_noncrossing_bound(0.01, 0.0, 1.0).clipped == 1.0);
}
