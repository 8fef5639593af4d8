#include <doctest.h>

#include <cmath>
#include <limits>
#include <numeric>

#include "bcp/bounds.hpp"
#include "bcp/closedform.hpp"
#include "bcp/error.hpp"
#include "bcp/mc_engine.hpp"

using namespace bcp;

namespace {

TimeSpaceDomain ball_tube(Polyline radius, int m = 2) {
    return make_domain(BallTube{VectorPath::constant(Point(m, 0.0)), std::move(radius)}, 1.0);
}

TimeSpaceDomain shrinking() { return ball_tube(Polyline({0.0, 1.0}, {1.0, 0.75})); }

SimConfig small(std::size_t n = 4000, std::size_t steps = 200) {
    SimConfig c;
    c.n_paths = n;
    c.n_steps = steps;
    c.seed = 3;
    return c;
}

}  // namespace

TEST_CASE("configuration checks") {
    auto c = small();
    c.n_steps = 1;
    CHECK_THROWS_AS(validate(c), InputError);
    c = small();
    c.n_paths = 0;
    CHECK_THROWS_AS(validate(c), InputError);
    CHECK_THROWS_AS(hitting_time_histogram(shrinking(), 9, small()), InputError);
}

TEST_CASE("survival in a wide cylinder") {
    const auto e = estimate_survival(ball_tube(Polyline::constant(10.0)), small());
    CHECK(e.mean >= 0.999);
    CHECK(e.n == 4000);
}

TEST_CASE("band survival matches the series value") {
    const auto band = make_domain(Band1DTube{Polyline::constant(-1.0), Polyline({0.0, 1.0}, {1.0, 1.0})}, 1.0);
    auto c = small(40000, 500);
    const auto e = estimate_survival(band, c);
    CHECK(std::abs(e.mean - 0.370777429799524) < 3.0 * e.std_error + 2e-3);
}

TEST_CASE("determinism across thread counts") {
    auto c = small();
    c.threads = 1;
    const auto a = estimate_gaps(shrinking(), {0.01, 0.02}, c);
    c.threads = 4;
    const auto b = estimate_gaps(shrinking(), {0.01, 0.02}, c);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].p_inner.mean == b[i].p_inner.mean);
        CHECK(a[i].p_outer.mean == b[i].p_outer.mean);
        CHECK(a[i].joint_stderr == b[i].joint_stderr);
    }
    c.threads = 1;
    const auto h1 = hitting_time_histogram(shrinking(), 20, c);
    c.threads = 3;
    const auto h3 = hitting_time_histogram(shrinking(), 20, c);
    CHECK(h1.counts == h3.counts);
    CHECK(h1.mass == h3.mass);
}

TEST_CASE("gap properties") {
    const auto c = small();
    const auto z = estimate_gap(shrinking(), 0.0, c);
    CHECK(z.gap == 0.0);
    CHECK(z.gap_count == 0);

    const auto gs = estimate_gaps(shrinking(), {0.005, 0.01, 0.02, 0.04}, c);
    for (std::size_t i = 0; i < gs.size(); ++i) {
        CHECK(gs[i].gap >= 0.0);
        if (i > 0) CHECK(gs[i].gap >= gs[i - 1].gap);
        CHECK(gs[i].p_inner.mean == gs[0].p_inner.mean);
    }
    CHECK(gs.back().gap > 0.0);

    const auto w = estimate_gap(shrinking(), 0.2, c, 0.125);
    CHECK(!w.warning.empty());
    CHECK(estimate_gap(shrinking(), 0.1, c, 0.125).warning.empty());
}

TEST_CASE("survival is monotone under dilation") {
    const auto c = small();
    const auto r = estimate_survival_batch(
        {ball_tube(Polyline({0.0, 1.0}, {0.8, 0.6})), ball_tube(Polyline({0.0, 1.0}, {0.9, 0.7})),
         ball_tube(Polyline({0.0, 1.0}, {1.0, 0.8}))},
        c);
    CHECK(r[0].mean <= r[1].mean);
    CHECK(r[1].mean <= r[2].mean);
    CHECK(estimate_survival(ball_tube(Polyline({0.0, 1.0}, {0.9, 0.7})), c).mean == r[1].mean);
}

TEST_CASE("band batches match the same intervals as polytopes") {
    const auto c = small(3000, 400);
    std::vector<TimeSpaceDomain> bands;
    std::vector<TimeSpaceDomain> slabs;
    for (double hi : {0.4, 0.8, 1.5}) {
        bands.push_back(make_domain(Band1DTube{Polyline::constant(-0.7), Polyline::constant(hi)}, 1.0));
        slabs.push_back(make_domain(PolytopeTube{{Halfspace{{1.0}, hi}, Halfspace{{-1.0}, 0.7}}, std::nullopt}, 1.0));
    }
    const auto a = estimate_survival_batch(bands, c);
    const auto b = estimate_survival_batch(slabs, c);
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k].mean == b[k].mean);
}

TEST_CASE("bridge correction only removes survivors") {
    auto c = small();
    const auto corrected = estimate_survival(shrinking(), c);
    c.bridge_correction = false;
    const auto raw = estimate_survival(shrinking(), c);
    CHECK(raw.mean >= corrected.mean);
    CHECK(raw.mean > corrected.mean);
}

TEST_CASE("hitting time histogram") {
    const auto h = hitting_time_histogram(shrinking(), 16, small());
    CHECK(h.edges.size() == 17);
    CHECK(h.edges.front() == 0.0);
    CHECK(h.edges.back() == 1.0);
    const std::size_t exits = std::accumulate(h.counts.begin(), h.counts.end(), std::size_t{0});
    CHECK(exits + h.survivors == h.n);
    double mass = h.survivor_mass;
    for (double m : h.mass) mass += m;
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(!h.note.empty());

    const auto wide = hitting_time_histogram(ball_tube(Polyline::constant(20.0)), 10, small());
    CHECK(wide.survivors == wide.n);
    CHECK(wide.survivor_mass == 1.0);
}

TEST_CASE("bridge conditional survival") {
    const auto wide = ball_tube(Polyline::constant(5.0));
    CHECK(bridge_conditional_survival(wide, 0.1, {0.0, 0.0}, small()).mean >= 0.999);

    const auto d = shrinking();
    const auto a = bridge_conditional_survival(d, 0.5, {0.8, 0.0}, small());
    const auto b = bridge_conditional_survival(d, 0.5, {0.8, 0.0}, small());
    CHECK(a.mean == b.mean);
    const auto edge = bridge_conditional_survival(d, 0.5, {0.874, 0.0}, small());
    CHECK(edge.mean < a.mean);
    DomainCertificate cert;
    cert.m = 2;
    cert.K = 0.25;
    cert.gamma = 1.0;
    CHECK(edge.mean <= survival_given_endpoint_bound(0.5, 0.874, 0.001, cert).clipped + 3.0 * edge.std_error);
    CHECK_THROWS_AS(bridge_conditional_survival(d, 0.5, {0.9, 0.0}, small()), InputError);
}

TEST_CASE("quick exit and cone avoidance") {
    auto c = small(20000, 400);
    const auto q = quick_exit_probability(1, 1.0, 0.0, 0.1, c);
    // reflection: P(sup |W| >= 1 before 0.1) <= 4 Phibar(1/sqrt(0.1))
    CHECK(q.mean <= 2.0 * std::erfc(1.0 / std::sqrt(0.2)) + 3.0 * q.std_error);
    CHECK(q.mean > 0.0);

    const auto s = cone_avoidance_survival(2, 0.26, 0.25, 1.0, 1.0, c);
    CHECK(s.mean <= cone_survival_bound(1.0, 0.26, 0.25, 1.0, 2).clipped + 3.0 * s.std_error);
    CHECK(s.mean < 0.2);
}

TEST_CASE("radial domination") {
    auto c = small(2000, 1000);
    const auto r = radial_domination_rate({0.6, 0.0}, {0.5, 0.0}, 0.2, 0.25, 1.0, c);
    CHECK(r.n == 2000);
    CHECK(r.rate <= 0.05);
    CHECK(r.step == doctest::Approx(0.2 / 1000));
    const auto one = radial_domination_rate({0.6}, {0.5}, 0.2, 0.25, 1.0, c);
    CHECK(one.rate <= 0.001);
    CHECK_THROWS_AS(radial_domination_rate({0.2, 0.0}, {0.5, 0.0}, 0.2, 0.25, 1.0, c), PreconditionError);
}
