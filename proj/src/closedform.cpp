#include "bcp/closedform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "bcp/error.hpp"
#include "bcp/parallel.hpp"
#include "bcp/rng.hpp"

namespace bcp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Sums {
    double w = 0.0;
    double w2 = 0.0;
};

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double log_normal_cdf(double x) {
    if (x > -37.0) return std::log(normal_cdf(x));
    // Phi(x) = phi(x)/|x| * (1 - 1/x^2 + 3/x^4 - 15/x^6 + ...)
    const double z = 1.0 / (x * x);
    const double series = 1.0 - z + 3.0 * z * z - 15.0 * z * z * z;
    return -0.5 * x * x - std::log(-x) - 0.5 * std::log(2.0 * std::numbers::pi) + std::log(series);
}

double linear_noncrossing_exact(double t, double c, double eps) {
    if (!(t > 0.0)) throw PreconditionError("linear_noncrossing_exact needs t > 0");
    if (!(eps > 0.0)) throw PreconditionError("linear_noncrossing_exact needs eps > 0");
    if (eps == kInf) return 1.0;
    const double st = std::sqrt(t);
    const double first = normal_cdf(c * st + eps / st);
    const double second = std::exp(-2.0 * c * eps + log_normal_cdf(c * st - eps / st));
    return std::clamp(first - second, 0.0, 1.0);
}

double first_passage_density_line(double s, double a, double mu) {
    if (!(s > 0.0)) throw PreconditionError("first-passage density needs s > 0");
    if (!(a > 0.0)) throw PreconditionError("first-passage density needs a > 0");
    const double d = a - mu * s;
    return a / (std::sqrt(2.0 * std::numbers::pi) * s * std::sqrt(s)) * std::exp(-d * d / (2.0 * s));
}

double bridge_segment_crossing(double x1, double x2, double g1, double g2, double dt, BarrierSide side) {
    if (!(dt > 0.0)) throw PreconditionError("bridge crossing needs dt > 0");
    double d1 = 0.0;
    double d2 = 0.0;
    if (side == BarrierSide::upper) {
        if (g1 == kInf || g2 == kInf) return 0.0;
        d1 = g1 - x1;
        d2 = g2 - x2;
    } else {
        if (g1 == -kInf || g2 == -kInf) return 0.0;
        d1 = x1 - g1;
        d2 = x2 - g2;
    }
    if (d1 <= 0.0 || d2 <= 0.0) return 1.0;
    return std::exp(-2.0 * d1 * d2 / dt);
}

MCEstimate piecewise_linear_bcp_1d(const Polyline& lower, const Polyline& upper, const PiecewiseLinearOptions& opts) {
    if (opts.n < 1000) throw InputError("piecewise_linear_bcp_1d needs n >= 1000");
    if (lower.knots().empty() || upper.knots().empty()) throw InputError("barriers need at least one knot");
    if (lower.is_infinite() && lower.values().front() > 0.0) throw InputError("lower barrier cannot be +inf");
    if (upper.is_infinite() && upper.values().front() < 0.0) throw InputError("upper barrier cannot be -inf");

    MCEstimate out;
    out.n = opts.n;
    out.seed = opts.seed;
    out.bridge_correction = true;
    if (lower.is_infinite() && upper.is_infinite()) {
        out.mean = 1.0;
        out.bias_note = "both barriers infinite; exact";
        return out;
    }

    // Horizon from whichever barrier has more than one knot.
    double horizon = 0.0;
    for (const Polyline* p : {&lower, &upper}) {
        if (p->is_infinite() || p->knots().size() < 2) continue;
        if (p->knots().front() != 0.0) throw InputError("barrier knots must start at t = 0");
        if (horizon != 0.0 && p->knots().back() != horizon)
            throw InputError("barrier knot sets end at different horizons");
        horizon = p->knots().back();
    }
    if (!(horizon > 0.0)) throw InputError("constant barriers need a horizon; give one barrier two knots");

    std::vector<double> base = merge_knots(lower.is_infinite() ? std::vector<double>{} : lower.knots(),
                                           upper.is_infinite() ? std::vector<double>{} : upper.knots());
    base = merge_knots(base, std::vector<double>{0.0, horizon});
    base.erase(std::remove_if(base.begin(), base.end(), [&](double t) { return t < 0.0 || t > horizon; }),
               base.end());
    for (double t : base)
        if (!(lower(t) < upper(t))) throw InputError("lower barrier must stay below the upper barrier at every knot");
    if (!(lower(0.0) < 0.0 && 0.0 < upper(0.0))) throw InputError("barriers must straddle the start value 0");

    const bool two_sided = !lower.is_infinite() && !upper.is_infinite();
    const int threads = opts.threads > 0 ? opts.threads : default_thread_count();

    auto run = [&](int level) {
        // Grid times at this refinement level.
        std::vector<double> times;
        const std::size_t split = std::size_t{1} << level;
        for (std::size_t i = 0; i + 1 < base.size(); ++i)
            for (std::size_t j = 0; j < split; ++j)
                times.push_back(base[i] + (base[i + 1] - base[i]) * static_cast<double>(j) / static_cast<double>(split));
        times.push_back(base.back());
        std::vector<double> lo(times.size());
        std::vector<double> hi(times.size());
        for (std::size_t i = 0; i < times.size(); ++i) {
            lo[i] = lower(times[i]);
            hi[i] = upper(times[i]);
        }

        auto blocks = run_blocks(opts.n, threads, [&](std::size_t begin, std::size_t end) {
            Sums s;
            std::vector<double> w;
            std::vector<double> next;
            for (std::size_t path = begin; path < end; ++path) {
                // Values on the base knots, then Levy midpoint refinement with
                // one independent stream per level.
                rng::PathRandom base_rng(opts.seed, path, rng::lane_id(rng::Lane::Normals));
                w.assign(base.size(), 0.0);
                for (std::size_t i = 1; i < base.size(); ++i)
                    w[i] = w[i - 1] + std::sqrt(base[i] - base[i - 1]) * base_rng.normal();
                for (int l = 1; l <= level; ++l) {
                    rng::PathRandom lr(opts.seed, path, rng::lane_id(rng::Lane::Refinement, static_cast<std::uint32_t>(l - 1)));
                    const std::size_t step = split >> (l - 1);
                    next.assign(w.size() * 2 - 1, 0.0);
                    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
                        const double dt = times[(i + 1) * step] - times[i * step];
                        next[2 * i] = w[i];
                        next[2 * i + 1] = 0.5 * (w[i] + w[i + 1]) + 0.5 * std::sqrt(dt) * lr.normal();
                    }
                    next.back() = w.back();
                    w.swap(next);
                }
                double weight = 1.0;
                for (std::size_t i = 0; i + 1 < w.size() && weight > 0.0; ++i) {
                    const double dt = times[i + 1] - times[i];
                    weight *= 1.0 - bridge_segment_crossing(w[i], w[i + 1], hi[i], hi[i + 1], dt, BarrierSide::upper);
                    weight *= 1.0 - bridge_segment_crossing(w[i], w[i + 1], lo[i], lo[i + 1], dt, BarrierSide::lower);
                }
                s.w += weight;
                s.w2 += weight * weight;
            }
            return s;
        });
        std::vector<double> sw(blocks.size());
        std::vector<double> sw2(blocks.size());
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            sw[b] = blocks[b].w;
            sw2[b] = blocks[b].w2;
        }
        const double n = static_cast<double>(opts.n);
        MCEstimate e = out;
        e.mean = pairwise_sum(sw) / n;
        const double var = std::max(0.0, pairwise_sum(sw2) / n - e.mean * e.mean) * n / (n - 1.0);
        e.std_error = std::sqrt(var / n);
        e.n_steps = times.size() - 1;
        return e;
    };

    MCEstimate est = run(0);
    if (!two_sided) {
        est.bias_note = "one-sided barrier; bridge factors exact";
        return est;
    }
    int level = 0;
    for (int l = 1; l <= opts.max_refinements; ++l) {
        MCEstimate finer = run(l);
        const bool settled = std::abs(finer.mean - est.mean) < finer.std_error;
        est = finer;
        level = l;
        if (settled) break;
    }
    est.bias_note = "two-sided band: product of one-sided bridge factors, " + std::to_string(level) +
                    " midpoint refinement rounds (" + std::to_string(est.n_steps) + " segments)";
    return est;
}

}  // namespace bcp
