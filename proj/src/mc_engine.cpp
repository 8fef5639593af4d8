#include "bcp/mc_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bcp/error.hpp"
#include "bcp/parallel.hpp"
#include "bcp/rng.hpp"

namespace bcp {

namespace {

constexpr std::uint32_t kSurvived = std::numeric_limits<std::uint32_t>::max();

// exp(-40) < 2^-57 lies below the smallest thinning uniform, so such steps
// can never thin a path.
constexpr double kNegligibleExponent = 40.0;
constexpr double kInf = std::numeric_limits<double>::infinity();

/// Sections of one or more domains on a shared uniform grid. Values for all
/// domains at one step sit next to each other, so a path walks one
/// contiguous stream.
class SectionGrid {
public:
    SectionGrid() = default;

    SectionGrid(const std::vector<const TimeSpaceDomain*>& domains, double horizon, std::size_t n_steps)
        : count_(domains.size()), dim_(domains.front()->dim()) {
        const std::size_t n = n_steps + 1;
        auto time = [&](std::size_t i) { return i == n_steps ? horizon : horizon * static_cast<double>(i) / n_steps; };
        auto all = [&](auto pred) { return std::all_of(domains.begin(), domains.end(), pred); };
        if (all([](const TimeSpaceDomain* d) {
                return std::holds_alternative<BallTube>(d->family()) || std::holds_alternative<TruncatedCone>(d->family());
            })) {
            kind_ = Kind::ball;
            stride_ = 1 + static_cast<std::size_t>(dim_);
        } else if (all([](const TimeSpaceDomain* d) { return std::holds_alternative<Band1DTube>(d->family()); })) {
            kind_ = Kind::band;
            stride_ = 2;
        } else {
            kind_ = Kind::generic;
            regions_.reserve(n * count_);
            for (std::size_t i = 0; i < n; ++i)
                for (const auto* d : domains) regions_.push_back(d->section(time(i)));
            return;
        }
        data_.resize(n * count_ * stride_);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < count_; ++k) {
                double* slot = data_.data() + (i * count_ + k) * stride_;
                const Region r = domains[k]->section(time(i));
                if (kind_ == Kind::ball) {
                    const auto& b = std::get<Ball>(r.shape());
                    slot[0] = b.radius;
                    std::copy(b.center.begin(), b.center.end(), slot + 1);
                } else {
                    // Band rows hold all lower ends, then all upper ends.
                    const auto& b = std::get<Band1D>(r.shape());
                    double* row = data_.data() + i * count_ * stride_;
                    row[k] = b.lower;
                    row[count_ + k] = b.upper;
                }
            }
        }
    }

    std::size_t size() const noexcept { return count_; }
    bool is_band() const noexcept { return kind_ == Kind::band; }
    /// Lower ends at step i followed by the upper ends; band grids only.
    const double* band_row(std::size_t i) const noexcept { return data_.data() + i * count_ * stride_; }

    /// Signed distances at step i. Cheap shapes fill every table; the generic
    /// case skips tables without a live target.
    void eval(std::size_t i, const double* x, const std::size_t* live, double* out) const {
        const double* row = data_.data() + i * count_ * stride_;
        switch (kind_) {
            case Kind::band:
            {
                const double x0 = x[0];
                const double* hi = row + count_;
#pragma omp simd
                for (std::size_t k = 0; k < count_; ++k) out[k] = std::min(x0 - row[k], hi[k] - x0);
                return;
            }
            case Kind::ball:
                for (std::size_t k = 0; k < count_; ++k) {
                    const double* slot = row + k * stride_;
                    double s = 0.0;
                    for (int d = 0; d < dim_; ++d) s += (x[d] - slot[1 + d]) * (x[d] - slot[1 + d]);
                    out[k] = slot[0] - std::sqrt(s);
                }
                return;
            case Kind::generic:
                for (std::size_t k = 0; k < count_; ++k)
                    if (live[k])
                        out[k] = regions_[i * count_ + k].signed_distance(
                            std::span<const double>(x, static_cast<std::size_t>(dim_)));
                return;
        }
    }

private:
    enum class Kind { ball, band, generic };
    std::size_t count_ = 0;
    int dim_ = 0;
    std::size_t stride_ = 0;
    Kind kind_ = Kind::generic;
    std::vector<double> data_;
    std::vector<Region> regions_;
};

struct Target {
    std::size_t table;
    double shift;  // membership in the target is sd + shift > 0
};

#if defined(__x86_64__) && defined(__GNUC__)
#define BCP_MULTIVERSION __attribute__((target_clones("avx2", "default")))
#else
#define BCP_MULTIVERSION
#endif

/// One step of bridge-corrected band targets, one target per table with no
/// gather: writes the new signed distances and returns the smallest exponent
/// 2 (sd_prev + shift)(sd + shift) / dt.
BCP_MULTIVERSION double band_sweep(std::size_t n, double x0, const double* row, const double* shift,
                                   const double* prev, double* cur, double scale) {
    const double* hi = row + n;
    double lowest = kInf;
#pragma omp simd reduction(min : lowest)
    for (std::size_t j = 0; j < n; ++j) {
        const double sd = std::min(x0 - row[j], hi[j] - x0);
        cur[j] = sd;
        lowest = std::min(lowest, (prev[j] + shift[j]) * (sd + shift[j]) * scale);
    }
    return lowest;
}

struct KernelJob {
    SectionGrid tables;
    std::vector<Target> targets;
    double horizon = 1.0;
    std::size_t n_steps = 0;
    Point start;
    std::optional<Point> bridge_end;
    bool bridge_correction = true;
    std::uint64_t seed = 0;
    std::size_t n_paths = 0;
    int threads = 1;
};

/// Exit step of every (path, target), flattened per block as
/// [path - block_begin][target]. Step 0 means the start is outside;
/// kSurvived means the path stayed inside up to the horizon.
std::vector<std::vector<std::uint32_t>> run_exit_kernel(const KernelJob& job) {
    const std::size_t nt = job.targets.size();
    const std::size_t ntab = job.tables.size();
    const int m = static_cast<int>(job.start.size());
    const double dt = job.horizon / static_cast<double>(job.n_steps);
    const double sqdt = std::sqrt(dt);
    if (job.n_steps >= kSurvived) throw InputError("n_steps too large");
    const double two_over_dt = 2.0 / dt;
    const std::size_t n_steps = job.n_steps;
    const bool correct = job.bridge_correction;
    const Point* zend = job.bridge_end ? &*job.bridge_end : nullptr;
    const Target* targets = job.targets.data();
    std::vector<std::size_t> tab(nt);
    const bool band = job.tables.is_band();
    bool identity = ntab == nt;
    for (std::size_t j = 0; j < nt; ++j) {
        tab[j] = job.targets[j].table;
        identity = identity && tab[j] == j;
    }

    return run_blocks(job.n_paths, job.threads, [&](std::size_t begin, std::size_t end) {
        std::vector<std::uint32_t> out((end - begin) * nt);
        std::vector<double> x(static_cast<std::size_t>(m));
        std::vector<double> prev(ntab);
        std::vector<double> cur(ntab);
        std::vector<std::size_t> table_alive(ntab);
        std::size_t* live = table_alive.data();
        std::vector<char> alive(nt);
        std::vector<double> live_shift(nt);
        const double scale = two_over_dt;

        for (std::size_t path = begin; path < end; ++path) {
            rng::PathRandom rnd(job.seed, path);
            std::uint32_t* exits = out.data() + (path - begin) * nt;
            std::copy(job.start.begin(), job.start.end(), x.begin());
            std::fill(table_alive.begin(), table_alive.end(), 1);
            job.tables.eval(0, x.data(), table_alive.data(), prev.data());
            std::fill(table_alive.begin(), table_alive.end(), 0);
            std::size_t n_alive = 0;
            for (std::size_t j = 0; j < nt; ++j) {
                const auto& tg = job.targets[j];
                alive[j] = prev[tg.table] + tg.shift > 0.0;
                exits[j] = alive[j] ? kSurvived : 0;
                live_shift[j] = alive[j] ? tg.shift : kInf;
                if (alive[j]) {
                    ++n_alive;
                    ++table_alive[tg.table];
                }
            }

            double* xp = x.data();
            double* pp = prev.data();
            double* cp = cur.data();
            for (std::size_t i = 1; i <= n_steps && n_alive > 0; ++i) {
                if (zend) {
                    if (i == n_steps) {
                        std::copy(zend->begin(), zend->end(), xp);
                    } else {
                        const double rem = job.horizon - static_cast<double>(i - 1) * dt;
                        const double sd = std::sqrt(dt * (rem - dt) / rem);
                        for (int k = 0; k < m; ++k) xp[k] += ((*zend)[k] - xp[k]) * dt / rem + sd * rnd.normal();
                    }
                } else {
                    for (int k = 0; k < m; ++k) xp[k] += sqdt * rnd.normal();
                }
                const bool fused = identity && correct && band;
                if (!fused) job.tables.eval(i, xp, live, cp);

                // Most steps kill nothing; find out with one reduction. Dead
                // targets carry an infinite shift and never register. A live
                // target had a positive distance at the previous step, so with
                // the correction on, dn <= 0 already forces q <= 0.
                double lowest = kInf;
                const double* ls = live_shift.data();
                if (fused) {
                    lowest = band_sweep(nt, xp[0], job.tables.band_row(i), ls, pp, cp, scale);
                } else if (identity && correct) {
#pragma omp simd reduction(min : lowest)
                    for (std::size_t j = 0; j < nt; ++j)
                        lowest = std::min(lowest, (pp[j] + ls[j]) * (cp[j] + ls[j]) * scale);
                } else if (identity) {
#pragma omp simd reduction(min : lowest)
                    for (std::size_t j = 0; j < nt; ++j) lowest = std::min(lowest, cp[j] + ls[j]);
                } else {
                    for (std::size_t j = 0; j < nt; ++j) {
                        const double dn = cp[tab[j]] + ls[j];
                        lowest = std::min(lowest, correct ? (pp[tab[j]] + ls[j]) * dn * scale : dn);
                    }
                }
                if (correct ? lowest >= kNegligibleExponent : lowest > 0.0) {
                    std::swap(pp, cp);
                    continue;
                }

                double u = -1.0;
                for (std::size_t j = 0; j < nt; ++j) {
                    if (!alive[j]) continue;
                    const Target& tg = targets[j];
                    const double dn = cp[tg.table] + tg.shift;
                    bool killed = dn <= 0.0;
                    if (!killed && correct) {
                        const double q = (pp[tg.table] + tg.shift) * dn * two_over_dt;
                        if (q < kNegligibleExponent) {
                            if (u < 0.0) u = rnd.step_uniform(i - 1);
                            killed = u < std::exp(-q);
                        }
                    }
                    if (killed) {
                        alive[j] = 0;
                        live_shift[j] = kInf;
                        exits[j] = static_cast<std::uint32_t>(i);
                        --n_alive;
                        --live[tg.table];
                    }
                }
                std::swap(pp, cp);
            }
        }
        return out;
    });
}

int resolve_threads(const SimConfig& cfg) { return cfg.threads > 0 ? cfg.threads : default_thread_count(); }

Point resolve_start(const TimeSpaceDomain& domain, const SimConfig& cfg) {
    Point s = cfg.start ? *cfg.start : domain.start();
    if (static_cast<int>(s.size()) != domain.dim()) throw InputError("start point has the wrong dimension");
    return s;
}

void require_start_inside(const TimeSpaceDomain& domain, const Point& start) {
    if (!domain.section(0.0).contains(start)) throw InputError("start point lies outside the domain at t = 0");
}

KernelJob single_domain_job(const TimeSpaceDomain& domain, const SimConfig& cfg) {
    validate(cfg);
    KernelJob job;
    job.horizon = domain.horizon();
    job.n_steps = cfg.n_steps;
    job.start = resolve_start(domain, cfg);
    require_start_inside(domain, job.start);
    job.bridge_correction = cfg.bridge_correction;
    job.seed = cfg.seed;
    job.n_paths = cfg.n_paths;
    job.threads = resolve_threads(cfg);
    job.tables = SectionGrid({&domain}, job.horizon, job.n_steps);
    return job;
}

/// Survivor count per target.
std::vector<std::size_t> survivors(const std::vector<std::vector<std::uint32_t>>& blocks, std::size_t nt) {
    std::vector<std::size_t> count(nt, 0);
    for (const auto& b : blocks)
        for (std::size_t p = 0; p < b.size(); p += nt)
            for (std::size_t j = 0; j < nt; ++j) count[j] += b[p + j] == kSurvived;
    return count;
}

std::string survival_note(bool corrected) {
    return corrected ? "bridge-corrected with the tangent half-space factor; residual bias shrinks with the step"
                     : "no bridge correction: the grid check overestimates survival";
}

MCEstimate make_estimate(std::size_t count, const SimConfig& cfg) {
    MCEstimate e = bernoulli_estimate(count, cfg.n_paths);
    e.seed = cfg.seed;
    e.n_steps = cfg.n_steps;
    e.bridge_correction = cfg.bridge_correction;
    e.bias_note = survival_note(cfg.bridge_correction);
    return e;
}

}  // namespace

void validate(const SimConfig& cfg) {
    if (cfg.n_paths < 1) throw InputError("sim.n_paths must be >= 1");
    if (cfg.n_steps < 2) throw InputError("sim.n_steps must be >= 2");
}

MCEstimate estimate_survival(const TimeSpaceDomain& domain, const SimConfig& cfg) {
    KernelJob job = single_domain_job(domain, cfg);
    job.targets = {{0, 0.0}};
    return make_estimate(survivors(run_exit_kernel(job), 1)[0], cfg);
}

std::vector<MCEstimate> estimate_survival_batch(const std::vector<TimeSpaceDomain>& domains, const SimConfig& cfg) {
    if (domains.empty()) return {};
    validate(cfg);
    KernelJob job;
    job.horizon = domains.front().horizon();
    job.n_steps = cfg.n_steps;
    job.start = resolve_start(domains.front(), cfg);
    job.bridge_correction = cfg.bridge_correction;
    job.seed = cfg.seed;
    job.n_paths = cfg.n_paths;
    job.threads = resolve_threads(cfg);
    for (std::size_t k = 0; k < domains.size(); ++k) {
        const auto& d = domains[k];
        if (d.dim() != domains.front().dim() || d.horizon() != job.horizon)
            throw InputError("batched domains must share dimension and horizon");
        require_start_inside(d, job.start);
        job.targets.push_back({k, 0.0});
    }
    std::vector<const TimeSpaceDomain*> ptrs;
    for (const auto& d : domains) ptrs.push_back(&d);
    job.tables = SectionGrid(ptrs, job.horizon, job.n_steps);
    const auto count = survivors(run_exit_kernel(job), domains.size());
    std::vector<MCEstimate> out;
    for (auto c : count) out.push_back(make_estimate(c, cfg));
    return out;
}

std::vector<GapEstimate> estimate_gaps(const TimeSpaceDomain& domain, const std::vector<double>& eps,
                                       const SimConfig& cfg, std::optional<double> eps_limit) {
    for (double e : eps)
        if (!(e >= 0.0) || !std::isfinite(e)) throw PreconditionError("eps must be finite and >= 0");
    KernelJob job = single_domain_job(domain, cfg);
    job.targets.push_back({0, 0.0});
    for (double e : eps) job.targets.push_back({0, e});
    const std::size_t nt = job.targets.size();
    const auto blocks = run_exit_kernel(job);

    std::vector<std::size_t> outer_count(nt, 0);
    std::vector<std::size_t> gap(nt, 0);
    for (const auto& b : blocks) {
        for (std::size_t p = 0; p < b.size(); p += nt) {
            const bool base = b[p] == kSurvived;
            for (std::size_t j = 1; j < nt; ++j) {
                const bool outer = b[p + j] == kSurvived;
                outer_count[j] += outer;
                gap[j] += outer && !base;
            }
        }
    }
    std::size_t base_survivors = 0;
    for (const auto& b : blocks)
        for (std::size_t p = 0; p < b.size(); p += nt) base_survivors += b[p] == kSurvived;

    std::vector<GapEstimate> out;
    for (std::size_t j = 1; j < nt; ++j) {
        GapEstimate g;
        g.eps = eps[j - 1];
        g.p_inner = make_estimate(base_survivors, cfg);
        g.p_outer = make_estimate(outer_count[j], cfg);
        g.gap_count = gap[j];
        const double n = static_cast<double>(cfg.n_paths);
        g.gap = static_cast<double>(gap[j]) / n;
        g.joint_stderr = std::sqrt(g.gap * (1.0 - g.gap) / n);
        if (eps_limit && g.eps > *eps_limit)
            g.warning = "eps exceeds beta_eff/2 = " + std::to_string(*eps_limit) + "; the gap bound does not apply";
        out.push_back(std::move(g));
    }
    return out;
}

GapEstimate estimate_gap(const TimeSpaceDomain& domain, double eps, const SimConfig& cfg,
                         std::optional<double> eps_limit) {
    return estimate_gaps(domain, {eps}, cfg, eps_limit).front();
}

HittingHistogram hitting_time_histogram(const TimeSpaceDomain& domain, int bins, const SimConfig& cfg) {
    if (bins < 10) throw InputError("histogram needs bins >= 10");
    KernelJob job = single_domain_job(domain, cfg);
    job.targets = {{0, 0.0}};
    const auto blocks = run_exit_kernel(job);

    HittingHistogram h;
    const auto nb = static_cast<std::size_t>(bins);
    const std::uint64_t n_steps = cfg.n_steps;
    h.n = cfg.n_paths;
    h.counts.assign(nb, 0);
    for (const auto& b : blocks) {
        for (std::uint32_t k : b) {
            if (k == kSurvived) {
                ++h.survivors;
                continue;
            }
            // exit time k*dt falls in the right-closed bin ceil(k*bins/n) - 1
            const std::uint64_t bin = (static_cast<std::uint64_t>(k) * nb + n_steps - 1) / n_steps - 1;
            ++h.counts[bin];
        }
    }
    const double n = static_cast<double>(h.n);
    h.edges.resize(nb + 1);
    for (std::size_t i = 0; i <= nb; ++i) h.edges[i] = domain.horizon() * static_cast<double>(i) / bins;
    for (std::size_t i = 0; i < nb; ++i) {
        const double p = static_cast<double>(h.counts[i]) / n;
        h.mass.push_back(p);
        h.std_error.push_back(std::sqrt(p * (1.0 - p) / n));
    }
    h.survivor_mass = static_cast<double>(h.survivors) / n;
    h.step_width = domain.horizon() / static_cast<double>(cfg.n_steps);
    h.note = "exit time recorded at the right end of the offending step (bias at most one step); " +
             survival_note(cfg.bridge_correction);
    return h;
}

MCEstimate bridge_conditional_survival(const TimeSpaceDomain& domain, double t, const Point& z, const SimConfig& cfg) {
    validate(cfg);
    if (!(t > 0.0 && t <= domain.horizon())) throw PreconditionError("bridge time must lie in (0, T]");
    if (!domain.section(t).contains(z)) throw InputError("bridge endpoint z lies outside G_t");
    KernelJob job;
    job.horizon = t;
    job.n_steps = cfg.n_steps;
    job.start = resolve_start(domain, cfg);
    require_start_inside(domain, job.start);
    job.bridge_end = z;
    job.bridge_correction = cfg.bridge_correction;
    job.seed = cfg.seed;
    job.n_paths = cfg.n_paths;
    job.threads = resolve_threads(cfg);
    job.tables = SectionGrid({&domain}, t, cfg.n_steps);
    job.targets = {{0, 0.0}};
    MCEstimate e = make_estimate(survivors(run_exit_kernel(job), 1)[0], cfg);
    e.bias_note = "Brownian bridge to z; " + e.bias_note;
    return e;
}

MCEstimate quick_exit_probability(int m, double r, double K, double h, const SimConfig& cfg) {
    if (!(r > 0.0) || !(K >= 0.0)) throw PreconditionError("quick_exit_probability needs r > 0 and K >= 0");
    if (!(h > 0.0) || !(r - K * h > 0.0)) throw PreconditionError("quick_exit_probability needs 0 < h < r/K");
    const auto domain = make_domain(TruncatedCone{r, K, m}, h);
    MCEstimate e = estimate_survival(domain, cfg);
    e.mean = 1.0 - e.mean;
    e.bias_note = cfg.bridge_correction
                      ? "exit probability; the half-space factor undercounts exits from a ball"
                      : "exit probability; the grid check undercounts exits";
    return e;
}

MCEstimate cone_avoidance_survival(int m, double x_norm, double r, double K, double t, const SimConfig& cfg) {
    if (m < 1) throw InputError("dimension must be >= 1");
    if (!(r > 0.0 && r < x_norm)) throw PreconditionError("cone_avoidance_survival needs 0 < r < |x|");
    if (!(K >= 0.0) || !(t > 0.0)) throw PreconditionError("cone_avoidance_survival needs K >= 0 and t > 0");
    // After s = r/K the ball is gone and nothing can be hit.
    const double horizon = K > 0.0 ? std::min(t, (r / K) * (1.0 - 1e-9)) : t;
    AnnulusTube tube{Point(static_cast<std::size_t>(m), 0.0), Polyline({0.0, horizon}, {r, r - K * horizon}),
                     Polyline::constant(std::numeric_limits<double>::infinity())};
    Point start(static_cast<std::size_t>(m), 0.0);
    start[0] = x_norm;
    const auto domain = make_domain(std::move(tube), horizon, start);
    MCEstimate e = estimate_survival(domain, cfg);
    e.bias_note = "survival outside the shrinking ball up to min(t, r/K); " + e.bias_note;
    return e;
}

RadialDominationResult radial_domination_rate(const Point& x, const Point& y, double t, double beta, double K,
                                              const SimConfig& cfg) {
    validate(cfg);
    if (x.empty() || x.size() != y.size()) throw InputError("x and y must have the same dimension >= 1");
    if (!(beta > 0.0) || !(K > 0.0) || !(t > 0.0)) throw PreconditionError("radial domination needs beta, K, t > 0");
    const double xn = norm(x);
    const double yn = norm(y);
    if (!(xn > beta)) throw PreconditionError("radial domination needs |x| > beta");

    RadialDominationResult res;
    res.late_regime = t >= beta / K;
    if (res.late_regime) {
        res.t0 = beta / (2.0 * K);
        res.a = beta / 2.0;
    } else {
        res.t0 = t / 2.0;
        res.a = beta - K * t / 2.0;
    }
    const int m = static_cast<int>(x.size());
    const double md = m;
    const double dt = t / static_cast<double>(cfg.n_steps);
    const double sqdt = std::sqrt(dt);
    const double ref_drift = (yn - res.a) / (t - res.t0) + (md - 1.0) / (2.0 * res.a);
    res.step = dt;
    res.n = cfg.n_paths;

    auto blocks = run_blocks(cfg.n_paths, resolve_threads(cfg), [&](std::size_t begin, std::size_t end) {
        std::size_t violations = 0;
        Point b(x.size());
        Point dw(x.size());
        for (std::size_t path = begin; path < end; ++path) {
            rng::PathRandom rnd(cfg.seed, path);
            std::copy(x.begin(), x.end(), b.begin());
            double s_rad = xn;
            double gap = 0.0;  // Sbar - S, which only moves through the drifts
            for (std::size_t k = 0; k < cfg.n_steps; ++k) {
                const double s = static_cast<double>(k) * dt;
                if (s >= res.t0 || s_rad <= res.a) break;
                const double bn = norm(b);
                double xi_y = 0.0;
                double dw_tilde = 0.0;
                for (int i = 0; i < m; ++i) {
                    dw[i] = sqdt * rnd.normal();
                    const double xi = bn > 0.0 ? b[i] / bn : (i == 0 ? 1.0 : 0.0);
                    xi_y += xi * y[i];
                    dw_tilde += xi * dw[i];
                }
                const double drift = (xi_y - s_rad) / (t - s) + (md - 1.0) / (2.0 * std::max(s_rad, 1e-9));
                for (int i = 0; i < m; ++i) b[i] += (y[i] - b[i]) / (t - s) * dt + dw[i];
                s_rad += drift * dt + dw_tilde;
                gap += (ref_drift - drift) * dt;
                if (gap < 0.0) {
                    ++violations;
                    break;
                }
            }
        }
        return violations;
    });
    for (auto v : blocks) res.violations += v;
    res.rate = static_cast<double>(res.violations) / static_cast<double>(res.n);
    return res;
}

}  // namespace bcp
