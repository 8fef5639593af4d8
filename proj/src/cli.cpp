#include "bcp/cli.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include "bcp/bounds.hpp"
#include "bcp/closedform.hpp"
#include "bcp/error.hpp"
#include "bcp/parallel.hpp"
#include "bcp/rng.hpp"

namespace bcp::cli {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void only_keys(const json& j, const std::string& path, const std::set<std::string>& allowed) {
    if (!j.is_object()) throw ConfigError(path, "expected an object");
    for (const auto& [key, value] : j.items())
        if (!allowed.contains(key)) throw ConfigError(path.empty() ? key : path + "." + key, "unknown field");
}

template <class T>
T integer(const json& j, const std::string& path, T min) {
    if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
    if (j.is_number_unsigned()) {
        const auto v = j.get<std::uint64_t>();
        if (v < static_cast<std::uint64_t>(min)) throw ConfigError(path, "must be >= " + std::to_string(min));
        return static_cast<T>(v);
    }
    const auto v = j.get<std::int64_t>();
    if (v < static_cast<std::int64_t>(min)) throw ConfigError(path, "must be >= " + std::to_string(min));
    return static_cast<T>(v);
}

bool boolean(const json& j, const std::string& path) {
    if (!j.is_boolean()) throw ConfigError(path, "expected true or false");
    return j.get<bool>();
}

std::vector<double> numbers(const json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number_from_json(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

std::string string(const json& j, const std::string& path) {
    if (!j.is_string()) throw ConfigError(path, "expected a string");
    return j.get<std::string>();
}

json numbers_json(const std::vector<double>& v) {
    json out = json::array();
    for (double x : v) out.push_back(number_to_json(x));
    return out;
}

std::string timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream s;
    s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return s.str();
}

std::string csv_number(double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

// --- certificate -------------------------------------------------------------------

DomainCertificate build_certificate(const TimeSpaceDomain& unit, const RunConfig& cfg, int threads) {
    const auto& over = cfg.certificate;
    DomainCertificate cert;
    cert.m = unit.dim();
    cert.T = unit.horizon();
    const Provenance user{ProvenanceKind::user, 0, 0, "supplied in the config"};

    if (over.K) {
        cert.K = *over.K;
        cert.K_provenance = user;
    } else {
        const auto k = estimate_lipschitz(unit, cfg.command.lipschitz);
        cert.K = k.K;
        cert.K_provenance = {ProvenanceKind::estimated, 0, k.grid_points,
                             "grid estimate (lower bound on the true rate)"};
    }
    if (cert.K == 0.0) cert.warnings.push_back("K = 0: the gap constant needs K > 0");

    if (over.beta) {
        cert.beta = *over.beta;
        cert.beta_provenance = user;
    } else {
        cert.beta = exterior_ball_radius(unit);
        cert.beta_provenance = {ProvenanceKind::analytic, 0, 0,
                                cert.any_beta() ? "convex sections: any beta" : "inner radius of the annulus"};
    }

    if (over.gamma && over.v0) {
        cert.gamma = *over.gamma;
        cert.v0 = *over.v0;
        cert.gamma_provenance = user;
        cert.v0_provenance = user;
    } else {
        GammaOptions g = cfg.command.gamma;
        g.threads = threads;
        const auto est = estimate_gamma(unit, g);
        cert.gamma = est.gamma;
        cert.v0 = est.v0;
        if (est.exact)
            cert.gamma_provenance = {ProvenanceKind::analytic, 0, 0, "closed-form band integral"};
        else
            cert.gamma_provenance = {ProvenanceKind::estimated, est.seed, est.n,
                                     "Monte Carlo, inflated by 3 standard errors"};
        cert.v0_provenance = cert.gamma_provenance;
        cert.v0_provenance.note = "largest grid v with linear growth, one value for all t";
        if (over.gamma) {
            cert.gamma = *over.gamma;
            cert.gamma_provenance = user;
        }
        if (over.v0) {
            cert.v0 = *over.v0;
            cert.v0_provenance = user;
        }
    }
    return cert;
}

json normalization_log(const TimeSpaceDomain& d, bool used) {
    const double T = d.horizon();
    json out{{"T", T}, {"rescaled", used && T != 1.0}};
    if (!used) {
        out["note"] = "not needed: the command works on the domain as given";
    } else if (T == 1.0) {
        out["note"] = "T = 1 already";
    } else {
        out["time_factor"] = 1.0 / T;
        out["space_factor"] = 1.0 / std::sqrt(T);
        out["note"] = "time scaled by 1/T and space by 1/sqrt(T); K and gamma estimated on the rescaled domain; "
                      "eps converted to eps/sqrt(T); histogram times are in rescaled units";
    }
    return out;
}

// Barriers relative to the start value, with constants stretched over [0, T].
Polyline relative_barrier(const Polyline& p, double x0, double T) {
    if (p.is_infinite()) return p;
    auto knots = p.knots();
    auto values = p.values();
    if (knots.size() == 1) {
        knots = {0.0, T};
        values = {values.front(), values.front()};
    }
    for (auto& v : values) v -= x0;
    return Polyline(std::move(knots), std::move(values));
}

// --- commands ---------------------------------------------------------------------

CommandResult cmd_validate(const RunConfig& cfg, int threads) {
    const auto unit = cfg.domain.rescaled_to_unit_horizon();
    CommandResult r;
    r.report["time_normalization"] = normalization_log(cfg.domain, true);
    const auto cert = build_certificate(unit, cfg, threads);
    r.report["result"] = {{"certificate", certificate_to_json(cert)}};
    return r;
}

CommandResult cmd_estimate(const RunConfig& cfg, int threads) {
    CommandResult r;
    r.report["time_normalization"] = normalization_log(cfg.domain, false);
    const auto* band = std::get_if<Band1DTube>(&cfg.domain.family());
    std::string method = cfg.command.method;
    if (method == "auto") method = band ? "piecewise_linear" : "grid";
    MCEstimate e;
    if (method == "piecewise_linear") {
        if (!band) throw ConfigError("command.method", "piecewise_linear needs a band1d_tube domain");
        const double x0 = cfg.domain.start()[0];
        const double T = cfg.domain.horizon();
        PiecewiseLinearOptions o;
        o.n = cfg.sim.n_paths;
        o.seed = cfg.sim.seed;
        o.threads = threads;
        e = piecewise_linear_bcp_1d(relative_barrier(band->lower, x0, T), relative_barrier(band->upper, x0, T), o);
    } else {
        SimConfig sim = cfg.sim;
        sim.threads = threads;
        e = estimate_survival(cfg.domain, sim);
    }
    r.report["result"] = estimate_to_json(e);
    r.report["result"]["method"] = method;
    return r;
}

CommandResult cmd_certify(const RunConfig& cfg, int threads) {
    const auto unit = cfg.domain.rescaled_to_unit_horizon();
    const double scale = 1.0 / std::sqrt(cfg.domain.horizon());
    CommandResult r;
    r.report["time_normalization"] = normalization_log(cfg.domain, true);
    const auto cert = build_certificate(unit, cfg, threads);
    r.report["result"]["certificate"] = certificate_to_json(cert);
    const auto gc = gap_constant(cert);
    r.report["result"]["c"] = gc.c();
    r.report["result"]["c_star"] = gc.c_star();
    r.report["result"]["beta_eff"] = gc.beta_eff();

    struct Row {
        double eps;
        double eps_unit;
        std::optional<CertifiedBound> bound;
        std::string error;
    };
    std::vector<Row> rows;
    std::vector<double> valid;
    for (double eps : cfg.command.eps) {
        Row row{eps, eps * scale, std::nullopt, {}};
        try {
            row.bound = gc.at(row.eps_unit);
            valid.push_back(row.eps_unit);
        } catch (const PreconditionError& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    std::vector<GapEstimate> gaps;
    if (!valid.empty()) {
        SimConfig sim = cfg.sim;
        sim.threads = threads;
        gaps = estimate_gaps(unit, valid, sim, gc.max_epsilon());
    }

    json table = json::array();
    std::ostringstream csv;
    csv << "eps,eps_unit,p_inner,p_outer,gap,joint_stderr,bound,pass,error\n";
    std::size_t next = 0;
    bool all_pass = true;
    for (const auto& row : rows) {
        json j{{"eps", row.eps}, {"eps_unit", row.eps_unit}};
        if (!row.bound) {
            all_pass = false;
            j["error"] = row.error;
            csv << csv_number(row.eps) << ',' << csv_number(row.eps_unit) << ",,,,,,false,\"" << row.error << "\"\n";
        } else {
            const auto& g = gaps[next++];
            const bool pass = g.gap <= row.bound->certified_gap + 3.0 * g.joint_stderr;
            all_pass = all_pass && pass;
            j.update(gap_to_json(g));
            j["eps"] = row.eps;
            j["bound"] = row.bound->certified_gap;
            j["pass"] = pass;
            csv << csv_number(row.eps) << ',' << csv_number(row.eps_unit) << ',' << csv_number(g.p_inner.mean) << ','
                << csv_number(g.p_outer.mean) << ',' << csv_number(g.gap) << ',' << csv_number(g.joint_stderr) << ','
                << csv_number(row.bound->certified_gap) << ',' << (pass ? "true" : "false") << ",\n";
        }
        table.push_back(std::move(j));
    }
    r.report["result"]["rows"] = std::move(table);
    r.report["result"]["n_paths"] = cfg.sim.n_paths;
    r.csv = csv.str();
    r.exit_code = all_pass ? kOk : kFailure;
    return r;
}

CommandResult cmd_density(const RunConfig& cfg, int threads) {
    const auto unit = cfg.domain.rescaled_to_unit_horizon();
    CommandResult r;
    r.report["time_normalization"] = normalization_log(cfg.domain, true);
    const auto cert = build_certificate(unit, cfg, threads);
    r.report["result"]["certificate"] = certificate_to_json(cert);
    SimConfig sim = cfg.sim;
    sim.threads = threads;
    const auto h = hitting_time_histogram(unit, cfg.command.bins, sim);
    const bool have_envelope = cert.K > 0.0;

    std::ostringstream csv;
    csv << "bin_lo,bin_hi,mass,stderr,density,density_stderr,envelope_mid,envelope_min,violation\n";
    std::size_t violations = 0;
    std::size_t unchecked = 0;
    json bins = json::array();
    for (std::size_t b = 0; b + 1 < h.edges.size(); ++b) {
        const double lo = h.edges[b];
        const double hi = h.edges[b + 1];
        const double width = hi - lo;
        const double density = h.mass[b] / width;
        const double dse = h.std_error[b] / width;
        double mid = std::numeric_limits<double>::quiet_NaN();
        double lowest = std::numeric_limits<double>::quiet_NaN();
        bool violation = false;
        if (have_envelope) {
            mid = density_envelope(0.5 * (lo + hi), cert);
            lowest = kInf;
            constexpr int kSamples = 64;
            for (int k = 0; k <= kSamples; ++k) {
                const double t = lo + width * k / kSamples;
                if (t > 0.0 && t < 1.0) lowest = std::min(lowest, density_envelope(t, cert));
            }
            violation = density - 3.0 * dse > lowest;
        } else if (h.counts[b] > 0) {
            ++unchecked;
        }
        violations += violation ? 1 : 0;
        csv << csv_number(lo) << ',' << csv_number(hi) << ',' << csv_number(h.mass[b]) << ','
            << csv_number(h.std_error[b]) << ',' << csv_number(density) << ',' << csv_number(dse) << ','
            << (have_envelope ? csv_number(mid) : "") << ',' << (have_envelope ? csv_number(lowest) : "") << ','
            << (violation ? "true" : "false") << '\n';
        json j{{"bin_lo", lo}, {"bin_hi", hi}, {"mass", h.mass[b]}, {"stderr", h.std_error[b]}, {"density", density}};
        if (have_envelope) {
            j["envelope_mid"] = mid;
            j["envelope_min"] = lowest;
        }
        j["violation"] = violation;
        bins.push_back(std::move(j));
    }
    r.report["result"]["histogram"] = histogram_to_json(h);
    r.report["result"]["bins"] = std::move(bins);
    r.report["result"]["violations"] = violations;
    if (!have_envelope) {
        r.report["result"]["envelope"] = "unavailable: the envelope needs K > 0";
        r.report["result"]["unchecked_bins"] = unchecked;
    }
    r.csv = csv.str();
    r.exit_code = (violations == 0 && unchecked == 0) ? kOk : kFailure;
    return r;
}

}  // namespace

RunConfig parse_config(const json& j) {
    only_keys(j, "", {"domain", "certificate", "sim", "command", "output"});
    if (!j.contains("domain")) throw ConfigError("domain", "missing required field");

    CertificateOverrides cert;
    if (j.contains("certificate")) {
        const auto& c = j["certificate"];
        only_keys(c, "certificate", {"K", "beta", "gamma", "v0"});
        auto positive = [&](const char* key, bool allow_zero) -> std::optional<double> {
            if (!c.contains(key)) return std::nullopt;
            const std::string path = std::string("certificate.") + key;
            const double v = number_from_json(c[key], path);
            if (!(allow_zero ? v >= 0.0 : v > 0.0) || std::isnan(v))
                throw ConfigError(path, allow_zero ? "must be >= 0" : "must be > 0");
            if (std::isinf(v) && std::string(key) != "beta") throw ConfigError(path, "must be finite");
            return v;
        };
        cert.K = positive("K", true);
        if (c.contains("beta") && c["beta"].is_string() && c["beta"].get<std::string>() == "any")
            cert.beta = kInf;
        else
            cert.beta = positive("beta", false);
        cert.gamma = positive("gamma", true);
        cert.v0 = positive("v0", false);
    }

    SimConfig sim;
    if (j.contains("sim")) {
        const auto& s = j["sim"];
        only_keys(s, "sim", {"n_paths", "n_steps", "seed", "bridge_correction"});
        if (s.contains("n_paths")) sim.n_paths = integer<std::size_t>(s["n_paths"], "sim.n_paths", 1);
        if (s.contains("n_steps")) sim.n_steps = integer<std::size_t>(s["n_steps"], "sim.n_steps", 2);
        if (s.contains("seed")) sim.seed = integer<std::uint64_t>(s["seed"], "sim.seed", 0);
        if (s.contains("bridge_correction")) sim.bridge_correction = boolean(s["bridge_correction"], "sim.bridge_correction");
    }

    CommandOptions cmd;
    if (j.contains("command")) {
        const auto& c = j["command"];
        only_keys(c, "command", {"name", "eps", "bins", "method", "lipschitz", "gamma"});
        if (c.contains("name")) cmd.name = string(c["name"], "command.name");
        if (c.contains("eps")) cmd.eps = numbers(c["eps"], "command.eps");
        if (c.contains("bins")) cmd.bins = integer<int>(c["bins"], "command.bins", 10);
        if (c.contains("method")) {
            cmd.method = string(c["method"], "command.method");
            if (cmd.method != "auto" && cmd.method != "grid" && cmd.method != "piecewise_linear")
                throw ConfigError("command.method", "expected auto, grid or piecewise_linear");
        }
        if (c.contains("lipschitz")) {
            const auto& l = c["lipschitz"];
            only_keys(l, "command.lipschitz", {"points", "rel_tol", "max_points", "pitch"});
            if (l.contains("points")) cmd.lipschitz.points = integer<std::size_t>(l["points"], "command.lipschitz.points", 2);
            if (l.contains("rel_tol")) cmd.lipschitz.rel_tol = number_from_json(l["rel_tol"], "command.lipschitz.rel_tol");
            if (l.contains("max_points"))
                cmd.lipschitz.max_points = integer<std::size_t>(l["max_points"], "command.lipschitz.max_points", 2);
            if (l.contains("pitch")) cmd.lipschitz.metric.pitch = number_from_json(l["pitch"], "command.lipschitz.pitch");
        }
        if (c.contains("gamma")) {
            const auto& g = c["gamma"];
            only_keys(g, "command.gamma", {"t_grid", "v_grid", "n", "seed", "allow_exact", "max_relative_halfwidth"});
            if (g.contains("t_grid")) cmd.gamma.t_grid = numbers(g["t_grid"], "command.gamma.t_grid");
            if (g.contains("v_grid")) cmd.gamma.v_grid = numbers(g["v_grid"], "command.gamma.v_grid");
            if (g.contains("n")) cmd.gamma.n = integer<std::size_t>(g["n"], "command.gamma.n", 1);
            if (g.contains("seed")) cmd.gamma.seed = integer<std::uint64_t>(g["seed"], "command.gamma.seed", 0);
            if (g.contains("allow_exact")) cmd.gamma.allow_exact = boolean(g["allow_exact"], "command.gamma.allow_exact");
            if (g.contains("max_relative_halfwidth"))
                cmd.gamma.max_relative_halfwidth =
                    number_from_json(g["max_relative_halfwidth"], "command.gamma.max_relative_halfwidth");
        }
    }
    if (!cmd.name.empty() && cmd.name != "validate" && cmd.name != "estimate" && cmd.name != "certify" &&
        cmd.name != "density")
        throw ConfigError("command.name", "expected validate, estimate, certify or density");

    OutputOptions out;
    if (j.contains("output")) {
        const auto& o = j["output"];
        only_keys(o, "output", {"report", "csv"});
        if (o.contains("report")) out.report = string(o["report"], "output.report");
        if (o.contains("csv")) out.csv = string(o["csv"], "output.csv");
    }

    return RunConfig{domain_from_json(j["domain"]), cert, sim, cmd, out};
}

json to_json(const RunConfig& cfg) {
    json cert = json::object();
    if (cfg.certificate.K) cert["K"] = *cfg.certificate.K;
    if (cfg.certificate.beta) cert["beta"] = std::isinf(*cfg.certificate.beta) ? json("any") : json(*cfg.certificate.beta);
    if (cfg.certificate.gamma) cert["gamma"] = *cfg.certificate.gamma;
    if (cfg.certificate.v0) cert["v0"] = *cfg.certificate.v0;
    const auto& c = cfg.command;
    return {{"domain", domain_to_json(cfg.domain)},
            {"certificate", cert},
            {"sim",
             {{"n_paths", cfg.sim.n_paths},
              {"n_steps", cfg.sim.n_steps},
              {"seed", cfg.sim.seed},
              {"bridge_correction", cfg.sim.bridge_correction}}},
            {"command",
             {{"name", c.name},
              {"eps", numbers_json(c.eps)},
              {"bins", c.bins},
              {"method", c.method},
              {"lipschitz",
               {{"points", c.lipschitz.points},
                {"rel_tol", c.lipschitz.rel_tol},
                {"max_points", c.lipschitz.max_points},
                {"pitch", c.lipschitz.metric.pitch}}},
              {"gamma",
               {{"t_grid", numbers_json(c.gamma.t_grid)},
                {"v_grid", numbers_json(c.gamma.v_grid)},
                {"n", c.gamma.n},
                {"seed", c.gamma.seed},
                {"allow_exact", c.gamma.allow_exact},
                {"max_relative_halfwidth", c.gamma.max_relative_halfwidth}}}}},
            {"output", {{"report", cfg.output.report}, {"csv", cfg.output.csv}}}};
}

void apply_override(json& config, const std::string& key_path, const std::string& value) {
    if (key_path.empty()) throw ConfigError(key_path, "empty override key");
    json parsed = json::parse(value, nullptr, false);
    if (parsed.is_discarded()) parsed = value;
    json* node = &config;
    std::size_t begin = 0;
    while (true) {
        const auto dot = key_path.find('.', begin);
        const auto key = key_path.substr(begin, dot == std::string::npos ? std::string::npos : dot - begin);
        if (key.empty()) throw ConfigError(key_path, "malformed override key");
        if (!node->is_object()) {
            if (!node->is_null()) throw ConfigError(key_path.substr(0, begin ? begin - 1 : 0), "is not an object");
            *node = json::object();
        }
        node = &(*node)[key];
        if (dot == std::string::npos) break;
        begin = dot + 1;
    }
    *node = std::move(parsed);
}

CommandResult run_command(const RunConfig& cfg, int threads) {
    if (threads <= 0) threads = default_thread_count();
    CommandResult r;
    const auto& name = cfg.command.name;
    if (name == "validate")
        r = cmd_validate(cfg, threads);
    else if (name == "estimate")
        r = cmd_estimate(cfg, threads);
    else if (name == "certify")
        r = cmd_certify(cfg, threads);
    else if (name == "density")
        r = cmd_density(cfg, threads);
    else
        throw ConfigError("command.name", name.empty() ? "no command given" : "unknown command '" + name + "'");

    json report{{"tool", "bcp"},
                {"version", kVersion},
                {"generator", std::string(rng::kGeneratorId)},
                {"command", name},
                {"config", to_json(cfg)}};
    for (auto& [key, value] : r.report.items()) report[key] = std::move(value);
    report["status"] = r.exit_code == kOk ? "ok" : "failed";
    report["timestamp"] = timestamp();
    r.report = std::move(report);
    return r;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    // Key-path flags (--sim.seed 7, --sim.seed=7) are split off before CLI11
    // sees the rest.
    std::vector<std::pair<std::string, std::string>> overrides;
    std::vector<std::string> rest;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const auto& a = args[i];
        if (a.rfind("--", 0) == 0 && a.find('.') != std::string::npos && a.find('.') < a.find('=')) {
            const auto eq = a.find('=');
            if (eq != std::string::npos) {
                overrides.emplace_back(a.substr(2, eq - 2), a.substr(eq + 1));
            } else if (i + 1 < args.size()) {
                overrides.emplace_back(a.substr(2), args[++i]);
            } else {
                err << "error: " << a << " needs a value\n";
                return kInputError;
            }
        } else {
            rest.push_back(a);
        }
    }

    CLI::App app{"Boundary crossing probabilities of Brownian motion: certification and Monte Carlo"};
    std::string command;
    std::string config_path;
    int threads = 0;
    app.add_option("command", command, "validate | estimate | certify | density");
    app.add_option("-c,--config", config_path, "JSON config file");
    app.add_option("-t,--threads", threads, "worker threads (default: BCP_THREADS or hardware)")->check(CLI::NonNegativeNumber);
    app.footer("Any config value can be set with --<key.path> <value>, e.g. --sim.seed 7.");
    try {
        std::vector<std::string> reversed(rest.rbegin(), rest.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }

    RunConfig cfg{make_domain(Band1DTube{Polyline::constant(-1.0), Polyline::constant(1.0)}, 1.0), {}, {}, {}, {}};
    try {
        json j = json::object();
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) {
                err << "error: cannot open config file " << config_path << '\n';
                return kInputError;
            }
            try {
                j = json::parse(in);
            } catch (const json::parse_error& e) {
                err << "error: " << config_path << ": " << e.what() << '\n';
                return kInputError;
            }
        }
        for (const auto& [key, value] : overrides) apply_override(j, key, value);
        if (!command.empty()) apply_override(j, "command.name", "\"" + command + "\"");
        cfg = parse_config(j);
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }

    CommandResult result;
    try {
        result = run_command(cfg, threads);
    } catch (const SampleSizeError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }

    const std::string text = result.report.dump(2) + "\n";
    if (cfg.output.report == "-") {
        out << text;
    } else {
        std::ofstream f(cfg.output.report, std::ios::binary);
        if (!(f << text)) {
            err << "error: cannot write " << cfg.output.report << '\n';
            return kFailure;
        }
    }
    if (!cfg.output.csv.empty() && !result.csv.empty()) {
        std::ofstream f(cfg.output.csv, std::ios::binary);
        if (!(f << result.csv)) {
            err << "error: cannot write " << cfg.output.csv << '\n';
            return kFailure;
        }
    }
    if (result.exit_code != kOk) err << cfg.command.name << ": failed (see report)\n";
    return result.exit_code;
}

}  // namespace bcp::cli
