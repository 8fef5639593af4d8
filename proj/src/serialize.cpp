#include "bcp/serialize.hpp"

#include <cmath>
#include <limits>
#include <set>

namespace bcp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string at(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

const json& require(const json& j, const std::string& path, const std::string& key) {
    if (!j.contains(key)) throw ConfigError(at(path, key), "missing required field");
    return j.at(key);
}

void only_keys(const json& j, const std::string& path, const std::set<std::string>& allowed) {
    if (!j.is_object()) throw ConfigError(path, "expected an object");
    for (const auto& [key, value] : j.items())
        if (!allowed.contains(key)) throw ConfigError(at(path, key), "unknown field");
}

std::vector<double> numbers_from_json(const json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number_from_json(j[i], at(path, i)));
    return out;
}

Point point_from_json(const json& j, const std::string& path) {
    const auto p = numbers_from_json(j, path);
    if (p.empty()) throw ConfigError(path, "a point needs at least one coordinate");
    for (std::size_t i = 0; i < p.size(); ++i)
        if (!std::isfinite(p[i])) throw ConfigError(at(path, i), "coordinates must be finite");
    return p;
}

json numbers_to_json(const std::vector<double>& v) {
    json out = json::array();
    for (double x : v) out.push_back(number_to_json(x));
    return out;
}

std::vector<Halfspace> halfspaces_from_json(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) throw ConfigError(path, "expected a non-empty array of {normal, offset}");
    std::vector<Halfspace> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto p = at(path, i);
        only_keys(j[i], p, {"normal", "offset"});
        out.push_back({point_from_json(require(j[i], p, "normal"), at(p, "normal")),
                       number_from_json(require(j[i], p, "offset"), at(p, "offset"))});
    }
    return out;
}

json halfspaces_to_json(const std::vector<Halfspace>& hs) {
    json out = json::array();
    for (const auto& h : hs) out.push_back({{"normal", numbers_to_json(h.normal)}, {"offset", h.offset}});
    return out;
}

std::string kind_name(ProvenanceKind k) {
    switch (k) {
        case ProvenanceKind::analytic: return "analytic";
        case ProvenanceKind::estimated: return "estimated";
        case ProvenanceKind::user: return "user";
    }
    return "unknown";
}

json provenance_to_json(const Provenance& p) {
    json out{{"kind", kind_name(p.kind)}};
    if (p.kind == ProvenanceKind::estimated) {
        out["seed"] = p.seed;
        out["n"] = p.n;
    }
    out["note"] = p.note;
    return out;
}

// Rethrows errors from the library constructors with the config path attached.
template <class Fn>
auto anchored(const std::string& path, Fn&& fn) {
    try {
        return fn();
    } catch (const ConfigError&) {
        throw;
    } catch (const InputError& e) {
        throw ConfigError(path, e.what());
    }
}

}  // namespace

json number_to_json(double x) {
    if (x == kInf) return "inf";
    if (x == -kInf) return "-inf";
    return x;
}

double number_from_json(const json& j, const std::string& path) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf" || s == "+inf") return kInf;
        if (s == "-inf") return -kInf;
    }
    throw ConfigError(path, "expected a number (or \"inf\" / \"-inf\")");
}

json polyline_to_json(const Polyline& p) {
    if (p.knots().size() == 1) return number_to_json(p.values().front());
    return {{"knots", numbers_to_json(p.knots())}, {"values", numbers_to_json(p.values())}};
}

Polyline polyline_from_json(const json& j, const std::string& path) {
    if (j.is_number() || j.is_string()) return Polyline::constant(number_from_json(j, path));
    only_keys(j, path, {"knots", "values"});
    auto knots = numbers_from_json(require(j, path, "knots"), at(path, "knots"));
    auto values = numbers_from_json(require(j, path, "values"), at(path, "values"));
    return anchored(path, [&] { return Polyline(std::move(knots), std::move(values)); });
}

json path_to_json(const VectorPath& p) {
    if (p.knots().size() == 1) return numbers_to_json(p.values().front());
    json values = json::array();
    for (const auto& v : p.values()) values.push_back(numbers_to_json(v));
    return {{"knots", numbers_to_json(p.knots())}, {"values", values}};
}

VectorPath path_from_json(const json& j, const std::string& path) {
    if (j.is_array()) return VectorPath::constant(point_from_json(j, path));
    only_keys(j, path, {"knots", "values"});
    auto knots = numbers_from_json(require(j, path, "knots"), at(path, "knots"));
    const auto& vj = require(j, path, "values");
    if (!vj.is_array()) throw ConfigError(at(path, "values"), "expected an array of points");
    std::vector<Point> values;
    for (std::size_t i = 0; i < vj.size(); ++i) values.push_back(point_from_json(vj[i], at(at(path, "values"), i)));
    return anchored(path, [&] { return VectorPath(std::move(knots), std::move(values)); });
}

json region_to_json(const Region& r) {
    return std::visit(
        [](const auto& s) -> json {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, Ball>) {
                return {{"type", "ball"}, {"center", numbers_to_json(s.center)}, {"radius", s.radius}};
            } else if constexpr (std::is_same_v<S, ConvexPolytope>) {
                return {{"type", "polytope"}, {"halfspaces", halfspaces_to_json(s.halfspaces)}};
            } else if constexpr (std::is_same_v<S, Band1D>) {
                return {{"type", "band"}, {"lower", number_to_json(s.lower)}, {"upper", number_to_json(s.upper)}};
            } else if constexpr (std::is_same_v<S, Annulus>) {
                return {{"type", "annulus"},
                        {"center", numbers_to_json(s.center)},
                        {"inner", s.inner},
                        {"outer", number_to_json(s.outer)}};
            } else {
                throw UnsupportedError("derived regions have no config representation");
            }
        },
        r.shape());
}

Region region_from_json(const json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path, "expected an object");
    const auto type = require(j, path, "type");
    if (!type.is_string()) throw ConfigError(at(path, "type"), "expected a string");
    const auto t = type.get<std::string>();
    auto num = [&](const char* key) { return number_from_json(require(j, path, key), at(path, key)); };
    if (t == "ball") {
        only_keys(j, path, {"type", "center", "radius"});
        const auto c = point_from_json(require(j, path, "center"), at(path, "center"));
        return anchored(path, [&] { return Region::ball(c, num("radius")); });
    }
    if (t == "polytope") {
        only_keys(j, path, {"type", "halfspaces"});
        auto hs = halfspaces_from_json(require(j, path, "halfspaces"), at(path, "halfspaces"));
        return anchored(path, [&] { return Region::polytope(std::move(hs)); });
    }
    if (t == "band") {
        only_keys(j, path, {"type", "lower", "upper"});
        return anchored(path, [&] { return Region::band(num("lower"), num("upper")); });
    }
    if (t == "annulus") {
        only_keys(j, path, {"type", "center", "inner", "outer"});
        const auto c = point_from_json(require(j, path, "center"), at(path, "center"));
        return anchored(path, [&] { return Region::annulus(c, num("inner"), num("outer")); });
    }
    throw ConfigError(at(path, "type"), "unknown region type '" + t + "' (ball, polytope, band, annulus)");
}

json domain_to_json(const TimeSpaceDomain& d) {
    json out{{"family", d.family_name()}, {"T", d.horizon()}, {"m", d.dim()}};
    std::visit(
        [&](const auto& f) {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, BallTube>) {
                out["center"] = path_to_json(f.center);
                out["radius"] = polyline_to_json(f.radius);
            } else if constexpr (std::is_same_v<F, TruncatedCone>) {
                out["u"] = f.u;
                out["slope"] = f.slope;
            } else if constexpr (std::is_same_v<F, Band1DTube>) {
                out["lower"] = polyline_to_json(f.lower);
                out["upper"] = polyline_to_json(f.upper);
            } else if constexpr (std::is_same_v<F, PolytopeTube>) {
                out["halfspaces"] = halfspaces_to_json(f.halfspaces);
                if (f.translation) out["translation"] = path_to_json(*f.translation);
            } else if constexpr (std::is_same_v<F, AnnulusTube>) {
                out["center"] = numbers_to_json(f.center);
                out["inner"] = polyline_to_json(f.inner);
                out["outer"] = polyline_to_json(f.outer);
            } else {
                out["region"] = region_to_json(f.region);
            }
        },
        d.family());
    out["start"] = numbers_to_json(d.start());
    return out;
}

TimeSpaceDomain domain_from_json(const json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path, "expected an object");
    const auto& fam = require(j, path, "family");
    if (!fam.is_string()) throw ConfigError(at(path, "family"), "expected a string");
    const auto family = fam.get<std::string>();
    const std::set<std::string> common{"family", "T", "m", "start"};
    auto allow = [&](std::set<std::string> extra) {
        extra.insert(common.begin(), common.end());
        only_keys(j, path, extra);
    };
    const double T = j.contains("T") ? number_from_json(j["T"], at(path, "T")) : 1.0;
    std::optional<int> m;
    if (j.contains("m")) {
        if (!j["m"].is_number_integer() || j["m"].get<int>() < 1) throw ConfigError(at(path, "m"), "expected an integer >= 1");
        m = j["m"].get<int>();
    }
    std::optional<Point> start;
    if (j.contains("start")) start = point_from_json(j["start"], at(path, "start"));

    DomainFamily f;
    if (family == "ball_tube") {
        allow({"center", "radius"});
        VectorPath center;
        if (j.contains("center")) {
            center = path_from_json(j["center"], at(path, "center"));
        } else {
            if (!m) throw ConfigError(at(path, "center"), "give a center or the dimension m");
            center = VectorPath::constant(Point(static_cast<std::size_t>(*m), 0.0));
        }
        f = BallTube{std::move(center), polyline_from_json(require(j, path, "radius"), at(path, "radius"))};
    } else if (family == "truncated_cone") {
        allow({"u", "slope"});
        if (!m) throw ConfigError(at(path, "m"), "missing required field");
        f = TruncatedCone{number_from_json(require(j, path, "u"), at(path, "u")),
                          number_from_json(require(j, path, "slope"), at(path, "slope")), *m};
    } else if (family == "band1d_tube") {
        allow({"lower", "upper"});
        f = Band1DTube{polyline_from_json(require(j, path, "lower"), at(path, "lower")),
                       polyline_from_json(require(j, path, "upper"), at(path, "upper"))};
    } else if (family == "polytope_tube") {
        allow({"halfspaces", "translation"});
        PolytopeTube p{halfspaces_from_json(require(j, path, "halfspaces"), at(path, "halfspaces")), std::nullopt};
        if (j.contains("translation")) p.translation = path_from_json(j["translation"], at(path, "translation"));
        f = std::move(p);
    } else if (family == "annulus_tube") {
        allow({"center", "inner", "outer"});
        f = AnnulusTube{point_from_json(require(j, path, "center"), at(path, "center")),
                        polyline_from_json(require(j, path, "inner"), at(path, "inner")),
                        j.contains("outer") ? polyline_from_json(j["outer"], at(path, "outer")) : Polyline::constant(kInf)};
    } else if (family == "static_region") {
        allow({"region"});
        f = StaticRegionTube{region_from_json(require(j, path, "region"), at(path, "region"))};
    } else {
        throw ConfigError(at(path, "family"),
                          "unknown family '" + family +
                              "' (ball_tube, truncated_cone, band1d_tube, polytope_tube, annulus_tube, static_region)");
    }
    auto d = anchored(path, [&] { return make_domain(std::move(f), T, start); });
    if (m && *m != d.dim()) throw ConfigError(at(path, "m"), "does not match the dimension of the shape");
    return d;
}

json certificate_to_json(const DomainCertificate& c) {
    return {{"m", c.m},
            {"T", c.T},
            {"K", c.K},
            {"beta", c.any_beta() ? json("any") : json(c.beta)},
            {"gamma", c.gamma},
            {"v0", c.v0},
            {"provenance",
             {{"K", provenance_to_json(c.K_provenance)},
              {"beta", provenance_to_json(c.beta_provenance)},
              {"gamma", provenance_to_json(c.gamma_provenance)},
              {"v0", provenance_to_json(c.v0_provenance)}}},
            {"warnings", c.warnings}};
}

json estimate_to_json(const MCEstimate& e) {
    return {{"mean", e.mean},
            {"std_error", e.std_error},
            {"n", e.n},
            {"seed", e.seed},
            {"n_steps", e.n_steps},
            {"bridge_correction", e.bridge_correction},
            {"bias_note", e.bias_note}};
}

json gap_to_json(const GapEstimate& g) {
    return {{"eps", g.eps},
            {"p_inner", g.p_inner.mean},
            {"p_outer", g.p_outer.mean},
            {"gap", g.gap},
            {"joint_stderr", g.joint_stderr},
            {"gap_count", g.gap_count},
            {"warning", g.warning}};
}

json histogram_to_json(const HittingHistogram& h) {
    return {{"edges", h.edges},
            {"counts", h.counts},
            {"mass", h.mass},
            {"std_error", h.std_error},
            {"n", h.n},
            {"survivors", h.survivors},
            {"survivor_mass", h.survivor_mass},
            {"step_width", h.step_width},
            {"note", h.note}};
}

}  // namespace bcp
