#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "bcp/cli.hpp"

using namespace bcp;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

std::string write_config(const std::string& name, const std::string& text) {
    const auto path = std::filesystem::temp_directory_path() / ("bcp_cli_test_" + name + ".json");
    std::ofstream(path) << text;
    return path.string();
}

Run run(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string without_timestamp(const std::string& report) {
    std::istringstream in(report);
    std::string line;
    std::string out;
    while (std::getline(in, line))
        if (line.find("\"timestamp\"") == std::string::npos) out += line + "\n";
    return out;
}

const char* kShrink = R"({
  "domain": {"family": "ball_tube", "m": 2, "radius": {"knots": [0, 1], "values": [1, 0.75]}},
  "sim": {"n_paths": 4000, "n_steps": 128, "seed": 4},
  "command": {"eps": [0, 0.01, 0.2], "bins": 10, "gamma": {"n": 10000}, "lipschitz": {"points": 32}}
})";

const char* kCylinder = R"({
  "domain": {"family": "ball_tube", "center": [0, 0], "radius": 30},
  "sim": {"n_paths": 2000, "n_steps": 64},
  "command": {"gamma": {"n": 10000}, "lipschitz": {"points": 16}}
})";

}  // namespace

TEST_CASE("config parsing") {
    const auto cfg = cli::parse_config(json::parse(kShrink));
    CHECK(cfg.domain.dim() == 2);
    CHECK(cfg.sim.n_paths == 4000);
    CHECK(cfg.sim.bridge_correction);
    CHECK(cfg.command.eps.size() == 3);
    const auto again = cli::parse_config(cli::to_json(cfg));
    CHECK(cli::to_json(again).dump() == cli::to_json(cfg).dump());

    auto bad = json::parse(kShrink);
    bad["domain"]["radius"]["values"][1] = "x";
    try {
        cli::parse_config(bad);
        FAIL("expected an error");
    } catch (const ConfigError& e) {
        CHECK(e.path() == "domain.radius.values[1]");
    }
    bad = json::parse(kShrink);
    bad["sim"]["n_step"] = 3;
    CHECK_THROWS_WITH_AS(cli::parse_config(bad), "sim.n_step: unknown field", ConfigError);
    bad = json::parse(kShrink);
    bad["domain"]["radius"] = {{"knots", {0, 1}}, {"values", {1, -1}}};
    CHECK_THROWS_AS(cli::parse_config(bad), ConfigError);
    bad = json::parse(kShrink);
    bad["extra"] = 1;
    CHECK_THROWS_AS(cli::parse_config(bad), ConfigError);

    json j = json::parse(kShrink);
    cli::apply_override(j, "sim.seed", "9");
    cli::apply_override(j, "command.gamma.v_grid", "[0.01, 0.02]");
    cli::apply_override(j, "output.report", "out.json");
    const auto o = cli::parse_config(j);
    CHECK(o.sim.seed == 9);
    CHECK(o.command.gamma.v_grid.size() == 2);
    CHECK(o.output.report == "out.json");
}

TEST_CASE("exit codes for bad input") {
    const auto path = write_config("malformed", "{\"domain\": {\"family\": \"ball_tube\",, }");
    const auto r = run({"validate", "-c", path});
    CHECK(r.code == 2);
    CHECK(r.err.find("line 1") != std::string::npos);

    const auto p2 = write_config("shrink", kShrink);
    const auto r2 = run({"validate", "-c", p2, "--domain.radius", "-1"});
    CHECK(r2.code == 2);
    CHECK(r2.err.find("domain") != std::string::npos);
    CHECK(run({"density", "-c", p2, "--command.bins", "9"}).code == 2);
    CHECK(run({"frobnicate", "-c", p2}).code == 2);
    CHECK(run({"estimate", "-c", p2, "--sim.seed"}).code == 2);
}

TEST_CASE("validate") {
    const auto r = run({"validate", "-c", write_config("cyl", kCylinder)});
    REQUIRE(r.code == 0);
    const auto rep = json::parse(r.out);
    CHECK(rep["version"] == "0.1.0");
    CHECK(rep["result"]["certificate"]["K"] == 0.0);
    CHECK(rep["result"]["certificate"]["warnings"].size() == 1);
    CHECK(rep["config"]["sim"]["n_steps"] == 64);

    const auto s = run({"validate", "-c", write_config("shrink", kShrink)});
    REQUIRE(s.code == 0);
    CHECK(json::parse(s.out)["result"]["certificate"]["K"].get<double>() == doctest::Approx(0.25).epsilon(1e-6));

    const char* annulus = R"({"domain": {"family": "static_region", "start": [1, 0],
        "region": {"type": "annulus", "center": [0, 0], "inner": 0.5, "outer": 2}},
        "command": {"gamma": {"n": 10000}, "lipschitz": {"points": 8}}})";
    const auto a = run({"validate", "-c", write_config("ann", annulus)});
    CHECK(a.code == 1);
    CHECK(a.err.find("needs manual certificate") != std::string::npos);
    CHECK(run({"validate", "-c", write_config("ann", annulus), "--certificate.beta", "0.5"}).code == 0);
}

TEST_CASE("estimate") {
    const char* band = R"({"domain": {"family": "band1d_tube", "lower": -1, "upper": 1},
        "sim": {"n_paths": 50000, "seed": 2}})";
    const auto r = run({"estimate", "-c", write_config("band", band)});
    REQUIRE(r.code == 0);
    const auto res = json::parse(r.out)["result"];
    CHECK(res["method"] == "piecewise_linear");
    CHECK(std::abs(res["mean"].get<double>() - 0.370777429799524) < 3.0 * res["std_error"].get<double>());

    const auto c = run({"estimate", "-c", write_config("cyl", kCylinder)});
    REQUIRE(c.code == 0);
    CHECK(json::parse(c.out)["result"]["mean"].get<double>() >= 0.999);
}

TEST_CASE("reports are reproducible") {
    const auto path = write_config("shrink", kShrink);
    for (const char* cmd : {"estimate", "certify", "density"}) {
        const auto a = run({cmd, "-c", path, "--threads", "1"});
        const auto b = run({cmd, "-c", path, "--threads", "3"});
        CHECK(a.code == b.code);
        CHECK(without_timestamp(a.out) == without_timestamp(b.out));
        CHECK(a.out.find("\"timestamp\"") != std::string::npos);
    }
    const auto csv1 = std::filesystem::temp_directory_path() / "bcp_cli_density1.csv";
    const auto csv2 = std::filesystem::temp_directory_path() / "bcp_cli_density2.csv";
    run({"density", "-c", path, "--output.csv", csv1.string(), "--output.report", "/dev/null"});
    run({"density", "-c", path, "--output.csv", csv2.string(), "--output.report", "/dev/null"});
    std::ifstream f1(csv1), f2(csv2);
    std::stringstream s1, s2;
    s1 << f1.rdbuf();
    s2 << f2.rdbuf();
    CHECK(s1.str() == s2.str());
    CHECK(s1.str().rfind("bin_lo,bin_hi,mass,stderr", 0) == 0);

    // the embedded config reruns to the same report
    const auto first = run({"certify", "-c", path});
    const auto embedded = write_config("embedded", json::parse(first.out)["config"].dump());
    const auto second = run({"certify", "-c", embedded});
    CHECK(without_timestamp(first.out) == without_timestamp(second.out));
}

TEST_CASE("certify") {
    const auto r = run({"certify", "-c", write_config("shrink", kShrink)});
    CHECK(r.code == 1);  // the eps = 0.2 row exceeds beta_eff/2
    const auto rows = json::parse(r.out)["result"]["rows"];
    REQUIRE(rows.size() == 3);
    CHECK(rows[0]["gap"] == 0.0);
    CHECK(rows[0]["bound"] == 0.0);
    CHECK(rows[0]["pass"] == true);
    CHECK(rows[1]["pass"] == true);
    CHECK(rows[2].contains("error"));

    const auto ok = run({"certify", "-c", write_config("shrink", kShrink), "--command.eps", "[0, 0.01]"});
    CHECK(ok.code == 0);

    const auto k0 = run({"certify", "-c", write_config("cyl", kCylinder)});
    CHECK(k0.code == 1);
    CHECK(k0.err.find("undefined at K=0") != std::string::npos);
}

TEST_CASE("density") {
    const auto w = run({"density", "-c", write_config("cyl", kCylinder), "--command.bins", "10"});
    CHECK(w.code == 0);
    const auto res = json::parse(w.out)["result"];
    CHECK(res["violations"] == 0);
    CHECK(res["histogram"]["survivor_mass"] == 1.0);

    const auto s = run({"density", "-c", write_config("shrink", kShrink)});
    CHECK(s.code == 0);
    CHECK(json::parse(s.out)["result"]["bins"].size() == 10);
}

TEST_CASE("time normalization") {
    const char* longer = R"({"domain": {"family": "ball_tube", "m": 2, "T": 4,
        "radius": {"knots": [0, 4], "values": [2, 1.5]}},
        "sim": {"n_paths": 2000, "n_steps": 64},
        "command": {"eps": [0.02], "gamma": {"n": 10000}, "lipschitz": {"points": 16}}})";
    const auto r = run({"certify", "-c", write_config("long", longer)});
    REQUIRE(r.code == 0);
    const auto rep = json::parse(r.out);
    CHECK(rep["time_normalization"]["rescaled"] == true);
    CHECK(rep["time_normalization"]["space_factor"] == 0.5);
    CHECK(rep["result"]["certificate"]["T"] == 1.0);
    CHECK(rep["result"]["certificate"]["K"].get<double>() == doctest::Approx(0.25).epsilon(1e-6));
    CHECK(rep["result"]["rows"][0]["eps_unit"] == 0.01);
}
