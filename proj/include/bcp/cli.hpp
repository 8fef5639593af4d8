#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bcp/domain.hpp"
#include "bcp/mc_engine.hpp"
#include "bcp/serialize.hpp"

namespace bcp::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kFailure = 1, kInputError = 2 };

/// User-supplied certificate values. They replace the estimated ones and are
/// read in unit-horizon coordinates.
struct CertificateOverrides {
    std::optional<double> K;
    std::optional<double> beta;  // +inf: any beta
    std::optional<double> gamma;
    std::optional<double> v0;
};

struct CommandOptions {
    std::string name;  // validate | estimate | certify | density
    std::vector<double> eps{0.005, 0.01, 0.02};
    int bins = 50;
    std::string method = "auto";  // estimate: auto | grid | piecewise_linear
    LipschitzOptions lipschitz{};
    GammaOptions gamma{};
};

struct OutputOptions {
    std::string report = "-";  // "-" is stdout
    std::string csv;           // empty: no CSV
};

struct RunConfig {
    TimeSpaceDomain domain;
    CertificateOverrides certificate;
    SimConfig sim;
    CommandOptions command;
    OutputOptions output;
};

/// Parses a config tree with top-level keys domain, certificate, sim, command
/// and output. Throws ConfigError naming the offending key path.
RunConfig parse_config(const json& j);

/// The effective config with every default filled in. Parsing it again gives
/// the same RunConfig.
json to_json(const RunConfig& cfg);

/// Sets the value at a dotted key path (`sim.seed`). The value is read as
/// JSON when it parses and as a plain string otherwise.
void apply_override(json& config, const std::string& key_path, const std::string& value);

struct CommandResult {
    json report;
    std::string csv;
    int exit_code = kOk;
};

/// Runs one command. `threads` = 0 uses the default thread count.
CommandResult run_command(const RunConfig& cfg, int threads = 0);

/// Full command line: `bcp <command> --config file.json [--threads N] [--key.path value ...]`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bcp::cli
