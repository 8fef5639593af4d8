#pragma once

#include <json.hpp>
#include <string>

#include "bcp/domain.hpp"
#include "bcp/error.hpp"
#include "bcp/estimate.hpp"
#include "bcp/mc_engine.hpp"

namespace bcp {

using json = nlohmann::ordered_json;

/// Input error anchored at a key path such as `domain.radius.knots[2]`.
class ConfigError : public InputError {
public:
    ConfigError(const std::string& path, const std::string& message)
        : InputError(path + ": " + message), path_(path) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

/// Numbers, with the strings "inf" and "-inf" standing in for infinities
/// (JSON has no literal for them).
json number_to_json(double x);
double number_from_json(const json& j, const std::string& path);

/// A number or infinity string means a constant; otherwise {knots, values}.
json polyline_to_json(const Polyline& p);
Polyline polyline_from_json(const json& j, const std::string& path);

/// A point array means a constant path; otherwise {knots, values}.
json path_to_json(const VectorPath& p);
VectorPath path_from_json(const json& j, const std::string& path);

json region_to_json(const Region& r);
Region region_from_json(const json& j, const std::string& path);

/// Domain specs: {family, T, start?, ...family fields}.
json domain_to_json(const TimeSpaceDomain& d);
TimeSpaceDomain domain_from_json(const json& j, const std::string& path = "domain");

json certificate_to_json(const DomainCertificate& c);
json estimate_to_json(const MCEstimate& e);
json gap_to_json(const GapEstimate& g);
json histogram_to_json(const HittingHistogram& h);

}  // namespace bcp
