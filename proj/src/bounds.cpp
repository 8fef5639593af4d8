#include "bcp/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "bcp/error.hpp"

namespace bcp {

namespace {

constexpr double kPi = std::numbers::pi;

BoundValue probability(double raw) { return {raw, std::clamp(raw, 0.0, 1.0)}; }

double pos(double x) { return std::max(0.0, x); }

void require_unit_horizon(const DomainCertificate& cert) {
    if (std::abs(cert.T - 1.0) > 1e-12)
        throw PreconditionError("bounds are stated for T = 1; rescale the domain first (T = " +
                                std::to_string(cert.T) + ")");
}

void require_positive_k(const DomainCertificate& cert) {
    if (!(cert.K > 0.0)) throw PreconditionError("gap constant undefined at K=0; pass a positive Lipschitz certificate");
}

void require_unit_interval(double t, const char* what) {
    if (!(t > 0.0 && t < 1.0)) throw PreconditionError(std::string(what) + " needs 0 < t < 1");
}

}  // namespace

double effective_beta(const DomainCertificate& cert) {
    if (!(cert.beta > 0.0)) throw PreconditionError("beta must be positive");
    return std::min(cert.beta, cert.K / 2.0);
}

GapConstant::GapConstant(const DomainCertificate& cert) {
    require_unit_horizon(cert);
    require_positive_k(cert);
    if (!(cert.gamma >= 0.0) || !std::isfinite(cert.gamma)) throw PreconditionError("gamma must be finite and >= 0");
    const double m = cert.m;
    const double k = cert.K;
    const double b = effective_beta(cert);
    const double s2pi = std::sqrt(2.0 / kPi);
    beta_eff_ = b;
    c_star_ = s2pi + 8.0 * m * m * cert.gamma * s2pi * (std::sqrt(k / (kPi * b)) + 2.0 * (b + 2.0) + (m - 1.0) / b + k);
    c_ = 2.0 * (c_star_ + std::sqrt(2.0 * k / (kPi * b)) + 2.0 * (m - 1.0) / b + k);
}

CertifiedBound GapConstant::at(double eps) const {
    if (!(eps >= 0.0)) throw PreconditionError("epsilon must be >= 0");
    if (eps > max_epsilon())
        throw PreconditionError("epsilon " + std::to_string(eps) + " exceeds beta_eff/2 = " +
                                std::to_string(max_epsilon()));
    return {eps, c_, c_star_, std::min(1.0, c_ * eps), beta_eff_};
}

GapConstant gap_constant(const DomainCertificate& cert) { return GapConstant(cert); }

EnvelopeBranches density_envelope_branches(double t, const DomainCertificate& cert) {
    require_unit_interval(t, "density_envelope");
    require_positive_k(cert);
    const double m = cert.m;
    const double k = cert.K;
    const double b = effective_beta(cert);
    const double scale = 8.0 * m * m * cert.gamma;
    EnvelopeBranches out;
    out.split = std::min(b / k, 1.0);
    out.early = scale * (std::sqrt(1.0 / (kPi * t)) + (m - 1.0) / (2.0 * b - k * t) + 2.0 * k + 2.0 / t);
    out.late = scale * (std::sqrt(k / (kPi * b)) + (b + 2.0) / (2.0 * t - b / k) + (m - 1.0) / b + k);
    return out;
}

double density_envelope(double t, const DomainCertificate& cert) {
    const auto br = density_envelope_branches(t, cert);
    return t < br.split ? br.early : br.late;
}

BoundValue survival_given_endpoint_bound(double t, double z_norm, double r, const DomainCertificate& cert) {
    require_unit_interval(t, "survival_given_endpoint_bound");
    require_positive_k(cert);
    if (!(r > 0.0)) throw PreconditionError("survival_given_endpoint_bound needs r > 0");
    const double m = cert.m;
    const double k = cert.K;
    const double b = effective_beta(cert);
    if (t < b / k)
        return probability(2.0 * r *
                           (std::sqrt(1.0 / (kPi * t)) + 2.0 * (z_norm + r) / t + (m - 1.0) / (2.0 * b - k * t) + 2.0 * k));
    return probability(2.0 * r *
                       (std::sqrt(k / (kPi * b)) + (z_norm + r + b / 2.0) / (t - b / (2.0 * k)) + (m - 1.0) / b + k));
}

BoundValue bridge_cone_survival_bound(double u, double t, double x_norm, double y_norm, const DomainCertificate& cert) {
    require_positive_k(cert);
    const double m = cert.m;
    const double k = cert.K;
    const double b = effective_beta(cert);
    if (!(x_norm >= b)) throw PreconditionError("bridge_cone_survival_bound needs |x| >= beta");
    if (!(u > 0.0) || !(t > 0.0)) throw PreconditionError("bridge_cone_survival_bound needs u > 0 and t > 0");
    const double lead = x_norm - b;
    const double root = std::sqrt(2.0 / (kPi * u));
    if (t < b / k) {
        if (!(u <= t / 2.0)) throw PreconditionError("regime t < beta/K requires u <= t/2");
        return probability(lead * (root + 2.0 * pos(2.0 * (y_norm - b) / t + (m - 1.0) / (2.0 * b - k * t) + 2.0 * k)));
    }
    if (!(u <= b / (2.0 * k))) throw PreconditionError("regime t >= beta/K requires u <= beta/(2K)");
    return probability(lead * (root + 2.0 * pos((y_norm - b / 2.0) / (t - b / (2.0 * k)) + (m - 1.0) / b + k)));
}

BoundValue quick_exit_bound(double h, double r, double t, const DomainCertificate& cert) {
    if (!(r > 0.0)) throw PreconditionError("quick_exit_bound needs r > 0");
    if (!(cert.K >= 0.0)) throw PreconditionError("quick_exit_bound needs K >= 0");
    const double limit = std::min(cert.K > 0.0 ? r / cert.K : std::numeric_limits<double>::infinity(), 1.0 - t);
    if (!(h > 0.0 && h < limit))
        throw PreconditionError("quick_exit_bound needs 0 < h < min(r/K, 1-t) = " + std::to_string(limit));
    const double m = cert.m;
    return probability(2.0 * m * std::exp(r * cert.K / m - r * r / (2.0 * h * m)));
}

BoundValue cone_survival_bound(double t, double x_norm, double r, double K, int m) {
    if (!(r > 0.0 && r < x_norm)) throw PreconditionError("cone_survival_bound needs 0 < r < |x|");
    if (!(t > 0.0)) throw PreconditionError("cone_survival_bound needs t > 0");
    if (!(K >= 0.0)) throw PreconditionError("cone_survival_bound needs K >= 0");
    const double md = m;
    const double lead = 2.0 * (x_norm - r);
    if (K == 0.0 || t < r / K)
        return probability(lead * (std::sqrt(1.0 / (kPi * t)) + (md - 1.0) / (2.0 * r - K * t) + K));
    return probability(lead * (std::sqrt(K / (kPi * r)) + (md - 1.0) / r + K));
}

BoundValue linear_noncrossing_bound(double t, double c, double eps) {
    if (!(t > 0.0)) throw PreconditionError("linear_noncrossing_bound needs t > 0");
    if (!(eps > 0.0)) throw PreconditionError("linear_noncrossing_bound needs eps > 0");
    return probability(eps * (std::sqrt(2.0 / (kPi * t)) + 2.0 * pos(c)));
}

}  // namespace bcp
