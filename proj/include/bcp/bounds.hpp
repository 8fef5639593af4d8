#pragma once

#include "bcp/domain.hpp"

namespace bcp {

/// A bound before and after clipping to [0,1].
struct BoundValue {
    double raw;
    double clipped;
};

struct CertifiedBound {
    double epsilon;
    double c;
    double c_star;
    double certified_gap;  // min(1, c * epsilon)
    double beta_eff;
};

/// The gap constant c(K, beta, gamma) for a certificate on the unit horizon:
///   beta_eff = min(beta, K/2)
///   c*       = sqrt(2/pi) + 8 m^2 gamma sqrt(2/pi) (sqrt(K/(pi beta_eff)) + 2(beta_eff + 2)
///              + (m-1)/beta_eff + K)
///   c        = 2 (c* + sqrt(2K/(pi beta_eff)) + 2(m-1)/beta_eff + K)
/// so that P(G^(eps)) <= P(G) + c eps for 0 <= eps <= beta_eff/2.
class GapConstant {
public:
    explicit GapConstant(const DomainCertificate& cert);

    double c() const noexcept { return c_; }
    double c_star() const noexcept { return c_star_; }
    double beta_eff() const noexcept { return beta_eff_; }
    double max_epsilon() const noexcept { return beta_eff_ / 2.0; }

    /// Throws PreconditionError when eps is negative or above beta_eff/2.
    CertifiedBound at(double eps) const;

private:
    double c_star_;
    double c_;
    double beta_eff_;
};

GapConstant gap_constant(const DomainCertificate& cert);

/// min(beta, K/2); beta = +inf ("any") gives K/2.
double effective_beta(const DomainCertificate& cert);

struct EnvelopeBranches {
    double early;  // first branch, t below the split
    double late;   // second branch
    double split;  // min(beta_eff/K, 1)
};

/// Upper envelope for the density of the first exit time on (0,1).
double density_envelope(double t, const DomainCertificate& cert);

/// Both branches at t, regardless of which one applies.
EnvelopeBranches density_envelope_branches(double t, const DomainCertificate& cert);

/// P(tau > t | W_t = z) <= this, given |z| and r = rho(z, boundary of G_t).
BoundValue survival_given_endpoint_bound(double t, double z_norm, double r, const DomainCertificate& cert);

/// Survival of the reversed bridge in the cone up to time u; x is the start
/// and y the bridge endpoint, |x| >= beta.
BoundValue bridge_cone_survival_bound(double u, double t, double x_norm, double y_norm,
                                      const DomainCertificate& cert);

/// Probability of leaving a ball of radius r around the hit point within
/// time h after t: 2m exp(rK/m - r^2/(2hm)). Needs 0 < h < min(r/K, 1-t).
BoundValue quick_exit_bound(double h, double r, double t, const DomainCertificate& cert);

/// Survival up to t in the shrinking ball of radius r - K s started at |x|.
BoundValue cone_survival_bound(double t, double x_norm, double r, double K, int m);

/// P(sup_{s<=t} (W_s - c s) < eps) <= eps (sqrt(2/(pi t)) + 2 max(c, 0)).
BoundValue linear_noncrossing_bound(double t, double c, double eps);

}  // namespace bcp
