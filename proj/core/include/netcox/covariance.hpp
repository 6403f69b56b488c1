#pragma once

#include <Eigen/Dense>
#include <random>
#include <string>
#include <vector>

#include "netcox/metrics.hpp"
#include "netcox/network.hpp"

namespace netcox {

/// Mixing distribution F in r_0(t) = int exp(-s t) dF(s), supported on [0, inf).
struct BernsteinCDF {
    enum class Kind { Gamma, InverseGamma, GeneralizedInverseGaussian, Degenerate };

    Kind kind = Kind::Degenerate;
    double tau = 1.0;     // shape (gamma / inverse gamma)
    double phi = 1.0;     // rate (gamma) or scale (inverse gamma)
    double psi = 1.0, chi = 1.0, lambda = 0.0;  // GIG
    double s = 1.0;       // degenerate atom

    static BernsteinCDF gamma(double shape, double rate);
    static BernsteinCDF inverseGamma(double shape, double scale);
    static BernsteinCDF generalizedInverseGaussian(double psi, double chi, double lambda);
    static BernsteinCDF degenerate(double s);

    /// Laplace transform E[exp(-t S)] in closed form (never quadrature).
    double laplace(double t) const;
    double sample(std::mt19937_64& rng) const;
    /// Mean of F; infinity when undefined (inverse gamma with tau <= 1).
    double mean() const;
};

/// Isotropic correlation family r_0 with r_0(0) = 1, completely monotone on
/// the admissible parameter ranges.
class CorrelationFamily {
public:
    enum class Kind { PoweredExponential, Matern, GeneralizedCauchy, Dagum, Bernstein };

    static CorrelationFamily poweredExponential(double phi, double alpha);
    /// exp(-s t): powered exponential with alpha = 1, phi = 1/s.
    static CorrelationFamily exponential(double s);
    static CorrelationFamily matern(double phi, double alpha);
    static CorrelationFamily generalizedCauchy(double phi, double alpha, double tau);
    static CorrelationFamily dagum(double phi, double tau, double alpha);
    static CorrelationFamily bernstein(BernsteinCDF F);

    Kind kind() const { return kind_; }
    double phi() const { return phi_; }
    double alpha() const { return alpha_; }
    double tau() const { return tau_; }
    const BernsteinCDF& mixing() const { return F_; }

    /// r_0(t) in (0, 1], r_0(0) = 1.
    double eval(double t) const;

    /// True when the family is the exponential correlation exp(-s t); s is
    /// reported through *rate (enables the Markov tree simulator).
    bool isExponential(double* rate = nullptr) const;

    std::string describe() const;

private:
    CorrelationFamily() = default;
    Kind kind_ = Kind::PoweredExponential;
    double phi_ = 1.0, alpha_ = 1.0, tau_ = 1.0;
    BernsteinCDF F_;
};

struct IsotropicCovariance {
    double sigma2 = 1.0;
    CorrelationFamily family = CorrelationFamily::exponential(1.0);
    MetricKind metric = MetricKind::Resistance;

    double eval(double t) const { return sigma2 * family.eval(t); }
};

struct ValidityResult {
    bool ok = false;
    std::string reason;
};

/// Resistance metric: always valid (completely monotone families). Geodesic:
/// valid iff the network is a 1-sum of trees and loops.
ValidityResult validate_for_network(const IsotropicCovariance& cov, const LinearNetwork& net);

/// Entry (i,j) = sigma^2 r_0(d(p_i, p_j)).
Eigen::MatrixXd cov_matrix(const IsotropicCovariance& cov, const std::vector<NetPoint>& pts,
                           const MetricEngine& engine);
Eigen::MatrixXd cov_matrix_from_distances(const IsotropicCovariance& cov,
                                          const Eigen::MatrixXd& dist);

/// Log of the modified Bessel function K_nu (nu >= 0, x > 0).
double log_bessel_k(double nu, double x);

}  // namespace netcox
