#include "netcox/covariance.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_bessel.h>
#include <gsl/gsl_sf_gamma.h>

#include <cmath>
#include <mutex>

namespace netcox {

namespace {

void ensureGslQuiet() {
    static std::once_flag flag;
    std::call_once(flag, [] { gsl_set_error_handler_off(); });
}

void require(bool cond, const std::string& what) {
    if (!cond) throw InvalidParameters(what);
}

}  // namespace

double log_bessel_k(double nu, double x) {
    ensureGslQuiet();
    gsl_sf_result res;
    int status = gsl_sf_bessel_lnKnu_e(std::abs(nu), x, &res);
    if (status != GSL_SUCCESS)
        throw InvalidParameters("log K_nu evaluation failed at nu=" + std::to_string(nu) +
                                ", x=" + std::to_string(x));
    return res.val;
}

BernsteinCDF BernsteinCDF::gamma(double shape, double rate) {
    require(shape > 0.0 && rate > 0.0, "gamma Bernstein CDF requires shape > 0 and rate > 0");
    BernsteinCDF f;
    f.kind = Kind::Gamma;
    f.tau = shape;
    f.phi = rate;
    return f;
}

BernsteinCDF BernsteinCDF::inverseGamma(double shape, double scale) {
    require(shape > 0.0 && scale > 0.0,
            "inverse gamma Bernstein CDF requires shape > 0 and scale > 0");
    BernsteinCDF f;
    f.kind = Kind::InverseGamma;
    f.tau = shape;
    f.phi = scale;
    return f;
}

BernsteinCDF BernsteinCDF::generalizedInverseGaussian(double psi, double chi, double lambda) {
    require(psi > 0.0 && chi > 0.0, "GIG Bernstein CDF requires psi > 0 and chi > 0");
    BernsteinCDF f;
    f.kind = Kind::GeneralizedInverseGaussian;
    f.psi = psi;
    f.chi = chi;
    f.lambda = lambda;
    return f;
}

BernsteinCDF BernsteinCDF::degenerate(double s) {
    require(s > 0.0, "degenerate Bernstein CDF requires s > 0");
    BernsteinCDF f;
    f.kind = Kind::Degenerate;
    f.s = s;
    return f;
}

double BernsteinCDF::laplace(double t) const {
    if (t == 0.0) return 1.0;
    switch (kind) {
        case Kind::Gamma:
            // f_1(t) = (1 + t/phi)^{-tau}, phi a rate parameter
            return std::pow(1.0 + t / phi, -tau);
        case Kind::InverseGamma: {
            // f_2(t) = 2 (t phi)^{tau/2} K_tau(2 sqrt(t phi)) / Gamma(tau)
            double lg = std::log(2.0) + 0.5 * tau * std::log(t * phi) +
                        log_bessel_k(tau, 2.0 * std::sqrt(t * phi)) - std::lgamma(tau);
            return std::exp(lg);
        }
        case Kind::GeneralizedInverseGaussian: {
            // f_3(t) = (1+2t/psi)^{-lambda/2} K_lambda(sqrt((2t+psi)chi)) / K_lambda(sqrt(psi chi))
            double lg = -0.5 * lambda * std::log1p(2.0 * t / psi) +
                        log_bessel_k(lambda, std::sqrt((2.0 * t + psi) * chi)) -
                        log_bessel_k(lambda, std::sqrt(psi * chi));
            return std::exp(lg);
        }
        case Kind::Degenerate:
            return std::exp(-s * t);
    }
    return 0.0;
}

namespace {

// Ratio-of-uniforms sampler for the two-parameter GIG with density
// proportional to z^{lambda-1} exp(-omega (z + 1/z) / 2), lambda >= 0.
double sampleGigTwoParam(double lambda, double omega, std::mt19937_64& rng) {
    const double lm1 = lambda - 1.0;
    const double mode = (lm1 + std::sqrt(lm1 * lm1 + omega * omega)) / omega;
    auto logf = [&](double z) { return lm1 * std::log(z) - 0.5 * omega * (z + 1.0 / z); };
    const double lfMode = logf(mode);
    // sup of z^2 f(z) is attained at the mode of z^{lambda+1} exp(...)
    const double lp1 = lambda + 1.0;
    const double mode2 = (lp1 + std::sqrt(lp1 * lp1 + omega * omega)) / omega;
    const double vMax = std::exp(0.5 * (logf(mode2) - lfMode) + std::log(mode2));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int iter = 0; iter < 100000000; ++iter) {
        double u = unif(rng);
        double v = vMax * unif(rng);
        if (u <= 0.0) continue;
        double z = v / u;
        if (2.0 * std::log(u) <= logf(z) - lfMode) return z;
    }
    throw InvalidParameters("GIG rejection sampler failed to accept");
}

}  // namespace

double BernsteinCDF::sample(std::mt19937_64& rng) const {
    switch (kind) {
        case Kind::Gamma: {
            std::gamma_distribution<double> g(tau, 1.0 / phi);
            return g(rng);
        }
        case Kind::InverseGamma: {
            // S ~ Gamma^{-1}(tau, scale phi)  <=>  1/S ~ Gamma(tau, rate phi)
            std::gamma_distribution<double> g(tau, 1.0 / phi);
            double x = g(rng);
            while (x == 0.0) x = g(rng);
            return 1.0 / x;
        }
        case Kind::GeneralizedInverseGaussian: {
            double omega = std::sqrt(psi * chi);
            double scale = std::sqrt(chi / psi);
            if (lambda >= 0.0) return scale * sampleGigTwoParam(lambda, omega, rng);
            return scale / sampleGigTwoParam(-lambda, omega, rng);
        }
        case Kind::Degenerate:
            return s;
    }
    return s;
}

double BernsteinCDF::mean() const {
    switch (kind) {
        case Kind::Gamma:
            return tau / phi;
        case Kind::InverseGamma:
            return tau > 1.0 ? phi / (tau - 1.0) : std::numeric_limits<double>::infinity();
        case Kind::GeneralizedInverseGaussian: {
            double omega = std::sqrt(psi * chi);
            return std::sqrt(chi / psi) *
                   std::exp(log_bessel_k(lambda + 1.0, omega) - log_bessel_k(lambda, omega));
        }
        case Kind::Degenerate:
            return s;
    }
    return 0.0;
}

CorrelationFamily CorrelationFamily::poweredExponential(double phi, double alpha) {
    require(phi > 0.0, "powered exponential requires phi > 0");
    require(alpha > 0.0 && alpha <= 1.0, "powered exponential on a network requires alpha in (0,1]");
    CorrelationFamily f;
    f.kind_ = Kind::PoweredExponential;
    f.phi_ = phi;
    f.alpha_ = alpha;
    return f;
}

CorrelationFamily CorrelationFamily::exponential(double s) {
    require(s > 0.0, "exponential correlation requires s > 0");
    return poweredExponential(1.0 / s, 1.0);
}

CorrelationFamily CorrelationFamily::matern(double phi, double alpha) {
    require(phi > 0.0, "Matern requires phi > 0");
    require(alpha > 0.0 && alpha <= 0.5, "Matern on a network requires alpha in (0, 1/2]");
    CorrelationFamily f;
    f.kind_ = Kind::Matern;
    f.phi_ = phi;
    f.alpha_ = alpha;
    return f;
}

CorrelationFamily CorrelationFamily::generalizedCauchy(double phi, double alpha, double tau) {
    require(phi > 0.0 && tau > 0.0, "generalized Cauchy requires phi > 0 and tau > 0");
    require(alpha > 0.0 && alpha <= 1.0, "generalized Cauchy on a network requires alpha in (0,1]");
    CorrelationFamily f;
    f.kind_ = Kind::GeneralizedCauchy;
    f.phi_ = phi;
    f.alpha_ = alpha;
    f.tau_ = tau;
    return f;
}

CorrelationFamily CorrelationFamily::dagum(double phi, double tau, double alpha) {
    require(phi > 0.0, "Dagum requires phi > 0");
    require(tau > 0.0 && tau <= 1.0, "Dagum on a network requires tau in (0,1]");
    require(alpha > 0.0 && alpha <= 1.0, "Dagum on a network requires alpha in (0,1]");
    CorrelationFamily f;
    f.kind_ = Kind::Dagum;
    f.phi_ = phi;
    f.alpha_ = alpha;
    f.tau_ = tau;
    return f;
}

CorrelationFamily CorrelationFamily::bernstein(BernsteinCDF F) {
    CorrelationFamily f;
    f.kind_ = Kind::Bernstein;
    f.F_ = F;
    return f;
}

double CorrelationFamily::eval(double t) const {
    require(t >= 0.0, "correlation evaluated at negative distance");
    if (t == 0.0) return 1.0;
    switch (kind_) {
        case Kind::PoweredExponential:
            return std::exp(-std::pow(t, alpha_) / phi_);
        case Kind::Matern: {
            double x = std::sqrt(2.0 * alpha_) * t / phi_;
            double lg = (1.0 - alpha_) * std::log(2.0) - std::lgamma(alpha_) +
                        alpha_ * std::log(x) + log_bessel_k(alpha_, x);
            return std::exp(lg);
        }
        case Kind::GeneralizedCauchy:
            return std::pow(1.0 + std::pow(t / phi_, alpha_), -tau_ / alpha_);
        case Kind::Dagum: {
            double r = std::pow(t / phi_, tau_);
            return 1.0 - std::pow(r / (1.0 + r), alpha_ / tau_);
        }
        case Kind::Bernstein:
            return F_.laplace(t);
    }
    return 0.0;
}

bool CorrelationFamily::isExponential(double* rate) const {
    if (kind_ == Kind::PoweredExponential && alpha_ == 1.0) {
        if (rate) *rate = 1.0 / phi_;
        return true;
    }
    if (kind_ == Kind::Matern && alpha_ == 0.5) {
        // Matern-1/2 equals exp(-t/phi)
        if (rate) *rate = 1.0 / phi_;
        return true;
    }
    if (kind_ == Kind::Bernstein && F_.kind == BernsteinCDF::Kind::Degenerate) {
        if (rate) *rate = F_.s;
        return true;
    }
    return false;
}

std::string CorrelationFamily::describe() const {
    switch (kind_) {
        case Kind::PoweredExponential:
            return "powered-exponential(phi=" + std::to_string(phi_) +
                   ", alpha=" + std::to_string(alpha_) + ")";
        case Kind::Matern:
            return "matern(phi=" + std::to_string(phi_) + ", alpha=" + std::to_string(alpha_) + ")";
        case Kind::GeneralizedCauchy:
            return "generalized-cauchy(phi=" + std::to_string(phi_) +
                   ", alpha=" + std::to_string(alpha_) + ", tau=" + std::to_string(tau_) + ")";
        case Kind::Dagum:
            return "dagum(phi=" + std::to_string(phi_) + ", tau=" + std::to_string(tau_) +
                   ", alpha=" + std::to_string(alpha_) + ")";
        case Kind::Bernstein:
            return "bernstein";
    }
    return "?";
}

ValidityResult validate_for_network(const IsotropicCovariance& cov, const LinearNetwork& net) {
    if (!(cov.sigma2 > 0.0)) return {false, "variance sigma2 must be strictly positive"};
    if (cov.metric == MetricKind::Resistance)
        return {true, "completely monotone family with the resistance metric"};
    if (net.isOneSumOfTreesAndLoops())
        return {true, "geodesic metric valid: network is a 1-sum of trees and loops"};
    return {false,
            "geodesic metric rejected: network is not a 1-sum of trees and loops "
            "(three distinct paths exist between some pair of points)"};
}

Eigen::MatrixXd cov_matrix_from_distances(const IsotropicCovariance& cov,
                                          const Eigen::MatrixXd& dist) {
    const int n = static_cast<int>(dist.rows());
    Eigen::MatrixXd out(n, n);
    for (int i = 0; i < n; ++i) {
        out(i, i) = cov.sigma2;
        for (int j = i + 1; j < n; ++j) {
            double v = cov.sigma2 * cov.family.eval(dist(i, j));
            out(i, j) = out(j, i) = v;
        }
    }
    return out;
}

Eigen::MatrixXd cov_matrix(const IsotropicCovariance& cov, const std::vector<NetPoint>& pts,
                           const MetricEngine& engine) {
    return cov_matrix_from_distances(cov, engine.distanceMatrix(pts));
}

}  // namespace netcox
