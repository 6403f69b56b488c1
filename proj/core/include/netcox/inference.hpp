#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "netcox/cox.hpp"
#include "netcox/covariance.hpp"
#include "netcox/metrics.hpp"

namespace netcox {

/// Function sampled on an increasing argument grid.
struct SummaryCurve {
    std::vector<double> r;
    std::vector<double> y;

    int size() const { return static_cast<int>(r.size()); }
    /// Piecewise linear interpolation, clamped at the ends.
    double at(double t) const;
};

/// n(x) / |L|.
double estimate_intensity(const PointPattern& pat);
/// Separate rate per segment mark: n_mark / length_mark. Unmarked segments
/// share the fallback rate.
IntensityModel estimate_intensity_by_mark(const PointPattern& pat);

std::vector<double> uniform_grid(double lo, double hi, int n);

/// Bandwidth default 0.15 / sqrt(rho), capped at 0.1 R where R is the network
/// radius under the engine metric.
double default_pcf_bandwidth(const PointPattern& pat, const MetricEngine& engine);

/// Kernel estimator of the isotropic pair correlation function with
/// Epanechnikov kernel and distance-level-set weights.
SummaryCurve estimate_pcf(const PointPattern& pat, const MetricEngine& engine,
                          const IntensityModel& intensity, const std::vector<double>& rGrid,
                          double bandwidth);
/// Homogeneous convenience overload: intensity and bandwidth are estimated.
SummaryCurve estimate_pcf(const PointPattern& pat, const MetricEngine& engine,
                          const std::vector<double>& rGrid, double bandwidth = -1.0);

/// K function estimator; under Poisson K(t) = t.
SummaryCurve estimate_K(const PointPattern& pat, const MetricEngine& engine,
                        const IntensityModel& intensity, const std::vector<double>& rGrid);
SummaryCurve estimate_K(const PointPattern& pat, const MetricEngine& engine,
                        const std::vector<double>& rGrid);

/// Integral_{a1}^{a2} |g(t)^q - ghat(t)^q|^p dt by the trapezoid rule on the
/// curve's grid restricted to [a1, a2].
struct ContrastOptions {
    double a1 = 0.0;
    double a2 = 0.0;   // must be set by the caller
    double p = 2.0;
    double q = 1.0;
    int multistarts = 8;
    int maxEvalsPerStart = 500;
    int hMin = 1, hMax = 5;  // scanned for the model kinds where h matters
    unsigned long long seed = 20240811ull;
};

double contrast_distance(const SummaryCurve& estimate,
                         const std::function<double(double)>& model, const ContrastOptions& opt);

/// Which correlation family to fit and which of its parameters stay fixed.
/// Parameter names: "phi", "alpha", "tau". Omitted parameters are estimated.
/// Bernstein-class fitting supports gamma and inverse gamma mixing (with
/// parameters "tau" and "phi").
struct CovFamilySpec {
    CorrelationFamily::Kind kind = CorrelationFamily::Kind::PoweredExponential;
    BernsteinCDF::Kind mixing = BernsteinCDF::Kind::InverseGamma;
    std::map<std::string, double> fixed;

    static CovFamilySpec exponential() {
        CovFamilySpec s;
        s.kind = CorrelationFamily::Kind::PoweredExponential;
        s.fixed = {{"alpha", 1.0}};
        return s;
    }
    static CovFamilySpec bernstein(BernsteinCDF::Kind mixing) {
        CovFamilySpec s;
        s.kind = CorrelationFamily::Kind::Bernstein;
        s.mixing = mixing;
        return s;
    }
};

struct FitResult {
    CoxKind kind = CoxKind::LGCP;
    int h = 1;
    double sigma2 = 1.0;
    CorrelationFamily family = CorrelationFamily::exponential(1.0);
    double contrast = 0.0;
    int evaluations = 0;

    CoxModel toModel(IntensityModel intensity) const;
    double pcf(double t) const;
};

/// Minimum contrast fit of (sigma2, free correlation parameters) against an
/// estimated pcf; h is scanned over [hMin, hMax] for the interrupted and
/// permanental kinds, and sigma2 is pinned to 1 for the permanental kind.
FitResult fit_min_contrast(const SummaryCurve& pcfHat, CoxKind kind, const CovFamilySpec& spec,
                           const ContrastOptions& opt);

}  // namespace netcox
