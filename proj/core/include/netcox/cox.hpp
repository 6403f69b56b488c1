#pragma once

#include <atomic>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "netcox/covariance.hpp"
#include "netcox/gp_sim.hpp"
#include "netcox/network.hpp"

namespace netcox {

/// Nonnegative first-order intensity, constant or piecewise constant by
/// segment mark.
struct IntensityModel {
    double baseRate = 0.0;
    std::map<std::string, double> perMark;  // overrides baseRate for marked segments

    static IntensityModel constant(double rho);
    static IntensityModel byMark(std::map<std::string, double> rates, double fallback = 0.0);

    double rateOnSegment(const LinearNetwork& net, int seg) const;
    double rateAt(const LinearNetwork& net, NetPoint p) const {
        return rateOnSegment(net, p.segment);
    }
    double maxRate() const;
    double minRate(const LinearNetwork& net) const;
};

/// Finite simple point pattern tied to a network.
struct PointPattern {
    const LinearNetwork* net = nullptr;
    std::vector<NetPoint> points;

    int size() const { return static_cast<int>(points.size()); }
};

enum class CoxKind { LGCP, ICP, PCPP };

std::string to_string(CoxKind k);

struct CoxModel {
    CoxKind kind = CoxKind::LGCP;
    int h = 1;  // number of independent GP copies (ICP / PCPP)
    IntensityModel intensity;
    IsotropicCovariance cov;

    /// Throws InvalidModel on violated constraints (h >= 1; PCPP sigma2 == 1).
    void validate() const;

    /// Isotropic pcf g_0(t) >= 1 in closed form.
    double pcf(double t) const;
    /// phi = g_0(0) - 1.
    double clusterIndex() const;
};

/// Mean retention probability of the ICP thinning: (1 + 2 sigma^2)^{-h/2}.
double mean_selection_prob(double sigma2, int h);

PointPattern simulate_poisson(const IntensityModel& intensity, const LinearNetwork& net,
                              std::mt19937_64& rng);

enum class GpAlgo { Auto, Eig, Tree, Mixture };

/// Simulates a Cox pattern: the driving field is evaluated piecewise constant
/// on nearest-grid-point cells, making the conditional Poisson draw exact.
class CoxSimulator {
public:
    CoxSimulator(const CoxModel& model, const LinearNetwork& net, const NetworkGrid& grid,
                 GpAlgo algo = GpAlgo::Auto, int nMix = 200);

    PointPattern simulate(std::mt19937_64& rng) const;
    /// Retained fraction bookkeeping for the most recent ICP draw.
    double lastRetainedFraction() const { return lastRetained_; }
    GpAlgo resolvedAlgo() const { return algo_; }

private:
    GPSample drawField(std::mt19937_64& rng) const;
    PointPattern poissonFromCells(const std::vector<double>& cellValue,
                                  std::mt19937_64& rng) const;

    CoxModel model_;
    const LinearNetwork* net_;
    const NetworkGrid* grid_;
    GpAlgo algo_;
    int nMix_;
    std::optional<EigGridSimulator> eig_;
    std::optional<TreeMarkovSimulator> tree_;
    mutable std::atomic<double> lastRetained_ = 0.0;
};

/// n-th order intensity of a LGCP: prod rho(u_i) * exp(sum_{i<j} c(u_i,u_j)).
double lgcp_nth_intensity(const std::vector<double>& rho, const IsotropicCovariance& cov,
                          const MetricEngine& engine, const std::vector<NetPoint>& pts);

}  // namespace netcox
