#pragma once

#include <Eigen/Dense>
#include <random>
#include <string>
#include <vector>

#include "netcox/covariance.hpp"
#include "netcox/metrics.hpp"
#include "netcox/network.hpp"

namespace netcox {

/// One simulated zero-mean Gaussian field restricted to a grid.
struct GPSample {
    const NetworkGrid* grid = nullptr;
    Eigen::VectorXd values;
    std::vector<double> mixRates;  ///< realized S_i when produced by the mixture algorithm
    std::string algorithm;

    /// Off-grid extension: value of the nearest grid point under the geodesic
    /// metric, averaging the two neighbours on an exact midpoint tie.
    double valueAt(NetPoint u) const;
};

/// Eigendecomposition simulator for arbitrary networks and metrics. Negative
/// eigenvalues within -1e-8 * lambda_max are clipped to zero; anything lower
/// raises NotPositiveSemidefinite.
class EigGridSimulator {
public:
    EigGridSimulator(const IsotropicCovariance& cov, const NetworkGrid& grid,
                     const MetricEngine& engine);

    GPSample simulate(std::mt19937_64& rng) const;
    double minEigenvalue() const { return minEig_; }
    double maxEigenvalue() const { return maxEig_; }

private:
    const NetworkGrid* grid_;
    Eigen::MatrixXd factor_;  // E * sqrt(clipped Lambda)
    double minEig_ = 0.0, maxEig_ = 0.0;
};

/// Markov simulator for exponential covariance on a tree: the root value is
/// N(0, sigma^2) and every further grid point is generated conditionally on
/// its predecessor along the edge.
class TreeMarkovSimulator {
public:
    TreeMarkovSimulator(const NetworkGrid& grid, double sigma2, double rate, int originVertex = 0);

    GPSample simulate(std::mt19937_64& rng) const;
    void setRate(double rate);  ///< reuse the traversal plan with a new rate
    double rate() const { return rate_; }

private:
    struct Step {
        int from, to;
        double delta;
    };
    const NetworkGrid* grid_;
    double sigma2_, rate_;
    int rootGridIndex_;
    std::vector<Step> steps_;
    std::vector<double> condSd_, decay_;  // per-step, precomputed from rate
    void refreshCoefficients();
};

GPSample simulate_grid_eig(const IsotropicCovariance& cov, const NetworkGrid& grid,
                           const MetricEngine& engine, std::mt19937_64& rng);
GPSample simulate_tree_markov(const NetworkGrid& grid, double sigma2, double rate,
                              std::mt19937_64& rng, int originVertex = 0);
/// Algorithm with Bernstein mixing: sqrt(n) times the mean of n Markov-tree
/// runs whose rates are drawn from F; realized rates are recorded for the
/// conditional covariance sigma^2/n sum_i exp(-S_i d).
GPSample simulate_bernstein_mixture(const NetworkGrid& grid, double sigma2, const BernsteinCDF& F,
                                    int n, std::mt19937_64& rng, int originVertex = 0);

}  // namespace netcox
