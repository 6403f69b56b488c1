#include "netcox/gp_sim.hpp"

#include <cmath>
#include <deque>

namespace netcox {

double GPSample::valueAt(NetPoint u) const {
    int second = -1;
    int idx = grid->nearest(u, &second);
    if (second >= 0) return 0.5 * (values[idx] + values[second]);
    return values[idx];
}

EigGridSimulator::EigGridSimulator(const IsotropicCovariance& cov, const NetworkGrid& grid,
                                   const MetricEngine& engine)
    : grid_(&grid) {
    Eigen::MatrixXd C = cov_matrix(cov, grid.points, engine);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(C);
    if (eig.info() != Eigen::Success)
        throw SingularMatrix("eigendecomposition of the covariance matrix failed");
    Eigen::VectorXd lam = eig.eigenvalues();
    minEig_ = lam.minCoeff();
    maxEig_ = lam.maxCoeff();
    if (minEig_ < -1e-8 * std::max(maxEig_, 1e-300))
        throw NotPositiveSemidefinite(
            "covariance matrix indefinite beyond tolerance: min eigenvalue " +
            std::to_string(minEig_));
    Eigen::VectorXd sqrtLam = lam.cwiseMax(0.0).cwiseSqrt();
    factor_ = eig.eigenvectors() * sqrtLam.asDiagonal();
}

GPSample EigGridSimulator::simulate(std::mt19937_64& rng) const {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd z(factor_.cols());
    for (int i = 0; i < z.size(); ++i) z[i] = normal(rng);
    GPSample out;
    out.grid = grid_;
    out.values = factor_ * z;
    out.algorithm = "eig";
    return out;
}

TreeMarkovSimulator::TreeMarkovSimulator(const NetworkGrid& grid, double sigma2, double rate,
                                         int originVertex)
    : grid_(&grid), sigma2_(sigma2), rate_(rate) {
    const LinearNetwork& net = *grid.net;
    if (net.classify() != Topology::Tree)
        throw NotATree("Markov simulator requires a tree network");
    if (!(sigma2 > 0.0) || !(rate > 0.0))
        throw InvalidParameters("tree Markov simulator requires sigma2 > 0 and rate > 0");

    rootGridIndex_ = grid.vertexIndex[originVertex];

    // BFS over vertices; each tree edge is expanded into sequential grid steps
    // from the parent end towards the child end.
    std::vector<char> seen(net.numVertices(), 0);
    std::deque<int> queue{originVertex};
    seen[originVertex] = 1;
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        for (int si : net.incident(u)) {
            const Segment& s = net.segment(si);
            int w = (s.a == u) ? s.b : s.a;
            if (seen[w]) continue;
            seen[w] = 1;
            queue.push_back(w);
            const std::vector<int>& ids = grid.perSegment[si];
            const int n = static_cast<int>(ids.size());
            double cell = s.length / (n - 1);
            if (s.a == u) {
                for (int k = 1; k < n; ++k) steps_.push_back({ids[k - 1], ids[k], cell});
            } else {
                for (int k = n - 2; k >= 0; --k) steps_.push_back({ids[k + 1], ids[k], cell});
            }
        }
    }
    refreshCoefficients();
}

void TreeMarkovSimulator::refreshCoefficients() {
    decay_.resize(steps_.size());
    condSd_.resize(steps_.size());
    for (size_t i = 0; i < steps_.size(); ++i) {
        double e = std::exp(-rate_ * steps_[i].delta);
        decay_[i] = e;
        condSd_[i] = std::sqrt(sigma2_ * (1.0 - e * e));
    }
}

void TreeMarkovSimulator::setRate(double rate) {
    if (!(rate > 0.0)) throw InvalidParameters("rate must be positive");
    rate_ = rate;
    refreshCoefficients();
}

GPSample TreeMarkovSimulator::simulate(std::mt19937_64& rng) const {
    std::normal_distribution<double> normal(0.0, 1.0);
    GPSample out;
    out.grid = grid_;
    out.values.resize(grid_->size());
    out.values[rootGridIndex_] = std::sqrt(sigma2_) * normal(rng);
    for (size_t i = 0; i < steps_.size(); ++i) {
        const Step& st = steps_[i];
        out.values[st.to] = decay_[i] * out.values[st.from] + condSd_[i] * normal(rng);
    }
    out.algorithm = "tree";
    return out;
}

GPSample simulate_grid_eig(const IsotropicCovariance& cov, const NetworkGrid& grid,
                           const MetricEngine& engine, std::mt19937_64& rng) {
    return EigGridSimulator(cov, grid, engine).simulate(rng);
}

GPSample simulate_tree_markov(const NetworkGrid& grid, double sigma2, double rate,
                              std::mt19937_64& rng, int originVertex) {
    return TreeMarkovSimulator(grid, sigma2, rate, originVertex).simulate(rng);
}

GPSample simulate_bernstein_mixture(const NetworkGrid& grid, double sigma2, const BernsteinCDF& F,
                                    int n, std::mt19937_64& rng, int originVertex) {
    if (n < 1) throw InvalidParameters("mixture size n must be >= 1");
    TreeMarkovSimulator sim(grid, sigma2, 1.0, originVertex);
    GPSample out;
    out.grid = &grid;
    out.values = Eigen::VectorXd::Zero(grid.size());
    out.mixRates.reserve(n);
    for (int i = 0; i < n; ++i) {
        double s = F.sample(rng);
        out.mixRates.push_back(s);
        sim.setRate(s);
        out.values += sim.simulate(rng).values;
    }
    out.values /= std::sqrt(static_cast<double>(n));
    out.algorithm = "mixture";
    return out;
}

}  // namespace netcox
