#include "netcox/cox.hpp"

#include <algorithm>
#include <cmath>

namespace netcox {

IntensityModel IntensityModel::constant(double rho) {
    if (!(rho >= 0.0)) throw InvalidParameters("intensity must be >= 0");
    IntensityModel m;
    m.baseRate = rho;
    return m;
}

IntensityModel IntensityModel::byMark(std::map<std::string, double> rates, double fallback) {
    if (!(fallback >= 0.0)) throw InvalidParameters("intensity must be >= 0");
    for (const auto& [mark, r] : rates)
        if (!(r >= 0.0)) throw InvalidParameters("intensity for mark '" + mark + "' must be >= 0");
    IntensityModel m;
    m.baseRate = fallback;
    m.perMark = std::move(rates);
    return m;
}

double IntensityModel::rateOnSegment(const LinearNetwork& net, int seg) const {
    const std::string& mark = net.segment(seg).mark;
    if (!mark.empty()) {
        auto it = perMark.find(mark);
        if (it != perMark.end()) return it->second;
    }
    return baseRate;
}

double IntensityModel::maxRate() const {
    double m = baseRate;
    for (const auto& [mark, r] : perMark) m = std::max(m, r);
    return m;
}

double IntensityModel::minRate(const LinearNetwork& net) const {
    double m = rateOnSegment(net, 0);
    for (int i = 1; i < net.numSegments(); ++i) m = std::min(m, rateOnSegment(net, i));
    return m;
}

std::string to_string(CoxKind k) {
    switch (k) {
        case CoxKind::LGCP: return "lgcp";
        case CoxKind::ICP: return "icp";
        case CoxKind::PCPP: return "pcpp";
    }
    return "?";
}

void CoxModel::validate() const {
    if (h < 1) throw InvalidModel("h must be a positive integer");
    if (!(cov.sigma2 > 0.0)) throw InvalidModel("sigma2 must be positive");
    if (kind == CoxKind::PCPP && std::abs(cov.sigma2 - 1.0) > 1e-12)
        throw InvalidModel("permanental model requires sigma2 = 1");
    if (kind == CoxKind::LGCP && h != 1) throw InvalidModel("log Gaussian model uses h = 1");
}

double CoxModel::pcf(double t) const {
    const double s2 = cov.sigma2;
    const double r0 = cov.family.eval(t);
    switch (kind) {
        case CoxKind::LGCP:
            return std::exp(s2 * r0);
        case CoxKind::ICP: {
            double q = (1.0 + s2) * (1.0 + s2);
            return std::pow(q / (q - s2 * s2 * r0 * r0), 0.5 * h);
        }
        case CoxKind::PCPP:
            return 1.0 + 2.0 * r0 * r0 / h;
    }
    return 1.0;
}

double CoxModel::clusterIndex() const {
    const double s2 = cov.sigma2;
    switch (kind) {
        case CoxKind::LGCP:
            return std::exp(s2) - 1.0;
        case CoxKind::ICP:
            return std::pow(1.0 + s2, h) / std::pow(1.0 + 2.0 * s2, 0.5 * h) - 1.0;
        case CoxKind::PCPP:
            return 2.0 / h;
    }
    return 0.0;
}

double mean_selection_prob(double sigma2, int h) {
    return std::pow(1.0 + 2.0 * sigma2, -0.5 * h);
}

PointPattern simulate_poisson(const IntensityModel& intensity, const LinearNetwork& net,
                              std::mt19937_64& rng) {
    PointPattern out;
    out.net = &net;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int i = 0; i < net.numSegments(); ++i) {
        double mu = intensity.rateOnSegment(net, i) * net.segment(i).length;
        if (mu <= 0.0) continue;
        std::poisson_distribution<int> pois(mu);
        int n = pois(rng);
        for (int k = 0; k < n; ++k)
            out.points.push_back({i, unif(rng) * net.segment(i).length});
    }
    return out;
}

CoxSimulator::CoxSimulator(const CoxModel& model, const LinearNetwork& net,
                           const NetworkGrid& grid, GpAlgo algo, int nMix)
    : model_(model), net_(&net), grid_(&grid), algo_(algo), nMix_(nMix) {
    model_.validate();
    double rate = 0.0;
    bool tree = net.classify() == Topology::Tree;
    if (algo_ == GpAlgo::Auto) {
        if (tree && model_.cov.family.isExponential(&rate))
            algo_ = GpAlgo::Tree;
        else if (tree && model_.cov.family.kind() == CorrelationFamily::Kind::Bernstein)
            algo_ = GpAlgo::Mixture;
        else
            algo_ = GpAlgo::Eig;
    }
    switch (algo_) {
        case GpAlgo::Eig: {
            MetricEngine engine(net, model_.cov.metric);
            auto valid = validate_for_network(model_.cov, net);
            if (!valid.ok) throw InvalidModel(valid.reason);
            eig_.emplace(model_.cov, grid, engine);
            break;
        }
        case GpAlgo::Tree:
            if (!model_.cov.family.isExponential(&rate))
                throw InvalidModel("Markov tree algorithm needs an exponential correlation");
            tree_.emplace(grid, model_.cov.sigma2, rate);
            break;
        case GpAlgo::Mixture:
            if (model_.cov.family.kind() != CorrelationFamily::Kind::Bernstein)
                throw InvalidModel("mixture algorithm needs a Bernstein-class correlation");
            if (nMix_ < 1) throw InvalidParameters("mixture size must be >= 1");
            if (!tree) throw NotATree("mixture algorithm requires a tree network");
            break;
        case GpAlgo::Auto:
            break;
    }
}

GPSample CoxSimulator::drawField(std::mt19937_64& rng) const {
    switch (algo_) {
        case GpAlgo::Eig:
            return eig_->simulate(rng);
        case GpAlgo::Tree:
            return tree_->simulate(rng);
        case GpAlgo::Mixture:
            return simulate_bernstein_mixture(*grid_, model_.cov.sigma2,
                                              model_.cov.family.mixing(), nMix_, rng);
        case GpAlgo::Auto:
            break;
    }
    throw InvalidModel("unresolved simulation algorithm");
}

// Conditionally Poisson draw with the driving field held constant on
// nearest-grid-point cells: along each segment the cell of an interior grid
// point is the surrounding spacing-wide interval, endpoints own half a cell.
PointPattern CoxSimulator::poissonFromCells(const std::vector<double>& cellValue,
                                            std::mt19937_64& rng) const {
    PointPattern out;
    out.net = net_;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int si = 0; si < net_->numSegments(); ++si) {
        const std::vector<int>& ids = grid_->perSegment[si];
        const int n = static_cast<int>(ids.size());
        const double l = net_->segment(si).length;
        const double cell = l / (n - 1);
        for (int k = 0; k < n; ++k) {
            double lo = std::max(0.0, (k - 0.5) * cell);
            double hi = std::min(l, (k + 0.5) * cell);
            double mu = cellValue[ids[k]] * (hi - lo);
            if (mu <= 0.0) continue;
            std::poisson_distribution<int> pois(mu);
            int cnt = pois(rng);
            for (int j = 0; j < cnt; ++j)
                out.points.push_back({si, lo + unif(rng) * (hi - lo)});
        }
    }
    return out;
}

PointPattern CoxSimulator::simulate(std::mt19937_64& rng) const {
    const double s2 = model_.cov.sigma2;
    const int n = grid_->size();
    std::vector<double> lam(n);
    switch (model_.kind) {
        case CoxKind::LGCP: {
            GPSample y = drawField(rng);
            for (int i = 0; i < n; ++i)
                lam[i] = model_.intensity.rateAt(*net_, grid_->points[i]) *
                         std::exp(y.values[i] - 0.5 * s2);
            return poissonFromCells(lam, rng);
        }
        case CoxKind::PCPP: {
            std::vector<GPSample> ys;
            ys.reserve(model_.h);
            for (int c = 0; c < model_.h; ++c) ys.push_back(drawField(rng));
            for (int i = 0; i < n; ++i) {
                double sum = 0.0;
                for (const GPSample& y : ys) sum += y.values[i] * y.values[i];
                lam[i] = model_.intensity.rateAt(*net_, grid_->points[i]) * sum / model_.h;
            }
            return poissonFromCells(lam, rng);
        }
        case CoxKind::ICP: {
            // Dominating Poisson at rho * (1 + sigma^2)^{h/2}, then independent
            // retention with probability exp(-sum_i Y_i(u)^2 / 2). This is the
            // scaling under which the closed-form pcf holds; the convention
            // without the 1/2 is the same process with sigma^2 doubled.
            double boost = std::pow(1.0 + s2, 0.5 * model_.h);
            std::vector<GPSample> ys;
            ys.reserve(model_.h);
            for (int c = 0; c < model_.h; ++c) ys.push_back(drawField(rng));
            IntensityModel dom = model_.intensity;
            dom.baseRate *= boost;
            for (auto& [mark, r] : dom.perMark) r *= boost;
            PointPattern proposal = simulate_poisson(dom, *net_, rng);
            PointPattern out;
            out.net = net_;
            std::uniform_real_distribution<double> unif(0.0, 1.0);
            for (const NetPoint& p : proposal.points) {
                double q = 0.0;
                for (const GPSample& y : ys) {
                    double v = y.valueAt(p);
                    q += v * v;
                }
                if (unif(rng) < std::exp(-0.5 * q)) out.points.push_back(p);
            }
            lastRetained_ = proposal.points.empty()
                                ? 0.0
                                : static_cast<double>(out.points.size()) / proposal.points.size();
            return out;
        }
    }
    throw InvalidModel("unknown Cox model kind");
}

double lgcp_nth_intensity(const std::vector<double>& rho, const IsotropicCovariance& cov,
                          const MetricEngine& engine, const std::vector<NetPoint>& pts) {
    if (rho.size() != pts.size())
        throw InvalidParameters("intensity values and points must align");
    double logv = 0.0;
    for (double r : rho) {
        if (!(r > 0.0)) return 0.0;
        logv += std::log(r);
    }
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = i + 1; j < pts.size(); ++j)
            logv += cov.eval(engine.distance(pts[i], pts[j]));
    return std::exp(logv);
}

}  // namespace netcox
