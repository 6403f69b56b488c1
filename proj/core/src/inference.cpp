#include "netcox/inference.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "netcox/optim.hpp"

namespace netcox {

double SummaryCurve::at(double t) const {
    if (r.empty()) throw InvalidParameters("empty curve");
    if (t <= r.front()) return y.front();
    if (t >= r.back()) return y.back();
    auto it = std::upper_bound(r.begin(), r.end(), t);
    size_t j = it - r.begin();
    double w = (t - r[j - 1]) / (r[j] - r[j - 1]);
    return (1.0 - w) * y[j - 1] + w * y[j];
}

double estimate_intensity(const PointPattern& pat) {
    if (!pat.net) throw InvalidParameters("pattern is not attached to a network");
    return pat.size() / pat.net->totalLength();
}

IntensityModel estimate_intensity_by_mark(const PointPattern& pat) {
    if (!pat.net) throw InvalidParameters("pattern is not attached to a network");
    const LinearNetwork& net = *pat.net;
    std::map<std::string, double> len, cnt;
    double lenPlain = 0.0, cntPlain = 0.0;
    for (int i = 0; i < net.numSegments(); ++i) {
        const Segment& s = net.segment(i);
        if (s.mark.empty())
            lenPlain += s.length;
        else
            len[s.mark] += s.length;
    }
    for (const NetPoint& p : pat.points) {
        const std::string& mark = net.segment(p.segment).mark;
        if (mark.empty())
            cntPlain += 1.0;
        else
            cnt[mark] += 1.0;
    }
    std::map<std::string, double> rates;
    for (const auto& [mark, l] : len) rates[mark] = cnt[mark] / l;
    double fallback = lenPlain > 0.0 ? cntPlain / lenPlain : 0.0;
    return IntensityModel::byMark(std::move(rates), fallback);
}

std::vector<double> uniform_grid(double lo, double hi, int n) {
    if (n < 2 || !(hi > lo)) throw InvalidParameters("grid needs n >= 2 and hi > lo");
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = lo + (hi - lo) * i / (n - 1);
    return g;
}

double default_pcf_bandwidth(const PointPattern& pat, const MetricEngine& engine) {
    double rho = estimate_intensity(pat);
    if (!(rho > 0.0)) throw EmptyPattern("cannot choose a bandwidth for an empty pattern");
    std::vector<NetPoint> probe;
    const LinearNetwork& net = engine.net();
    for (int v = 0; v < net.numVertices(); ++v) probe.push_back(net.vertexPoint(v));
    double R = engine.networkRadius(probe);
    return std::min(0.15 / std::sqrt(rho), 0.1 * R);
}

namespace {

struct PairContext {
    Eigen::MatrixXd dist;
    std::vector<double> rho;        // intensity at each point
    std::vector<PointWeights> pw;   // per source point
    double totalLength = 0.0;
};

PairContext make_pair_context(const PointPattern& pat, const MetricEngine& engine,
                              const IntensityModel& intensity) {
    if (!pat.net) throw InvalidParameters("pattern is not attached to a network");
    if (pat.size() < 2) throw EmptyPattern("pair estimators need at least two points");
    PairContext ctx;
    ctx.dist = engine.distanceMatrix(pat.points);
    ctx.totalLength = pat.net->totalLength();
    ctx.rho.reserve(pat.size());
    ctx.pw.reserve(pat.size());
    for (const NetPoint& p : pat.points) {
        double r = intensity.rateAt(*pat.net, p);
        if (!(r > 0.0)) throw InvalidParameters("zero intensity at an observed point");
        ctx.rho.push_back(r);
        ctx.pw.emplace_back(engine, p);
    }
    return ctx;
}

}  // namespace

SummaryCurve estimate_pcf(const PointPattern& pat, const MetricEngine& engine,
                          const IntensityModel& intensity, const std::vector<double>& rGrid,
                          double bandwidth) {
    if (!(bandwidth > 0.0)) throw BandwidthNonpositive("bandwidth must be positive");
    PairContext ctx = make_pair_context(pat, engine, intensity);
    const int n = pat.size();
    const int m = static_cast<int>(rGrid.size());
    SummaryCurve out;
    out.r = rGrid;
    out.y.assign(m, 0.0);
    const double b = bandwidth;
    const double rMax = rGrid.back() + b;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            double d = ctx.dist(i, j);
            if (d > rMax) continue;
            double w;
            try {
                w = ctx.pw[i].weight(d);
            } catch (const RadiusBeyondNetwork&) {
                continue;
            }
            double scale = w / (ctx.rho[i] * ctx.rho[j] * ctx.totalLength);
            // Epanechnikov kernel, support [d - b, d + b]
            auto lo = std::lower_bound(rGrid.begin(), rGrid.end(), d - b) - rGrid.begin();
            for (int k = static_cast<int>(lo); k < m && rGrid[k] < d + b; ++k) {
                double x = (rGrid[k] - d) / b;
                out.y[k] += 0.75 / b * (1.0 - x * x) * scale;
            }
        }
    }
    return out;
}

SummaryCurve estimate_pcf(const PointPattern& pat, const MetricEngine& engine,
                          const std::vector<double>& rGrid, double bandwidth) {
    if (bandwidth <= 0.0) bandwidth = default_pcf_bandwidth(pat, engine);
    return estimate_pcf(pat, engine, IntensityModel::constant(estimate_intensity(pat)), rGrid,
                        bandwidth);
}

SummaryCurve estimate_K(const PointPattern& pat, const MetricEngine& engine,
                        const IntensityModel& intensity, const std::vector<double>& rGrid) {
    PairContext ctx = make_pair_context(pat, engine, intensity);
    const int n = pat.size();
    const int m = static_cast<int>(rGrid.size());
    SummaryCurve out;
    out.r = rGrid;
    out.y.assign(m, 0.0);
    // accumulate each pair into the first grid index with rGrid[k] >= d, then
    // turn the histogram into a cumulative sum
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            double d = ctx.dist(i, j);
            if (d > rGrid.back()) continue;
            double w;
            try {
                w = ctx.pw[i].weight(d);
            } catch (const RadiusBeyondNetwork&) {
                continue;
            }
            auto k = std::lower_bound(rGrid.begin(), rGrid.end(), d) - rGrid.begin();
            out.y[k] += w / (ctx.rho[i] * ctx.rho[j] * ctx.totalLength);
        }
    }
    for (int k = 1; k < m; ++k) out.y[k] += out.y[k - 1];
    return out;
}

SummaryCurve estimate_K(const PointPattern& pat, const MetricEngine& engine,
                        const std::vector<double>& rGrid) {
    return estimate_K(pat, engine, IntensityModel::constant(estimate_intensity(pat)), rGrid);
}

double contrast_distance(const SummaryCurve& estimate,
                         const std::function<double(double)>& model, const ContrastOptions& opt) {
    if (!(opt.a2 > opt.a1)) throw InvalidParameters("contrast interval needs a2 > a1");
    std::vector<double> ts;
    ts.push_back(opt.a1);
    for (double t : estimate.r)
        if (t > opt.a1 && t < opt.a2) ts.push_back(t);
    ts.push_back(opt.a2);
    auto integrand = [&](double t) {
        return std::pow(std::abs(std::pow(model(t), opt.q) - std::pow(estimate.at(t), opt.q)),
                        opt.p);
    };
    double acc = 0.0;
    double prevT = ts[0], prevF = integrand(ts[0]);
    for (size_t k = 1; k < ts.size(); ++k) {
        double f = integrand(ts[k]);
        acc += 0.5 * (prevF + f) * (ts[k] - prevT);
        prevT = ts[k];
        prevF = f;
    }
    return acc;
}

CoxModel FitResult::toModel(IntensityModel intensity) const {
    CoxModel m;
    m.kind = kind;
    m.h = h;
    m.intensity = std::move(intensity);
    m.cov.sigma2 = sigma2;
    m.cov.family = family;
    return m;
}

double FitResult::pcf(double t) const {
    CoxModel m;
    m.kind = kind;
    m.h = h;
    m.cov.sigma2 = sigma2;
    m.cov.family = family;
    return m.pcf(t);
}

namespace {

// One free parameter with its admissible range; positive parameters live on a
// log scale, interval parameters on a logistic scale.
struct FreeParam {
    std::string name;
    double upper = 0.0;  // 0 means unbounded above
    double base = 1.0;   // centre of the multistart cloud (natural scale)

    double fromRaw(double x) const {
        if (upper <= 0.0) return std::exp(x);
        return upper / (1.0 + std::exp(-x));
    }
    double toRaw(double theta) const {
        if (upper <= 0.0) return std::log(theta);
        double p = std::clamp(theta / upper, 1e-12, 1.0 - 1e-12);
        return std::log(p / (1.0 - p));
    }
};

CorrelationFamily build_family(const CovFamilySpec& spec,
                               const std::map<std::string, double>& params) {
    switch (spec.kind) {
        case CorrelationFamily::Kind::PoweredExponential:
            return CorrelationFamily::poweredExponential(params.at("phi"), params.at("alpha"));
        case CorrelationFamily::Kind::Matern:
            return CorrelationFamily::matern(params.at("phi"), params.at("alpha"));
        case CorrelationFamily::Kind::GeneralizedCauchy:
            return CorrelationFamily::generalizedCauchy(params.at("phi"), params.at("alpha"),
                                                        params.at("tau"));
        case CorrelationFamily::Kind::Dagum:
            return CorrelationFamily::dagum(params.at("phi"), params.at("tau"),
                                            params.at("alpha"));
        case CorrelationFamily::Kind::Bernstein:
            if (spec.mixing == BernsteinCDF::Kind::Gamma)
                return CorrelationFamily::bernstein(
                    BernsteinCDF::gamma(params.at("tau"), params.at("phi")));
            if (spec.mixing == BernsteinCDF::Kind::InverseGamma)
                return CorrelationFamily::bernstein(
                    BernsteinCDF::inverseGamma(params.at("tau"), params.at("phi")));
            break;
    }
    throw InvalidParameters("family is not supported by the contrast fit");
}

std::vector<FreeParam> free_params(const CovFamilySpec& spec, double phiBase) {
    std::vector<std::pair<std::string, double>> all;  // name, upper bound
    switch (spec.kind) {
        case CorrelationFamily::Kind::PoweredExponential:
            all = {{"phi", 0.0}, {"alpha", 1.0}};
            break;
        case CorrelationFamily::Kind::Matern:
            all = {{"phi", 0.0}, {"alpha", 0.5}};
            break;
        case CorrelationFamily::Kind::GeneralizedCauchy:
            all = {{"phi", 0.0}, {"alpha", 1.0}, {"tau", 0.0}};
            break;
        case CorrelationFamily::Kind::Dagum:
            all = {{"phi", 0.0}, {"tau", 1.0}, {"alpha", 1.0}};
            break;
        case CorrelationFamily::Kind::Bernstein:
            all = {{"tau", 0.0}, {"phi", 0.0}};
            break;
    }
    std::vector<FreeParam> out;
    for (auto& [name, upper] : all) {
        if (spec.fixed.count(name)) continue;
        FreeParam p;
        p.name = name;
        p.upper = upper;
        if (upper > 0.0) {
            p.base = 0.5 * upper;
        } else if (spec.kind == CorrelationFamily::Kind::Bernstein) {
            // mixing parameters live on the rate scale: aim at mean decay
            // rate 1 / phiBase
            double tau = spec.fixed.count("tau") ? spec.fixed.at("tau") : 2.0;
            if (name == "phi")
                p.base = spec.mixing == BernsteinCDF::Kind::Gamma
                             ? tau * phiBase
                             : std::max(tau - 1.0, 0.5) / phiBase;
            else
                p.base = 2.0;
        } else {
            p.base = name == "phi" ? phiBase : 1.0;
        }
        out.push_back(p);
    }
    return out;
}

}  // namespace

FitResult fit_min_contrast(const SummaryCurve& pcfHat, CoxKind kind, const CovFamilySpec& spec,
                           const ContrastOptions& opt) {
    const bool fitSigma2 = kind != CoxKind::PCPP;
    const bool scanH = kind != CoxKind::LGCP;
    const double phiBase = std::max(0.5 * (opt.a1 + opt.a2), 1e-6);

    std::vector<FreeParam> fams = free_params(spec, phiBase);
    const int dim = static_cast<int>(fams.size()) + (fitSigma2 ? 1 : 0);
    if (dim < 1) throw InvalidParameters("no free parameters to fit");

    double gMax = 1.0;
    for (size_t k = 0; k < pcfHat.r.size(); ++k)
        if (pcfHat.r[k] >= opt.a1 && pcfHat.r[k] <= opt.a2) gMax = std::max(gMax, pcfHat.y[k]);
    double sigma2Base;
    switch (kind) {
        case CoxKind::LGCP: sigma2Base = std::max(std::log(std::max(gMax, 1.05)), 0.05); break;
        default: sigma2Base = std::max(gMax - 1.0, 0.1); break;
    }

    FitResult best;
    best.kind = kind;
    best.contrast = std::numeric_limits<double>::infinity();
    int totalEvals = 0;

    const int hLo = scanH ? opt.hMin : 1;
    const int hHi = scanH ? opt.hMax : 1;
    for (int h = hLo; h <= hHi; ++h) {
        auto decode = [&](const Eigen::VectorXd& x, double* sigma2, CorrelationFamily* fam) {
            int off = 0;
            *sigma2 = fitSigma2 ? std::exp(x[off++]) : 1.0;
            std::map<std::string, double> params = spec.fixed;
            for (const FreeParam& p : fams) params[p.name] = p.fromRaw(x[off++]);
            *fam = build_family(spec, params);
        };
        auto objective = [&](const Eigen::VectorXd& x) {
            double sigma2;
            try {
                CorrelationFamily fam = CorrelationFamily::exponential(1.0);
                decode(x, &sigma2, &fam);
                CoxModel m;
                m.kind = kind;
                m.h = h;
                m.cov.sigma2 = sigma2;
                m.cov.family = fam;
                return contrast_distance(pcfHat, [&](double t) { return m.pcf(t); }, opt);
            } catch (const Error&) {
                return std::numeric_limits<double>::infinity();
            }
        };

        Eigen::VectorXd base(dim);
        {
            int off = 0;
            if (fitSigma2) base[off++] = std::log(sigma2Base);
            for (const FreeParam& p : fams) base[off++] = p.toRaw(p.base);
        }
        std::mt19937_64 rng(opt.seed + static_cast<unsigned long long>(h));
        std::uniform_real_distribution<double> jitter(-3.0, 3.0);

        FitResult bestH = best;
        bestH.contrast = std::numeric_limits<double>::infinity();
        for (int s = 0; s < opt.multistarts; ++s) {
            Eigen::VectorXd start = base;
            if (s > 0)
                for (int i = 0; i < dim; ++i) start[i] += jitter(rng);
            NelderMeadResult r = nelder_mead(objective, start, 0.4, opt.maxEvalsPerStart);
            totalEvals += r.evaluations;
            if (r.value < bestH.contrast) {
                bestH.contrast = r.value;
                bestH.h = h;
                decode(r.x, &bestH.sigma2, &bestH.family);
                bestH.kind = kind;
                // polish from the incumbent with a tighter simplex
                NelderMeadResult r2 = nelder_mead(objective, r.x, 0.05, opt.maxEvalsPerStart);
                totalEvals += r2.evaluations;
                if (r2.value < bestH.contrast) {
                    bestH.contrast = r2.value;
                    decode(r2.x, &bestH.sigma2, &bestH.family);
                }
            }
        }
        if (bestH.contrast < best.contrast) best = bestH;
    }
    if (!std::isfinite(best.contrast)) throw OptimizerFailed("contrast minimization failed");
    best.evaluations = totalEvals;
    return best;
}

}  // namespace netcox
