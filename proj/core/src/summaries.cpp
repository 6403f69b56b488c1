#include "netcox/summaries.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "netcox/parallel.hpp"

namespace netcox {

namespace {

// 1 - prod_{v: d(test, v) <= r} (1 - rhoMin / rho(v)) over the r grid; for a
// constant intensity every factor is zero, giving the plain indicator.
void accumulate_survival(const std::vector<double>& dists, const std::vector<double>& retain,
                         const std::vector<double>& rGrid, std::vector<double>* sumSurvival) {
    const size_t m = rGrid.size();
    std::vector<std::pair<double, double>> byDist(dists.size());
    for (size_t i = 0; i < dists.size(); ++i) byDist[i] = {dists[i], retain[i]};
    std::sort(byDist.begin(), byDist.end());
    double prod = 1.0;
    size_t i = 0;
    for (size_t k = 0; k < m; ++k) {
        while (i < byDist.size() && byDist[i].first <= rGrid[k]) {
            prod *= 1.0 - byDist[i].second;
            ++i;
        }
        (*sumSurvival)[k] += prod;
    }
}

}  // namespace

FGJResult empirical_fgj(const PointPattern& pat, const MetricEngine& engine,
                        const IntensityModel& intensity, const std::vector<NetPoint>& dummy,
                        const std::vector<double>& rGrid) {
    if (!pat.net) throw InvalidParameters("pattern is not attached to a network");
    if (pat.size() < 1) throw EmptyPattern("summaries need a nonempty pattern");
    if (dummy.empty()) throw InvalidParameters("empty dummy point set");
    const LinearNetwork& net = *pat.net;
    const int n = pat.size();
    const size_t m = rGrid.size();

    double rhoMin = intensity.minRate(net);
    std::vector<double> retain(n);
    for (int j = 0; j < n; ++j) {
        double r = intensity.rateAt(net, pat.points[j]);
        if (!(r > 0.0)) throw InvalidParameters("zero intensity at an observed point");
        retain[j] = std::min(1.0, rhoMin / r);
    }

    FGJResult out;
    out.F.r = out.G.r = out.J.r = rGrid;
    std::vector<double> survF(m, 0.0), survG(m, 0.0);

    for (const NetPoint& u : dummy) {
        std::vector<double> dists(n);
        std::vector<double> uToVerts = engine.toVertices(u);
        for (int j = 0; j < n; ++j)
            dists[j] = engine.kind() == MetricKind::Geodesic
                           ? geodesic_distance(net, u, pat.points[j], uToVerts)
                           : engine.distance(u, pat.points[j]);
        accumulate_survival(dists, retain, rGrid, &survF);
    }
    for (int i = 0; i < n; ++i) {
        std::vector<double> dists;
        std::vector<double> ret;
        dists.reserve(n - 1);
        ret.reserve(n - 1);
        std::vector<double> uToVerts = engine.toVertices(pat.points[i]);
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            dists.push_back(engine.kind() == MetricKind::Geodesic
                                ? geodesic_distance(net, pat.points[i], pat.points[j], uToVerts)
                                : engine.distance(pat.points[i], pat.points[j]));
            ret.push_back(retain[j]);
        }
        accumulate_survival(dists, ret, rGrid, &survG);
    }

    out.F.y.resize(m);
    out.G.y.resize(m);
    out.J.y.resize(m);
    out.jDefined.resize(m);
    for (size_t k = 0; k < m; ++k) {
        double oneMinusF = survF[k] / dummy.size();
        double oneMinusG = survG[k] / n;
        out.F.y[k] = 1.0 - oneMinusF;
        out.G.y[k] = 1.0 - oneMinusG;
        out.jDefined[k] = oneMinusF > 1e-9;
        out.J.y[k] = out.jDefined[k] ? oneMinusG / oneMinusF
                                     : std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

FGJResult empirical_fgj(const PointPattern& pat, const MetricEngine& engine,
                        const std::vector<NetPoint>& dummy, const std::vector<double>& rGrid) {
    return empirical_fgj(pat, engine, IntensityModel::constant(estimate_intensity(pat)), dummy,
                         rGrid);
}

EnvelopeResult global_envelope_erl(const std::vector<double>& data,
                                   const std::vector<std::vector<double>>& sims,
                                   double level) {
    const int s = static_cast<int>(sims.size());
    if (s < 1) throw InvalidParameters("envelope test needs simulated curves");
    const size_t m = data.size();
    for (const auto& c : sims)
        if (c.size() != m) throw GridMismatch("curves have different lengths");
    const int total = s + 1;

    std::vector<const std::vector<double>*> curves(total);
    curves[0] = &data;
    for (int i = 0; i < s; ++i) curves[i + 1] = &sims[i];

    // two-sided pointwise ranks, then each curve is summarized by its sorted
    // rank vector
    std::vector<std::vector<double>> sortedRanks(total, std::vector<double>(m));
    std::vector<double> column(total), sorted(total);
    for (size_t k = 0; k < m; ++k) {
        for (int i = 0; i < total; ++i) column[i] = (*curves[i])[k];
        sorted = column;
        std::sort(sorted.begin(), sorted.end());
        for (int i = 0; i < total; ++i) {
            auto lo = std::lower_bound(sorted.begin(), sorted.end(), column[i]);
            auto hi = std::upper_bound(lo, sorted.end(), column[i]);
            int below = static_cast<int>(lo - sorted.begin());
            int above = static_cast<int>(sorted.end() - hi);
            sortedRanks[i][k] = 1 + std::min(below, above);
        }
    }
    for (auto& v : sortedRanks) std::sort(v.begin(), v.end());

    auto atLeastAsExtreme = [&](int i, int j) {
        // lexicographically: smaller sorted rank vector = more extreme
        return !std::lexicographical_compare(sortedRanks[j].begin(), sortedRanks[j].end(),
                                             sortedRanks[i].begin(), sortedRanks[i].end());
    };
    int extreme = 0;
    for (int i = 1; i < total; ++i)
        if (atLeastAsExtreme(i, 0)) ++extreme;

    EnvelopeResult res;
    res.level = level;
    res.data = data;
    res.pvalue = static_cast<double>(1 + extreme) / total;
    res.reject = res.pvalue <= 1.0 - level + 1e-12;

    // envelope from the most central curves
    std::vector<int> order(total);
    for (int i = 0; i < total; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return std::lexicographical_compare(sortedRanks[b].begin(), sortedRanks[b].end(),
                                            sortedRanks[a].begin(), sortedRanks[a].end());
    });
    int keep = static_cast<int>(std::ceil(level * total));
    keep = std::clamp(keep, 1, total);
    res.lo.assign(m, std::numeric_limits<double>::infinity());
    res.hi.assign(m, -std::numeric_limits<double>::infinity());
    for (int idx = 0; idx < keep; ++idx) {
        const std::vector<double>& c = *curves[order[idx]];
        for (size_t k = 0; k < m; ++k) {
            res.lo[k] = std::min(res.lo[k], c[k]);
            res.hi[k] = std::max(res.hi[k], c[k]);
        }
    }
    return res;
}

EnvelopePipelineResult envelope_pipeline(const PointPattern& data, const CoxModel& nullModel,
                                         const NetworkGrid& grid, const MetricEngine& engine,
                                         RngStream& streams, const EnvelopePipelineOptions& opt) {
    if (!data.net) throw InvalidParameters("pattern is not attached to a network");
    const LinearNetwork& net = *data.net;
    CoxSimulator sim(nullModel, net, grid, opt.algo, opt.nMix);
    const std::vector<NetPoint>& dummy = grid.points;

    // pilot stage: pick the r range so the empty space function stays
    // informative over most of the grid
    std::vector<NetPoint> probe;
    for (int v = 0; v < net.numVertices(); ++v) probe.push_back(net.vertexPoint(v));
    double rBig = engine.networkRadius(probe);
    std::vector<double> wide = uniform_grid(0.0, rBig, opt.nGrid);
    std::vector<std::vector<double>> pilotF(opt.nPilot);
    parallel_for(opt.nPilot, opt.threads, [&](int p) {
        auto rng = streams.stream(p, opt.entityOffset + 1);
        PointPattern x = sim.simulate(rng);
        if (x.size() < 1) return;
        pilotF[p] = empirical_fgj(x, engine, nullModel.intensity, dummy, wide).F.y;
    });
    std::vector<double> meanF(wide.size(), 0.0);
    int pilotUsed = 0;
    for (const auto& f : pilotF) {
        if (f.empty()) continue;
        for (size_t k = 0; k < wide.size(); ++k) meanF[k] += f[k];
        ++pilotUsed;
    }
    if (pilotUsed == 0) throw EmptyPattern("all pilot simulations were empty");
    double rStop = rBig;
    for (size_t k = 0; k < wide.size(); ++k) {
        if (meanF[k] / pilotUsed >= opt.fStop) {
            rStop = wide[k];
            break;
        }
    }
    if (!(rStop > 0.0)) rStop = rBig;

    EnvelopePipelineResult out;
    out.rGrid = uniform_grid(0.0, rStop, opt.nGrid);

    FGJResult dataFgj = empirical_fgj(data, engine, nullModel.intensity, dummy, out.rGrid);
    std::vector<FGJResult> simFgj(opt.nSims);
    parallel_for(opt.nSims, opt.threads, [&](int i) {
        auto rng = streams.stream(i, opt.entityOffset + 2);
        PointPattern x = sim.simulate(rng);
        if (x.size() < 1) {
            // an empty realization carries no curves; substitute the flat zero
            FGJResult z;
            z.F.r = z.G.r = z.J.r = out.rGrid;
            z.F.y.assign(out.rGrid.size(), 0.0);
            z.G.y.assign(out.rGrid.size(), 0.0);
            z.J.y.assign(out.rGrid.size(), 1.0);
            z.jDefined.assign(out.rGrid.size(), 1);
            simFgj[i] = std::move(z);
            return;
        }
        simFgj[i] = empirical_fgj(x, engine, nullModel.intensity, dummy, out.rGrid);
    });

    // keep J columns defined for the data and every simulation
    for (size_t k = 0; k < out.rGrid.size(); ++k) {
        bool ok = dataFgj.jDefined[k] != 0;
        for (const FGJResult& f : simFgj) ok = ok && f.jDefined[k] != 0;
        if (ok) out.keptJ.push_back(static_cast<int>(k));
    }

    auto concat = [&](const FGJResult& f) {
        std::vector<double> v;
        v.reserve(2 * out.rGrid.size() + out.keptJ.size());
        v.insert(v.end(), f.F.y.begin(), f.F.y.end());
        v.insert(v.end(), f.G.y.begin(), f.G.y.end());
        for (int k : out.keptJ) v.push_back(f.J.y[k]);
        return v;
    };
    std::vector<double> dataCurve = concat(dataFgj);
    std::vector<std::vector<double>> simCurves;
    simCurves.reserve(simFgj.size());
    for (const FGJResult& f : simFgj) simCurves.push_back(concat(f));

    out.test = global_envelope_erl(dataCurve, simCurves, opt.level);
    return out;
}

}  // namespace netcox
