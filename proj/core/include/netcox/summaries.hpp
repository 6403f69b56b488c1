#pragma once

#include <vector>

#include "netcox/cox.hpp"
#include "netcox/inference.hpp"
#include "netcox/metrics.hpp"
#include "netcox/rng.hpp"

namespace netcox {

/// Empty space (F), nearest neighbour (G) and J = (1 - G) / (1 - F) summaries.
struct FGJResult {
    SummaryCurve F, G, J;
    std::vector<char> jDefined;  // false where 1 - F underflows
};

/// Intensity-reweighted estimators: each point v contributes a retention
/// weight rho_min / rho(v); with constant intensity they reduce to the plain
/// empirical fractions. F uses the dummy locations as test points.
FGJResult empirical_fgj(const PointPattern& pat, const MetricEngine& engine,
                        const IntensityModel& intensity, const std::vector<NetPoint>& dummy,
                        const std::vector<double>& rGrid);
FGJResult empirical_fgj(const PointPattern& pat, const MetricEngine& engine,
                        const std::vector<NetPoint>& dummy, const std::vector<double>& rGrid);

/// Extreme rank length ordering: curves are ranked by their sorted vector of
/// pointwise two-sided ranks, compared lexicographically (smaller = more
/// extreme); exact ties count as at least as extreme.
struct EnvelopeResult {
    double pvalue = 1.0;
    bool reject = false;            // at the test level
    std::vector<double> lo, hi;     // envelope over the most central curves
    std::vector<double> data;
    double level = 0.95;
};

EnvelopeResult global_envelope_erl(const std::vector<double>& data,
                                   const std::vector<std::vector<double>>& sims,
                                   double level = 0.95);

struct EnvelopePipelineOptions {
    int nSims = 199;
    int nPilot = 39;
    int nGrid = 128;
    double level = 0.95;
    double fStop = 0.9;   // r-grid extends to where the pilot-mean F reaches this
    GpAlgo algo = GpAlgo::Auto;
    int nMix = 200;
    int threads = 1;
    unsigned long long entityOffset = 0;  // rng stream namespace
};

struct EnvelopePipelineResult {
    EnvelopeResult test;
    std::vector<double> rGrid;
    std::vector<int> keptJ;  // indices of rGrid where J enters the concatenation
};

/// Model check of a point pattern against a Cox (or Poisson via sigma2 -> 0)
/// null model: simulate, concatenate F, G and J on a data-driven r-grid, and
/// apply the extreme rank length envelope test.
EnvelopePipelineResult envelope_pipeline(const PointPattern& data, const CoxModel& nullModel,
                                         const NetworkGrid& grid, const MetricEngine& engine,
                                         RngStream& streams,
                                         const EnvelopePipelineOptions& opt = {});

}  // namespace netcox
