#include <chrono>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "netcox/cox.hpp"
#include "netcox/covariance.hpp"
#include "netcox/gp_sim.hpp"
#include "netcox/inference.hpp"
#include "netcox/io.hpp"
#include "netcox/metrics.hpp"
#include "netcox/network.hpp"
#include "netcox/rng.hpp"
#include "netcox/summaries.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace netcox;

namespace {

constexpr const char* kVersion = "0.1.0";

MetricKind parse_metric(const std::string& s) {
    if (s == "geodesic") return MetricKind::Geodesic;
    if (s == "resistance") return MetricKind::Resistance;
    throw ParseError("metric must be 'geodesic' or 'resistance'");
}

GpAlgo parse_algo(const std::string& s) {
    if (s == "auto") return GpAlgo::Auto;
    if (s == "eig") return GpAlgo::Eig;
    if (s == "tree") return GpAlgo::Tree;
    if (s == "mixture") return GpAlgo::Mixture;
    throw ParseError("algorithm must be auto, eig, tree or mixture");
}

CovFamilySpec parse_family_spec(const std::string& name, const std::string& fixedJson) {
    CovFamilySpec spec;
    if (name == "exponential") {
        spec = CovFamilySpec::exponential();
    } else if (name == "powered_exponential") {
        spec.kind = CorrelationFamily::Kind::PoweredExponential;
    } else if (name == "matern") {
        spec.kind = CorrelationFamily::Kind::Matern;
    } else if (name == "generalized_cauchy") {
        spec.kind = CorrelationFamily::Kind::GeneralizedCauchy;
    } else if (name == "dagum") {
        spec.kind = CorrelationFamily::Kind::Dagum;
    } else {
        throw ParseError("unknown family '" + name + "' for fitting");
    }
    if (!fixedJson.empty()) {
        json j = json::parse(fixedJson, nullptr, false);
        if (j.is_discarded()) throw ParseError("malformed JSON in --fixed");
        for (const auto& [k, v] : j.items()) spec.fixed[k] = v.get<double>();
    }
    return spec;
}

RunManifest make_manifest(const std::string& tool, const std::vector<std::string>& args,
                          std::uint64_t seed) {
    RunManifest m;
    m.tool = tool;
    m.version = kVersion;
    m.arguments = args;
    m.seed = seed;
    return m;
}

double default_spacing(const LinearNetwork& net) {
    // aim for roughly 1000 grid points
    return std::max(net.totalLength() / 1000.0, 1e-9);
}

std::string fit_to_json(const FitResult& fit) {
    json j;
    j["kind"] = to_string(fit.kind);
    j["h"] = fit.h;
    j["sigma2"] = fit.sigma2;
    IsotropicCovariance cov;
    cov.sigma2 = fit.sigma2;
    cov.family = fit.family;
    json cj = json::parse(covariance_to_json(cov));
    j["family"] = cj["family"];
    j["params"] = cj["params"];
    j["contrast"] = fit.contrast;
    j["evaluations"] = fit.evaluations;
    double rate = 0.0;
    if (fit.family.isExponential(&rate)) j["exp_rate"] = rate;
    return j.dump(2) + "\n";
}

// minimal static plot: data curve with the envelope band
std::string envelope_svg(const EnvelopeResult& env) {
    const int W = 960, H = 420, pad = 40;
    const size_t m = env.data.size();
    double lo = env.data[0], hi = env.data[0];
    for (size_t k = 0; k < m; ++k) {
        lo = std::min({lo, env.lo[k], env.data[k]});
        hi = std::max({hi, env.hi[k], env.data[k]});
    }
    if (!(hi > lo)) hi = lo + 1.0;
    auto X = [&](size_t k) { return pad + (W - 2.0 * pad) * k / (m - 1); };
    auto Y = [&](double v) { return H - pad - (H - 2.0 * pad) * (v - lo) / (hi - lo); };
    std::ostringstream s;
    s << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
    s << "<rect width='100%' height='100%' fill='white'/>\n";
    s << "<polygon fill='#cfe3f7' stroke='none' points='";
    for (size_t k = 0; k < m; ++k) s << X(k) << "," << Y(env.lo[k]) << " ";
    for (size_t k = m; k-- > 0;) s << X(k) << "," << Y(env.hi[k]) << " ";
    s << "'/>\n<polyline fill='none' stroke='#d62728' stroke-width='1.5' points='";
    for (size_t k = 0; k < m; ++k) s << X(k) << "," << Y(env.data[k]) << " ";
    s << "'/>\n<text x='" << pad << "' y='" << pad / 2 + 6 << "' font-family='monospace' font-size='14'>"
      << "p = " << env.pvalue << (env.reject ? " (rejected)" : " (not rejected)") << "</text>\n";
    s << "</svg>\n";
    return s.str();
}

struct CommonNet {
    LinearNetwork net;
    std::string path;
};

int run(int argc, char** argv) {
    CLI::App app{"Gaussian processes and Cox point processes on linear networks"};
    app.require_subcommand(1);
    std::vector<std::string> rawArgs(argv + 1, argv + argc);

    // validate
    auto* cValidate = app.add_subcommand("validate", "check a network file and report diagnostics");
    std::string vNet, vOut;
    cValidate->add_option("--net", vNet, "network JSON")->required();
    cValidate->add_option("--out", vOut, "report JSON (default stdout)");

    // metric
    auto* cMetric = app.add_subcommand("metric", "pairwise distances under a network metric");
    std::string mNet, mMetric = "resistance", mPattern, mOut;
    std::vector<double> mFrom, mTo;
    cMetric->add_option("--net", mNet)->required();
    cMetric->add_option("--metric", mMetric, "geodesic|resistance");
    cMetric->add_option("--pattern", mPattern, "pattern CSV; emits the full distance matrix");
    cMetric->add_option("--from", mFrom, "segment offset")->expected(2);
    cMetric->add_option("--to", mTo, "segment offset")->expected(2);
    cMetric->add_option("--out", mOut, "matrix CSV (default stdout)");

    // sim-gp
    auto* cSimGp = app.add_subcommand("sim-gp", "simulate a Gaussian process on a grid");
    std::string gNet, gCov, gOutPrefix, gAlgo = "auto";
    double gSpacing = 0.0;
    std::uint64_t gSeed = 0;
    int gReps = 1, gNMix = 200;
    cSimGp->add_option("--net", gNet)->required();
    cSimGp->add_option("--cov", gCov, "covariance JSON")->required();
    cSimGp->add_option("--spacing", gSpacing, "grid spacing (default ~1000 points)");
    cSimGp->add_option("--seed", gSeed)->required();
    cSimGp->add_option("--reps", gReps);
    cSimGp->add_option("--algo", gAlgo, "auto|eig|tree|mixture");
    cSimGp->add_option("--nmix", gNMix, "mixture size for the Bernstein algorithm");
    cSimGp->add_option("--out-prefix", gOutPrefix)->required();

    // sim-cox
    auto* cSimCox = app.add_subcommand("sim-cox", "simulate a Cox point process");
    std::string xNet, xModel, xOutPrefix, xAlgo = "auto";
    double xSpacing = 0.0;
    std::uint64_t xSeed = 0;
    int xReps = 1, xNMix = 200;
    cSimCox->add_option("--net", xNet)->required();
    cSimCox->add_option("--model", xModel, "model JSON")->required();
    cSimCox->add_option("--spacing", xSpacing);
    cSimCox->add_option("--seed", xSeed)->required();
    cSimCox->add_option("--reps", xReps);
    cSimCox->add_option("--algo", xAlgo);
    cSimCox->add_option("--nmix", xNMix);
    cSimCox->add_option("--out-prefix", xOutPrefix)->required();

    // summaries
    auto* cSum = app.add_subcommand("summaries", "nonparametric summaries of a pattern");
    std::string sNet, sPattern, sMetric = "resistance", sKind = "pcf", sOut;
    double sRmax = 0.0, sBandwidth = -1.0, sSpacing = 0.0;
    int sNGrid = 128;
    bool sByMark = false;
    cSum->add_option("--net", sNet)->required();
    cSum->add_option("--pattern", sPattern)->required();
    cSum->add_option("--metric", sMetric);
    cSum->add_option("--kind", sKind, "pcf|K|fgj");
    cSum->add_option("--rmax", sRmax);
    cSum->add_option("--ngrid", sNGrid);
    cSum->add_option("--bandwidth", sBandwidth, "pcf kernel bandwidth (default data driven)");
    cSum->add_option("--spacing", sSpacing, "dummy grid spacing for fgj");
    cSum->add_flag("--by-mark", sByMark, "estimate a separate intensity per segment mark");
    cSum->add_option("--out", sOut)->required();

    // fit
    auto* cFit = app.add_subcommand("fit", "minimum contrast fit against the estimated pcf");
    std::string fNet, fPattern, fMetric = "resistance", fKind = "lgcp",
                fFamily = "exponential", fFixed, fOut;
    double fA1 = 0.0, fA2 = 0.0, fP = 2.0, fQ = 1.0, fBandwidth = -1.0;
    int fNGrid = 128;
    bool fByMark = false;
    cFit->add_option("--net", fNet)->required();
    cFit->add_option("--pattern", fPattern)->required();
    cFit->add_option("--metric", fMetric);
    cFit->add_option("--kind", fKind, "lgcp|icp|pcpp");
    cFit->add_option("--family", fFamily,
                     "exponential|powered_exponential|matern|generalized_cauchy|dagum");
    cFit->add_option("--fixed", fFixed, "JSON object of pinned family parameters");
    cFit->add_option("--a1", fA1, "contrast lower limit");
    cFit->add_option("--a2", fA2, "contrast upper limit")->required();
    cFit->add_option("--p", fP);
    cFit->add_option("--q", fQ);
    cFit->add_option("--ngrid", fNGrid);
    cFit->add_option("--bandwidth", fBandwidth);
    cFit->add_flag("--by-mark", fByMark);
    cFit->add_option("--out", fOut)->required();

    // envelope
    auto* cEnv = app.add_subcommand("envelope", "global envelope model check");
    std::string eNet, ePattern, eModel, eOut, eSvg, eAlgo = "auto";
    double eSpacing = 0.0;
    std::uint64_t eSeed = 0;
    int eSims = 199, eThreads = 1, eNMix = 200;
    cEnv->add_option("--net", eNet)->required();
    cEnv->add_option("--pattern", ePattern)->required();
    cEnv->add_option("--model", eModel, "null model JSON")->required();
    cEnv->add_option("--seed", eSeed)->required();
    cEnv->add_option("--sims", eSims);
    cEnv->add_option("--spacing", eSpacing);
    cEnv->add_option("--threads", eThreads);
    cEnv->add_option("--algo", eAlgo);
    cEnv->add_option("--nmix", eNMix);
    cEnv->add_option("--out", eOut)->required();
    cEnv->add_option("--svg", eSvg, "envelope plot");

    // pipeline
    auto* cPipe = app.add_subcommand("pipeline", "intensity -> pcf -> fit -> envelope");
    std::string pConfig, pOutDir;
    cPipe->add_option("--config", pConfig, "pipeline configuration JSON")->required();
    cPipe->add_option("--out-dir", pOutDir)->required();

    CLI11_PARSE(app, argc, argv);

    if (*cValidate) {
        LinearNetwork net = load_network(vNet);
        MetricEngine eng(net, MetricKind::Resistance);
        const Topology topo = net.classify();
        json report;
        report["vertices"] = net.numVertices();
        report["segments"] = net.numSegments();
        report["total_length"] = net.totalLength();
        report["topology"] = topo == Topology::Tree ? "tree"
                             : topo == Topology::Loop ? "loop"
                                                      : "general";
        report["one_sum_of_trees_and_loops"] = net.isOneSumOfTreesAndLoops();
        report["geodesic_covariances_valid"] = net.isOneSumOfTreesAndLoops();
        report["geodesic_equals_resistance"] = topo == Topology::Tree;
        int nv = net.numVertices();
        int nonzero = nv;  // diagonal
        for (int i = 0; i < net.numSegments(); ++i) {
            const Segment& s = net.segment(i);
            if (s.a != s.b) nonzero += 2;
        }
        report["laplacian_nonzero_fraction"] =
            static_cast<double>(nonzero) / (static_cast<double>(nv) * nv);
        std::string text = report.dump(2) + "\n";
        if (vOut.empty())
            std::cout << text;
        else
            write_file(vOut, text);
        return 0;
    }

    if (*cMetric) {
        LinearNetwork net = load_network(mNet);
        MetricEngine eng(net, parse_metric(mMetric));
        if (!mFrom.empty() || !mTo.empty()) {
            if (mFrom.size() != 2 || mTo.size() != 2)
                throw ParseError("--from and --to both need 'segment offset'");
            NetPoint a{static_cast<int>(mFrom[0]), mFrom[1]};
            NetPoint b{static_cast<int>(mTo[0]), mTo[1]};
            net.checkPoint(a);
            net.checkPoint(b);
            std::cout.precision(17);
            std::cout << eng.distance(a, b) << "\n";
            return 0;
        }
        if (mPattern.empty()) throw ParseError("metric needs --pattern or --from/--to");
        PointPattern pat = load_pattern(mPattern, net);
        Eigen::MatrixXd D = eng.distanceMatrix(pat.points);
        std::ostringstream out;
        out.precision(17);
        for (int i = 0; i < D.rows(); ++i) {
            for (int j = 0; j < D.cols(); ++j) out << (j ? "," : "") << D(i, j);
            out << "\n";
        }
        if (mOut.empty())
            std::cout << out.str();
        else
            write_file(mOut, out.str());
        return 0;
    }

    if (*cSimGp) {
        LinearNetwork net = load_network(gNet);
        IsotropicCovariance cov = load_covariance(gCov);
        if (gSpacing <= 0.0) gSpacing = default_spacing(net);
        NetworkGrid grid = make_grid(net, gSpacing);
        MetricEngine eng(net, cov.metric);
        GpAlgo algo = parse_algo(gAlgo);
        RngStream streams(gSeed);
        RunManifest manifest = make_manifest("sim-gp", rawArgs, gSeed);
        manifest.addInput(gNet);
        manifest.addInput(gCov);

        double rate = 0.0;
        bool tree = net.classify() == Topology::Tree;
        if (algo == GpAlgo::Auto) {
            if (tree && cov.family.isExponential(&rate))
                algo = GpAlgo::Tree;
            else if (tree && cov.family.kind() == CorrelationFamily::Kind::Bernstein)
                algo = GpAlgo::Mixture;
            else
                algo = GpAlgo::Eig;
        }
        std::optional<EigGridSimulator> eig;
        std::optional<TreeMarkovSimulator> treeSim;
        if (algo == GpAlgo::Eig) {
            auto valid = validate_for_network(cov, net);
            if (!valid.ok) throw InvalidModel(valid.reason);
            eig.emplace(cov, grid, eng);
        } else if (algo == GpAlgo::Tree) {
            if (!cov.family.isExponential(&rate))
                throw InvalidModel("Markov tree algorithm needs an exponential correlation");
            treeSim.emplace(grid, cov.sigma2, rate);
        } else if (algo == GpAlgo::Mixture &&
                   cov.family.kind() != CorrelationFamily::Kind::Bernstein) {
            throw InvalidModel("mixture algorithm needs a Bernstein-class correlation");
        }
        for (int r = 0; r < gReps; ++r) {
            auto rng = streams.stream(r);
            GPSample s;
            if (algo == GpAlgo::Eig)
                s = eig->simulate(rng);
            else if (algo == GpAlgo::Tree)
                s = treeSim->simulate(rng);
            else
                s = simulate_bernstein_mixture(grid, cov.sigma2, cov.family.mixing(), gNMix, rng);
            std::ostringstream out;
            out.precision(12);
            out << "segment,offset,value\n";
            for (int k = 0; k < grid.size(); ++k)
                out << grid.points[k].segment << "," << grid.points[k].offset << ","
                    << s.values[k] << "\n";
            std::string path = gOutPrefix + "_" + std::to_string(r) + ".csv";
            write_file(path, out.str());
            manifest.outputs.push_back(path);
        }
        manifest.write(gOutPrefix + "_manifest.json");
        return 0;
    }

    if (*cSimCox) {
        LinearNetwork net = load_network(xNet);
        CoxModel model = load_model(xModel);
        if (xSpacing <= 0.0) xSpacing = default_spacing(net);
        NetworkGrid grid = make_grid(net, xSpacing);
        CoxSimulator sim(model, net, grid, parse_algo(xAlgo), xNMix);
        RngStream streams(xSeed);
        RunManifest manifest = make_manifest("sim-cox", rawArgs, xSeed);
        manifest.addInput(xNet);
        manifest.addInput(xModel);
        for (int r = 0; r < xReps; ++r) {
            auto rng = streams.stream(r);
            PointPattern pat = sim.simulate(rng);
            std::string path = xOutPrefix + "_" + std::to_string(r) + ".csv";
            save_pattern(pat, path);
            manifest.outputs.push_back(path);
        }
        manifest.write(xOutPrefix + "_manifest.json");
        return 0;
    }

    if (*cSum) {
        LinearNetwork net = load_network(sNet);
        PointPattern pat = load_pattern(sPattern, net);
        MetricEngine eng(net, parse_metric(sMetric));
        IntensityModel intensity = sByMark ? estimate_intensity_by_mark(pat)
                                           : IntensityModel::constant(estimate_intensity(pat));
        if (sRmax <= 0.0) {
            std::vector<NetPoint> probe;
            for (int v = 0; v < net.numVertices(); ++v) probe.push_back(net.vertexPoint(v));
            sRmax = 0.5 * eng.networkRadius(probe);
        }
        std::vector<double> rGrid = uniform_grid(0.0, sRmax, sNGrid);
        if (sKind == "pcf") {
            if (sBandwidth <= 0.0) sBandwidth = default_pcf_bandwidth(pat, eng);
            SummaryCurve g = estimate_pcf(pat, eng, intensity, rGrid, sBandwidth);
            save_curves_csv(sOut, {{"pcf", &g}});
        } else if (sKind == "K") {
            SummaryCurve K = estimate_K(pat, eng, intensity, rGrid);
            save_curves_csv(sOut, {{"K", &K}});
        } else if (sKind == "fgj") {
            if (sSpacing <= 0.0) sSpacing = default_spacing(net);
            NetworkGrid grid = make_grid(net, sSpacing);
            FGJResult f = empirical_fgj(pat, eng, intensity, grid.points, rGrid);
            save_curves_csv(sOut, {{"F", &f.F}, {"G", &f.G}, {"J", &f.J}});
        } else {
            throw ParseError("summary kind must be pcf, K or fgj");
        }
        return 0;
    }

    if (*cFit) {
        LinearNetwork net = load_network(fNet);
        PointPattern pat = load_pattern(fPattern, net);
        MetricEngine eng(net, parse_metric(fMetric));
        IntensityModel intensity = fByMark ? estimate_intensity_by_mark(pat)
                                           : IntensityModel::constant(estimate_intensity(pat));
        CoxKind kind = fKind == "lgcp"   ? CoxKind::LGCP
                       : fKind == "icp"  ? CoxKind::ICP
                       : fKind == "pcpp" ? CoxKind::PCPP
                                         : throw ParseError("kind must be lgcp, icp or pcpp");
        if (fBandwidth <= 0.0) fBandwidth = default_pcf_bandwidth(pat, eng);
        std::vector<double> rGrid = uniform_grid(fA1, fA2, fNGrid);
        SummaryCurve g = estimate_pcf(pat, eng, intensity, rGrid, fBandwidth);
        ContrastOptions opt;
        opt.a1 = fA1;
        opt.a2 = fA2;
        opt.p = fP;
        opt.q = fQ;
        FitResult fit = fit_min_contrast(g, kind, parse_family_spec(fFamily, fFixed), opt);
        write_file(fOut, fit_to_json(fit));
        return 0;
    }

    if (*cEnv) {
        LinearNetwork net = load_network(eNet);
        PointPattern pat = load_pattern(ePattern, net);
        CoxModel model = load_model(eModel);
        if (eSpacing <= 0.0) eSpacing = default_spacing(net);
        NetworkGrid grid = make_grid(net, eSpacing);
        MetricEngine eng(net, model.cov.metric);
        RngStream streams(eSeed);
        EnvelopePipelineOptions opt;
        opt.nSims = eSims;
        opt.threads = eThreads;
        opt.algo = parse_algo(eAlgo);
        opt.nMix = eNMix;
        EnvelopePipelineResult res = envelope_pipeline(pat, model, grid, eng, streams, opt);
        json out;
        out["pvalue"] = res.test.pvalue;
        out["reject"] = res.test.reject;
        out["level"] = res.test.level;
        out["r_max"] = res.rGrid.back();
        out["n_grid"] = res.rGrid.size();
        out["j_columns_kept"] = res.keptJ.size();
        write_file(eOut, out.dump(2) + "\n");
        if (!eSvg.empty()) write_file(eSvg, envelope_svg(res.test));
        RunManifest manifest = make_manifest("envelope", rawArgs, eSeed);
        manifest.addInput(eNet);
        manifest.addInput(ePattern);
        manifest.addInput(eModel);
        manifest.outputs.push_back(eOut);
        if (!eSvg.empty()) manifest.outputs.push_back(eSvg);
        manifest.write(eOut + ".manifest.json");
        return 0;
    }

    if (*cPipe) {
        json cfg = json::parse(read_file(pConfig), nullptr, false);
        if (cfg.is_discarded()) throw ParseError("malformed JSON in " + pConfig);
        fs::create_directories(pOutDir);
        auto outPath = [&](const std::string& name) { return (fs::path(pOutDir) / name).string(); };

        std::string netPath = cfg.at("network").get<std::string>();
        std::string patPath = cfg.at("pattern").get<std::string>();
        LinearNetwork net = load_network(netPath);
        double snap = 0.0;
        PointPattern pat = load_pattern(patPath, net, &snap);
        MetricEngine eng(net, parse_metric(cfg.value("metric", "resistance")));
        bool byMark = cfg.value("by_mark", false);
        IntensityModel intensity = byMark ? estimate_intensity_by_mark(pat)
                                          : IntensityModel::constant(estimate_intensity(pat));
        std::string kindStr = cfg.value("kind", "lgcp");
        CoxKind kind = kindStr == "lgcp"   ? CoxKind::LGCP
                       : kindStr == "icp"  ? CoxKind::ICP
                       : kindStr == "pcpp" ? CoxKind::PCPP
                                           : throw ParseError("kind must be lgcp, icp or pcpp");
        CovFamilySpec spec = parse_family_spec(
            cfg.value("family", "exponential"),
            cfg.contains("fixed") ? cfg["fixed"].dump() : std::string());
        ContrastOptions copt;
        copt.a1 = cfg.value("a1", 0.0);
        copt.a2 = cfg.at("a2").get<double>();
        copt.p = cfg.value("p", 2.0);
        copt.q = cfg.value("q", 1.0);
        std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();
        int nGrid = cfg.value("ngrid", 128);
        double bandwidth = cfg.value("bandwidth", -1.0);
        if (bandwidth <= 0.0) bandwidth = default_pcf_bandwidth(pat, eng);

        auto t0 = std::chrono::steady_clock::now();

        std::vector<double> rGrid = uniform_grid(copt.a1, copt.a2, nGrid);
        SummaryCurve g = estimate_pcf(pat, eng, intensity, rGrid, bandwidth);
        save_curves_csv(outPath("pcf.csv"), {{"pcf", &g}});

        FitResult fit = fit_min_contrast(g, kind, spec, copt);
        write_file(outPath("fit.json"), fit_to_json(fit));

        CoxModel fitted = fit.toModel(intensity);
        fitted.cov.metric = eng.kind();
        write_file(outPath("model.json"), model_to_json(fitted));

        double spacing = cfg.value("spacing", 0.0);
        if (spacing <= 0.0) spacing = default_spacing(net);
        NetworkGrid grid = make_grid(net, spacing);
        RngStream streams(seed);
        EnvelopePipelineOptions eopt;
        eopt.nSims = cfg.value("sims", 199);
        eopt.threads = cfg.value("threads", 1);
        eopt.nMix = cfg.value("nmix", 200);
        EnvelopePipelineResult env = envelope_pipeline(pat, fitted, grid, eng, streams, eopt);
        json envJson;
        envJson["pvalue"] = env.test.pvalue;
        envJson["reject"] = env.test.reject;
        envJson["level"] = env.test.level;
        envJson["r_max"] = env.rGrid.back();
        write_file(outPath("envelope.json"), envJson.dump(2) + "\n");
        write_file(outPath("envelope.svg"), envelope_svg(env.test));

        auto t1 = std::chrono::steady_clock::now();
        RunManifest manifest = make_manifest("pipeline", rawArgs, seed);
        manifest.addInput(pConfig);
        manifest.addInput(netPath);
        manifest.addInput(patPath);
        for (const char* f : {"pcf.csv", "fit.json", "model.json", "envelope.json", "envelope.svg"})
            manifest.outputs.push_back(outPath(f));
        manifest.write(outPath("manifest.json"));
        json summary;
        summary["snap_distance_max"] = snap;
        summary["intensity"] = estimate_intensity(pat);
        summary["points"] = pat.size();
        summary["pvalue"] = env.test.pvalue;
        summary["wall_seconds"] =
            std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count() / 1000.0;
        std::cout << summary.dump(2) << "\n";
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const FileError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const SingularMatrix& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const NotPositiveSemidefinite& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const OptimizerFailed& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
