#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "netcox/cox.hpp"
#include "netcox/inference.hpp"
#include "netcox/network.hpp"

namespace netcox {

/// Network file: {"vertices": [[x,y],...], "segments": [[a,b],...] or
/// [[a,b,length],...], "marks": ["..."] (optional, per segment)}.
LinearNetwork load_network(const std::string& path);
void save_network(const LinearNetwork& net, const std::string& path);

/// Pattern CSV with header "segment,offset" (preferred) or "x,y"; planar
/// coordinates are snapped onto the nearest segment. The largest snap
/// distance is reported through *maxSnap when given.
PointPattern load_pattern(const std::string& path, const LinearNetwork& net,
                          double* maxSnap = nullptr);
void save_pattern(const PointPattern& pat, const std::string& path);

/// {"sigma2": ..., "family": "...", "params": {...}, "metric":
/// "geodesic"|"resistance"}; Bernstein-class families carry
/// "params": {"mixing": "...", ...}.
IsotropicCovariance load_covariance(const std::string& path);
IsotropicCovariance covariance_from_json(const std::string& text);
std::string covariance_to_json(const IsotropicCovariance& cov);

/// {"kind": "lgcp"|"icp"|"pcpp"|, "h": ..., "intensity": {"rate": ...} or
/// {"rates": {...}, "fallback": ...}, "cov": {...}}.
CoxModel load_model(const std::string& path);
CoxModel model_from_json(const std::string& text);
std::string model_to_json(const CoxModel& model);

/// Columns: r then one column per named curve.
void save_curves_csv(const std::string& path,
                     const std::vector<std::pair<std::string, const SummaryCurve*>>& curves);
SummaryCurve load_curve_csv(const std::string& path, const std::string& column = "");

std::uint64_t fnv1a(const std::string& bytes);
std::uint64_t fnv1a_file(const std::string& path);

/// Reproducibility record written next to every tool output.
struct RunManifest {
    std::string tool;
    std::string version;
    std::vector<std::string> arguments;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, std::uint64_t>> inputHashes;  // path, fnv1a
    std::vector<std::string> outputs;

    void addInput(const std::string& path) { inputHashes.emplace_back(path, fnv1a_file(path)); }
    void write(const std::string& path) const;
};

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace netcox
