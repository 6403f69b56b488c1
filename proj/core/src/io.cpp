#include "netcox/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace netcox {

using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FileError("cannot write " + path);
    out << content;
    if (!out) throw FileError("write failed for " + path);
}

namespace {

json parse_json(const std::string& text, const std::string& what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ParseError("malformed JSON in " + what);
    return j;
}

}  // namespace

LinearNetwork load_network(const std::string& path) {
    json j = parse_json(read_file(path), path);
    if (!j.contains("vertices") || !j.contains("segments"))
        throw ParseError(path + ": expected 'vertices' and 'segments'");
    std::vector<Vec2> vertices;
    for (const auto& v : j["vertices"]) {
        if (!v.is_array() || v.size() != 2) throw ParseError(path + ": vertex must be [x, y]");
        vertices.push_back({v[0].get<double>(), v[1].get<double>()});
    }
    std::vector<Segment> segments;
    for (const auto& s : j["segments"]) {
        if (!s.is_array() || s.size() < 2 || s.size() > 4)
            throw ParseError(path +
                             ": segment must be [a, b], [a, b, length] or [a, b, length, mark]");
        Segment seg;
        seg.a = s[0].get<int>();
        seg.b = s[1].get<int>();
        seg.length = s.size() >= 3 ? s[2].get<double>() : 0.0;
        if (s.size() == 4) seg.mark = s[3].get<std::string>();
        segments.push_back(seg);
    }
    if (j.contains("marks")) {
        const auto& marks = j["marks"];
        if (marks.size() != segments.size())
            throw ParseError(path + ": 'marks' must have one entry per segment");
        for (size_t i = 0; i < segments.size(); ++i)
            segments[i].mark = marks[i].get<std::string>();
    }
    return LinearNetwork::build(std::move(vertices), std::move(segments));
}

void save_network(const LinearNetwork& net, const std::string& path) {
    json j;
    j["vertices"] = json::array();
    for (const Vec2& v : net.vertices()) j["vertices"].push_back({v.x, v.y});
    j["segments"] = json::array();
    bool anyMark = false;
    for (const Segment& s : net.segments()) {
        j["segments"].push_back({s.a, s.b, s.length});
        anyMark = anyMark || !s.mark.empty();
    }
    if (anyMark) {
        j["marks"] = json::array();
        for (const Segment& s : net.segments()) j["marks"].push_back(s.mark);
    }
    write_file(path, j.dump(2) + "\n");
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
        size_t start = cell.find_first_not_of(' ');
        out.push_back(start == std::string::npos ? "" : cell.substr(start));
    }
    return out;
}

NetPoint snap_to_network(const LinearNetwork& net, Vec2 p, double* dist) {
    NetPoint best;
    double bestD2 = std::numeric_limits<double>::infinity();
    for (int i = 0; i < net.numSegments(); ++i) {
        const Segment& s = net.segment(i);
        Vec2 a = net.vertex(s.a), b = net.vertex(s.b);
        double vx = b.x - a.x, vy = b.y - a.y;
        double den = vx * vx + vy * vy;
        double f = den > 0.0 ? ((p.x - a.x) * vx + (p.y - a.y) * vy) / den : 0.0;
        f = std::clamp(f, 0.0, 1.0);
        double dx = p.x - (a.x + f * vx), dy = p.y - (a.y + f * vy);
        double d2 = dx * dx + dy * dy;
        if (d2 < bestD2) {
            bestD2 = d2;
            best = {i, f * s.length};
        }
    }
    *dist = std::sqrt(bestD2);
    return best;
}

}  // namespace

PointPattern load_pattern(const std::string& path, const LinearNetwork& net, double* maxSnap) {
    std::istringstream in(read_file(path));
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path + ": empty file");
    std::vector<std::string> header = split_csv_line(line);
    bool onNetwork;
    if (header.size() >= 2 && header[0] == "segment" && header[1] == "offset")
        onNetwork = true;
    else if (header.size() >= 2 && header[0] == "x" && header[1] == "y")
        onNetwork = false;
    else
        throw ParseError(path + ": header must be 'segment,offset' or 'x,y'");

    PointPattern pat;
    pat.net = &net;
    double worst = 0.0;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        std::vector<std::string> cells = split_csv_line(line);
        if (cells.size() < 2)
            throw ParseError(path + ":" + std::to_string(lineno) + ": expected two columns");
        try {
            if (onNetwork) {
                NetPoint p{std::stoi(cells[0]), std::stod(cells[1])};
                net.checkPoint(p);
                pat.points.push_back(net.canonical(p));
            } else {
                double d = 0.0;
                pat.points.push_back(
                    snap_to_network(net, {std::stod(cells[0]), std::stod(cells[1])}, &d));
                worst = std::max(worst, d);
            }
        } catch (const std::invalid_argument&) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": not a number");
        } catch (const std::out_of_range&) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": number out of range");
        }
    }
    if (maxSnap) *maxSnap = worst;
    return pat;
}

void save_pattern(const PointPattern& pat, const std::string& path) {
    std::ostringstream out;
    out << "segment,offset\n";
    out.precision(17);
    for (const NetPoint& p : pat.points) out << p.segment << "," << p.offset << "\n";
    write_file(path, out.str());
}

namespace {

CorrelationFamily family_from_json(const json& j, const std::string& what) {
    std::string name = j.at("family").get<std::string>();
    const json& p = j.value("params", json::object());
    auto get = [&](const char* key) {
        if (!p.contains(key))
            throw ParseError(what + ": family '" + name + "' needs parameter '" + key + "'");
        return p[key].get<double>();
    };
    if (name == "powered_exponential")
        return CorrelationFamily::poweredExponential(get("phi"), get("alpha"));
    if (name == "exponential") return CorrelationFamily::exponential(get("s"));
    if (name == "matern") return CorrelationFamily::matern(get("phi"), get("alpha"));
    if (name == "generalized_cauchy")
        return CorrelationFamily::generalizedCauchy(get("phi"), get("alpha"), get("tau"));
    if (name == "dagum") return CorrelationFamily::dagum(get("phi"), get("tau"), get("alpha"));
    if (name == "bernstein") {
        std::string mix = p.value("mixing", "");
        if (mix == "gamma")
            return CorrelationFamily::bernstein(BernsteinCDF::gamma(get("tau"), get("phi")));
        if (mix == "inverse_gamma")
            return CorrelationFamily::bernstein(BernsteinCDF::inverseGamma(get("tau"), get("phi")));
        if (mix == "gig")
            return CorrelationFamily::bernstein(BernsteinCDF::generalizedInverseGaussian(
                get("psi"), get("chi"), get("lambda")));
        if (mix == "degenerate")
            return CorrelationFamily::bernstein(BernsteinCDF::degenerate(get("s")));
        throw ParseError(what + ": unknown mixing distribution '" + mix + "'");
    }
    throw ParseError(what + ": unknown family '" + name + "'");
}

json family_to_json(const CorrelationFamily& f) {
    json j;
    switch (f.kind()) {
        case CorrelationFamily::Kind::PoweredExponential:
            j["family"] = "powered_exponential";
            j["params"] = {{"phi", f.phi()}, {"alpha", f.alpha()}};
            break;
        case CorrelationFamily::Kind::Matern:
            j["family"] = "matern";
            j["params"] = {{"phi", f.phi()}, {"alpha", f.alpha()}};
            break;
        case CorrelationFamily::Kind::GeneralizedCauchy:
            j["family"] = "generalized_cauchy";
            j["params"] = {{"phi", f.phi()}, {"alpha", f.alpha()}, {"tau", f.tau()}};
            break;
        case CorrelationFamily::Kind::Dagum:
            j["family"] = "dagum";
            j["params"] = {{"phi", f.phi()}, {"tau", f.tau()}, {"alpha", f.alpha()}};
            break;
        case CorrelationFamily::Kind::Bernstein: {
            j["family"] = "bernstein";
            const BernsteinCDF& F = f.mixing();
            switch (F.kind) {
                case BernsteinCDF::Kind::Gamma:
                    j["params"] = {{"mixing", "gamma"}, {"tau", F.tau}, {"phi", F.phi}};
                    break;
                case BernsteinCDF::Kind::InverseGamma:
                    j["params"] = {{"mixing", "inverse_gamma"}, {"tau", F.tau}, {"phi", F.phi}};
                    break;
                case BernsteinCDF::Kind::GeneralizedInverseGaussian:
                    j["params"] = {{"mixing", "gig"},
                                   {"psi", F.psi},
                                   {"chi", F.chi},
                                   {"lambda", F.lambda}};
                    break;
                case BernsteinCDF::Kind::Degenerate:
                    j["params"] = {{"mixing", "degenerate"}, {"s", F.s}};
                    break;
            }
            break;
        }
    }
    return j;
}

IsotropicCovariance covariance_from(const json& j, const std::string& what) {
    IsotropicCovariance cov;
    cov.sigma2 = j.at("sigma2").get<double>();
    if (!(cov.sigma2 > 0.0)) throw ParseError(what + ": sigma2 must be positive");
    cov.family = family_from_json(j, what);
    std::string metric = j.value("metric", "resistance");
    if (metric == "geodesic")
        cov.metric = MetricKind::Geodesic;
    else if (metric == "resistance")
        cov.metric = MetricKind::Resistance;
    else
        throw ParseError(what + ": metric must be 'geodesic' or 'resistance'");
    return cov;
}

json covariance_to(const IsotropicCovariance& cov) {
    json j = family_to_json(cov.family);
    j["sigma2"] = cov.sigma2;
    j["metric"] = cov.metric == MetricKind::Geodesic ? "geodesic" : "resistance";
    return j;
}

IntensityModel intensity_from(const json& j, const std::string& what) {
    if (j.contains("rate")) return IntensityModel::constant(j["rate"].get<double>());
    if (j.contains("rates")) {
        std::map<std::string, double> rates;
        for (const auto& [mark, r] : j["rates"].items()) rates[mark] = r.get<double>();
        return IntensityModel::byMark(std::move(rates), j.value("fallback", 0.0));
    }
    throw ParseError(what + ": intensity needs 'rate' or 'rates'");
}

json intensity_to(const IntensityModel& m) {
    json j;
    if (m.perMark.empty()) {
        j["rate"] = m.baseRate;
    } else {
        j["rates"] = json::object();
        for (const auto& [mark, r] : m.perMark) j["rates"][mark] = r;
        j["fallback"] = m.baseRate;
    }
    return j;
}

}  // namespace

IsotropicCovariance covariance_from_json(const std::string& text) {
    return covariance_from(parse_json(text, "covariance"), "covariance");
}

IsotropicCovariance load_covariance(const std::string& path) {
    return covariance_from(parse_json(read_file(path), path), path);
}

std::string covariance_to_json(const IsotropicCovariance& cov) {
    return covariance_to(cov).dump(2) + "\n";
}

CoxModel model_from_json(const std::string& text) {
    json j = parse_json(text, "model");
    CoxModel m;
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "lgcp")
        m.kind = CoxKind::LGCP;
    else if (kind == "icp")
        m.kind = CoxKind::ICP;
    else if (kind == "pcpp")
        m.kind = CoxKind::PCPP;
    else
        throw ParseError("model: unknown kind '" + kind + "'");
    m.h = j.value("h", 1);
    m.intensity = intensity_from(j.at("intensity"), "model");
    m.cov = covariance_from(j.at("cov"), "model");
    m.validate();
    return m;
}

CoxModel load_model(const std::string& path) { return model_from_json(read_file(path)); }

std::string model_to_json(const CoxModel& model) {
    json j;
    j["kind"] = to_string(model.kind);
    j["h"] = model.h;
    j["intensity"] = intensity_to(model.intensity);
    j["cov"] = covariance_to(model.cov);
    return j.dump(2) + "\n";
}

void save_curves_csv(const std::string& path,
                     const std::vector<std::pair<std::string, const SummaryCurve*>>& curves) {
    if (curves.empty()) throw InvalidParameters("no curves to save");
    const std::vector<double>& r = curves.front().second->r;
    for (const auto& [name, c] : curves)
        if (c->r != r) throw GridMismatch("curves use different grids");
    std::ostringstream out;
    out.precision(12);
    out << "r";
    for (const auto& [name, c] : curves) out << "," << name;
    out << "\n";
    for (size_t k = 0; k < r.size(); ++k) {
        out << r[k];
        for (const auto& [name, c] : curves) out << "," << c->y[k];
        out << "\n";
    }
    write_file(path, out.str());
}

SummaryCurve load_curve_csv(const std::string& path, const std::string& column) {
    std::istringstream in(read_file(path));
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path + ": empty file");
    std::vector<std::string> header = split_csv_line(line);
    if (header.size() < 2 || header[0] != "r")
        throw ParseError(path + ": expected header starting with 'r'");
    size_t col = 1;
    if (!column.empty()) {
        auto it = std::find(header.begin(), header.end(), column);
        if (it == header.end()) throw ParseError(path + ": no column '" + column + "'");
        col = it - header.begin();
    }
    SummaryCurve out;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        std::vector<std::string> cells = split_csv_line(line);
        if (cells.size() <= col)
            throw ParseError(path + ":" + std::to_string(lineno) + ": short row");
        try {
            out.r.push_back(std::stod(cells[0]));
            out.y.push_back(std::stod(cells[col]));
        } catch (const std::exception&) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": not a number");
        }
    }
    return out;
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::uint64_t fnv1a_file(const std::string& path) { return fnv1a(read_file(path)); }

void RunManifest::write(const std::string& path) const {
    json j;
    j["tool"] = tool;
    j["version"] = version;
    j["arguments"] = arguments;
    j["seed"] = seed;
    j["inputs"] = json::array();
    for (const auto& [p, h] : inputHashes) {
        char buf[17];
        std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
        j["inputs"].push_back({{"path", p}, {"fnv1a", std::string(buf)}});
    }
    j["outputs"] = outputs;
    write_file(path, j.dump(2) + "\n");
}

}  // namespace netcox
