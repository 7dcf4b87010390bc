#include "entroscope/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "entroscope/errors.hpp"

namespace entroscope::io {

namespace {

using nlohmann::json;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

double in_unit(double nats, bool base2) { return base2 ? nats / std::log(2.0) : nats; }

Rational parse_rational(const json& j, const char* where) {
    if (!j.is_string()) {
        throw ValidationError(std::string(where) + ": rationals must be strings");
    }
    const auto value = Rational::parse(j.get<std::string>());
    if (!value) {
        throw ValidationError(std::string(where) + ": cannot parse '" + j.get<std::string>() +
                              "' as a rational");
    }
    return *value;
}

}  // namespace

std::string method_name(Method m) {
    switch (m) {
        case Method::lap: return "lap";
        case Method::markov: return "markov";
        case Method::horseshoe: return "horseshoe";
    }
    return "?";
}

std::string status_name(CheckStatus s) {
    switch (s) {
        case CheckStatus::pass: return "pass";
        case CheckStatus::fail: return "fail";
        case CheckStatus::skipped: return "skipped";
    }
    return "?";
}

// -- map documents ---------------------------------------------------------------

std::string to_json(const MapDocument& doc) {
    json j;
    j["domain"] = {doc.map.domain_lo().str(), doc.map.domain_hi().str()};
    json points = json::array();
    for (const Point& p : doc.map.points()) {
        points.push_back({p.x.str(), p.y.str()});
    }
    j["points"] = std::move(points);
    if (!doc.metadata.empty()) j["metadata"] = doc.metadata;
    return j.dump(2) + "\n";
}

MapDocument map_document_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("map document is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("domain") || !j.contains("points")) {
        throw ValidationError("map document needs 'domain' and 'points' fields");
    }
    const json& domain = j["domain"];
    if (!domain.is_array() || domain.size() != 2) {
        throw ValidationError("'domain' must be a pair of rational strings");
    }
    const Rational lo = parse_rational(domain[0], "domain");
    const Rational hi = parse_rational(domain[1], "domain");

    const json& points = j["points"];
    if (!points.is_array() || points.size() < 2) {
        throw ValidationError("'points' must list at least two breakpoints");
    }
    std::vector<Point> pts;
    pts.reserve(points.size());
    for (const json& pj : points) {
        if (!pj.is_array() || pj.size() != 2) {
            throw ValidationError("each point must be a pair of rational strings");
        }
        Rational x = parse_rational(pj[0], "points");
        Rational y = parse_rational(pj[1], "points");
        pts.push_back({std::move(x), std::move(y)});
    }
    PLMap map = make_broken_line(std::move(pts));
    if (map.domain_lo() != lo || map.domain_hi() != hi) {
        throw ValidationError("'domain' disagrees with the extreme breakpoints");
    }
    std::string metadata;
    if (j.contains("metadata") && j["metadata"].is_string()) {
        metadata = j["metadata"].get<std::string>();
    }
    return MapDocument{std::move(map), std::move(metadata)};
}

MapDocument load_map(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open map file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return map_document_from_json(buffer.str());
}

void save_map(const std::filesystem::path& path, const MapDocument& doc) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write map file: " + path.string());
    out << to_json(doc);
}

// -- entropy reports ----------------------------------------------------------------

std::string estimate_to_text(const EntropyEstimate& est, bool base2) {
    std::ostringstream os;
    const char* unit = base2 ? "bits" : "nats";
    os << "lower: " << fmt(in_unit(est.lower, base2)) << " " << unit << "\n";
    os << "upper: " << fmt(in_unit(est.upper, base2)) << " " << unit << "\n";
    os << "methods:";
    for (Method m : est.methods) os << " " << method_name(m);
    os << "\n";
    os << "trace:\n";
    for (const LapTracePoint& p : est.trace) {
        os << "  n=" << p.n << " laps=" << p.laps << " bound=" << fmt(in_unit(p.bound, base2))
           << "\n";
    }
    if (est.truncated) os << "note: trace truncated at the breakpoint cap\n";
    return os.str();
}

std::string estimate_to_json(const EntropyEstimate& est, bool base2) {
    json j;
    j["lower"] = in_unit(est.lower, base2);
    j["upper"] = in_unit(est.upper, base2);
    j["unit"] = base2 ? "bits" : "nats";
    json methods = json::array();
    for (Method m : est.methods) methods.push_back(method_name(m));
    j["methods"] = std::move(methods);
    json trace = json::array();
    for (const LapTracePoint& p : est.trace) {
        trace.push_back({{"n", p.n}, {"laps", p.laps}, {"bound", in_unit(p.bound, base2)}});
    }
    j["trace"] = std::move(trace);
    j["truncated"] = est.truncated;
    return j.dump(2) + "\n";
}

std::string estimate_to_csv(const EntropyEstimate& est, bool base2) {
    std::ostringstream os;
    os << "quantity,n,value\n";
    for (const LapTracePoint& p : est.trace) {
        os << "trace," << p.n << "," << fmt(in_unit(p.bound, base2)) << "\n";
    }
    os << "lower,," << fmt(in_unit(est.lower, base2)) << "\n";
    os << "upper,," << fmt(in_unit(est.upper, base2)) << "\n";
    return os.str();
}

// -- verification reports -------------------------------------------------------------

std::string report_to_text(const VerificationReport& report) {
    std::ostringstream os;
    os << "seed: " << report.seed << "\n";
    os << "corpus_size: " << report.corpus_size << "\n";
    unsigned long passed = 0;
    for (const Check& c : report.checks) {
        os << "  [" << status_name(c.status) << "] " << c.name;
        if (!c.detail.empty()) os << " - " << c.detail;
        os << "\n";
        if (c.status != CheckStatus::fail) ++passed;
    }
    os << (report.all_passed() ? "result: PASS" : "result: FAIL") << " (" << passed << "/"
       << report.checks.size() << ")\n";
    return os.str();
}

std::string report_to_json(const VerificationReport& report) {
    json j;
    j["seed"] = report.seed;
    j["corpus_size"] = report.corpus_size;
    json checks = json::array();
    for (const Check& c : report.checks) {
        checks.push_back({{"name", c.name}, {"status", status_name(c.status)},
                          {"detail", c.detail}});
    }
    j["checks"] = std::move(checks);
    j["all_passed"] = report.all_passed();
    return j.dump(2) + "\n";
}

// -- pictures -----------------------------------------------------------------------

std::string map_to_svg(const PLMap& f) {
    const double lo = f.domain_lo().to_double();
    const double hi = f.domain_hi().to_double();
    const double span = hi - lo;
    std::ostringstream os;
    os << std::fixed << std::setprecision(2);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 512 512\" "
          "width=\"512\" height=\"512\">\n";
    os << "  <rect x=\"0\" y=\"0\" width=\"512\" height=\"512\" fill=\"white\" "
          "stroke=\"#444\"/>\n";
    os << "  <line x1=\"0\" y1=\"512\" x2=\"512\" y2=\"0\" stroke=\"#ccc\" "
          "stroke-dasharray=\"4 4\"/>\n";
    os << "  <polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < f.points().size(); ++i) {
        const Point& p = f.points()[i];
        const double x = 512.0 * (p.x.to_double() - lo) / span;
        const double y = 512.0 * (1.0 - p.y.to_double());
        if (i) os << " ";
        os << x << "," << y;
    }
    os << "\"/>\n</svg>\n";
    return os.str();
}

}  // namespace entroscope::io
