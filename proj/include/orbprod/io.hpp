#pragma once

// CSV and JSON encodings shared by the command-line tool.
//
// CSV: optional '#' provenance lines, then one header row, comma separated,
// LF endings, floats printed with 17 significant digits.
// JSON: UTF-8 with keys in a fixed insertion order.

#include <cstdio>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "classes.hpp"
#include "densities.hpp"
#include "experiments.hpp"
#include "harmonic.hpp"
#include "pointsets.hpp"
#include "quantize.hpp"

namespace orbprod {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kVersion = "0.1.0";

/// "%.17g"; non-finite values print as inf / -inf / nan.
inline std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

class CsvWriter {
public:
    explicit CsvWriter(std::ostream& os) : os_(os) {}

    void comment(std::string_view line) { os_ << "# " << line << '\n'; }

    void header(const std::vector<std::string>& cols) { row_strings(cols); }

    template <class... Ts>
    void row(const Ts&... values) {
        bool first = true;
        ((os_ << (first ? "" : ",") << cell(values), first = false), ...);
        os_ << '\n';
    }

private:
    static std::string cell(double x) { return format_double(x); }
    static std::string cell(int x) { return std::to_string(x); }
    static std::string cell(long x) { return std::to_string(x); }
    static std::string cell(long long x) { return std::to_string(x); }
    static std::string cell(unsigned long x) { return std::to_string(x); }
    static std::string cell(unsigned long long x) { return std::to_string(x); }
    static std::string cell(const std::string& s) { return s; }
    static std::string cell(std::string_view s) { return std::string(s); }

    void row_strings(const std::vector<std::string>& cols) {
        for (std::size_t i = 0; i < cols.size(); ++i) os_ << (i ? "," : "") << cols[i];
        os_ << '\n';
    }

    std::ostream& os_;
};

// ---------------------------------------------------------------------------
// Class descriptors: {"kind": ..., "param": x, "flavor": ...}

inline Json to_json(const ClassDescriptor& d) {
    Json j;
    std::visit(
        [&](const auto& c) {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, ConjugacyClass>) {
                j["kind"] = "conjugacy";
                j["param"] = c.alpha;
                j["flavor"] = "su2";
            } else if constexpr (std::is_same_v<T, SphericalClassCompact>) {
                j["kind"] = "spherical_compact";
                j["param"] = c.r;
                j["flavor"] = "su2";
            } else {
                j["kind"] = "spherical_noncompact";
                j["param"] = c.t;
                j["flavor"] = c.flavor == Flavor::Real ? "real" : "complex";
            }
        },
        d);
    return j;
}

inline ClassDescriptor class_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("kind") || !j.contains("param")) {
        throw Error(ErrorKind::InvalidParams, "class descriptor needs 'kind' and 'param'");
    }
    const std::string kind = j.at("kind").get<std::string>();
    const double param = j.at("param").get<double>();
    if (kind == "conjugacy") return ConjugacyClass{param};
    if (kind == "spherical_compact") return SphericalClassCompact{param};
    if (kind == "spherical_noncompact") {
        const std::string flavor = j.value("flavor", std::string("complex"));
        if (flavor != "real" && flavor != "complex") {
            throw Error(ErrorKind::InvalidParams, "flavor must be 'real' or 'complex'");
        }
        return SphericalClassNC{param, flavor == "real" ? Flavor::Real : Flavor::Complex};
    }
    throw Error(ErrorKind::InvalidParams, "unknown class kind '" + kind + "'");
}

// ---------------------------------------------------------------------------

inline Json to_json(const ComparisonReport& r) {
    Json j;
    j["kind"] = std::string(to_string(r.kind));
    j["params"] = {r.params[0], r.params[1]};
    j["n"] = r.n;
    j["seed"] = r.seed;
    j["ks"] = r.ks;
    j["l1"] = r.l1;
    return j;
}

inline Json to_json(const ConstantsEntry& e) {
    Json j;
    j["kind"] = std::string(to_string(e.kind));
    j["params"] = {e.params[0], e.params[1]};
    j["paper_constant"] = e.paper_constant ? Json(*e.paper_constant) : Json(nullptr);
    j["verified_constant"] = e.verified_constant;
    j["ratio"] = e.ratio ? Json(*e.ratio) : Json(nullptr);
    j["flagged"] = e.flagged;
    return j;
}

inline Json to_json(const EnergyReport& r) {
    Json j;
    j["s"] = r.s;
    j["energy"] = r.energy;
    j["gradient_norm"] = r.gradient_norm;
    return j;
}

inline Json to_json(const QuantizationReport& r) {
    Json j;
    j["n"] = r.n;
    j["m"] = r.m;
    j["cg_labels"] = r.cg_labels;
    j["support_interval"] = {r.support.lo, r.support.hi};
    j["support_labels"] = r.support_labels;
    j["ratio"] = r.ratio;
    j["cg_subset"] = r.cg_subset;
    j["folded"] = r.folded;
    return j;
}

inline Json to_json(const SpherePointSet& ps) {
    Json j;
    j["method"] = std::string(to_string(ps.method));
    j["n"] = ps.size();
    Json pts = Json::array();
    for (const auto& p : ps.points) pts.push_back({p[0], p[1], p[2]});
    j["points"] = std::move(pts);
    return j;
}

inline SpherePointSet pointset_from_json(const Json& j) {
    SpherePointSet ps;
    const std::string m = j.value("method", std::string("random"));
    if (m == "icosa") ps.method = PointSetMethod::IcosaLattice;
    else if (m == "polar") ps.method = PointSetMethod::Polar;
    else if (m == "minimized") ps.method = PointSetMethod::Minimized;
    for (const auto& p : j.at("points")) ps.points.push_back({p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>()});
    return ps;
}

inline void write_pointset_csv(std::ostream& os, const SpherePointSet& ps) {
    CsvWriter w(os);
    w.header({"x", "y", "z"});
    for (const auto& p : ps.points) w.row(p[0], p[1], p[2]);
}

/// Histogram rows (param, count, pdf_analytic) at bin centers.
inline void write_histogram_csv(std::ostream& os, const Histogram& h, const ProductDensity& d) {
    CsvWriter w(os);
    w.header({"param", "count", "pdf_analytic"});
    for (int i = 0; i < h.bins(); ++i) {
        w.row(h.bin_center(i), static_cast<unsigned long long>(h.counts()[static_cast<std::size_t>(i)]),
              d.pdf(h.bin_center(i)));
    }
}

} // namespace orbprod
