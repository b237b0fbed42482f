#pragma once

// Report serialization: JSON with every float at 17 significant digits, the
// transition graph as DOT, and the tessellation near a point as SVG.

#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "thurston/analysis.hpp"
#include "thurston/pullback.hpp"
#include "thurston/tessellation.hpp"

namespace thurston {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

inline std::string format_double(double x) {
    if (std::isnan(x)) return "null";
    if (std::isinf(x)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace detail {

inline void write_json(std::ostream& os, const json& v, int indent, int depth) {
    auto pad = [&](int d) {
        if (indent >= 0) os << '\n' << std::string(static_cast<std::size_t>(indent * d), ' ');
    };
    switch (v.type()) {
        case json::value_t::object: {
            if (v.empty()) {
                os << "{}";
                return;
            }
            os << '{';
            bool first = true;
            for (const auto& [k, x] : v.items()) {
                if (!first) os << ',';
                first = false;
                pad(depth + 1);
                os << json(k).dump() << (indent >= 0 ? ": " : ":");
                write_json(os, x, indent, depth + 1);
            }
            pad(depth);
            os << '}';
            return;
        }
        case json::value_t::array: {
            if (v.empty()) {
                os << "[]";
                return;
            }
            // Short numeric arrays (points) stay on one line.
            bool flat = v.size() <= 2 && std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_number(); });
            os << '[';
            for (std::size_t k = 0; k < v.size(); ++k) {
                if (k) os << (flat ? ", " : ",");
                if (!flat) pad(depth + 1);
                write_json(os, v[k], indent, depth + 1);
            }
            if (!flat) pad(depth);
            os << ']';
            return;
        }
        case json::value_t::number_float: os << format_double(v.get<double>()); return;
        default: os << v.dump(); return;
    }
}

}  // namespace detail

inline std::string dump_json(const json& v, int indent = 2) {
    std::ostringstream os;
    detail::write_json(os, v, indent, 0);
    if (indent >= 0) os << '\n';
    return os.str();
}

inline json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline json to_json(const SpherePoint& p) { return p.is_infinite() ? json("inf") : to_json(p.value()); }

inline json to_json(const FareyTriangle& t) {
    return json::array({t[0].to_string(), t[1].to_string(), t[2].to_string()});
}

inline json to_json(const RationalMap& r) {
    json num = json::array(), den = json::array();
    for (auto c : r.num().coefficients()) num.push_back(to_json(c));
    for (auto c : r.den().coefficients()) den.push_back(to_json(c));
    return {{"num", num}, {"den", den}};
}

inline json to_json(const Circle& c) {
    json out{{"kind", c.is_line() ? "line" : "circle"}};
    if (c.is_line()) {
        out["point"] = to_json(c.base());
        out["direction"] = to_json(c.direction());
    } else {
        out["center"] = to_json(c.center());
        out["radius"] = c.radius();
    }
    return out;
}

inline json to_json(const RamificationPortrait& p) {
    json pts = json::array();
    for (const auto& pt : p.points) {
        pts.push_back({{"z", to_json(pt.z)},
                       {"marked", pt.marked},
                       {"critical", pt.critical},
                       {"postcritical", pt.postcritical},
                       {"local_degree", pt.local_degree},
                       {"image", pt.image}});
    }
    json edges = json::array();
    for (const auto& e : p.edges()) edges.push_back({{"source", e.source}, {"target", e.target}, {"local_degree", e.local_degree}});
    return {{"points", pts}, {"edges", edges}};
}

inline json to_json(const OrbifoldSignature& s) {
    json out = json::array();
    for (const auto& e : s.entries) out.push_back({{"point", to_json(e.point)}, {"nu", to_string(e.nu)}});
    return out;
}

inline json to_json(const CircleCheck& c) {
    json out{{"pass", c.pass}, {"max_deviation", c.max_deviation}, {"samples", c.samples}};
    if (c.image) out["image_circle"] = to_json(*c.image);
    if (!c.failures.empty()) out["failures"] = c.failures;
    return out;
}

inline json to_json(const CandidateReport& r) {
    json out{{"w", to_json(r.candidate.w)},
             {"y", to_json(r.candidate.y)},
             {"validated", r.validated},
             {"in_base_tile", r.in_base_tile},
             {"residual", r.residual},
             {"contraction", r.contraction}};
    if (r.tau) out["tau"] = to_json(*r.tau);
    if (!r.failure.empty()) out["failure"] = r.failure;
    return out;
}

inline json to_json(const AttractorReport& rep) {
    json cands = json::array(), attr = json::array(), cycles = json::array(), trans = json::array();
    for (const auto& c : rep.candidates) cands.push_back(c.to_string());
    for (const auto& c : rep.attractor) attr.push_back(c.to_string());
    for (const auto& cyc : rep.cycles) {
        json row = json::array();
        for (const auto& c : cyc) row.push_back(c.to_string());
        cycles.push_back(row);
    }
    for (const auto& [a, b] : rep.transition) trans.push_back({{"from", a.to_string()}, {"to", b.to_string()}});
    json tiles = json::array();
    for (const auto& t : rep.neighbourhood) tiles.push_back(to_json(t));
    return {{"candidates", cands}, {"transition", trans}, {"attractor", attr},   {"cycles", cycles},
            {"transient_max", rep.transient_max},        {"eps", rep.eps},       {"neighbourhood_tiles", tiles}};
}

inline json to_json(const AttractionStats& s) {
    json fails = json::array();
    for (const auto& [c, why] : s.failures) fails.push_back({{"slope", c.to_string()}, {"reason", why}});
    return {{"samples", s.samples},
            {"reached", s.reached},
            {"max_hitting_time", s.max_hitting_time},
            {"mean_hitting_time", s.mean_hitting_time},
            {"failures", fails}};
}

inline json to_json(const ContinuationStats& s) {
    return {{"max_residual_y", s.max_residual_y},
            {"max_residual_x", s.max_residual_x},
            {"accepted_steps", s.accepted},
            {"rejected_steps", s.rejected}};
}

// ---------------------------------------------------------------- DOT

inline std::string dot_id(const CurveClass& c) { return "\"" + c.to_string() + "\""; }

inline std::string transition_dot(const AttractorReport& rep) {
    std::set<CurveClass> in_attr(rep.attractor.begin(), rep.attractor.end());
    std::ostringstream os;
    os << "digraph transition {\n";
    os << "  rankdir=LR;\n";
    for (const auto& c : rep.candidates) {
        os << "  " << dot_id(c) << (in_attr.count(c) ? " [shape=doublecircle];\n" : " [shape=circle];\n");
    }
    for (const auto& [a, b] : rep.transition) {
        if (std::find(rep.candidates.begin(), rep.candidates.end(), a) == rep.candidates.end()) {
            os << "  " << dot_id(a) << (in_attr.count(a) ? " [shape=doublecircle];\n" : " [shape=circle];\n");
        }
    }
    for (const auto& [a, b] : rep.transition) os << "  " << dot_id(a) << " -> " << dot_id(b) << ";\n";
    os << "}\n";
    return os.str();
}

// ---------------------------------------------------------------- SVG

struct SvgOptions {
    double width = 800.0;
    double height = 480.0;
    /// Visible window of the upper half-plane.
    double x_min = -1.5, x_max = 2.5, y_max = 2.4;
};

/// Tiles within max_depth flips of center, drawn as ideal triangles, with
/// optional marked points (the fixed point and an orbit).
inline std::string tessellation_svg(const FareyTriangle& center, int max_depth, const std::vector<Complex>& orbit = {},
                                    std::optional<Complex> fixed_point = std::nullopt, const SvgOptions& o = {}) {
    const double sx = o.width / (o.x_max - o.x_min);
    const double sy = o.height / o.y_max;
    auto X = [&](double x) { return (x - o.x_min) * sx; };
    auto Y = [&](double y) { return o.height - y * sy; };
    auto fmt = [](double v) {
        char b[32];
        std::snprintf(b, sizeof b, "%.6g", v);
        return std::string(b);
    };
    const double top = o.y_max * 1.05;

    auto at = [&](double x, double y) { return fmt(X(x)) + " " + fmt(Y(y)); };
    // Upper semicircle from the current point x1 to x2 > x1.
    auto arc = [&](double x1, double x2) {
        double r = (x2 - x1) / 2.0;
        return " A " + fmt(r * sx) + " " + fmt(r * sy) + " 0 0 1 " + at(x2, 0.0);
    };
    auto tile_path = [&](const FareyTriangle& t) {
        // Vertices sorted with infinity last.
        double a = t[0].to_double(), b = t[1].to_double();
        if (t[2].is_infinite()) return "M " + at(a, top) + " L " + at(a, 0.0) + arc(a, b) + " L " + at(b, top);
        double c = t[2].to_double();
        return "M " + at(a, 0.0) + arc(a, c) + " M " + at(a, 0.0) + arc(a, b) + arc(b, c);
    };

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(o.width) << "\" height=\"" << fmt(o.height)
       << "\" viewBox=\"0 0 " << fmt(o.width) << ' ' << fmt(o.height) << "\">\n";
    os << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "  <g fill=\"none\" stroke=\"#335\" stroke-width=\"0.8\">\n";
    int count = 0;
    for (const auto& ring : tiles_within_flips(center, max_depth)) {
        for (const auto& t : ring) {
            std::string d = tile_path(t);
            os << "    <path class=\"tile\" data-tile=\"" << t.to_string() << "\" d=\"" << d << "\"/>\n";
            ++count;
        }
    }
    os << "  </g>\n";
    if (!orbit.empty()) {
        os << "  <g fill=\"#c33\">\n";
        for (std::size_t k = 0; k < orbit.size(); ++k) {
            os << "    <circle class=\"orbit\" data-step=\"" << k << "\" cx=\"" << fmt(X(orbit[k].real()))
               << "\" cy=\"" << fmt(Y(orbit[k].imag())) << "\" r=\"3\"/>\n";
        }
        os << "  </g>\n";
    }
    if (fixed_point) {
        os << "  <circle class=\"fixed-point\" cx=\"" << fmt(X(fixed_point->real())) << "\" cy=\""
           << fmt(Y(fixed_point->imag())) << "\" r=\"4\" fill=\"#2a2\"/>\n";
    }
    os << "  <!-- tiles: " << count << " -->\n";
    os << "</svg>\n";
    return os.str();
}

}  // namespace thurston
