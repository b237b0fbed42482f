#pragma once

// Job configuration read from JSON. Complex numbers are [re, im] pairs (a
// bare number is real), the point at infinity is the string "inf", and a
// polynomial is its coefficient list in ascending degree.
//
//   {
//     "builtin": "rabbit",
//     "map": {"num": [...], "den": [...]},          // f, optional with a builtin
//     "marked": [[0, 0], [1, 0], "inf", ...],
//     "correspondence": {"X": {"num": [...], "den": [...]}, "Y": {...}},
//     "theta": [p0, p1, pinf],
//     "circle": [a, b, c],
//     "anchor": "auto" | {"index": k} | {"tau": [re, im]} | {"y": [re, im]},
//     "tolerances": {"merge": 1e-9, "circle": 1e-9, "graph": 1e-9, "roots": 1e-12},
//     "eps": 1.0,
//     "sampling": {"circle_samples": 256, "graph_samples": 256, "verify_samples": 100,
//                  "height_bound": 50, "max_steps": 30, "seed": 1},
//     "max_depth": 4
//   }

#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "json.hpp"

#include "thurston/builtins.hpp"
#include "thurston/error.hpp"
#include "thurston/pullback.hpp"

namespace thurston {

struct Tolerances {
    double merge = 1e-9;
    double circle = 1e-9;
    double graph = 1e-9;
    double roots = 1e-12;
};

struct Sampling {
    int circle_samples = 256;
    int graph_samples = 256;
    int verify_samples = 100;
    long height_bound = 50;
    int max_steps = 30;
    std::uint64_t seed = 1;
};

struct JobConfig {
    MapJob job;
    AnchorSelection anchor{};
    Tolerances tol{};
    Sampling sampling{};
    double eps = 1.0;
    int max_depth = 4;
};

namespace detail {

using nlohmann::json;

class ConfigReader {
public:
    explicit ConfigReader(const json& root) : root_(root) {}

    [[noreturn]] static void fail(const std::string& path, const std::string& what) {
        throw Error(Errc::ConfigError, "field " + (path.empty() ? std::string("/") : path) + ": " + what);
    }

    static double number(const json& v, const std::string& path) {
        if (!v.is_number()) fail(path, "expected a number");
        return v.get<double>();
    }

    static Complex complex(const json& v, const std::string& path) {
        if (v.is_number()) return {v.get<double>(), 0.0};
        if (!v.is_array() || v.size() != 2) fail(path, "expected [re, im]");
        return {number(v[0], path + "/0"), number(v[1], path + "/1")};
    }

    static SpherePoint point(const json& v, const std::string& path) {
        if (v.is_string()) {
            if (v.get<std::string>() == "inf") return SpherePoint::infinity();
            fail(path, "the only string point is \"inf\"");
        }
        return SpherePoint(complex(v, path));
    }

    static Polynomial polynomial(const json& v, const std::string& path) {
        if (!v.is_array() || v.empty()) fail(path, "expected a nonempty coefficient list");
        std::vector<Complex> c;
        for (std::size_t k = 0; k < v.size(); ++k) c.push_back(complex(v[k], path + "/" + std::to_string(k)));
        Polynomial p(std::move(c));
        if (p.is_zero()) fail(path, "polynomial is zero");
        return p;
    }

    static RationalMap rational(const json& v, const std::string& path) {
        if (!v.is_object() || !v.contains("num")) fail(path, "expected {\"num\": [...], \"den\": [...]}");
        Polynomial num = polynomial(v["num"], path + "/num");
        Polynomial den = v.contains("den") ? polynomial(v["den"], path + "/den") : Polynomial::constant(1.0);
        try {
            return RationalMap(num, den);
        } catch (const Error& e) {
            fail(path, e.message());
        }
    }

    static std::vector<SpherePoint> points(const json& v, const std::string& path) {
        if (!v.is_array()) fail(path, "expected a list of points");
        std::vector<SpherePoint> out;
        for (std::size_t k = 0; k < v.size(); ++k) out.push_back(point(v[k], path + "/" + std::to_string(k)));
        return out;
    }

    static double positive(const json& v, const std::string& path) {
        double x = number(v, path);
        if (!(x > 0.0)) fail(path, "must be positive");
        return x;
    }

    JobConfig read() const {
        if (!root_.is_object()) fail("", "configuration must be an object");
        static const std::vector<std::string> known{"builtin", "map",  "marked",   "correspondence", "theta",
                                                    "circle",  "anchor", "tolerances", "eps",         "sampling",
                                                    "max_depth", "comment"};
        for (const auto& [k, _] : root_.items()) {
            if (std::find(known.begin(), known.end(), k) == known.end()) fail("/" + k, "unknown field");
        }
        JobConfig cfg;
        bool has_builtin = root_.contains("builtin");
        bool has_explicit = root_.contains("map") || root_.contains("correspondence");
        if (has_builtin == has_explicit) {
            fail("", "give exactly one map source: \"builtin\" or explicit \"map\"/\"correspondence\"");
        }
        if (has_builtin) {
            if (!root_["builtin"].is_string()) fail("/builtin", "expected a name");
            try {
                cfg.job = builtin::get(root_["builtin"].get<std::string>());
            } catch (const Error& e) {
                fail("/builtin", e.message());
            }
        } else {
            cfg.job.name = "custom";
            if (root_.contains("map")) cfg.job.f = rational(root_["map"], "/map");
            if (root_.contains("correspondence")) {
                const json& c = root_["correspondence"];
                if (!c.is_object() || !c.contains("X") || !c.contains("Y")) {
                    fail("/correspondence", "expected {\"X\": ..., \"Y\": ...}");
                }
                cfg.job.X = rational(c["X"], "/correspondence/X");
                cfg.job.Y = rational(c["Y"], "/correspondence/Y");
            }
        }
        if (root_.contains("marked")) cfg.job.marked = points(root_["marked"], "/marked");
        if (root_.contains("theta")) {
            auto t = points(root_["theta"], "/theta");
            if (t.size() != 3) fail("/theta", "expected three points");
            for (int i = 0; i < 3; ++i) {
                for (int j = i + 1; j < 3; ++j) {
                    if (chordal_distance(t[i], t[j]) < 1e-12) fail("/theta", "points must be distinct");
                }
            }
            cfg.job.theta = std::array<SpherePoint, 3>{t[0], t[1], t[2]};
            if (!root_.contains("circle")) cfg.job.circle = Circle(t[0], t[1], t[2]);
        }
        if (root_.contains("circle")) {
            auto c = points(root_["circle"], "/circle");
            if (c.size() != 3) fail("/circle", "expected three points");
            try {
                cfg.job.circle = Circle(c[0], c[1], c[2]);
            } catch (const Error& e) {
                fail("/circle", e.message());
            }
        }
        if (cfg.job.X && !cfg.job.theta) fail("/theta", "a correspondence needs the triple theta");
        if (root_.contains("anchor")) cfg.anchor = anchor(root_["anchor"]);
        if (root_.contains("tolerances")) {
            const json& t = root_["tolerances"];
            if (!t.is_object()) fail("/tolerances", "expected an object");
            for (const auto& [k, v] : t.items()) {
                std::string p = "/tolerances/" + k;
                if (k == "merge") cfg.tol.merge = positive(v, p);
                else if (k == "circle") cfg.tol.circle = positive(v, p);
                else if (k == "graph") cfg.tol.graph = positive(v, p);
                else if (k == "roots") cfg.tol.roots = positive(v, p);
                else fail(p, "unknown tolerance");
            }
        }
        if (root_.contains("eps")) cfg.eps = positive(root_["eps"], "/eps");
        if (root_.contains("max_depth")) cfg.max_depth = integer(root_["max_depth"], "/max_depth", 0, 12);
        if (root_.contains("sampling")) {
            const json& s = root_["sampling"];
            if (!s.is_object()) fail("/sampling", "expected an object");
            for (const auto& [k, v] : s.items()) {
                std::string p = "/sampling/" + k;
                if (k == "circle_samples") cfg.sampling.circle_samples = integer(v, p, 3, 1 << 20);
                else if (k == "graph_samples") cfg.sampling.graph_samples = integer(v, p, 1, 1 << 20);
                else if (k == "verify_samples") cfg.sampling.verify_samples = integer(v, p, 0, 1 << 20);
                else if (k == "height_bound") cfg.sampling.height_bound = integer(v, p, 1, 1 << 20);
                else if (k == "max_steps") cfg.sampling.max_steps = integer(v, p, 0, 1 << 20);
                else if (k == "seed") cfg.sampling.seed = static_cast<std::uint64_t>(integer(v, p, 0, 1L << 53));
                else fail(p, "unknown sampling field");
            }
        }
        return cfg;
    }

private:
    static long integer(const json& v, const std::string& path, long lo, long hi) {
        if (!v.is_number_integer()) fail(path, "expected an integer");
        long x = v.get<long>();
        if (x < lo || x > hi) fail(path, "out of range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
        return x;
    }

    static AnchorSelection anchor(const json& v) {
        AnchorSelection a;
        if (v.is_string()) {
            if (v.get<std::string>() != "auto") fail("/anchor", "expected \"auto\" or an object");
            return a;
        }
        if (!v.is_object() || v.size() != 1) fail("/anchor", "expected one of index, tau, y");
        if (v.contains("index")) {
            a.mode = AnchorSelection::Mode::Index;
            a.index = static_cast<int>(integer(v["index"], "/anchor/index", 0, 1000));
        } else if (v.contains("tau")) {
            a.mode = AnchorSelection::Mode::Tau;
            a.tau = complex(v["tau"], "/anchor/tau");
            if (!(a.tau.imag() > 0.0)) fail("/anchor/tau", "must lie in the upper half-plane");
        } else if (v.contains("y")) {
            a.mode = AnchorSelection::Mode::NearestY;
            a.y = point(v["y"], "/anchor/y");
        } else {
            fail("/anchor", "expected one of index, tau, y");
        }
        return a;
    }

    const json& root_;
};

}  // namespace detail

/// Parses configuration text; syntax errors report the line and column.
inline JobConfig parse_config(const std::string& text) {
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t line = 1, col = 1;
        for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
            if (text[k] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw Error(Errc::ConfigError, "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                                           std::string(e.what()));
    }
    return detail::ConfigReader(root).read();
}

inline JobConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::ConfigError, "cannot open config '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

inline JobConfig builtin_config(const std::string& name) {
    JobConfig cfg;
    cfg.job = builtin::get(name);
    return cfg;
}

}  // namespace thurston
