#pragma once

// The CLI commands as library calls: each returns its JSON report (and, where
// relevant, DOT or SVG text) so that tests can run them in-process.

#include <optional>
#include <string>
#include <vector>

#include "thurston/analysis.hpp"
#include "thurston/config.hpp"
#include "thurston/pullback.hpp"
#include "thurston/report.hpp"

namespace thurston {

struct CommandOutput {
    json report;
    std::optional<std::string> dot;
    std::optional<std::string> svg;
};

/// Exit status for a failure: 2 configuration, 3 mathematical precondition,
/// 4 numerically inconclusive.
inline int exit_code(Errc e) {
    switch (e) {
        case Errc::ConfigError:
        case Errc::InvalidSlope:
        case Errc::InvalidPolynomial: return 2;
        case Errc::NotPostcriticallyFinite:
        case Errc::MarkedSetNotInvariant:
        case Errc::NonHyperbolic:
        case Errc::CriticalPointsOffCircle:
        case Errc::Degenerate:
        case Errc::DegenerateCorrespondence:
        case Errc::CommonRoot:
        case Errc::AnchorMissing: return 3;
        default: return 4;
    }
}

inline json error_report(const std::string& command, const Error& e) {
    return {{"schema_version", kSchemaVersion},
            {"command", command},
            {"error", {{"code", std::string(to_string(e.code()))}, {"message", e.message()}}},
            {"exit_code", exit_code(e.code())}};
}

namespace detail {

inline json header(const std::string& command, const JobConfig& cfg) {
    return {{"schema_version", kSchemaVersion}, {"command", command}, {"job", cfg.job.name}};
}

inline RootOptions root_options(const JobConfig& cfg) {
    RootOptions r;
    r.tol = cfg.tol.roots;
    r.seed = cfg.sampling.seed;
    return r;
}

inline const RationalMap& require_map(const JobConfig& cfg) {
    if (!cfg.job.f) throw Error(Errc::ConfigError, "this command needs a rational map (\"map\" or a builtin with one)");
    return *cfg.job.f;
}

inline Correspondence require_correspondence(const JobConfig& cfg) {
    if (!cfg.job.X || !cfg.job.Y || !cfg.job.theta) {
        throw Error(Errc::ConfigError, "this command needs a correspondence and theta");
    }
    return Correspondence(*cfg.job.X, *cfg.job.Y, ModuliNormalizer(*cfg.job.theta));
}

inline Circle graph_circle(const JobConfig& cfg) {
    if (cfg.job.circle) return *cfg.job.circle;
    if (cfg.job.theta) return Circle((*cfg.job.theta)[0], (*cfg.job.theta)[1], (*cfg.job.theta)[2]);
    throw Error(Errc::ConfigError, "no circle given and no theta to build one from");
}

struct Analysis {
    RamificationPortrait portrait;
    OrbifoldSignature signature;
    Rational chi;
    bool hyperbolic;
    bool nonperiodic;
};

inline Analysis analyse(const JobConfig& cfg) {
    PortraitOptions po;
    po.merge_tol = cfg.tol.merge;
    po.roots = root_options(cfg);
    Analysis a;
    a.portrait = postcritical_portrait(require_map(cfg), cfg.job.marked, po);
    a.signature = orbifold_signature(a.portrait);
    a.chi = euler_characteristic(a.signature);
    a.hyperbolic = is_hyperbolic(a.signature);
    a.nonperiodic = has_nonperiodic_marked_point(a.portrait);
    return a;
}

inline json analysis_json(const Analysis& a) {
    return {{"portrait", to_json(a.portrait)},
            {"signature", to_json(a.signature)},
            {"euler_characteristic", a.chi.str()},
            {"euler_characteristic_value", a.chi.convert_to<double>()},
            {"hyperbolic", a.hyperbolic},
            {"nonperiodic_marked_point", a.nonperiodic}};
}

struct Engine {
    Correspondence corr;
    AnchorResolution anchor;
    PullbackEngine engine;
};

inline Engine make_engine(const JobConfig& cfg) {
    Correspondence c = require_correspondence(cfg);
    StepControl ctl;
    ctl.roots = root_options(cfg);
    AnchorResolution ar = resolve_anchor(c, cfg.anchor, ctl);
    EngineOptions opt;
    opt.step = ctl;
    return Engine{c, ar, PullbackEngine(c, ar.anchor, opt)};
}

inline json anchor_json(const AnchorResolution& ar, const ModuliNormalizer& n) {
    json cands = json::array();
    for (const auto& c : ar.candidates) cands.push_back(to_json(c));
    json theta = json::array();
    for (const auto& p : n.theta()) theta.push_back(to_json(p));
    return {{"candidates", cands},
            {"selected", ar.anchor.candidate},
            {"tau_f", to_json(ar.anchor.tau)},
            {"w_f", to_json(ar.anchor.w)},
            {"y_f", to_json(ar.anchor.y)},
            {"theta", theta},
            {"normalization_note", kNormalizationNote}};
}

}  // namespace detail

inline CommandOutput cmd_analyze(const JobConfig& cfg) {
    json r = detail::header("analyze", cfg);
    auto a = detail::analyse(cfg);
    r.update(detail::analysis_json(a));
    r["map"] = to_json(*cfg.job.f);
    if (a.nonperiodic) r["note"] = "a marked point is not periodic: the pullback map is constant";
    return {r, std::nullopt, std::nullopt};
}

inline CommandOutput cmd_check_circle(const JobConfig& cfg) {
    json r = detail::header("check-circle", cfg);
    Circle c = detail::graph_circle(cfg);
    auto res = check_circle_to_circle(detail::require_map(cfg), c, cfg.sampling.circle_samples, cfg.tol.circle,
                                      detail::root_options(cfg));
    r["circle"] = to_json(c);
    r["result"] = to_json(res);
    return {r, std::nullopt, std::nullopt};
}

inline CommandOutput cmd_check_graph(const JobConfig& cfg) {
    json r = detail::header("check-graph", cfg);
    if (!cfg.job.X || !cfg.job.Y) throw Error(Errc::ConfigError, "check-graph needs a correspondence");
    Circle g = detail::graph_circle(cfg);
    auto res = check_graph_invariance(*cfg.job.X, *cfg.job.Y, g, cfg.sampling.graph_samples, cfg.tol.graph,
                                      detail::root_options(cfg));
    r["circle"] = to_json(g);
    r["result"] = to_json(res);
    return {r, std::nullopt, std::nullopt};
}

inline CommandOutput cmd_pullback_slope(const JobConfig& cfg, const CurveClass& s) {
    json r = detail::header("pullback-slope", cfg);
    auto e = detail::make_engine(cfg);
    r["anchor"] = detail::anchor_json(e.anchor, e.corr.normalizer());
    r["slope"] = s.to_string();
    if (!s.is_essential()) {
        r["image"] = "o";
        return {r, std::nullopt, std::nullopt};
    }
    const BoundaryResult& b = e.engine.boundary_detail(s.slope());
    r["image"] = b.image.to_string();
    r["source_tile"] = to_json(b.source_tile);
    r["image_tile"] = to_json(b.image_tile);
    r["limit_w"] = to_json(b.limit_w);
    r["limit_x"] = to_json(b.limit_x);
    r["puncture_distance"] = b.puncture_distance;
    json approach = json::array();
    for (std::size_t k = 0; k < b.approach.images.size(); ++k) {
        json row{{"depth", b.approach.depths[k]}, {"sigma", to_json(b.approach.images[k])}};
        if (k < b.approach.image_depths.size()) row["image_depth"] = b.approach.image_depths[k];
        approach.push_back(row);
    }
    r["cusp_approach"] = approach;
    r["continuation"] = to_json(e.engine.stats());
    return {r, std::nullopt, std::nullopt};
}

inline CommandOutput cmd_tile_map(const JobConfig& cfg) {
    json r = detail::header("tile-map", cfg);
    auto e = detail::make_engine(cfg);
    r["anchor"] = detail::anchor_json(e.anchor, e.corr.normalizer());
    r["anchor_tile"] = to_json(e.engine.anchor_tile());
    json rows = json::array();
    int ambiguous = 0;
    auto rings = tiles_within_flips(e.engine.anchor_tile(), cfg.max_depth);
    for (std::size_t d = 0; d < rings.size(); ++d) {
        for (const auto& t : rings[d]) {
            json row{{"tile", to_json(t)}, {"flips", d}};
            try {
                auto s = e.engine.tile_image_samples(t);
                row["image"] = to_json(s[0]);
                row["sample_independent"] = s[0] == s[1] && s[1] == s[2];
            } catch (const Error& err) {
                ++ambiguous;
                row["error"] = std::string(to_string(err.code()));
            }
            rows.push_back(row);
        }
    }
    r["tiles"] = rows;
    r["ambiguous"] = ambiguous;
    r["continuation"] = to_json(e.engine.stats());
    return {r, std::nullopt, std::nullopt};
}

inline CommandOutput cmd_tessellation_svg(const JobConfig* cfg, int depth) {
    json r{{"schema_version", kSchemaVersion}, {"command", "tessellation-svg"}, {"max_depth", depth}};
    std::optional<Complex> fixed;
    FareyTriangle center = base_tile();
    if (cfg && cfg->job.X) {
        auto e = detail::make_engine(*cfg);
        fixed = e.anchor.anchor.tau;
        r["job"] = cfg->job.name;
        r["tau_f"] = to_json(*fixed);
    }
    std::string svg = tessellation_svg(center, depth, {}, fixed);
    std::size_t tiles = 0;
    for (const auto& ring : tiles_within_flips(center, depth)) tiles += ring.size();
    r["tiles"] = tiles;
    return {r, std::nullopt, svg};
}

inline CommandOutput cmd_attractor(const JobConfig& cfg, bool with_svg = false) {
    json r = detail::header("attractor", cfg);
    if (cfg.job.f) {
        auto a = detail::analyse(cfg);
        r["analysis"] = detail::analysis_json(a);
        if (!a.hyperbolic) {
            throw Error(Errc::NonHyperbolic,
                        "orbifold Euler characteristic " + a.chi.str() + " is not negative; attractor refused");
        }
        if (a.nonperiodic) {
            r["attractor_trivial"] = true;
            r["note"] = "a marked point is not periodic: the pullback map is constant";
            return {r, std::nullopt, std::nullopt};
        }
    }
    Circle g = detail::graph_circle(cfg);
    auto graph = check_graph_invariance(*cfg.job.X, *cfg.job.Y, g, cfg.sampling.graph_samples, cfg.tol.graph,
                                        detail::root_options(cfg));
    r["graph_invariance"] = to_json(graph);
    r["advisory"] = !graph.pass;

    auto e = detail::make_engine(cfg);
    r["anchor"] = detail::anchor_json(e.anchor, e.corr.normalizer());
    AttractorReport rep = e.engine.attractor(cfg.eps);
    r["attractor"] = to_json(rep);
    AttractionStats st = e.engine.verify_global_attraction(rep, cfg.sampling.verify_samples, cfg.sampling.height_bound,
                                                           cfg.sampling.max_steps, cfg.sampling.seed);
    r["verification"] = to_json(st);
    r["verification"]["height_bound"] = cfg.sampling.height_bound;
    r["verification"]["max_steps"] = cfg.sampling.max_steps;
    r["verification"]["seed"] = cfg.sampling.seed;
    r["continuation"] = to_json(e.engine.stats());
    CommandOutput out{r, transition_dot(rep), std::nullopt};
    if (with_svg) {
        // Orbit of a point two flips from the anchor tile under sigma.
        std::vector<Complex> orbit;
        Complex tau = interior_point(neighbor(neighbor(e.engine.anchor_tile(), 0), 1));
        for (int k = 0; k < 8; ++k) {
            orbit.push_back(tau);
            tau = e.engine.sigma_at(tau);
        }
        out.svg = tessellation_svg(e.engine.anchor_tile(), std::max(cfg.max_depth, 1), orbit, e.anchor.anchor.tau);
    }
    return out;
}

}  // namespace thurston
