#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "thurston/commands.hpp"

using namespace thurston;

namespace {

struct Common {
    std::string config;
    std::string builtin;
    std::string out;
    std::string format = "json";
    std::optional<std::uint64_t> seed;
    std::optional<double> eps;
    std::optional<int> max_depth;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--config", c.config, "JSON job configuration");
    sub->add_option("--builtin", c.builtin, "built-in job name");
    sub->add_option("--out", c.out, "directory for report files");
    sub->add_option("--seed", c.seed, "root-finder and sampling seed");
    sub->add_option("--eps", c.eps, "hyperbolic radius of the candidate neighbourhood");
    sub->add_option("--max-depth", c.max_depth, "flip depth for tile maps and pictures");
    sub->add_option("--format", c.format, "stdout format")->check(CLI::IsMember({"json", "dot", "svg"}));
}

std::optional<JobConfig> load(const Common& c, bool required) {
    if (!c.config.empty() && !c.builtin.empty()) throw Error(Errc::ConfigError, "give --config or --builtin, not both");
    std::optional<JobConfig> cfg;
    if (!c.config.empty()) cfg = load_config(c.config);
    else if (!c.builtin.empty()) cfg = builtin_config(c.builtin);
    else if (required) throw Error(Errc::ConfigError, "a job is required: --config PATH or --builtin NAME");
    if (cfg) {
        if (c.seed) cfg->sampling.seed = *c.seed;
        if (c.eps) {
            if (!(*c.eps > 0.0)) throw Error(Errc::ConfigError, "--eps must be positive");
            cfg->eps = *c.eps;
        }
        if (c.max_depth) {
            if (*c.max_depth < 0 || *c.max_depth > 12) throw Error(Errc::ConfigError, "--max-depth must be in [0, 12]");
            cfg->max_depth = *c.max_depth;
        }
    }
    return cfg;
}

void write_file(const std::string& dir, const std::string& name, const std::string& text) {
    std::filesystem::create_directories(dir);
    std::ofstream f(std::filesystem::path(dir) / name);
    if (!f) throw Error(Errc::ConfigError, "cannot write " + name + " in " + dir);
    f << text;
}

int emit(const Common& c, const CommandOutput& out) {
    std::string json_text = dump_json(out.report);
    if (!c.out.empty()) {
        write_file(c.out, "report.json", json_text);
        if (out.dot) write_file(c.out, "transition.dot", *out.dot);
        if (out.svg) write_file(c.out, "tessellation.svg", *out.svg);
    }
    if (c.format == "dot") {
        if (!out.dot) throw Error(Errc::ConfigError, "this command has no DOT output");
        std::cout << *out.dot;
    } else if (c.format == "svg") {
        if (!out.svg) throw Error(Errc::ConfigError, "this command has no SVG output");
        std::cout << *out.svg;
    } else {
        std::cout << json_text;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pullback dynamics of rational Thurston maps with four marked points"};
    app.require_subcommand(1);

    Common analyze_o, attractor_o, slope_o, tile_o, circle_o, graph_o, svg_o;
    std::string slope_text;
    auto* analyze = app.add_subcommand("analyze", "portrait, orbifold signature and hyperbolicity");
    add_common(analyze, analyze_o);
    auto* attractor = app.add_subcommand("attractor", "finite global curve attractor");
    add_common(attractor, attractor_o);
    auto* slope = app.add_subcommand("pullback-slope", "boundary pullback of one slope");
    add_common(slope, slope_o);
    slope->add_option("slope", slope_text, "slope p/q, inf, or o")->required();
    auto* tile = app.add_subcommand("tile-map", "tile images near the fixed point");
    add_common(tile, tile_o);
    auto* circle = app.add_subcommand("check-circle", "sampled circle-to-circle check");
    add_common(circle, circle_o);
    auto* graph = app.add_subcommand("check-graph", "sampled graph invariance for the correspondence");
    add_common(graph, graph_o);
    auto* svg = app.add_subcommand("tessellation-svg", "Farey tessellation picture");
    add_common(svg, svg_o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    std::string command = app.get_subcommands().front()->get_name();
    const Common* used = nullptr;
    try {
        if (*analyze) {
            used = &analyze_o;
            return emit(analyze_o, cmd_analyze(*load(analyze_o, true)));
        }
        if (*attractor) {
            used = &attractor_o;
            return emit(attractor_o, cmd_attractor(*load(attractor_o, true), attractor_o.format == "svg" || !attractor_o.out.empty()));
        }
        if (*slope) {
            used = &slope_o;
            return emit(slope_o, cmd_pullback_slope(*load(slope_o, true), CurveClass::parse(slope_text)));
        }
        if (*tile) {
            used = &tile_o;
            return emit(tile_o, cmd_tile_map(*load(tile_o, true)));
        }
        if (*circle) {
            used = &circle_o;
            return emit(circle_o, cmd_check_circle(*load(circle_o, true)));
        }
        if (*graph) {
            used = &graph_o;
            return emit(graph_o, cmd_check_graph(*load(graph_o, true)));
        }
        if (*svg) {
            used = &svg_o;
            auto cfg = load(svg_o, false);
            int depth = svg_o.max_depth.value_or(cfg ? cfg->max_depth : 4);
            Common o = svg_o;
            if (o.format == "json" && o.out.empty()) o.format = "svg";
            return emit(o, cmd_tessellation_svg(cfg ? &*cfg : nullptr, depth));
        }
    } catch (const Error& e) {
        json err = error_report(command, e);
        std::string text = dump_json(err);
        if (used && !used->out.empty()) {
            try {
                write_file(used->out, "report.json", text);
            } catch (const Error&) {
            }
        }
        std::cout << text;
        std::cerr << command << ": " << e.what() << "\n";
        return exit_code(e.code());
    } catch (const std::exception& e) {
        std::cerr << command << ": internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
