#pragma once

// The pullback map sigma on Teichmueller space and its boundary action:
// anchor resolution at the fixed point, sigma at arbitrary points, the
// induced map on tiles, the boundary pullback on slopes, and the finite
// global curve attractor.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "thurston/continuation.hpp"
#include "thurston/correspondence.hpp"
#include "thurston/error.hpp"
#include "thurston/lambda.hpp"
#include "thurston/moebius.hpp"
#include "thurston/slope.hpp"
#include "thurston/tessellation.hpp"

namespace thurston {

// ---------------------------------------------------------------- anchor

struct AnchorSelection {
    enum class Mode { Auto, Index, NearestY, Tau };
    Mode mode = Mode::Auto;
    int index = 0;
    SpherePoint y{};
    Complex tau{0.0, 1.0};
};

struct Anchor {
    Complex tau;
    SpherePoint w;
    SpherePoint y;
    int candidate = -1;
};

struct CandidateReport {
    FixedPointCandidate candidate;
    std::optional<Complex> tau;
    bool validated = false;
    bool in_base_tile = false;
    double residual = 0.0;
    double contraction = 0.0;
    std::string failure;
};

struct AnchorResolution {
    Anchor anchor;
    std::vector<CandidateReport> candidates;
};

namespace detail {

inline bool in_open_base_tile(Complex tau) {
    try {
        return locate(tau, 1e-9) == base_tile();
    } catch (const Error&) {
        return false;
    }
}

}  // namespace detail

/// Checks a fixed-point candidate lifted to tau: the defining residuals
/// vanish, continuation around a small loop at tau returns to the starting
/// state, and sigma contracts hyperbolic distance to tau in two directions.
inline void validate_anchor(const Correspondence& c, CandidateReport& rep, const StepControl& ctl = {}) {
    Complex tau = *rep.tau;
    ContinuationState st{tau, rep.candidate.w, tau};
    auto [ry, rx] = state_residuals(c, st);
    rep.residual = std::max(ry, rx);
    if (rep.residual > 1e-9) {
        rep.failure = "defining residual " + std::to_string(rep.residual);
        return;
    }
    try {
        // Monodromy along a contractible loop: a square of hyperbolic size 0.2.
        double y = tau.imag();
        std::vector<Complex> loop{tau + Complex(0.1 * y, 0.0), tau + Complex(0.1 * y, 0.1 * y),
                                  tau + Complex(-0.1 * y, 0.1 * y), tau + Complex(-0.1 * y, -0.05 * y),
                                  tau + Complex(0.1 * y, -0.05 * y), tau + Complex(0.1 * y, 0.0), tau};
        ContinuationState back = continue_along(c, st, loop, ctl);
        if (chordal_distance(back.w, st.w) > 1e-8 || hyperbolic_distance(back.tau_image, tau) > 1e-8) {
            rep.failure = "loop continuation changed branch";
            return;
        }
        double worst = 0.0;
        for (Complex dir : {Complex(1.0, 0.0), Complex(0.0, 1.0)}) {
            Complex p = geodesic_point(tau, tau + dir * y, 0.1);
            ContinuationState s = continue_sigma(c, st, p, ctl);
            double ratio = hyperbolic_distance(s.tau_image, tau) / hyperbolic_distance(p, tau);
            worst = std::max(worst, ratio);
        }
        rep.contraction = worst;
        if (!(worst < 1.0)) {
            rep.failure = "sigma does not contract toward the candidate";
            return;
        }
    } catch (const Error& e) {
        rep.failure = e.what();
        return;
    }
    rep.validated = true;
}

/// Lifts and validates every candidate, then picks the anchor per the
/// selection. Automatic selection takes the only validated candidate, or the
/// only validated candidate whose lift lies in the open base tile.
inline AnchorResolution resolve_anchor(const Correspondence& c, const AnchorSelection& sel = {},
                                       const StepControl& ctl = {}) {
    AnchorResolution res;
    auto cands = fixed_point_candidates(c, 1e-9, ctl.roots);
    if (cands.empty()) throw Error(Errc::AnchorMissing, "no fixed point candidates off the punctures");
    for (const auto& fc : cands) {
        CandidateReport rep;
        rep.candidate = fc;
        try {
            rep.tau = pi_inverse_branch(c.normalizer(), fc.y);
            rep.in_base_tile = detail::in_open_base_tile(*rep.tau);
            validate_anchor(c, rep, ctl);
        } catch (const Error& e) {
            rep.failure = e.what();
        }
        res.candidates.push_back(rep);
    }

    auto finish = [&](int k, Complex tau) {
        const auto& rep = res.candidates[k];
        if (!rep.validated) {
            throw Error(Errc::ValidationFailed, "selected candidate " + std::to_string(k) + " failed: " + rep.failure);
        }
        res.anchor = Anchor{tau, rep.candidate.w, rep.candidate.y, k};
        return res;
    };

    const int n = static_cast<int>(res.candidates.size());
    switch (sel.mode) {
        case AnchorSelection::Mode::Index:
            if (sel.index < 0 || sel.index >= n) throw Error(Errc::ConfigError, "anchor index out of range");
            return finish(sel.index, *res.candidates[sel.index].tau);
        case AnchorSelection::Mode::NearestY: {
            int best = 0;
            for (int k = 1; k < n; ++k) {
                if (chordal_distance(res.candidates[k].candidate.y, sel.y) <
                    chordal_distance(res.candidates[best].candidate.y, sel.y)) {
                    best = k;
                }
            }
            return finish(best, *res.candidates[best].tau);
        }
        case AnchorSelection::Mode::Tau: {
            // An explicit lift: the candidate whose value matches pi(tau).
            SpherePoint y = pi_map(c.normalizer(), sel.tau);
            int best = 0;
            for (int k = 1; k < n; ++k) {
                if (chordal_distance(res.candidates[k].candidate.y, y) <
                    chordal_distance(res.candidates[best].candidate.y, y)) {
                    best = k;
                }
            }
            if (chordal_distance(res.candidates[best].candidate.y, y) > 1e-8) {
                throw Error(Errc::ValidationFailed, "explicit anchor tau does not project to a fixed point candidate");
            }
            CandidateReport moved = res.candidates[best];
            moved.tau = sel.tau;
            validate_anchor(c, moved, ctl);
            res.candidates[best].validated = moved.validated;
            res.candidates[best].failure = moved.failure;
            return finish(best, sel.tau);
        }
        case AnchorSelection::Mode::Auto: break;
    }

    std::vector<int> valid, valid_in_tile;
    for (int k = 0; k < n; ++k) {
        if (!res.candidates[k].validated) continue;
        valid.push_back(k);
        if (res.candidates[k].in_base_tile) valid_in_tile.push_back(k);
    }
    if (valid.empty()) throw Error(Errc::AllCandidatesFailed, "no fixed point candidate passed validation");
    if (valid.size() == 1) return finish(valid[0], *res.candidates[valid[0]].tau);
    if (valid_in_tile.size() == 1) return finish(valid_in_tile[0], *res.candidates[valid_in_tile[0]].tau);
    throw Error(Errc::AmbiguousAnchor, std::to_string(valid.size()) +
                                           " candidates validated; select one by index, y, or tau");
}

// ---------------------------------------------------------------- engine

struct EngineOptions {
    StepControl step{};
    /// Chordal distance from X(w*) to a puncture up to which the boundary
    /// limit counts as a puncture, and beyond which it counts as interior.
    double puncture_tol = 1e-6;
    double interior_tol = 1e-3;
    /// Smallest |mu| reached by the w continuation toward a puncture.
    double approach_floor = 1e-9;
    /// Run the cusp-approach cross-check for every boundary pullback.
    bool cusp_check = true;
    /// Largest candidate set the attractor closure may grow to.
    std::size_t growth_cap = 64;
};

/// Evidence gathered along a cusp approach for one boundary pullback.
struct CuspApproach {
    std::vector<double> depths;        // horoball depth of the approach points at the source cusp
    std::vector<Complex> images;       // sigma at those points
    std::vector<double> image_depths;  // depth of the images at the declared target cusp (slopes only)
    bool consistent = false;
};

struct BoundaryResult {
    CurveClass image = CurveClass::non_essential();
    FareyTriangle source_tile = base_tile();
    FareyTriangle image_tile = base_tile();
    SpherePoint limit_w;
    SpherePoint limit_x;
    double puncture_distance = 0.0;
    CuspApproach approach;
};

struct AttractorReport {
    std::vector<CurveClass> candidates;
    std::map<CurveClass, CurveClass> transition;
    std::vector<CurveClass> attractor;
    std::vector<std::vector<CurveClass>> cycles;
    int transient_max = 0;
    double eps = 1.0;
    std::vector<FareyTriangle> neighbourhood;
};

struct AttractionStats {
    int samples = 0;
    int reached = 0;
    int max_hitting_time = 0;
    double mean_hitting_time = 0.0;
    std::vector<std::pair<CurveClass, std::string>> failures;
    std::vector<std::pair<CurveClass, int>> hitting_times;
};

class PullbackEngine {
public:
    PullbackEngine(Correspondence c, Anchor a, EngineOptions opt = {})
        : c_(std::move(c)), anchor_(a), opt_(opt), anchor_tile_(locate_closed(a.tau)) {
        anchor_state_ = ContinuationState{a.tau, a.w, a.tau};
    }

    const Correspondence& correspondence() const { return c_; }
    const Anchor& anchor() const { return anchor_; }
    const EngineOptions& options() const { return opt_; }
    const FareyTriangle& anchor_tile() const { return anchor_tile_; }
    const ContinuationState& anchor_state() const { return anchor_state_; }
    const ContinuationStats& stats() const { return stats_; }

    /// sigma(tau) by continuation along the geodesic from the fixed point.
    Complex sigma_at(Complex tau) { return state_from_anchor(tau).tau_image; }

    ContinuationState state_from_anchor(Complex tau) {
        return continue_with_detours(c_, anchor_state_, tau, opt_.step, &stats_);
    }

    /// The state at tau reached through the chain of tile centers from the
    /// anchor tile, then inside the tile containing tau.
    ContinuationState state_via_tiles(Complex tau) {
        FareyTriangle t = locate_closed(tau);
        return continue_with_detours(c_, tile_state(t), tau, opt_.step, &stats_);
    }

    /// Memoized state at the canonical interior point of a tile.
    const ContinuationState& tile_state(const FareyTriangle& t) {
        auto it = centers_.find(t);
        if (it != centers_.end()) return it->second;
        // Walk toward the fixed point until a tile with a known state, or a
        // tile whose closure holds the fixed point.
        std::vector<FareyTriangle> chain{t};
        for (;;) {
            const FareyTriangle& cur = chain.back();
            if (centers_.count(cur)) break;
            auto toward = step_toward(cur, anchor_.tau);
            if (!toward) break;
            chain.push_back(*toward);
            if (chain.size() > 100000) throw Error(Errc::LocateFailed, "tile chain toward the anchor is too long");
        }
        // chain.back() is either memoized or contains the fixed point.
        ContinuationState st;
        auto known = centers_.find(chain.back());
        if (known != centers_.end()) {
            st = known->second;
        } else {
            st = continue_with_detours(c_, anchor_state_, interior_point(chain.back()), opt_.step, &stats_);
            centers_.emplace(chain.back(), st);
        }
        for (int k = static_cast<int>(chain.size()) - 2; k >= 0; --k) {
            st = continue_with_detours(c_, st, interior_point(chain[k]), opt_.step, &stats_);
            centers_.emplace(chain[k], st);
        }
        return centers_.at(t);
    }

    /// The tile containing sigma of the interior of t, from the canonical
    /// sample; edge hits retry with two other interior samples.
    FareyTriangle tile_image(const FareyTriangle& t) {
        auto it = images_.find(t);
        if (it != images_.end()) return it->second;
        const ContinuationState& st = tile_state(t);
        std::optional<FareyTriangle> img;
        try {
            img = locate(st.tau_image);
        } catch (const OnEdgeError&) {
            for (Complex z : alternate_samples()) {
                try {
                    ContinuationState s = continue_with_detours(c_, st, tile_point(t, z), opt_.step, &stats_);
                    img = locate(s.tau_image);
                    break;
                } catch (const OnEdgeError&) {
                }
            }
        }
        if (!img) throw Error(Errc::TileImageAmbiguous, "every sample of " + t.to_string() + " maps onto an edge");
        images_.emplace(t, *img);
        return *img;
    }

    /// Tile images of the canonical sample and of two further interior samples.
    std::array<FareyTriangle, 3> tile_image_samples(const FareyTriangle& t) {
        const ContinuationState& st = tile_state(t);
        auto samples = alternate_samples();
        std::array<FareyTriangle, 3> out{locate(st.tau_image), base_tile(), base_tile()};
        for (int k = 0; k < 2; ++k) {
            ContinuationState s = continue_with_detours(c_, st, tile_point(t, samples[k]), opt_.step, &stats_);
            out[k + 1] = locate(s.tau_image);
        }
        return out;
    }

    /// The tile with vertex r met first on the dual-tree path from the anchor
    /// tile toward the cusp r.
    FareyTriangle entry_tile(const Slope& r) const {
        FareyTriangle t = anchor_tile_;
        for (long n = 0; n < 1000000; ++n) {
            if (t.has_vertex(r)) return t;
            t = neighbor(t, separating_vertex(t, r));
        }
        throw Error(Errc::LocateFailed, "walk toward cusp " + r.to_string() + " did not terminate");
    }

    /// The boundary pullback of a curve class.
    CurveClass boundary_pullback(const CurveClass& cc) {
        if (!cc.is_essential()) return cc;
        return boundary_detail(cc.slope()).image;
    }

    /// The boundary pullback of r with the evidence used to decide it. The
    /// limit of sigma at r is read off from the branch of w at the puncture:
    /// w is continued from the center of the entry tile T toward the puncture
    /// of r's cusp class along a path inside pi(T); the limit w* solves
    /// Y(w*) = puncture, and X(w*) is either a puncture (the limit is the
    /// vertex of the image tile in that class) or not (the limit is interior).
    const BoundaryResult& boundary_detail(const Slope& r) {
        auto it = boundary_.find(r);
        if (it != boundary_.end()) return it->second;

        BoundaryResult res;
        res.source_tile = entry_tile(r);
        res.image_tile = tile_image(res.source_tile);
        const ContinuationState& center = tile_state(res.source_tile);
        CuspClass cls = r.cusp_class();

        Complex lc = lambda_std(center.tau);
        Complex mu_c = to_mu(cls, lc);
        const double span = std::log(1.0 / opt_.approach_floor);
        std::optional<SpherePoint> w_end;
        for (double theta : {0.0, 0.4, -0.4, 0.8}) {
            auto level = [&](double t) {
                double angle = theta * std::min(1.0, 4.0 * t);
                Complex mu = mu_c * std::exp(Complex(-span * t, angle));
                return from_mu(cls, mu);
            };
            try {
                w_end = continue_w_in_lambda(c_, center.w, level, 1.0, opt_.step);
                break;
            } catch (const Error&) {
            }
        }
        if (!w_end) throw Error(Errc::Inconclusive, "w continuation toward the puncture of " + r.to_string() + " failed");

        SpherePoint lp = ModuliNormalizer::lambda_puncture(cls);
        auto roots = solve_level(c_.Y_lambda().map(), lp, opt_.step.roots);
        double d1 = std::numeric_limits<double>::infinity(), d2 = d1;
        for (const auto& rt : roots) {
            double d = chordal_distance(rt.point, *w_end);
            if (d < d1) {
                d2 = d1;
                d1 = d;
                res.limit_w = rt.point;
            } else {
                d2 = std::min(d2, d);
            }
        }
        if (!(d1 < d2 / 3.0)) throw Error(Errc::Inconclusive, "branch limit at " + r.to_string() + " is ambiguous");

        res.limit_x = c_.X_lambda()(res.limit_w);
        const std::array<std::pair<SpherePoint, CuspClass>, 3> punctures{
            std::pair{SpherePoint(0.0), CuspClass::Infinity}, std::pair{SpherePoint(1.0), CuspClass::Zero},
            std::pair{SpherePoint::infinity(), CuspClass::One}};
        double best = std::numeric_limits<double>::infinity();
        CuspClass target = CuspClass::Infinity;
        for (const auto& [p, k] : punctures) {
            double d = chordal_distance(res.limit_x, p);
            if (d < best) {
                best = d;
                target = k;
            }
        }
        res.puncture_distance = best;
        if (best <= opt_.puncture_tol) {
            res.image = CurveClass(res.image_tile.vertex_in_class(target));
        } else if (best > opt_.interior_tol) {
            res.image = CurveClass::non_essential();
        } else {
            throw Error(Errc::Inconclusive, "limit at " + r.to_string() + " is neither clearly a puncture nor interior");
        }

        if (opt_.cusp_check) {
            res.approach = cusp_approach(r, res.source_tile, res.image);
            if (!res.approach.consistent) {
                throw Error(Errc::Inconclusive,
                            "cusp approach at " + r.to_string() + " disagrees with the branch limit " +
                                res.image.to_string());
            }
        }
        return boundary_.emplace(r, res).first->second;
    }

    /// Evaluates sigma along the geodesic from the center of the tile t to
    /// its vertex r at horoball depths 1, 1.5, 2, ... while lambda stays
    /// resolvable, and checks that the images behave as the declared image
    /// predicts: growing depth at the target cusp, or convergence in the
    /// interior.
    CuspApproach cusp_approach(const Slope& r, const FareyTriangle& t, const CurveClass& declared) {
        CuspApproach out;
        IntMoebius g = t.vertex_map();
        int which = -1;
        for (int k = 0; k < 3; ++k) {
            const std::array<Slope, 3> base{Slope::integer(0), Slope::integer(1), Slope::infinity()};
            if (g.apply(base[k]) == r) which = k;
        }
        if (which < 0) throw Error(Errc::InvalidPair, "cusp is not a vertex of the tile");
        // Rotation fixing the center and cycling infinity -> 0 -> 1.
        auto rot = [](Complex z) { return 1.0 / (1.0 - z); };
        ContinuationState st = tile_state(t);
        for (int k = 0; k < 16; ++k) {
            double depth = 1.0 + 0.5 * k;
            Complex z(0.5, depth);
            if (which == 0) z = rot(z);
            if (which == 1) z = rot(rot(z));
            Complex tau = g.apply(z);
            Complex lam = lambda_std(tau);
            Complex mu = to_mu(r.cusp_class(), lam);
            if (std::abs(mu) < opt_.approach_floor) break;
            st = continue_with_detours(c_, st, tau, opt_.step, &stats_);
            out.depths.push_back(depth);
            out.images.push_back(st.tau_image);
            if (declared.is_essential()) out.image_depths.push_back(horoball_depth(st.tau_image, declared.slope()));
        }
        const std::size_t n = out.images.size();
        if (n < 5) return out;
        if (declared.is_essential()) {
            const auto& d = out.image_depths;
            out.consistent = d[n - 4] < d[n - 3] && d[n - 3] < d[n - 2] && d[n - 2] < d[n - 1] && d[n - 1] > 1.0;
        } else {
            std::vector<double> gaps;
            for (std::size_t k = 1; k < n; ++k) gaps.push_back(hyperbolic_distance(out.images[k - 1], out.images[k]));
            const std::size_t m = gaps.size();
            out.consistent = gaps[m - 1] < 1e-3 && gaps[m - 1] < gaps[m - 2] && gaps[m - 2] < gaps[m - 3];
        }
        return out;
    }

    /// Boundary pullback read off from tile images: the common vertex of the
    /// images of the fan tiles at r around the entry tile. Returns nullopt
    /// when the images share no single vertex (for instance when they all
    /// coincide, as happens for interior limits).
    std::optional<Slope> boundary_by_tiles(const Slope& r, int half_width = 2) {
        FareyTriangle t = entry_tile(r);
        const Slope& s = t[0] == r ? t[1] : t[0];
        // g sends infinity to r, so the fan at r is g of the tiles {n, n + 1, inf}.
        IntMoebius g = IntMoebius::from_columns(r, s);
        std::vector<FareyTriangle> fan;
        for (int n = -half_width - 1; n <= half_width; ++n) {
            fan.emplace_back(g.apply(Slope::integer(n)), g.apply(Slope::integer(n + 1)), r);
        }
        std::optional<std::set<Slope, std::less<>>> common;
        for (const auto& f : fan) {
            FareyTriangle img = tile_image(f);
            std::set<Slope, std::less<>> vs(img.vertices().begin(), img.vertices().end());
            if (!common) {
                common = vs;
            } else {
                std::set<Slope, std::less<>> keep;
                for (const auto& v : *common) {
                    if (vs.count(v)) keep.insert(v);
                }
                common = keep;
            }
        }
        if (common && common->size() == 1) return *common->begin();
        return std::nullopt;
    }

    /// Candidate cusps from the tiles near the fixed point, closed under the
    /// boundary pullback, and the union of the cycles of the transition map.
    AttractorReport attractor(double eps = 1.0) {
        AttractorReport rep;
        rep.eps = eps;
        rep.neighbourhood = tiles_near(anchor_.tau, eps);
        std::set<CurveClass> seen;
        std::vector<CurveClass> order;
        auto add = [&](const CurveClass& x) {
            if (seen.insert(x).second) order.push_back(x);
        };
        add(CurveClass::non_essential());
        for (const auto& t : rep.neighbourhood) {
            for (const auto& v : t.vertices()) add(CurveClass(v));
        }
        rep.candidates = order;
        for (std::size_t k = 0; k < order.size(); ++k) {
            if (order.size() > opt_.growth_cap) {
                throw Error(Errc::AttractorNotClosed, "candidate set exceeded the growth cap of " +
                                                          std::to_string(opt_.growth_cap));
            }
            CurveClass img = boundary_pullback(order[k]);
            rep.transition.emplace(order[k], img);
            add(img);
        }
        // Cycles of the finite transition map.
        std::set<CurveClass> on_cycle;
        for (const auto& x : order) {
            std::vector<CurveClass> path;
            std::map<CurveClass, int> pos;
            CurveClass cur = x;
            while (!pos.count(cur)) {
                pos[cur] = static_cast<int>(path.size());
                path.push_back(cur);
                cur = rep.transition.at(cur);
            }
            int start = pos[cur];
            rep.transient_max = std::max(rep.transient_max, start);
            if (!on_cycle.count(cur)) {
                std::vector<CurveClass> cyc(path.begin() + start, path.end());
                // Rotate so the smallest element leads, for stable output.
                std::rotate(cyc.begin(), std::min_element(cyc.begin(), cyc.end()), cyc.end());
                for (const auto& y : cyc) on_cycle.insert(y);
                rep.cycles.push_back(cyc);
            }
        }
        rep.attractor.assign(on_cycle.begin(), on_cycle.end());
        std::sort(rep.cycles.begin(), rep.cycles.end());
        return rep;
    }

    /// Samples random slopes of bounded height and iterates the boundary
    /// pullback until the orbit enters the attractor.
    AttractionStats verify_global_attraction(const AttractorReport& rep, int n_samples, long height_bound,
                                             int max_steps, std::uint64_t seed) {
        AttractionStats out;
        std::set<CurveClass> target(rep.attractor.begin(), rep.attractor.end());
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<long> pd(-height_bound, height_bound), qd(1, height_bound);
        double total = 0.0;
        for (int k = 0; k < n_samples; ++k) {
            long p, q;
            do {
                p = pd(rng);
                q = qd(rng);
            } while (std::gcd(p, q) != 1);
            CurveClass x(Slope::normalize(p, q));
            ++out.samples;
            CurveClass cur = x;
            int steps = 0;
            try {
                while (!target.count(cur) && steps < max_steps) {
                    cur = boundary_pullback(cur);
                    ++steps;
                }
            } catch (const Error& e) {
                out.failures.emplace_back(x, e.what());
                continue;
            }
            if (!target.count(cur)) {
                out.failures.emplace_back(x, "did not reach the attractor within " + std::to_string(max_steps) + " steps");
                continue;
            }
            ++out.reached;
            out.hitting_times.emplace_back(x, steps);
            out.max_hitting_time = std::max(out.max_hitting_time, steps);
            total += steps;
        }
        out.mean_hitting_time = out.reached ? total / out.reached : 0.0;
        return out;
    }

    /// Hitting time of one slope (0 when already in the attractor).
    int hitting_time(const AttractorReport& rep, const CurveClass& x, int max_steps) {
        std::set<CurveClass> target(rep.attractor.begin(), rep.attractor.end());
        CurveClass cur = x;
        for (int steps = 0; steps <= max_steps; ++steps) {
            if (target.count(cur)) return steps;
            cur = boundary_pullback(cur);
        }
        throw Error(Errc::Inconclusive, "orbit of " + x.to_string() + " did not reach the attractor");
    }

private:
    static std::array<Complex, 2> alternate_samples() { return {Complex(0.25, 0.75), Complex(0.75, 1.5)}; }

    /// Index k of the vertex opposite the edge of t that separates t from the
    /// cusp r (r not a vertex of t), by exact comparison of slopes on the
    /// circle Q u {inf}.
    static int separating_vertex(const FareyTriangle& t, const Slope& r) {
        // Vertices are sorted v0 < v1 < v2 with infinity last.
        if (t[0] < r && r < t[1]) return 2;
        if (t[1] < r && r < t[2]) return 0;
        return 1;
    }

    /// The neighbour of t across the edge that separates t from tau, or
    /// nullopt if the closed tile t contains tau.
    static std::optional<FareyTriangle> step_toward(const FareyTriangle& t, Complex tau) {
        int worst = -1;
        double worst_side = 0.0;
        for (int k = 0; k < 3; ++k) {
            double s = detail::edge_side(tau, t[(k + 1) % 3], t[(k + 2) % 3], t[k]);
            if (s < worst_side) {
                worst_side = s;
                worst = k;
            }
        }
        if (worst < 0) return std::nullopt;
        return neighbor(t, worst);
    }

    /// Coordinate that vanishes at the puncture of a cusp class.
    static Complex to_mu(CuspClass c, Complex lambda) {
        switch (c) {
            case CuspClass::Infinity: return lambda;
            case CuspClass::Zero: return 1.0 - lambda;
            case CuspClass::One: return 1.0 / lambda;
        }
        return lambda;
    }

    static SpherePoint from_mu(CuspClass c, Complex mu) {
        switch (c) {
            case CuspClass::Infinity: return SpherePoint(mu);
            case CuspClass::Zero: return SpherePoint(1.0 - mu);
            case CuspClass::One: return mu == Complex(0.0) ? SpherePoint::infinity() : SpherePoint(1.0 / mu);
        }
        return SpherePoint(mu);
    }

    Correspondence c_;
    Anchor anchor_;
    EngineOptions opt_;
    FareyTriangle anchor_tile_;
    ContinuationState anchor_state_;
    ContinuationStats stats_;
    std::map<FareyTriangle, ContinuationState> centers_;
    std::map<FareyTriangle, FareyTriangle> images_;
    std::map<Slope, BoundaryResult> boundary_;
};

}  // namespace thurston
