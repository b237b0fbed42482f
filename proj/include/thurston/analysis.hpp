#pragma once

// Analysis of the rational map itself: the ramification portrait on the
// marked and postcritical points, the orbifold signature and its Euler
// characteristic, and sampled circle and graph invariance checks.

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "thurston/circle.hpp"
#include "thurston/error.hpp"
#include "thurston/rational_map.hpp"
#include "thurston/sphere.hpp"

namespace thurston {

using Rational = boost::multiprecision::cpp_rational;

struct PortraitPoint {
    SpherePoint z;
    bool marked = false;
    bool critical = false;
    bool postcritical = false;
    int local_degree = 1;
    int image = -1;
};

struct PortraitEdge {
    int source;
    int target;
    int local_degree;
};

class RamificationPortrait {
public:
    std::vector<PortraitPoint> points;

    std::vector<PortraitEdge> edges() const {
        std::vector<PortraitEdge> out;
        for (int k = 0; k < static_cast<int>(points.size()); ++k) {
            out.push_back({k, points[k].image, points[k].local_degree});
        }
        return out;
    }

    /// Index of the portrait point within chordal distance tol of p, or -1.
    int find(const SpherePoint& p, double tol = 1e-9) const {
        for (int k = 0; k < static_cast<int>(points.size()); ++k) {
            if (chordal_distance(points[k].z, p) <= tol) return k;
        }
        return -1;
    }

    /// True when p returns to itself under the image map.
    bool is_periodic(int p) const {
        int cur = points[p].image;
        for (std::size_t n = 0; n < points.size(); ++n) {
            if (cur == p) return true;
            cur = points[cur].image;
        }
        return false;
    }
};

struct PortraitOptions {
    double merge_tol = 1e-9;
    std::size_t max_points = 64;
    RootOptions roots{};
};

/// Critical points, their forward orbits, and the marked points with their
/// forward orbits, merged on the chordal metric. The marked set must
/// contain the postcritical set and be forward invariant; an empty marked
/// set stands for the postcritical set.
inline RamificationPortrait postcritical_portrait(const RationalMap& f, std::vector<SpherePoint> marked,
                                                  const PortraitOptions& opt = {}) {
    if (f.degree() < 2) throw Error(Errc::Degenerate, "portrait needs degree at least 2");
    RamificationPortrait p;
    auto crit = critical_points(f, opt.roots);

    auto add = [&](const SpherePoint& z) {
        int k = p.find(z, opt.merge_tol);
        if (k >= 0) return k;
        if (p.points.size() >= opt.max_points) {
            throw Error(Errc::NotPostcriticallyFinite,
                        "forward orbits exceed " + std::to_string(opt.max_points) + " distinct points");
        }
        PortraitPoint pt;
        pt.z = z;
        pt.local_degree = local_degree(crit, z, opt.merge_tol);
        pt.critical = pt.local_degree > 1;
        p.points.push_back(pt);
        return static_cast<int>(p.points.size()) - 1;
    };

    for (const auto& c : crit) add(c.point);
    const bool use_postcritical = marked.empty();
    std::vector<int> marked_idx;
    for (const auto& m : marked) marked_idx.push_back(add(m));

    for (std::size_t k = 0; k < p.points.size(); ++k) {
        SpherePoint z = f(p.points[k].z);
        if (!z.is_infinite() && chordal_distance(z, SpherePoint::infinity()) <= 1e-3 * opt.merge_tol) {
            z = SpherePoint::infinity();
        }
        const int known = p.find(z, opt.merge_tol);
        if (known >= 0) {
            // An orbit converging to an attracting cycle eventually falls
            // within the merge tolerance without landing; its previous point
            // is then already close to a predecessor of the merge target.
            for (std::size_t q = 0; q < k; ++q) {
                bool pred = p.points[q].image == known || static_cast<int>(q) == known;
                if (pred && chordal_distance(p.points[q].z, p.points[k].z) < 1e-4 && q != k &&
                    chordal_distance(p.points[q].z, p.points[k].z) > opt.merge_tol) {
                    throw Error(Errc::NotPostcriticallyFinite, "orbit converges to a cycle without landing on it");
                }
            }
        }
        p.points[k].image = add(z);
    }
    // Postcritical: forward images of critical points.
    for (std::size_t k = 0; k < p.points.size(); ++k) {
        if (!p.points[k].critical) continue;
        int cur = p.points[k].image;
        for (std::size_t n = 0; n <= p.points.size() && !p.points[cur].postcritical; ++n) {
            p.points[cur].postcritical = true;
            cur = p.points[cur].image;
        }
    }
    if (use_postcritical) {
        for (auto& pt : p.points) pt.marked = pt.postcritical;
    } else {
        for (int k : marked_idx) p.points[k].marked = true;
        for (const auto& pt : p.points) {
            if (pt.postcritical && !pt.marked) {
                throw Error(Errc::MarkedSetNotInvariant, "marked set misses a postcritical point");
            }
            if (pt.marked && !p.points[pt.image].marked) {
                throw Error(Errc::MarkedSetNotInvariant, "marked set is not forward invariant");
            }
        }
    }
    return p;
}

/// Cone order; nullopt stands for infinity.
using ConeOrder = std::optional<boost::multiprecision::cpp_int>;

struct SignatureEntry {
    SpherePoint point;
    ConeOrder nu;
};

struct OrbifoldSignature {
    std::vector<SignatureEntry> entries;
};

namespace detail {

inline ConeOrder cone_lcm(const ConeOrder& a, const ConeOrder& b) {
    if (!a || !b) return std::nullopt;
    return boost::multiprecision::lcm(*a, *b);
}

/// nu(p) <- lcm over portrait edges q -> p of deg(q) nu(q), from nu = 1, with
/// infinity on the forward orbit of any periodic critical point and beyond
/// 2^64. Returned for every portrait point.
inline std::vector<ConeOrder> relax_cone_orders(const RamificationPortrait& p,
                                                std::vector<ConeOrder> nu = {}) {
    const std::size_t n = p.points.size();
    if (nu.empty()) nu.assign(n, boost::multiprecision::cpp_int(1));
    for (std::size_t k = 0; k < n; ++k) {
        if (p.points[k].critical && p.is_periodic(static_cast<int>(k))) {
            int cur = static_cast<int>(k);
            for (std::size_t s = 0; s < n; ++s) {
                nu[cur] = std::nullopt;
                cur = p.points[cur].image;
            }
        }
    }
    const boost::multiprecision::cpp_int cap = boost::multiprecision::cpp_int(1) << 64;
    for (std::size_t round = 0; round < 4 * n + 8; ++round) {
        std::vector<ConeOrder> next(n, boost::multiprecision::cpp_int(1));
        for (std::size_t q = 0; q < n; ++q) {
            int t = p.points[q].image;
            ConeOrder contrib = nu[q] ? ConeOrder(*nu[q] * p.points[q].local_degree) : std::nullopt;
            next[t] = cone_lcm(next[t], contrib);
        }
        for (auto& v : next) {
            if (v && *v > cap) v = std::nullopt;
        }
        // Points already at infinity stay there.
        for (std::size_t k = 0; k < n; ++k) {
            if (!nu[k]) next[k] = std::nullopt;
        }
        if (next == nu) break;
        nu = std::move(next);
    }
    return nu;
}

}  // namespace detail

inline OrbifoldSignature orbifold_signature(const RamificationPortrait& p) {
    auto nu = detail::relax_cone_orders(p);
    OrbifoldSignature sig;
    for (std::size_t k = 0; k < p.points.size(); ++k) {
        if (!p.points[k].postcritical) continue;
        if (nu[k] && *nu[k] < 2) continue;
        sig.entries.push_back({p.points[k].z, nu[k]});
    }
    return sig;
}

inline Rational euler_characteristic(const OrbifoldSignature& sig) {
    Rational chi = 2;
    for (const auto& e : sig.entries) {
        chi -= 1;
        if (e.nu) chi += Rational(1) / Rational(*e.nu);
    }
    return chi;
}

inline bool is_hyperbolic(const OrbifoldSignature& sig) { return euler_characteristic(sig) < 0; }

inline bool has_nonperiodic_marked_point(const RamificationPortrait& p) {
    for (int k = 0; k < static_cast<int>(p.points.size()); ++k) {
        if (p.points[k].marked && !p.is_periodic(k)) return true;
    }
    return false;
}

inline std::string to_string(const ConeOrder& nu) { return nu ? nu->str() : "inf"; }

// ---------------------------------------------------------------- circle checks

struct CircleCheck {
    bool pass = false;
    double max_deviation = 0.0;
    int samples = 0;
    std::optional<Circle> image;
    std::vector<std::string> failures;
};

namespace detail {

/// Three sample images with large pairwise chordal separation: the farthest
/// pair, then the point farthest from both.
inline std::array<SpherePoint, 3> well_separated(const std::vector<SpherePoint>& pts) {
    std::size_t a = 0, b = 1;
    double best = -1.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            double d = chordal_distance(pts[i], pts[j]);
            if (d > best) {
                best = d;
                a = i;
                b = j;
            }
        }
    }
    std::size_t c = 0;
    best = -1.0;
    for (std::size_t k = 0; k < pts.size(); ++k) {
        double d = std::min(chordal_distance(pts[k], pts[a]), chordal_distance(pts[k], pts[b]));
        if (d > best) {
            best = d;
            c = k;
        }
    }
    return {pts[a], pts[b], pts[c]};
}

}  // namespace detail

/// Samples R on a circle whose points include every critical point of R and
/// measures how far the images stray from the circle through three of them.
inline CircleCheck check_circle_to_circle(const RationalMap& r, const Circle& c, int n_samples = 256,
                                          double tol = 1e-9, const RootOptions& opt = {}) {
    for (const auto& cp : critical_points(r, opt)) {
        double d = c.distance(cp.point);
        if (d > tol) {
            throw Error(Errc::CriticalPointsOffCircle,
                        "critical point at distance " + std::to_string(d) + " from the circle");
        }
    }
    CircleCheck out;
    std::vector<SpherePoint> images;
    for (int k = 0; k < n_samples; ++k) images.push_back(r(c.sample(static_cast<double>(k) / n_samples)));
    auto three = detail::well_separated(images);
    Circle fit(three[0], three[1], three[2]);
    for (const auto& p : images) out.max_deviation = std::max(out.max_deviation, fit.distance(p));
    out.samples = n_samples;
    out.image = fit;
    out.pass = out.max_deviation <= tol;
    return out;
}

/// For sample points g on G, every solution of X(w) = g must have Y(w) on G.
inline CircleCheck check_graph_invariance(const RationalMap& x, const RationalMap& y, const Circle& g,
                                          int n_samples = 256, double tol = 1e-9, const RootOptions& opt = {}) {
    CircleCheck out;
    for (int k = 0; k < n_samples; ++k) {
        SpherePoint level = g.sample(static_cast<double>(k) / n_samples);
        try {
            for (const auto& w : solve_level(x, level, opt)) {
                out.max_deviation = std::max(out.max_deviation, g.distance(y(w.point)));
            }
            ++out.samples;
        } catch (const Error& e) {
            out.failures.push_back("sample " + std::to_string(k) + ": " + e.what());
        }
    }
    out.pass = out.failures.empty() && out.max_deviation <= tol;
    return out;
}

}  // namespace thurston
