#pragma once

// The Farey tessellation of the upper half-plane by ideal triangles: tiles,
// edge flips, point location, canonical sample points and neighbourhoods.

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <set>
#include <vector>

#include "thurston/error.hpp"
#include "thurston/moebius.hpp"
#include "thurston/slope.hpp"

namespace thurston {

/// An ideal triangle of the Farey tessellation, stored by its three vertices
/// sorted by value (infinity last).
class FareyTriangle {
public:
    FareyTriangle(Slope a, Slope b, Slope c) : v_{std::move(a), std::move(b), std::move(c)} {
        std::sort(v_.begin(), v_.end());
        for (int i = 0; i < 3; ++i) {
            for (int j = i + 1; j < 3; ++j) {
                if (v_[i] == v_[j] || !is_farey_neighbor(v_[i], v_[j])) {
                    throw Error(Errc::InvalidPair, "tile vertices must be pairwise Farey neighbours");
                }
            }
        }
    }

    const std::array<Slope, 3>& vertices() const { return v_; }
    const Slope& operator[](int i) const { return v_[i]; }

    bool has_vertex(const Slope& s) const { return std::find(v_.begin(), v_.end(), s) != v_.end(); }

    /// The vertex in the given cusp class (exactly one exists).
    const Slope& vertex_in_class(CuspClass c) const {
        for (const auto& s : v_) {
            if (s.cusp_class() == c) return s;
        }
        throw Error(Errc::InvalidPair, "tile has no vertex in the requested cusp class");
    }

    /// The orientation-preserving integer map sending 0, 1, infinity to the
    /// vertices of this tile, with the mediant vertex as the image of 1.
    IntMoebius vertex_map() const {
        for (int k = 0; k < 3; ++k) {
            const Slope& m = v_[k];
            const Slope& x = v_[(k + 1) % 3];
            const Slope& y = v_[(k + 2) % 3];
            for (auto [inf_img, zero_img] : {std::pair{&x, &y}, std::pair{&y, &x}}) {
                if (farey_determinant(*inf_img, *zero_img) != 1) continue;
                if (Slope::normalize(inf_img->p() + zero_img->p(), inf_img->q() + zero_img->q()) == m) {
                    return IntMoebius(inf_img->p(), zero_img->p(), inf_img->q(), zero_img->q());
                }
            }
        }
        throw Error(Errc::InvalidPair, "no orientation-preserving vertex map found");
    }

    std::string to_string() const {
        return "{" + v_[0].to_string() + ", " + v_[1].to_string() + ", " + v_[2].to_string() + "}";
    }

    friend bool operator==(const FareyTriangle&, const FareyTriangle&) = default;
    friend auto operator<=>(const FareyTriangle& a, const FareyTriangle& b) {
        for (int i = 0; i < 3; ++i) {
            auto c = a.v_[i] <=> b.v_[i];
            if (c != 0) return c;
        }
        return std::strong_ordering::equal;
    }

    friend std::ostream& operator<<(std::ostream& os, const FareyTriangle& t) { return os << t.to_string(); }

private:
    std::array<Slope, 3> v_;
};

/// Point location landed within tolerance of a tile edge.
class OnEdgeError : public Error {
public:
    OnEdgeError(Slope a, Slope b)
        : Error(Errc::OnEdge, "point lies on the edge (" + a.to_string() + ", " + b.to_string() + ")"),
          a_(std::move(a)), b_(std::move(b)) {}

    const Slope& first() const { return a_; }
    const Slope& second() const { return b_; }

private:
    Slope a_, b_;
};

inline FareyTriangle base_tile() { return FareyTriangle(Slope::integer(0), Slope::integer(1), Slope::infinity()); }

/// The two slopes forming Farey triangles with the neighbours a and b are
/// a + b and a - b (as integer vectors); returns the one different from c.
inline Slope flip_vertex(const Slope& a, const Slope& b, const Slope& c) {
    Slope plus = Slope::normalize(a.p() + b.p(), a.q() + b.q());
    if (plus != c) return plus;
    return Slope::normalize(a.p() - b.p(), a.q() - b.q());
}

/// The tile across the edge opposite to vertex k.
inline FareyTriangle neighbor(const FareyTriangle& t, int k) {
    const Slope& c = t[k];
    const Slope& a = t[(k + 1) % 3];
    const Slope& b = t[(k + 2) % 3];
    return FareyTriangle(a, b, flip_vertex(a, b, c));
}

/// Neighbours across the three edges; entry k is across the edge opposite t[k].
inline std::array<FareyTriangle, 3> neighbors(const FareyTriangle& t) {
    return {neighbor(t, 0), neighbor(t, 1), neighbor(t, 2)};
}

namespace detail {

/// Signed side quantity of tau relative to the geodesic (a, b): positive on the
/// same side as the reference vertex c. For finite edges the quantity is
/// (|tau - m|^2 - r^2) / (2r), which approximates the signed Euclidean distance
/// to the semicircle near the edge.
inline double edge_side(Complex tau, const Slope& a, const Slope& b, const Slope& c) {
    if (a.is_infinite() || b.is_infinite()) {
        double x = (a.is_infinite() ? b : a).to_double();
        double ref = c.to_double() - x;
        return (tau.real() - x) * (ref > 0 ? 1.0 : -1.0);
    }
    double xa = a.to_double();
    double xb = b.to_double();
    double m = 0.5 * (xa + xb);
    double r = 0.5 * std::abs(xa - xb);
    double s = (std::norm(tau - Complex(m, 0.0)) - r * r) / (2.0 * r);
    bool c_outside = c.is_infinite() || std::abs(c.to_double() - m) > r;
    return c_outside ? s : -s;
}

/// Minimum hyperbolic distance from tau to the full geodesic (a, b).
inline double distance_to_geodesic(Complex tau, const Slope& a, const Slope& b) {
    if (a.is_infinite() || b.is_infinite()) {
        double x = (a.is_infinite() ? b : a).to_double();
        return std::asinh(std::abs(tau.real() - x) / tau.imag());
    }
    // Map a -> 0, b -> infinity; the geodesic becomes the imaginary axis.
    Complex z = (tau - a.to_double()) / (tau - b.to_double());
    z = -z;  // orientation: keeps the image in the upper half-plane
    if (z.imag() <= 0.0) z = std::conj(z);
    return std::asinh(std::abs(z.real()) / z.imag());
}

}  // namespace detail

/// Tile whose closed triangle contains tau, found by walking across edges
/// that separate the current tile from tau. Points within `tol` of an edge
/// raise OnEdgeError.
inline FareyTriangle locate(Complex tau, double tol = 1e-12) {
    if (!(tau.imag() > 0.0)) throw Error(Errc::LocateFailed, "point is not in the upper half-plane");
    long long n = static_cast<long long>(std::floor(tau.real()));
    FareyTriangle t(Slope::integer(n), Slope::integer(n + 1), Slope::infinity());
    long long cap = 10 * (1 + static_cast<long long>(std::ceil(std::abs(tau.real()))) +
                          static_cast<long long>(std::ceil(1.0 / tau.imag()))) + 1000;
    for (long long step = 0; step < cap; ++step) {
        int worst = -1;
        double worst_side = 0.0;
        int near = -1;
        for (int k = 0; k < 3; ++k) {
            double s = detail::edge_side(tau, t[(k + 1) % 3], t[(k + 2) % 3], t[k]);
            if (s < -tol && s < worst_side) {
                worst_side = s;
                worst = k;
            } else if (std::abs(s) <= tol) {
                near = k;
            }
        }
        if (worst >= 0) {
            t = neighbor(t, worst);
            continue;
        }
        if (near >= 0) throw OnEdgeError(t[(near + 1) % 3], t[(near + 2) % 3]);
        return t;
    }
    throw Error(Errc::LocateFailed, "tile walk exceeded its step cap");
}

/// A tile whose closed triangle contains tau; points on edges resolve to either
/// adjacent tile without raising.
inline FareyTriangle locate_closed(Complex tau) {
    try {
        return locate(tau, 0.0);
    } catch (const OnEdgeError& e) {
        // Exactly on an edge at zero tolerance; any adjacent tile qualifies.
        Slope a = e.first(), b = e.second();
        return FareyTriangle(a, b, Slope::normalize(a.p() + b.p(), a.q() + b.q()));
    }
}

/// The canonical interior point: the image of 1/2 + (sqrt 3 / 2) i under the
/// vertex map of the tile.
inline Complex interior_point(const FareyTriangle& t) {
    const Complex rho(0.5, std::sqrt(3.0) / 2.0);
    return t.vertex_map().apply(rho);
}

/// Image of an arbitrary point of the base tile under the tile's vertex map.
inline Complex tile_point(const FareyTriangle& t, Complex base_point) { return t.vertex_map().apply(base_point); }

/// Hyperbolic distance from tau to the closed tile (zero inside).
inline double distance_to_tile(Complex tau, const FareyTriangle& t) {
    for (int k = 0; k < 3; ++k) {
        const Slope& a = t[(k + 1) % 3];
        const Slope& b = t[(k + 2) % 3];
        if (detail::edge_side(tau, a, b, t[k]) < 0.0) return detail::distance_to_geodesic(tau, a, b);
    }
    return 0.0;
}

/// All tiles whose closed triangle meets the closed hyperbolic disk of radius
/// eps about tau.
inline std::vector<FareyTriangle> tiles_near(Complex tau, double eps, std::size_t max_tiles = 100000) {
    if (!(tau.imag() > 0.0)) throw Error(Errc::LocateFailed, "point is not in the upper half-plane");
    if (!(eps > 0.0)) throw Error(Errc::InvalidPair, "neighbourhood radius must be positive");
    std::set<FareyTriangle> seen;
    std::deque<FareyTriangle> queue;
    FareyTriangle start = locate_closed(tau);
    seen.insert(start);
    queue.push_back(start);
    std::vector<FareyTriangle> out;
    while (!queue.empty()) {
        FareyTriangle t = queue.front();
        queue.pop_front();
        out.push_back(t);
        if (out.size() > max_tiles) throw Error(Errc::LocateFailed, "neighbourhood contains too many tiles");
        for (const auto& n : neighbors(t)) {
            if (seen.count(n)) continue;
            seen.insert(n);
            if (distance_to_tile(tau, n) <= eps) queue.push_back(n);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Tiles within `depth` edge flips of `center`, grouped by flip distance.
inline std::vector<std::vector<FareyTriangle>> tiles_within_flips(const FareyTriangle& center, int depth) {
    std::vector<std::vector<FareyTriangle>> rings{{center}};
    std::set<FareyTriangle> seen{center};
    for (int d = 1; d <= depth; ++d) {
        std::vector<FareyTriangle> next;
        for (const auto& t : rings.back()) {
            for (const auto& n : neighbors(t)) {
                if (seen.insert(n).second) next.push_back(n);
            }
        }
        rings.push_back(std::move(next));
    }
    return rings;
}

}  // namespace thurston
