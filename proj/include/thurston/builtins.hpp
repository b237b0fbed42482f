#pragma once

// Built-in maps and correspondences, with their coefficients embedded.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "thurston/circle.hpp"
#include "thurston/error.hpp"
#include "thurston/polynomial.hpp"
#include "thurston/rational_map.hpp"
#include "thurston/sphere.hpp"

namespace thurston {

struct MapJob {
    std::string name;
    std::optional<RationalMap> f;
    std::vector<SpherePoint> marked;
    std::optional<RationalMap> X, Y;
    std::optional<std::array<SpherePoint, 3>> theta;
    std::optional<Circle> circle;
    std::string description;
};

namespace builtin {

inline Complex omega() { return {-0.5, std::sqrt(3.0) / 2.0}; }

/// The parameter c with Im c > 0 and c^3 + 2c^2 + c + 1 = 0, for which
/// z -> c z^2 + 1 has the periodic critical orbit 0 -> 1 -> c + 1 -> 0.
inline Complex rabbit_parameter() {
    auto roots = all_roots(Polynomial{1.0, 1.0, 2.0, 1.0});
    auto top = std::max_element(roots.begin(), roots.end(),
                                [](const Root& a, const Root& b) { return a.z.imag() < b.z.imag(); });
    // The real root carries a rounding-level imaginary part.
    if (top->z.imag() < 0.1) throw Error(Errc::RootFindingFailed, "rabbit parameter not found");
    return top->z;
}

inline MapJob example1() {
    MapJob j;
    j.name = "example1";
    j.f = RationalMap(Polynomial{0.0, 0.0, 3.0}, Polynomial{1.0, 0.0, 0.0, 2.0});
    Complex w = omega();
    j.marked = {SpherePoint(0.0), SpherePoint(1.0), SpherePoint(w), SpherePoint(std::conj(w))};
    j.X = RationalMap(Polynomial{0.0, 0.0, 1.0}, Polynomial{1.0});
    j.Y = RationalMap(Polynomial{0.0, 2.0, 0.0, 0.0, 1.0}, Polynomial{1.0, 0.0, 0.0, 2.0});
    j.theta = std::array<SpherePoint, 3>{SpherePoint(std::conj(w)), SpherePoint(1.0), SpherePoint(w)};
    j.circle = Circle::unit_circle();
    j.description = "3z^2/(2z^3+1) with marked points 0, 1, w, conj(w)";
    return j;
}

inline MapJob rabbit() {
    MapJob j;
    j.name = "rabbit";
    Complex c = rabbit_parameter();
    j.f = RationalMap(Polynomial{1.0, 0.0, c}, Polynomial{1.0});
    j.marked = {SpherePoint(0.0), SpherePoint(1.0), SpherePoint(c + 1.0), SpherePoint::infinity()};
    j.X = RationalMap(Polynomial{0.0, 1.0}, Polynomial{1.0});
    j.Y = RationalMap(Polynomial{-1.0, 0.0, 1.0}, Polynomial{0.0, 0.0, 1.0});
    j.theta = std::array<SpherePoint, 3>{SpherePoint(0.0), SpherePoint(1.0), SpherePoint::infinity()};
    j.circle = Circle::real_line();
    j.description = "c z^2 + 1 with marked points 0, 1, c + 1, inf";
    return j;
}

/// (3z^5 + 5z)/(5z^4 + 3): every critical point lies on the unit circle.
inline MapJob quintic() {
    MapJob j;
    j.name = "quintic";
    j.f = RationalMap(Polynomial{0.0, 5.0, 0.0, 0.0, 0.0, 3.0}, Polynomial{3.0, 0.0, 0.0, 0.0, 5.0});
    j.circle = Circle::unit_circle();
    j.description = "(3z^5+5z)/(5z^4+3) on the unit circle";
    return j;
}

/// A Lattes map with a (2,2,2,2) orbifold.
inline MapJob lattes() {
    MapJob j;
    j.name = "lattes";
    j.f = RationalMap(Polynomial{1.0, 0.0, 2.0, 0.0, 1.0}, Polynomial{0.0, -4.0, 0.0, 4.0});
    j.description = "(z^2+1)^2/(4z(z^2-1))";
    return j;
}

inline MapJob z_squared() {
    MapJob j;
    j.name = "z2";
    j.f = RationalMap(Polynomial{0.0, 0.0, 1.0}, Polynomial{1.0});
    j.marked = {SpherePoint(0.0), SpherePoint(1.0), SpherePoint::infinity()};
    j.circle = Circle::real_line();
    j.description = "z^2 with marked points 0, 1, inf";
    return j;
}

/// z^2 + 0.3, whose critical orbit escapes: not postcritically finite.
inline MapJob non_pcf() {
    MapJob j;
    j.name = "nonpcf";
    j.f = RationalMap(Polynomial{0.3, 0.0, 1.0}, Polynomial{1.0});
    j.description = "z^2 + 0.3";
    return j;
}

/// z^2 + z on the unit circle: the critical point -1/2 is off the circle.
inline MapJob off_circle() {
    MapJob j;
    j.name = "offcircle";
    j.f = RationalMap(Polynomial{0.0, 1.0, 1.0}, Polynomial{1.0});
    j.circle = Circle::unit_circle();
    j.description = "z^2 + z on the unit circle";
    return j;
}

inline std::vector<std::string> names() { return {"example1", "rabbit", "quintic", "lattes", "z2", "nonpcf", "offcircle"}; }

inline MapJob get(const std::string& name) {
    if (name == "example1") return example1();
    if (name == "rabbit") return rabbit();
    if (name == "quintic") return quintic();
    if (name == "lattes") return lattes();
    if (name == "z2") return z_squared();
    if (name == "nonpcf") return non_pcf();
    if (name == "offcircle") return off_circle();
    throw Error(Errc::ConfigError, "unknown built-in '" + name + "'");
}

}  // namespace builtin
}  // namespace thurston
