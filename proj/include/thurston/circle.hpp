#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "thurston/error.hpp"
#include "thurston/sphere.hpp"

namespace thurston {

/// A circle or a line in the Riemann sphere, kept with the three points it
/// was built from so it can be parametrized by a Moebius image of the unit
/// circle.
class Circle {
public:
    Circle(SpherePoint a, SpherePoint b, SpherePoint c) : pts_{a, b, c} {
        const double sep = 1e-12;
        if (chordal_distance(a, b) < sep || chordal_distance(b, c) < sep || chordal_distance(a, c) < sep) {
            throw Error(Errc::Degenerate, "circle needs three distinct points");
        }
        std::array<Complex, 3> finite;
        int n = 0;
        for (const auto& p : pts_) {
            if (!p.is_infinite()) finite[n++] = p.value();
        }
        if (n == 2) {
            set_line(finite[0], finite[1]);
        } else {
            Complex z1 = finite[0], z2 = finite[1], z3 = finite[2];
            Complex u = z2 - z1, v = z3 - z1;
            double cross = (std::conj(u) * v).imag();
            double scale = std::max({std::norm(u), std::norm(v), 1e-300});
            if (std::abs(cross) <= 1e-14 * scale) {
                set_line(z1, std::norm(u) >= std::norm(v) ? z2 : z3);
            } else {
                // Circumcenter relative to z1.
                Complex c = (std::norm(u) * v - std::norm(v) * u) / Complex(0.0, 2.0 * cross);
                line_ = false;
                center_ = z1 + c;
                radius_ = std::abs(c);
            }
        }
        // Parametrization: (1, i, -1) on the unit circle go to the three points.
        ComplexMoebius to_triple = ComplexMoebius::from_triple(pts_[0], pts_[1], pts_[2]);
        ComplexMoebius cayley(Complex(0.0, -1.0), Complex(0.0, 1.0), 1.0, 1.0);
        param_ = to_triple * cayley;
    }

    static Circle real_line() { return Circle(SpherePoint(0.0), SpherePoint(1.0), SpherePoint::infinity()); }
    static Circle unit_circle() { return Circle(SpherePoint(1.0), SpherePoint(Complex(0.0, 1.0)), SpherePoint(-1.0)); }

    bool is_line() const { return line_; }
    Complex center() const { return center_; }
    double radius() const { return radius_; }
    /// For a line: a point on it and a unit direction.
    Complex base() const { return base_; }
    Complex direction() const { return dir_; }
    const std::array<SpherePoint, 3>& defining_points() const { return pts_; }

    /// Euclidean distance to the circle divided by max(1, |z|); infinity is on
    /// every line and at distance 1 from every bounded circle.
    double distance(const SpherePoint& p) const {
        if (p.is_infinite()) return line_ ? 0.0 : 1.0;
        Complex z = p.value();
        double d;
        if (line_) {
            d = std::abs((std::conj(dir_) * (z - base_)).imag());
        } else {
            d = std::abs(std::abs(z - center_) - radius_);
        }
        return d / std::max(1.0, std::abs(z));
    }

    /// The point at parameter t in [0, 1): the image of exp(2 pi i t).
    SpherePoint sample(double t) const {
        double a = 2.0 * std::numbers::pi * t;
        return param_(SpherePoint(Complex(std::cos(a), std::sin(a))));
    }

    std::string to_string() const {
        char buf[160];
        if (line_) {
            std::snprintf(buf, sizeof buf, "line through %.17g%+.17gi direction %.17g%+.17gi", base_.real(),
                          base_.imag(), dir_.real(), dir_.imag());
        } else {
            std::snprintf(buf, sizeof buf, "circle center %.17g%+.17gi radius %.17g", center_.real(), center_.imag(),
                          radius_);
        }
        return buf;
    }

private:
    void set_line(Complex a, Complex b) {
        line_ = true;
        base_ = a;
        dir_ = (b - a) / std::abs(b - a);
    }

    std::array<SpherePoint, 3> pts_;
    bool line_ = false;
    Complex center_{0.0}, base_{0.0}, dir_{1.0};
    double radius_ = 0.0;
    ComplexMoebius param_;
};

/// The unique circline through three distinct points.
inline Circle circle_through(const SpherePoint& a, const SpherePoint& b, const SpherePoint& c) { return Circle(a, b, c); }

}  // namespace thurston
