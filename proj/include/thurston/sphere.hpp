#pragma once

// Points of the Riemann sphere and complex Moebius transformations.

#include <cmath>
#include <complex>
#include <ostream>

#include "thurston/error.hpp"

namespace thurston {

using Complex = std::complex<double>;

/// A point of the Riemann sphere: a finite complex number or infinity.
class SpherePoint {
public:
    SpherePoint() = default;
    SpherePoint(Complex z) : z_(z) {}
    SpherePoint(double x) : z_(x, 0.0) {}

    static SpherePoint infinity() {
        SpherePoint p;
        p.inf_ = true;
        return p;
    }

    bool is_infinite() const { return inf_; }

    /// The finite value; calling this on infinity is a logic error.
    Complex value() const { return z_; }

    /// 1/z on the sphere.
    SpherePoint reciprocal() const {
        if (inf_) return SpherePoint(Complex(0.0, 0.0));
        if (z_ == Complex(0.0, 0.0)) return infinity();
        return SpherePoint(1.0 / z_);
    }

    friend std::ostream& operator<<(std::ostream& os, const SpherePoint& p) {
        if (p.inf_) return os << "inf";
        return os << p.z_;
    }

private:
    Complex z_{0.0, 0.0};
    bool inf_ = false;
};

/// Chordal distance 2|z - w| / sqrt((1+|z|^2)(1+|w|^2)); the diameter of the
/// sphere is 2.
inline double chordal_distance(const SpherePoint& a, const SpherePoint& b) {
    if (a.is_infinite() && b.is_infinite()) return 0.0;
    if (a.is_infinite()) return 2.0 / std::sqrt(1.0 + std::norm(b.value()));
    if (b.is_infinite()) return 2.0 / std::sqrt(1.0 + std::norm(a.value()));
    Complex z = a.value();
    Complex w = b.value();
    if (std::abs(z) > 1.0 && std::abs(w) > 1.0) {
        z = 1.0 / z;
        w = 1.0 / w;
    }
    return 2.0 * std::abs(z - w) / std::sqrt((1.0 + std::norm(z)) * (1.0 + std::norm(w)));
}

/// z -> (a z + b) / (c z + d) with complex coefficients, ad - bc != 0.
class ComplexMoebius {
public:
    ComplexMoebius() = default;
    ComplexMoebius(Complex a, Complex b, Complex c, Complex d) : a_(a), b_(b), c_(c), d_(d) {
        if (std::abs(det()) == 0.0) throw Error(Errc::InvalidMatrix, "singular Moebius transformation");
    }

    static ComplexMoebius identity() { return {}; }

    /// The unique map sending 0, 1, infinity to p0, p1, pinf.
    static ComplexMoebius from_triple(const SpherePoint& p0, const SpherePoint& p1, const SpherePoint& pinf) {
        if (chordal_distance(p0, p1) < 1e-14 || chordal_distance(p0, pinf) < 1e-14 ||
            chordal_distance(p1, pinf) < 1e-14) {
            throw Error(Errc::Degenerate, "Moebius triple must consist of distinct points");
        }
        // z -> (z+...)-form: columns (a,c) image of infinity, (b,d) image of 0.
        auto col = [](const SpherePoint& p) {
            return p.is_infinite() ? std::pair<Complex, Complex>{1.0, 0.0}
                                   : std::pair<Complex, Complex>{p.value(), 1.0};
        };
        auto [ai, ci] = col(pinf);
        auto [b0, d0] = col(p0);
        auto [x1, y1] = col(p1);
        // Scale columns by s, t so that s*(ai,ci) + t*(b0,d0) is proportional to (x1,y1).
        // Solve s*ai + t*b0 = x1, s*ci + t*d0 = y1.
        Complex det = ai * d0 - b0 * ci;
        Complex s = (x1 * d0 - b0 * y1) / det;
        Complex t = (ai * y1 - x1 * ci) / det;
        return ComplexMoebius(s * ai, t * b0, s * ci, t * d0);
    }

    Complex a() const { return a_; }
    Complex b() const { return b_; }
    Complex c() const { return c_; }
    Complex d() const { return d_; }
    Complex det() const { return a_ * d_ - b_ * c_; }

    SpherePoint operator()(const SpherePoint& p) const {
        if (p.is_infinite()) {
            if (c_ == Complex(0.0, 0.0)) return SpherePoint::infinity();
            return SpherePoint(a_ / c_);
        }
        Complex z = p.value();
        Complex num = a_ * z + b_;
        Complex den = c_ * z + d_;
        if (den == Complex(0.0, 0.0)) return SpherePoint::infinity();
        return SpherePoint(num / den);
    }

    /// Derivative at a finite point whose image is finite.
    Complex derivative(Complex z) const {
        Complex den = c_ * z + d_;
        return det() / (den * den);
    }

    ComplexMoebius inverse() const { return ComplexMoebius(d_, -b_, -c_, a_); }

    friend ComplexMoebius operator*(const ComplexMoebius& f, const ComplexMoebius& g) {
        return ComplexMoebius(f.a_ * g.a_ + f.b_ * g.c_, f.a_ * g.b_ + f.b_ * g.d_, f.c_ * g.a_ + f.d_ * g.c_,
                              f.c_ * g.b_ + f.d_ * g.d_);
    }

private:
    Complex a_{1.0, 0.0}, b_{0.0, 0.0}, c_{0.0, 0.0}, d_{1.0, 0.0};
};

}  // namespace thurston
