#pragma once

// Rational maps of the Riemann sphere: evaluation in both charts, level sets,
// critical points, and composition with Moebius transformations.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "thurston/error.hpp"
#include "thurston/polynomial.hpp"
#include "thurston/sphere.hpp"

namespace thurston {

/// A point of the sphere with a multiplicity (a root of a level equation).
struct SphereRoot {
    SpherePoint point;
    int multiplicity = 1;
};

/// R = num / den with no common roots (checked at construction).
class RationalMap {
public:
    RationalMap() : RationalMap(Polynomial{Complex(0.0), Complex(1.0)}, Polynomial::constant(1.0), 0.0) {}

    RationalMap(Polynomial num, Polynomial den, double common_root_tol = 1e-10)
        : num_(std::move(num)), den_(std::move(den)) {
        if (den_.is_zero()) throw Error(Errc::InvalidPolynomial, "denominator is the zero polynomial");
        check_common_roots(common_root_tol);
        num_rev_ = num_.reversed(degree());
        den_rev_ = den_.reversed(degree());
    }

    static RationalMap identity() { return {}; }

    static RationalMap from_moebius(const ComplexMoebius& m) {
        return RationalMap(Polynomial{m.b(), m.a()}, Polynomial{m.d(), m.c()});
    }

    const Polynomial& num() const { return num_; }
    const Polynomial& den() const { return den_; }

    int degree() const { return std::max(num_.degree(), den_.degree()); }

    /// Evaluation on the sphere. Points with |z| > 1 are evaluated in the chart
    /// u = 1/z through the homogeneous form of degree deg R.
    SpherePoint operator()(const SpherePoint& p) const {
        auto [n, d] = homogeneous(p);
        if (d == Complex(0.0)) {
            if (n == Complex(0.0)) throw Error(Errc::EvaluationUnstable, "0/0 in rational map evaluation");
            return SpherePoint::infinity();
        }
        return SpherePoint(n / d);
    }

    SpherePoint operator()(Complex z) const { return (*this)(SpherePoint(z)); }
    SpherePoint operator()(double x) const { return (*this)(SpherePoint(x)); }

    /// (numerator, denominator) of R at p, scaled by u^deg with u = 1/z when
    /// |z| > 1. The ratio is R(p); the pair is never (0, 0) away from
    /// numerical trouble.
    std::pair<Complex, Complex> homogeneous(const SpherePoint& p) const {
        const int d = degree();
        if (p.is_infinite()) return {num_[d], den_[d]};
        Complex z = p.value();
        if (std::abs(z) <= 1.0) return {num_(z), den_(z)};
        Complex u = 1.0 / z;
        return {num_rev_(u), den_rev_(u)};
    }

    /// R'(z) at a finite point where R(z) is finite.
    Complex derivative(Complex z) const {
        auto [n, dn] = num_.eval_with_derivative(z);
        auto [d, dd] = den_.eval_with_derivative(z);
        return (dn * d - n * dd) / (d * d);
    }

    /// w -> R(1/w).
    RationalMap source_reversed() const {
        const int d = degree();
        return RationalMap(num_.reversed(d), den_.reversed(d), 0.0);
    }

    /// M o R.
    RationalMap compose_left(const ComplexMoebius& m) const {
        return RationalMap(num_ * m.a() + den_ * m.b(), num_ * m.c() + den_ * m.d(), 0.0);
    }

    /// R o M.
    RationalMap compose_right(const ComplexMoebius& m) const {
        const int d = degree();
        return RationalMap(num_.substitute_moebius(d, m.a(), m.b(), m.c(), m.d()),
                           den_.substitute_moebius(d, m.a(), m.b(), m.c(), m.d()), 0.0);
    }

    /// Wronskian num' den - num den'; its roots are the finite critical points.
    Polynomial wronskian() const {
        Polynomial w = num_.derivative() * den_ - num_ * den_.derivative();
        double s = num_.scale() * den_.scale();
        double cut = 1e-14 * s;
        std::vector<Complex> c = w.coefficients();
        while (!c.empty() && std::abs(c.back()) <= cut) c.pop_back();
        return Polynomial(std::move(c));
    }

    std::string to_string() const {
        auto poly = [](const Polynomial& p) {
            std::string s;
            for (int k = 0; k <= p.degree(); ++k) {
                if (p[k] == Complex(0.0)) continue;
                if (!s.empty()) s += " + ";
                s += "(" + std::to_string(p[k].real()) + (p[k].imag() < 0 ? "" : "+") +
                     std::to_string(p[k].imag()) + "i)";
                if (k > 0) s += "z^" + std::to_string(k);
            }
            return s.empty() ? std::string("0") : s;
        };
        return "[" + poly(num_) + "] / [" + poly(den_) + "]";
    }

private:
    void check_common_roots(double tol) {
        if (tol <= 0.0 || den_.degree() < 1 || num_.is_zero()) return;
        for (const auto& r : all_roots(den_)) {
            if (backward_error(num_, r.z) <= tol) {
                throw Error(Errc::CommonRoot, "numerator and denominator share a root");
            }
        }
    }

    Polynomial num_, den_;
    Polynomial num_rev_, den_rev_;
};

/// All sphere solutions of R(w) = c with multiplicities summing to deg R. The
/// level is encoded homogeneously as (c0 : c1) with c = c0 / c1, and the
/// solutions are the roots of c1 num - c0 den plus infinity for any degree
/// shortfall.
inline std::vector<SphereRoot> solve_level(const RationalMap& r, const SpherePoint& c, const RootOptions& opt = {}) {
    const int d = r.degree();
    if (d < 1) throw Error(Errc::Degenerate, "level sets of a constant map");
    Complex c0, c1;
    if (c.is_infinite()) {
        c0 = 1.0;
        c1 = 0.0;
    } else if (std::abs(c.value()) <= 1.0) {
        c0 = c.value();
        c1 = 1.0;
    } else {
        c0 = 1.0;
        c1 = 1.0 / c.value();
    }
    Polynomial p = r.num() * c1 - r.den() * c0;
    double s = std::max(r.num().scale(), r.den().scale());
    std::vector<Complex> coeffs = p.coefficients();
    while (!coeffs.empty() && std::abs(coeffs.back()) <= 1e-15 * s) coeffs.pop_back();
    p = Polynomial(std::move(coeffs));
    if (p.is_zero()) throw Error(Errc::Degenerate, "rational map is constant");

    std::vector<SphereRoot> out;
    if (p.degree() >= 1) {
        for (const auto& root : all_roots(p, opt)) out.push_back({SpherePoint(root.z), root.multiplicity});
    }
    if (p.degree() < d) out.push_back({SpherePoint::infinity(), d - p.degree()});
    return out;
}

/// Flattened list with each solution repeated by multiplicity.
inline std::vector<SpherePoint> expand(const std::vector<SphereRoot>& roots) {
    std::vector<SpherePoint> out;
    for (const auto& r : roots) out.insert(out.end(), r.multiplicity, r.point);
    return out;
}

struct CriticalPoint {
    SpherePoint point;
    int local_degree = 2;
};

/// Critical points with local degrees; the local degrees minus one sum to
/// 2 deg R - 2.
inline std::vector<CriticalPoint> critical_points(const RationalMap& r, const RootOptions& opt = {}) {
    const int d = r.degree();
    if (d < 2) throw Error(Errc::Degenerate, "critical points need degree >= 2");
    Polynomial w = r.wronskian();
    std::vector<CriticalPoint> out;
    if (w.degree() >= 1) {
        for (const auto& root : all_roots(w, opt)) out.push_back({SpherePoint(root.z), root.multiplicity + 1});
    }
    int at_infinity = 1 + (2 * d - 2) - std::max(w.degree(), 0);
    if (at_infinity > 1) out.push_back({SpherePoint::infinity(), at_infinity});
    return out;
}

/// Local degree of R at a point: 1 unless the point is critical.
inline int local_degree(const std::vector<CriticalPoint>& crit, const SpherePoint& p, double tol = 1e-9) {
    for (const auto& c : crit) {
        if (chordal_distance(c.point, p) <= tol) return c.local_degree;
    }
    return 1;
}

}  // namespace thurston
