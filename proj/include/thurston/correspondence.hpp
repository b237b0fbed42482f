#pragma once

// The moduli-space correspondence (X, Y): pi o sigma = X o omega and
// pi = Y o omega. Holds the maps in moduli and lambda coordinates, the fixed
// point candidates X(w) = Y(w), and the injective-X moduli map.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "thurston/error.hpp"
#include "thurston/lambda.hpp"
#include "thurston/polynomial.hpp"
#include "thurston/rational_map.hpp"
#include "thurston/sphere.hpp"

namespace thurston {

/// The gaps F - 0, F - 1 and 1/F of a map into the lambda sphere, written as
/// products over the preimages of 0, 1 and infinity. Near such a preimage
/// the product keeps the relative accuracy that the expanded polynomial
/// loses to cancellation.
class PunctureFactors {
public:
    PunctureFactors() = default;
    explicit PunctureFactors(const RationalMap& f, const RootOptions& opt = {}) {
        const Polynomial& n = f.num();
        const Polynomial& d = f.den();
        const std::array<Polynomial, 3> zero{n, n - d, d};
        const std::array<Polynomial, 3> pole{d, d, n};
        for (int p = 0; p < 3; ++p) {
            Factor& fa = factors_[p];
            fa.pole = pole[p];
            Polynomial z = zero[p].trimmed(1e-15);
            if (z.is_zero()) {
                valid_ = false;
                return;
            }
            fa.lead = z.leading();
            try {
                if (z.degree() >= 1) fa.roots = all_roots(z, opt);
            } catch (const Error&) {
                valid_ = false;
                return;
            }
        }
    }

    bool valid() const { return valid_; }

    /// The gap of F(w) to puncture p (0, 1, 2 for 0, 1, infinity) together
    /// with its logarithmic derivative; nullopt at a zero or pole.
    std::optional<std::pair<Complex, Complex>> gap(Complex w, int p) const {
        const Factor& fa = factors_[p];
        Complex g = fa.lead, dlog = 0.0;
        for (const auto& r : fa.roots) {
            Complex u = w - r.z;
            if (u == Complex(0.0)) return std::nullopt;
            for (int k = 0; k < r.multiplicity; ++k) g *= u;
            dlog += static_cast<double>(r.multiplicity) / u;
        }
        auto [c, dc] = fa.pole.eval_with_derivative(w);
        if (c == Complex(0.0)) return std::nullopt;
        return std::pair{g / c, dlog - dc / c};
    }

    /// Distance from w to the nearest preimage of puncture p.
    double preimage_distance(Complex w, int p) const {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& r : factors_[p].roots) best = std::min(best, std::abs(w - r.z));
        return best;
    }

    /// Newton's method for gap(w, p) = want on the logarithm of the ratio,
    /// from w0 and staying within reach of it.
    std::optional<Complex> solve_gap(Complex w0, int p, Complex want, double reach) const {
        Complex w = w0;
        for (int it = 0; it < 8; ++it) {
            auto g = gap(w, p);
            if (!g || g->second == Complex(0.0)) return std::nullopt;
            Complex step = std::log(g->first / want) / g->second;
            if (!std::isfinite(std::abs(step))) return std::nullopt;
            w -= step;
            if (!(std::abs(w - w0) <= reach)) return std::nullopt;
            if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(w), reach)) {
                return w;
            }
        }
        return w;
    }

    /// The m solutions of gap(w, p) = want near an m-fold preimage of the
    /// puncture close to w, from the local model (w - r)^m H(r) = want.
    std::optional<std::vector<Complex>> split(Complex w, int m, int p, Complex want) const {
        const Factor& fa = factors_[p];
        const Root* near = nullptr;
        for (const auto& r : fa.roots) {
            if (!near || std::abs(w - r.z) < std::abs(w - near->z)) near = &r;
        }
        if (!near || near->multiplicity != m) return std::nullopt;
        Complex h = fa.lead;
        for (const auto& r : fa.roots) {
            if (&r == near) continue;
            for (int k = 0; k < r.multiplicity; ++k) h *= near->z - r.z;
        }
        Complex c = fa.pole(near->z);
        if (c == Complex(0.0) || h == Complex(0.0)) return std::nullopt;
        h /= c;
        Complex base = std::pow(want / h, 1.0 / m);
        double size = std::abs(base);
        if (!(size > 0.0) || !std::isfinite(size)) return std::nullopt;
        std::vector<Complex> out;
        for (int k = 0; k < m; ++k) {
            Complex guess = near->z + base * std::polar(1.0, 2.0 * std::numbers::pi * k / m);
            auto got = solve_gap(guess, p, want, 0.3 * size);
            if (!got) return std::nullopt;
            out.push_back(*got);
        }
        return out;
    }

private:
    struct Factor {
        Complex lead = 1.0;
        std::vector<Root> roots;
        Polynomial pole;
    };
    std::array<Factor, 3> factors_;
    bool valid_ = true;
};

/// A rational map prepared for root tracking: the four chart versions
/// (w or 1/w in the source, value or 1/value in the target), and for maps
/// into the lambda sphere, accurate gaps to the punctures.
class ChartedMap {
public:
    ChartedMap() = default;
    explicit ChartedMap(RationalMap f)
        : f_(std::move(f)), f_rev_(f_.source_reversed()), f_inv_(swap(f_)), f_rev_inv_(swap(f_rev_)),
          near_(f_), far_(f_rev_) {}

    const RationalMap& map() const { return f_; }

    SpherePoint operator()(const SpherePoint& w) const { return f_(w); }

    /// F(w) with 1 - F(w). Near the puncture 0, 1 or infinity the value is
    /// rebuilt from the product form of its gap.
    Modulus modulus(const SpherePoint& w) const {
        SpherePoint v = f_(w);
        int p = nearest_puncture(v);
        if (p >= 0) {
            if (auto g = gap(w, p)) {
                Complex e = g->first;
                if (p == 0) return {e, 1.0 - e};
                if (p == 1) return {1.0 + e, -e};
                if (e != Complex(0.0)) return {1.0 / e, 1.0 - 1.0 / e};
            }
        }
        if (v.is_infinite()) return {Complex(std::numeric_limits<double>::infinity()), Complex(0.0)};
        return Modulus::of(v.value());
    }

    /// Solutions of F(w) = target. When the target is near a puncture, the
    /// expanded polynomial blurs the solutions near a multiple preimage of
    /// the puncture into one cluster; those are split by the local model and
    /// every solution is refined on the product form of the gap.
    std::vector<SphereRoot> level_set(const Modulus& target, const RootOptions& opt = {}) const {
        const SpherePoint t = point_of(target);
        std::vector<SphereRoot> roots = solve_level(f_, t, opt);
        const int p = nearest_puncture(t);
        if (p < 0) return roots;
        const Complex want = p == 0 ? target.value : p == 1 ? -target.one_minus : 1.0 / target.value;
        if (want == Complex(0.0)) return roots;
        std::vector<SphereRoot> out;
        for (const auto& r : roots) {
            const bool inner = !r.point.is_infinite() && std::abs(r.point.value()) <= kChartSwitch;
            const PunctureFactors& pf = inner ? near_ : far_;
            const Complex u = inner ? r.point.value() : r.point.is_infinite() ? Complex(0.0) : 1.0 / r.point.value();
            auto back = [&](Complex v) {
                if (inner) return SpherePoint(v);
                return v == Complex(0.0) ? SpherePoint::infinity() : SpherePoint(1.0 / v);
            };
            if (!pf.valid()) {
                out.push_back(r);
            } else if (r.multiplicity == 1) {
                auto got = pf.solve_gap(u, p, want, 0.25 * pf.preimage_distance(u, p));
                out.push_back({got ? back(*got) : r.point, 1});
            } else if (auto parts = pf.split(u, r.multiplicity, p, want)) {
                for (Complex v : *parts) out.push_back({back(v), 1});
            } else {
                out.push_back(r);
            }
        }
        return out;
    }

    static Modulus modulus_of(const SpherePoint& p) {
        if (p.is_infinite()) return {Complex(std::numeric_limits<double>::infinity()), Complex(0.0)};
        return Modulus::of(p.value());
    }

    static SpherePoint point_of(const Modulus& m) {
        return std::isfinite(std::abs(m.value)) ? SpherePoint(m.value) : SpherePoint::infinity();
    }

    /// First-order prediction of the solution of F(w) = target near w, given
    /// the current value F(w) = current. Falls back to w itself where the
    /// linearization is singular.
    SpherePoint predict(const SpherePoint& w, const SpherePoint& current, const SpherePoint& target) const {
        bool w_inner = !w.is_infinite() && std::abs(w.value()) <= 1.0;
        bool v_inner = !current.is_infinite() && std::abs(current.value()) <= 1.0;
        const RationalMap& g = w_inner ? (v_inner ? f_ : f_inv_) : (v_inner ? f_rev_ : f_rev_inv_);
        Complex cw = w_inner ? w.value() : (w.is_infinite() ? Complex(0.0) : 1.0 / w.value());
        SpherePoint vc = v_inner ? current : current.reciprocal();
        SpherePoint vt = v_inner ? target : target.reciprocal();
        if (vc.is_infinite() || vt.is_infinite()) return w;
        SpherePoint gv = g(SpherePoint(cw));
        if (gv.is_infinite()) return w;
        Complex d = g.derivative(cw);
        Complex next = cw + (vt.value() - vc.value()) / d;
        if (!std::isfinite(next.real()) || !std::isfinite(next.imag())) return w;
        if (w_inner) return SpherePoint(next);
        return SpherePoint(next).reciprocal();
    }

private:
    static RationalMap swap(const RationalMap& f) { return RationalMap(f.den(), f.num(), 0.0); }

    /// The product forms use w up to this modulus and 1/w beyond, where they
    /// are only needed for preimages at infinity. Inverting near the unit
    /// circle would round away the distance to a preimage there.
    static constexpr double kChartSwitch = 1e4;

    /// Index of the target puncture within chordal distance 1e-3 of v, or -1.
    static int nearest_puncture(const SpherePoint& v) {
        const std::array<SpherePoint, 3> punctures{SpherePoint(0.0), SpherePoint(1.0), SpherePoint::infinity()};
        for (int p = 0; p < 3; ++p) {
            if (chordal_distance(v, punctures[p]) < 1e-3) return p;
        }
        return -1;
    }

    std::optional<std::pair<Complex, Complex>> gap(const SpherePoint& w, int p) const {
        if (w.is_infinite()) return far_.valid() ? far_.gap(0.0, p) : std::nullopt;
        Complex z = w.value();
        if (std::abs(z) <= kChartSwitch) return near_.valid() ? near_.gap(z, p) : std::nullopt;
        return far_.valid() ? far_.gap(1.0 / z, p) : std::nullopt;
    }

    RationalMap f_, f_rev_, f_inv_, f_rev_inv_;
    PunctureFactors near_, far_;
};

struct FixedPointCandidate {
    SpherePoint w;
    SpherePoint y;
};

class Correspondence {
public:
    Correspondence(RationalMap x, RationalMap y, ModuliNormalizer normalizer)
        : x_(std::move(x)), y_(std::move(y)), n_(std::move(normalizer)) {
        if (y_.degree() < 1) throw Error(Errc::DegenerateCorrespondence, "Y must be nonconstant");
        if (x_.degree() < 1) throw Error(Errc::DegenerateCorrespondence, "X must be nonconstant");
        xl_ = ChartedMap(x_.compose_left(n_.to_lambda()));
        yl_ = ChartedMap(y_.compose_left(n_.to_lambda()));
    }

    const RationalMap& X() const { return x_; }
    const RationalMap& Y() const { return y_; }
    const ModuliNormalizer& normalizer() const { return n_; }

    /// X and Y composed with the moduli-to-lambda change of coordinates, so
    /// Y_lambda(omega(tau)) = lambda(tau) and X_lambda(omega(tau)) = lambda(sigma(tau)).
    const ChartedMap& X_lambda() const { return xl_; }
    const ChartedMap& Y_lambda() const { return yl_; }

private:
    RationalMap x_, y_;
    ModuliNormalizer n_;
    ChartedMap xl_, yl_;
};

namespace detail {

inline bool sphere_less(const SpherePoint& a, const SpherePoint& b) {
    if (a.is_infinite() != b.is_infinite()) return b.is_infinite();
    if (a.is_infinite()) return false;
    if (a.value().real() != b.value().real()) return a.value().real() < b.value().real();
    return a.value().imag() < b.value().imag();
}

}  // namespace detail

/// All sphere solutions w of X(w) = Y(w) whose common value y avoids the
/// punctures, sorted by w (infinity last). The solutions are the roots of
/// X_num Y_den - Y_num X_den, plus infinity for the homogeneous degree
/// shortfall.
inline std::vector<FixedPointCandidate> fixed_point_candidates(const Correspondence& c, double puncture_tol = 1e-9,
                                                               const RootOptions& opt = {}) {
    const auto& x = c.X();
    const auto& y = c.Y();
    Polynomial cross = x.num() * y.den() - y.num() * x.den();
    double s = std::max(x.num().scale(), x.den().scale()) * std::max(y.num().scale(), y.den().scale());
    std::vector<Complex> cc = cross.coefficients();
    while (!cc.empty() && std::abs(cc.back()) <= 1e-14 * s) cc.pop_back();
    cross = Polynomial(std::move(cc));
    if (cross.is_zero()) {
        throw Error(Errc::DegenerateCorrespondence, "X - Y vanishes identically");
    }
    std::vector<SpherePoint> ws;
    if (cross.degree() >= 1) {
        for (const auto& r : all_roots(cross, opt)) ws.push_back(SpherePoint(r.z));
    }
    if (cross.degree() < x.degree() + y.degree()) ws.push_back(SpherePoint::infinity());

    std::vector<FixedPointCandidate> out;
    for (const auto& w : ws) {
        SpherePoint yv = y(w);
        if (c.normalizer().is_puncture(yv, puncture_tol)) continue;
        out.push_back({w, yv});
    }
    std::sort(out.begin(), out.end(),
              [](const FixedPointCandidate& a, const FixedPointCandidate& b) { return detail::sphere_less(a.w, b.w); });
    return out;
}

/// g = Y o X^-1 when X is a Moebius transformation; empty otherwise.
inline std::optional<RationalMap> moduli_map_if_injective(const Correspondence& c) {
    const auto& x = c.X();
    if (x.degree() != 1) return std::nullopt;
    ComplexMoebius m(x.num()[1], x.num()[0], x.den()[1], x.den()[0]);
    return c.Y().compose_right(m.inverse());
}

}  // namespace thurston
