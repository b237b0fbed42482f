#pragma once

// The modular lambda function and the normalized covering map from the upper
// half-plane onto the thrice-punctured sphere.
//
// lambda(tau) = (theta2 / theta3)^4 with nome q = exp(i pi tau). The standard
// cover used for moduli is  pi_std = 1 - 1/lambda,  which sends the cusps
// 0, 1, infinity to the punctures 0, 1, infinity and the base tile onto the
// upper half-plane. A ModuliNormalizer post-composes with the Moebius map
// taking 0, 1, infinity to the configured puncture triple.

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>

#include "thurston/error.hpp"
#include "thurston/moebius.hpp"
#include "thurston/slope.hpp"
#include "thurston/sphere.hpp"

namespace thurston {

struct LambdaValue {
    Complex value;
    Complex derivative;
    /// 1 - value, evaluated without cancellation when value is near 1.
    Complex one_minus;
};

/// A point of the lambda sphere given together with 1 - x, so that points
/// near the puncture 1 keep their distance to it.
struct Modulus {
    Complex value;
    Complex one_minus;

    static Modulus of(Complex x) { return {x, 1.0 - x}; }
};

namespace detail {

/// theta2^4 and theta3^4 at nome q = exp(i pi tau), assuming |q| is small.
inline std::pair<Complex, Complex> theta_fourth_powers(Complex tau) {
    const double pi = std::numbers::pi;
    const Complex ipi(0.0, pi);
    Complex q = std::exp(ipi * tau);
    // theta3 = 1 + 2 sum q^(n^2)
    Complex t3 = 1.0;
    for (int n = 1; n < 200; ++n) {
        Complex term = std::exp(ipi * tau * static_cast<double>(n * n));
        if (std::abs(term) < 1e-17) break;
        t3 += 2.0 * term;
    }
    // theta2 = 2 q^(1/4) sum q^(n(n+1)), so theta2^4 = 16 q (sum)^4
    Complex s = 1.0;
    for (int n = 1; n < 200; ++n) {
        Complex term = std::exp(ipi * tau * static_cast<double>(n * (n + 1)));
        if (std::abs(term) < 1e-17) break;
        s += term;
    }
    Complex s2 = s * s;
    Complex t3_2 = t3 * t3;
    return {16.0 * q * s2 * s2, t3_2 * t3_2};
}

/// Integer 2x2 matrix with small entries, used for the six anharmonic maps
/// relating lambda values over one PSL(2, Z) orbit.
struct Anharmonic {
    double a = 1, b = 0, c = 0, d = 1;
    Anharmonic then(double a2, double b2, double c2, double d2) const {
        return {a * a2 + b * c2, a * b2 + b * d2, c * a2 + d * c2, c * b2 + d * d2};
    }
};

}  // namespace detail

/// lambda(tau) together with d lambda / d tau. The point is first moved into
/// the level-2 region by reduce_for_series and then into the PSL(2, Z)
/// domain {|Re| <= 1/2, |tau| >= 1}, where |q| <= exp(-pi sqrt(3)/2). The
/// second reduction is undone by the anharmonic identities
/// lambda(tau + 1) = lambda / (lambda - 1) and lambda(-1/tau) = 1 - lambda.
inline LambdaValue lambda_with_derivative(Complex tau) {
    auto [t2, deck] = reduce_for_series(tau);
    // d(M tau)/d tau for the deck move.
    Complex chain = [&] {
        const auto& m = deck.matrix();
        Complex den = m.c().convert_to<double>() * tau + m.d().convert_to<double>();
        return 1.0 / (den * den);
    }();

    detail::Anharmonic h;
    Complex z = t2;
    for (int step = 0; step < 64; ++step) {
        double shift = std::round(z.real());
        if (shift != 0.0) {
            z -= shift;
            if (std::fmod(std::abs(shift), 2.0) == 1.0) h = h.then(1, 0, 1, -1);
            continue;
        }
        if (std::norm(z) < 1.0 - 1e-15) {
            chain *= 1.0 / (z * z);
            z = -1.0 / z;
            h = h.then(-1, 1, 0, 1);
            continue;
        }
        break;
    }

    auto [t2_4, t3_4] = detail::theta_fourth_powers(z);
    Complex lf = t2_4 / t3_4;
    Complex dlf = Complex(0.0, std::numbers::pi) * lf * (1.0 - lf) * t3_4;
    Complex num = h.a * lf + h.b;
    Complex den = h.c * lf + h.d;
    Complex value = num / den;
    double det = h.a * h.d - h.b * h.c;
    Complex dh = det / (den * den);
    Complex one_minus = ((h.c - h.a) * lf + (h.d - h.b)) / den;
    return {value, dh * dlf * chain, one_minus};
}

inline Complex lambda_std(Complex tau) { return lambda_with_derivative(tau).value; }

inline Complex lambda_derivative(Complex tau) { return lambda_with_derivative(tau).derivative; }

/// Modulus of the nearest puncture in the chordal metric.
inline double puncture_distance(Complex m) {
    SpherePoint p(m);
    return std::min({chordal_distance(p, SpherePoint(0.0)), chordal_distance(p, SpherePoint(1.0)),
                     chordal_distance(p, SpherePoint::infinity())});
}

struct LiftOptions {
    double tol = 1e-13;
    int max_iter = 60;
    /// Largest allowed hyperbolic distance between the guess and the result.
    double max_move = std::numeric_limits<double>::infinity();
};

namespace detail {

/// Newton residual for lambda(tau) = x. Near a puncture the residual is taken
/// in logarithmic form, which keeps quadratic convergence when lambda or
/// 1 - lambda is small or large.
class LiftResidual {
public:
    explicit LiftResidual(const Modulus& x) : x_(x) {
        if (std::abs(x.value) < 0.5 || std::abs(x.value) > 2.0) form_ = Form::LogLambda;
        else if (std::abs(x.one_minus) < 0.5) form_ = Form::LogOneMinus;
    }

    std::pair<Complex, Complex> operator()(const LambdaValue& lv) const {
        switch (form_) {
            case Form::LogLambda: return {std::log(lv.value / x_.value), lv.derivative / lv.value};
            case Form::LogOneMinus:
                return {std::log(lv.one_minus / x_.one_minus), -lv.derivative / lv.one_minus};
            case Form::Plain: break;
        }
        return {lv.value - x_.value, lv.derivative};
    }

    bool plain() const { return form_ == Form::Plain; }

private:
    enum class Form { Plain, LogLambda, LogOneMinus };
    Modulus x_;
    Form form_ = Form::Plain;
};

/// One damped Newton step; stays in the upper half-plane and moves at most
/// hyperbolic distance 2.
inline std::optional<Complex> lift_step(const LiftResidual& res, Complex tau, const LambdaValue& lv) {
    auto [f, df] = res(lv);
    if (df == Complex(0.0) || !std::isfinite(std::abs(f / df))) return std::nullopt;
    Complex step = f / df;
    Complex next = tau - step;
    for (int damp = 0; damp < 30 && (!(next.imag() > 0.0) || hyperbolic_distance(next, tau) > 2.0); ++damp) {
        step *= 0.5;
        next = tau - step;
    }
    if (!(next.imag() > 0.0)) return std::nullopt;
    return next;
}

}  // namespace detail

/// The first-order (single Newton step) prediction of the lift of x near tau.
inline Complex lift_predict(const Modulus& x, Complex tau) {
    detail::LiftResidual res(x);
    auto next = detail::lift_step(res, tau, lambda_with_derivative(tau));
    return next ? *next : tau;
}

inline Complex lift_predict(Complex x, Complex tau) { return lift_predict(Modulus::of(x), tau); }

/// Newton's method for lambda(tau) = x starting at guess.
inline Complex lift_near(const Modulus& target, Complex guess, const LiftOptions& opt = {}) {
    if (!(guess.imag() > 0.0)) throw Error(Errc::LiftFailed, "lift guess is not in the upper half-plane");
    const Complex x = target.value;
    if (puncture_distance(x) < 1e-300 || target.one_minus == Complex(0.0)) {
        throw Error(Errc::NearPuncture, "lift target is a puncture");
    }
    detail::LiftResidual res(target);
    // Near a puncture only the logarithmic residual measures the distance.
    auto accurate = [&](Complex value) {
        return res.plain() && std::abs(value - x) <= opt.tol * std::max(1.0, std::abs(x));
    };

    Complex tau = guess;
    LambdaValue lv = lambda_with_derivative(tau);
    for (int iter = 0; iter <= opt.max_iter; ++iter) {
        if (accurate(lv.value) || std::abs(res(lv).first) <= 0.25 * opt.tol) {
            if (hyperbolic_distance(tau, guess) > opt.max_move) {
                throw PathError(Errc::LiftFailed, "lift moved farther than its step bound", guess);
            }
            return tau;
        }
        auto next = detail::lift_step(res, tau, lv);
        if (!next) break;
        // Deep in a cusp lambda is too ill-conditioned for the residual test;
        // a Newton correction at roundoff size in tau settles it instead.
        double moved = std::abs(*next - tau);
        tau = *next;
        lv = lambda_with_derivative(tau);
        if (moved <= std::max(4.0 * std::numeric_limits<double>::epsilon() * std::abs(tau), 1e-13 * tau.imag())) {
            if (hyperbolic_distance(tau, guess) > opt.max_move) {
                throw PathError(Errc::LiftFailed, "lift moved farther than its step bound", guess);
            }
            return tau;
        }
    }
    throw PathError(Errc::LiftFailed, "Newton lift did not converge", guess);
}

inline Complex lift_near(Complex x, Complex guess, const LiftOptions& opt = {}) {
    return lift_near(Modulus::of(x), guess, opt);
}

namespace detail {

inline Complex agm(Complex a, Complex b) {
    for (int i = 0; i < 100; ++i) {
        if (std::abs(a - b) <= 4e-16 * std::abs(a)) return a;
        Complex a1 = 0.5 * (a + b);
        Complex b1 = std::sqrt(a * b);
        Complex r = b1 / a1;
        if (r.real() < 0.0 || (r.real() == 0.0 && r.imag() < 0.0)) b1 = -b1;
        if (a1 == a && b1 == b) return a;
        a = a1;
        b = b1;
    }
    throw Error(Errc::InverseFailed, "complex AGM did not converge");
}

/// Coset representatives of Gamma(2) in PSL(2, Z): 1, T, S, TS, ST, TST.
inline std::array<IntMoebius, 6> gamma2_cosets() {
    IntMoebius t(1, 1, 0, 1), s(0, -1, 1, 0);
    return {IntMoebius::identity(), t, s, t * s, s * t, t * s * t};
}

}  // namespace detail

/// A point tau of the level-2 region {|Re| <= 1, |2 tau -+ 1| >= 1} (the base
/// tile and its mirror image across the imaginary axis) with lambda(tau) = m.
/// The period ratio from the complex AGM supplies the first guess; a wrong
/// AGM branch is repaired by trying the six PSL(2, Z) cosets, and Newton
/// polishes the result.
inline Complex lambda_inverse_principal(Complex m, double tol = 1e-12) {
    if (puncture_distance(m) <= tol) throw Error(Errc::NearPuncture, "modulus is within tolerance of a puncture");
    Complex a1 = detail::agm(1.0, std::sqrt(1.0 - m));
    Complex a2 = detail::agm(1.0, std::sqrt(m));
    Complex tau0 = Complex(0.0, 1.0) * a1 / a2;

    auto chordal = [&](Complex v) { return chordal_distance(SpherePoint(v), SpherePoint(m)); };
    Complex best(0.0, 1.0);
    double best_err = std::numeric_limits<double>::infinity();
    for (Complex seed : {tau0, Complex(0.0, 1.0), Complex(0.5, std::sqrt(3.0) / 2.0)}) {
        if (!(seed.imag() > 0.0)) continue;
        for (const auto& g : detail::gamma2_cosets()) {
            Complex t = g.apply(seed);
            double e = chordal(lambda_std(t));
            if (e < best_err) {
                best_err = e;
                best = t;
            }
        }
        if (best_err < 1e-6) break;
    }
    best = reduce_for_series(best).first;
    LiftOptions lo;
    lo.tol = std::min(tol, 1e-13);
    try {
        Complex tau = lift_near(m, best, lo);
        return reduce_for_series(tau).first;
    } catch (const Error&) {
        throw Error(Errc::InverseFailed, "lambda inverse did not converge");
    }
}

/// The Moebius normalization of the moduli space: M_Theta sends 0, 1,
/// infinity to (theta0, theta1, theta_inf), and the cover is
/// pi = M_Theta o pi_std with pi_std = 1 - 1/lambda.
class ModuliNormalizer {
public:
    ModuliNormalizer()
        : ModuliNormalizer({SpherePoint(0.0), SpherePoint(1.0), SpherePoint::infinity()}) {}

    explicit ModuliNormalizer(std::array<SpherePoint, 3> theta)
        : theta_(theta), m_(ComplexMoebius::from_triple(theta[0], theta[1], theta[2])) {
        // pi_std(l) = (l - 1) / l
        ComplexMoebius k(1.0, -1.0, 1.0, 0.0);
        from_lambda_ = m_ * k;
        to_lambda_ = from_lambda_.inverse();
    }

    const std::array<SpherePoint, 3>& theta() const { return theta_; }
    const ComplexMoebius& moebius() const { return m_; }

    /// Lambda coordinate to moduli coordinate and back.
    const ComplexMoebius& from_lambda() const { return from_lambda_; }
    const ComplexMoebius& to_lambda() const { return to_lambda_; }

    /// The puncture attached to a cusp class.
    const SpherePoint& puncture(CuspClass c) const {
        switch (c) {
            case CuspClass::Zero: return theta_[0];
            case CuspClass::One: return theta_[1];
            case CuspClass::Infinity: return theta_[2];
        }
        return theta_[2];
    }

    /// Lambda value of the puncture of a cusp class: class infinity sits at
    /// lambda = 0, class 0 at lambda = 1, class 1 at lambda = infinity.
    static SpherePoint lambda_puncture(CuspClass c) {
        switch (c) {
            case CuspClass::Zero: return SpherePoint(1.0);
            case CuspClass::One: return SpherePoint::infinity();
            case CuspClass::Infinity: return SpherePoint(0.0);
        }
        return SpherePoint(0.0);
    }

    /// Smallest chordal distance from y to a puncture.
    double distance_to_punctures(const SpherePoint& y) const {
        return std::min({chordal_distance(y, theta_[0]), chordal_distance(y, theta_[1]),
                         chordal_distance(y, theta_[2])});
    }

    bool is_puncture(const SpherePoint& y, double tol) const { return distance_to_punctures(y) <= tol; }

private:
    std::array<SpherePoint, 3> theta_;
    ComplexMoebius m_;
    ComplexMoebius from_lambda_;
    ComplexMoebius to_lambda_;
};

/// Textual record of the cusp-to-puncture assignment, stated in reports.
inline constexpr const char* kNormalizationNote =
    "pi = M_Theta o (1 - 1/lambda), lambda(tau) = (theta2/theta3)^4 with q = exp(i pi tau); "
    "cusp classes map to punctures as 0 -> theta0, 1 -> theta1, inf -> theta_inf";

inline SpherePoint pi_map(const ModuliNormalizer& n, Complex tau) {
    return n.from_lambda()(SpherePoint(lambda_std(tau)));
}

/// Lifts the moduli point y: near guess when one is given, otherwise into the
/// level-2 region around the base tile.
inline Complex pi_inverse_branch(const ModuliNormalizer& n, const SpherePoint& y, const Complex* guess = nullptr,
                                 double tol = 1e-12) {
    SpherePoint l = n.to_lambda()(y);
    if (l.is_infinite() || puncture_distance(l.value()) <= tol) {
        throw Error(Errc::NearPuncture, "moduli point is within tolerance of a puncture");
    }
    if (guess) {
        LiftOptions lo;
        lo.tol = std::min(tol, 1e-13);
        return lift_near(l.value(), *guess, lo);
    }
    return lambda_inverse_principal(l.value(), tol);
}

}  // namespace thurston
