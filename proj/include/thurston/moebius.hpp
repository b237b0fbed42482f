#pragma once

// Integer Moebius transformations, the level-2 congruence subgroup (the deck
// group of the lambda cover), and cusp geometry helpers.

#include <cmath>
#include <complex>
#include <ostream>
#include <string>
#include <vector>

#include "thurston/error.hpp"
#include "thurston/slope.hpp"
#include "thurston/sphere.hpp"

namespace thurston {

/// An element of PSL(2, Z). Stored as the representative with c > 0, or
/// c = 0 and d > 0.
class IntMoebius {
public:
    IntMoebius() : a_(1), b_(0), c_(0), d_(1) {}

    IntMoebius(Integer a, Integer b, Integer c, Integer d)
        : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
        if (a_ * d_ - b_ * c_ != 1) {
            throw Error(Errc::InvalidMatrix, "integer Moebius map must have determinant 1");
        }
        if (c_ < 0 || (c_ == 0 && d_ < 0)) {
            a_ = -a_;
            b_ = -b_;
            c_ = -c_;
            d_ = -d_;
        }
    }

    static IntMoebius identity() { return {}; }

    /// The map sending infinity to `first` and 0 to `second`; the slopes must be
    /// Farey neighbours with p1 q2 - q1 p2 = +-1 (the sign picks the
    /// orientation-preserving pairing).
    static IntMoebius from_columns(const Slope& first, const Slope& second) {
        Integer det = farey_determinant(first, second);
        if (det == 1) return IntMoebius(first.p(), second.p(), first.q(), second.q());
        if (det == -1) return IntMoebius(first.p(), -second.p(), first.q(), -second.q());
        throw Error(Errc::InvalidPair, "columns must be Farey neighbours");
    }

    const Integer& a() const { return a_; }
    const Integer& b() const { return b_; }
    const Integer& c() const { return c_; }
    const Integer& d() const { return d_; }

    IntMoebius inverse() const { return IntMoebius(d_, -b_, -c_, a_); }

    friend IntMoebius operator*(const IntMoebius& f, const IntMoebius& g) {
        return IntMoebius(f.a_ * g.a_ + f.b_ * g.c_, f.a_ * g.b_ + f.b_ * g.d_, f.c_ * g.a_ + f.d_ * g.c_,
                          f.c_ * g.b_ + f.d_ * g.d_);
    }

    friend bool operator==(const IntMoebius&, const IntMoebius&) = default;

    SpherePoint apply(const SpherePoint& p) const { return to_complex()(p); }

    Complex apply(Complex tau) const {
        Complex num = a_.convert_to<double>() * tau + b_.convert_to<double>();
        Complex den = c_.convert_to<double>() * tau + d_.convert_to<double>();
        return num / den;
    }

    Slope apply(const Slope& s) const { return Slope::normalize(a_ * s.p() + b_ * s.q(), c_ * s.p() + d_ * s.q()); }

    /// |c tau + d|^-2, the derivative modulus; also Im(M tau) / Im(tau).
    double derivative_modulus(Complex tau) const {
        Complex den = c_.convert_to<double>() * tau + d_.convert_to<double>();
        return 1.0 / std::norm(den);
    }

    ComplexMoebius to_complex() const {
        return ComplexMoebius(a_.convert_to<double>(), b_.convert_to<double>(), c_.convert_to<double>(),
                              d_.convert_to<double>());
    }

    std::string to_string() const {
        return "(" + a_.str() + " " + b_.str() + "; " + c_.str() + " " + d_.str() + ")";
    }

    friend std::ostream& operator<<(std::ostream& os, const IntMoebius& m) { return os << m.to_string(); }

private:
    Integer a_, b_, c_, d_;
};

/// Membership in the level-2 congruence subgroup: M = identity mod 2.
inline bool in_gamma2(const IntMoebius& m) {
    return bit_test(abs(m.a()), 0) && bit_test(abs(m.d()), 0) && !bit_test(abs(m.b()), 0) &&
           !bit_test(abs(m.c()), 0);
}

/// Generators of the deck group: A(z) = z + 2 and B(z) = z / (-2z + 1).
enum class Letter { A, AInv, B, BInv };

inline Letter inverse(Letter l) {
    switch (l) {
        case Letter::A: return Letter::AInv;
        case Letter::AInv: return Letter::A;
        case Letter::B: return Letter::BInv;
        case Letter::BInv: return Letter::B;
    }
    return l;
}

inline IntMoebius generator(Letter l) {
    switch (l) {
        case Letter::A: return IntMoebius(1, 2, 0, 1);
        case Letter::AInv: return IntMoebius(1, -2, 0, 1);
        case Letter::B: return IntMoebius(1, 0, -2, 1);
        case Letter::BInv: return IntMoebius(1, 0, 2, 1);
    }
    return {};
}

/// A deck transformation with its freely reduced word in A, B.
class DeckElement {
public:
    DeckElement() = default;

    /// Builds the element for `word`, freely reducing the word first.
    explicit DeckElement(const std::vector<Letter>& word) {
        for (Letter l : word) push_back(l);
    }

    /// Right-multiplies by a generator (this * l).
    void push_back(Letter l) {
        if (!word_.empty() && word_.back() == inverse(l)) {
            word_.pop_back();
        } else {
            word_.push_back(l);
        }
        matrix_ = matrix_ * generator(l);
    }

    /// Left-multiplies by a generator (l * this).
    void push_front(Letter l) {
        if (!word_.empty() && word_.front() == inverse(l)) {
            word_.erase(word_.begin());
        } else {
            word_.insert(word_.begin(), l);
        }
        matrix_ = generator(l) * matrix_;
    }

    const IntMoebius& matrix() const { return matrix_; }
    const std::vector<Letter>& word() const { return word_; }

    std::string word_string() const {
        std::string s;
        for (Letter l : word_) {
            switch (l) {
                case Letter::A: s += "A"; break;
                case Letter::AInv: s += "a"; break;
                case Letter::B: s += "B"; break;
                case Letter::BInv: s += "b"; break;
            }
        }
        return s.empty() ? "1" : s;
    }

private:
    IntMoebius matrix_;
    std::vector<Letter> word_;
};

/// Im(tau) / |q tau - p|^2 for s = p/q, and Im(tau) for s = infinity.
inline double horoball_depth(Complex tau, const Slope& s) {
    if (s.is_infinite()) return tau.imag();
    Complex w = s.q().convert_to<double>() * tau - s.p().convert_to<double>();
    return tau.imag() / std::norm(w);
}

/// Moves tau into {|Re| <= 1, |2 tau - 1| >= 1, |2 tau + 1| >= 1} by a deck
/// transformation, alternating translations by powers of A with single B or
/// B^-1 steps. Returns (M tau, M).
inline std::pair<Complex, DeckElement> reduce_for_series(Complex tau, int max_steps = 10000) {
    if (!(tau.imag() > 0.0)) throw Error(Errc::ReductionFailed, "point is not in the upper half-plane");
    DeckElement m;
    for (int step = 0; step < max_steps; ++step) {
        double shift = std::round(tau.real() / 2.0);
        if (std::abs(tau.real()) > 1.0 && shift != 0.0) {
            tau -= 2.0 * shift;
            long long n = static_cast<long long>(shift);
            for (long long k = 0; k < std::llabs(n); ++k) m.push_front(n > 0 ? Letter::AInv : Letter::A);
            continue;
        }
        if (std::abs(2.0 * tau - 1.0) < 1.0) {
            tau = tau / (-2.0 * tau + 1.0);
            m.push_front(Letter::B);
            continue;
        }
        if (std::abs(2.0 * tau + 1.0) < 1.0) {
            tau = tau / (2.0 * tau + 1.0);
            m.push_front(Letter::BInv);
            continue;
        }
        return {tau, m};
    }
    throw Error(Errc::ReductionFailed, "reduction did not terminate");
}

/// Hyperbolic distance in the upper half-plane (curvature -1), in the form
/// 2 asinh(|z - w| / (2 sqrt(Im z Im w))), which stays accurate for nearby points.
inline double hyperbolic_distance(Complex z, Complex w) {
    return 2.0 * std::asinh(std::abs(z - w) / (2.0 * std::sqrt(z.imag() * w.imag())));
}

}  // namespace thurston
