#pragma once

// Dense complex polynomials and a simultaneous (Aberth-Ehrlich) root finder.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "thurston/error.hpp"
#include "thurston/sphere.hpp"

namespace thurston {

/// Coefficients in ascending degree. Exact trailing zeros are trimmed, so the
/// zero polynomial has no coefficients and degree -1.
class Polynomial {
public:
    Polynomial() = default;
    Polynomial(std::vector<Complex> coeffs) : c_(std::move(coeffs)) { trim_exact(); }
    Polynomial(std::initializer_list<Complex> coeffs) : c_(coeffs) { trim_exact(); }

    static Polynomial constant(Complex a) { return Polynomial(std::vector<Complex>{a}); }

    static Polynomial monomial(int n, Complex a = 1.0) {
        std::vector<Complex> c(n + 1, 0.0);
        c[n] = a;
        return Polynomial(std::move(c));
    }

    /// lead * prod (z - r).
    static Polynomial from_roots(const std::vector<Complex>& roots, Complex lead = 1.0) {
        Polynomial p = constant(lead);
        for (Complex r : roots) p = p * Polynomial{-r, 1.0};
        return p;
    }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<Complex>& coefficients() const { return c_; }

    Complex operator[](int k) const { return k >= 0 && k < static_cast<int>(c_.size()) ? c_[k] : Complex(0.0); }
    Complex leading() const { return c_.empty() ? Complex(0.0) : c_.back(); }

    Complex operator()(Complex z) const {
        Complex acc = 0.0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
        return acc;
    }

    /// Evaluates the value and the first derivative together.
    std::pair<Complex, Complex> eval_with_derivative(Complex z) const {
        Complex p = 0.0, dp = 0.0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
            dp = dp * z + p;
            p = p * z + *it;
        }
        return {p, dp};
    }

    /// sum |c_k| |z|^k, the natural scale for the rounding error of P(z).
    double magnitude_at(Complex z) const {
        double r = std::abs(z), acc = 0.0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * r + std::abs(*it);
        return acc;
    }

    Polynomial derivative() const {
        if (c_.size() <= 1) return {};
        std::vector<Complex> d(c_.size() - 1);
        for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
        return Polynomial(std::move(d));
    }

    /// z^n P(1/z) for n >= degree.
    Polynomial reversed(int n) const {
        std::vector<Complex> r(n + 1, 0.0);
        for (int k = 0; k <= degree(); ++k) r[n - k] = c_[k];
        return Polynomial(std::move(r));
    }

    /// sum_k c_k (a z + b)^k (c z + d)^(n - k), i.e. (cz+d)^n P((az+b)/(cz+d)).
    Polynomial substitute_moebius(int n, Complex a, Complex b, Complex c, Complex d) const {
        Polynomial out;
        Polynomial lin_num{b, a};
        Polynomial lin_den{d, c};
        std::vector<Polynomial> num_pow{constant(1.0)}, den_pow{constant(1.0)};
        for (int k = 1; k <= n; ++k) {
            num_pow.push_back(num_pow.back() * lin_num);
            den_pow.push_back(den_pow.back() * lin_den);
        }
        for (int k = 0; k <= degree(); ++k) out = out + (num_pow[k] * den_pow[n - k]) * c_[k];
        return out;
    }

    /// Max coefficient modulus.
    double scale() const {
        double s = 0.0;
        for (Complex a : c_) s = std::max(s, std::abs(a));
        return s;
    }

    /// Drops leading coefficients below rel * scale().
    Polynomial trimmed(double rel) const {
        double cut = rel * scale();
        std::vector<Complex> c = c_;
        while (!c.empty() && std::abs(c.back()) <= cut) c.pop_back();
        return Polynomial(std::move(c));
    }

    friend Polynomial operator+(const Polynomial& p, const Polynomial& q) {
        std::vector<Complex> c(std::max(p.c_.size(), q.c_.size()), 0.0);
        for (std::size_t k = 0; k < c.size(); ++k) c[k] = p[static_cast<int>(k)] + q[static_cast<int>(k)];
        return Polynomial(std::move(c));
    }

    friend Polynomial operator-(const Polynomial& p, const Polynomial& q) { return p + q * Complex(-1.0); }

    friend Polynomial operator*(const Polynomial& p, const Polynomial& q) {
        if (p.is_zero() || q.is_zero()) return {};
        std::vector<Complex> c(p.c_.size() + q.c_.size() - 1, 0.0);
        for (std::size_t i = 0; i < p.c_.size(); ++i) {
            for (std::size_t j = 0; j < q.c_.size(); ++j) c[i + j] += p.c_[i] * q.c_[j];
        }
        return Polynomial(std::move(c));
    }

    friend Polynomial operator*(const Polynomial& p, Complex s) {
        std::vector<Complex> c = p.c_;
        for (auto& a : c) a *= s;
        return Polynomial(std::move(c));
    }

private:
    void trim_exact() {
        while (!c_.empty() && c_.back() == Complex(0.0)) c_.pop_back();
    }

    std::vector<Complex> c_;
};

struct Root {
    Complex z;
    int multiplicity = 1;
};

struct RootOptions {
    double tol = 1e-12;
    int max_iter = 500;
    std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
};

namespace detail {

/// Coefficients of P(z + s) by repeated synthetic division.
inline std::vector<Complex> taylor_shift(std::vector<Complex> c, Complex s) {
    int n = static_cast<int>(c.size()) - 1;
    for (int k = 0; k < n; ++k) {
        for (int j = n - 1; j >= k; --j) c[j] += s * c[j + 1];
    }
    return c;
}

/// |c_n|-relative upper bound for root moduli: 2 max |c_{n-k}/c_n|^(1/k).
inline double fujiwara_bound(const std::vector<Complex>& c) {
    int n = static_cast<int>(c.size()) - 1;
    double best = 0.0;
    double lead = std::abs(c[n]);
    for (int k = 1; k <= n; ++k) {
        double a = std::abs(c[n - k]) / lead;
        if (k == n) a *= 0.5;
        if (a > 0.0) best = std::max(best, std::pow(a, 1.0 / k));
    }
    return 2.0 * best;
}

inline std::vector<Complex> aberth(const Polynomial& p, const RootOptions& opt) {
    const int n = p.degree();
    const auto& c = p.coefficients();
    const double eps = std::numeric_limits<double>::epsilon();

    Complex center = -c[n - 1] / (static_cast<double>(n) * c[n]);
    double radius = fujiwara_bound(taylor_shift(c, center));
    if (!(radius > 0.0)) radius = 1e-3 * (1.0 + std::abs(center));

    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double two_pi = 2.0 * std::numbers::pi;
    double phase = two_pi * unit(rng);
    std::vector<Complex> z(n);
    for (int k = 0; k < n; ++k) {
        double jitter = 0.25 * (unit(rng) - 0.5) * two_pi / n;
        z[k] = center + std::polar(radius, phase + two_pi * k / n + jitter);
    }

    std::vector<bool> done(n, false);
    for (int iter = 0; iter < opt.max_iter; ++iter) {
        bool all_done = true;
        for (int i = 0; i < n; ++i) {
            if (done[i]) continue;
            auto [val, der] = p.eval_with_derivative(z[i]);
            if (std::abs(val) <= 4.0 * eps * p.magnitude_at(z[i])) {
                done[i] = true;
                continue;
            }
            all_done = false;
            Complex ratio = val / der;
            Complex s = 0.0;
            for (int j = 0; j < n; ++j) {
                if (j != i) s += 1.0 / (z[i] - z[j]);
            }
            Complex w = ratio / (1.0 - ratio * s);
            if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) {
                // Derivative vanished or two approximations collided; nudge.
                w = std::polar(1e-8 * (1.0 + std::abs(z[i])), two_pi * unit(rng));
            }
            z[i] -= w;
            if (std::abs(w) <= eps * std::abs(z[i])) done[i] = true;
        }
        if (all_done) return z;
    }
    // Converged approximations can still be fine even if the loop ran out;
    // the caller's residual check decides.
    return z;
}

}  // namespace detail

/// Relative residual |P(z)| / sum |c_k||z|^k.
inline double backward_error(const Polynomial& p, Complex z) {
    double m = p.magnitude_at(z);
    return m == 0.0 ? 0.0 : std::abs(p(z)) / m;
}

/// All roots of p with multiplicities (summing to deg p). Roots whose
/// approximations fall within max(1e-9, tol^(1/m)) * max(1, |z|) of each other
/// are merged into one root of multiplicity m.
inline std::vector<Root> all_roots(const Polynomial& p, const RootOptions& opt = {}) {
    if (p.degree() < 1) throw Error(Errc::InvalidPolynomial, "root finding needs degree >= 1");

    std::vector<Root> out;
    const auto& c = p.coefficients();
    std::size_t zeros = 0;
    while (c[zeros] == Complex(0.0)) ++zeros;
    if (zeros > 0) out.push_back({Complex(0.0), static_cast<int>(zeros)});
    Polynomial q(std::vector<Complex>(c.begin() + static_cast<long>(zeros), c.end()));
    if (q.degree() == 0) return out;

    std::vector<Complex> z = q.degree() == 1 ? std::vector<Complex>{-q[0] / q[1]} : detail::aberth(q, opt);

    // Multiplicity detection, largest clusters first: a group of m
    // approximations counts as one m-fold root when it is a connected
    // component at the radius allowed for multiplicity m.
    const int n = static_cast<int>(z.size());
    auto radius = [&](int m, Complex at) {
        return std::max(1e-9, std::pow(opt.tol, 1.0 / m)) * std::max(1.0, std::abs(at));
    };
    std::vector<int> owner(n, -1);
    std::vector<std::vector<int>> groups;
    for (int m = n; m >= 2; --m) {
        std::vector<int> comp(n, -1);
        for (int i = 0; i < n; ++i) {
            if (owner[i] >= 0 || comp[i] >= 0) continue;
            std::vector<int> members{i};
            comp[i] = i;
            for (std::size_t k = 0; k < members.size(); ++k) {
                for (int j = 0; j < n; ++j) {
                    if (owner[j] >= 0 || comp[j] >= 0) continue;
                    if (std::abs(z[members[k]] - z[j]) <= radius(m, z[j])) {
                        comp[j] = i;
                        members.push_back(j);
                    }
                }
            }
            if (static_cast<int>(members.size()) == m) {
                for (int j : members) owner[j] = static_cast<int>(groups.size());
                groups.push_back(members);
            }
        }
    }
    for (int i = 0; i < n; ++i) {
        if (owner[i] < 0) groups.push_back({i});
    }

    for (const auto& g : groups) {
        const int m = static_cast<int>(g.size());
        Complex r = 0.0;
        for (int j : g) r += z[j];
        r /= static_cast<double>(m);
        // An m-fold root is a simple root of the (m-1)-th derivative; a few
        // Newton steps there recover full precision.
        Polynomial f = q;
        for (int k = 1; k < m; ++k) f = f.derivative();
        Polynomial df = f.derivative();
        for (int it = 0; it < 4; ++it) {
            Complex d = df(r);
            if (d == Complex(0.0)) break;
            Complex step = f(r) / d;
            if (!(std::abs(step) < radius(m, r))) break;
            r -= step;
        }
        if (!(std::isfinite(r.real()) && std::isfinite(r.imag())) || backward_error(q, r) > opt.tol) {
            throw Error(Errc::RootFindingFailed, "root approximation failed the residual check");
        }
        out.push_back({r, m});
    }
    std::sort(out.begin(), out.end(), [](const Root& a, const Root& b) {
        if (a.z.real() != b.z.real()) return a.z.real() < b.z.real();
        return a.z.imag() < b.z.imag();
    });
    return out;
}

/// Roots repeated according to multiplicity.
inline std::vector<Complex> expand(const std::vector<Root>& roots) {
    std::vector<Complex> out;
    for (const auto& r : roots) out.insert(out.end(), r.multiplicity, r.z);
    return out;
}

}  // namespace thurston
